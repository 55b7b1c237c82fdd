//! First-order formulas over `adj`, `eq` and domain membership, with the
//! counting quantifiers, written as s-expressions.

use std::collections::BTreeSet;
use std::fmt;

use super::AutoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
    ExistsEven,
    ExistsOdd,
    ExistsInf,
    ExistsUnique,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
            Quantifier::ExistsEven => "exists-even",
            Quantifier::ExistsOdd => "exists-odd",
            Quantifier::ExistsInf => "exists-inf",
            Quantifier::ExistsUnique => "exists-unique",
        }
    }

    pub const ALL: [Quantifier; 6] = [
        Quantifier::Exists,
        Quantifier::Forall,
        Quantifier::ExistsEven,
        Quantifier::ExistsOdd,
        Quantifier::ExistsInf,
        Quantifier::ExistsUnique,
    ];

    fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Adj(String, String),
    Eq(String, String),
    In(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn adj(x: &str, y: &str) -> Self {
        Formula::Adj(x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn quant(q: Quantifier, x: &str, body: Formula) -> Self {
        Formula::Quant(q, x.into(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Adj(x, y) | Formula::Eq(x, y) => [x.clone(), y.clone()].into(),
            Formula::In(x) => [x.clone()].into(),
            Formula::Not(f) => f.free_vars(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().flat_map(Formula::free_vars).collect(),
            Formula::Implies(a, b) => a.free_vars().union(&b.free_vars()).cloned().collect(),
            Formula::Quant(_, x, body) => {
                let mut vs = body.free_vars();
                vs.remove(x);
                vs
            }
        }
    }

    pub fn parse(text: &str) -> Result<Formula, AutoError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let sexp = read(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(AutoError::FormulaParse(format!(
                "trailing input after token {pos}"
            )));
        }
        build(&sexp)
    }
}

impl std::str::FromStr for Formula {
    type Err = AutoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]| {
            write!(f, "({head}")?;
            for g in fs {
                write!(f, " {g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Adj(x, y) => write!(f, "(adj {x} {y})"),
            Formula::Eq(x, y) => write!(f, "(eq {x} {y})"),
            Formula::In(x) => write!(f, "(in {x})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Quant(q, x, body) => write!(f, "({} {x} {body})", q.keyword()),
        }
    }
}

enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, AutoError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| AutoError::FormulaParse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                    None => return Err(AutoError::FormulaParse("unclosed '('".into())),
                }
            }
        }
        ")" => Err(AutoError::FormulaParse("unexpected ')'".into())),
        _ => Ok(Sexp::Atom(tok.clone())),
    }
}

fn var(s: &Sexp) -> Result<String, AutoError> {
    match s {
        Sexp::Atom(a) => Ok(a.clone()),
        Sexp::List(_) => Err(AutoError::FormulaParse("expected a variable".into())),
    }
}

fn build(s: &Sexp) -> Result<Formula, AutoError> {
    let items = match s {
        Sexp::List(items) if !items.is_empty() => items,
        Sexp::List(_) => return Err(AutoError::FormulaParse("empty list".into())),
        Sexp::Atom(a) => return Err(AutoError::FormulaParse(format!("bare atom {a}"))),
    };
    let head = var(&items[0])?;
    let args = &items[1..];
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(AutoError::FormulaParse(format!(
                "{head} takes {n} arguments, got {}",
                args.len()
            )))
        }
    };
    match head.as_str() {
        "adj" => {
            arity(2)?;
            Ok(Formula::Adj(var(&args[0])?, var(&args[1])?))
        }
        "eq" => {
            arity(2)?;
            Ok(Formula::Eq(var(&args[0])?, var(&args[1])?))
        }
        "in" => {
            arity(1)?;
            Ok(Formula::In(var(&args[0])?))
        }
        "not" => {
            arity(1)?;
            Ok(Formula::not(build(&args[0])?))
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(AutoError::FormulaParse(format!("{head} needs arguments")));
            }
            let fs = args.iter().map(build).collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "and" {
                Formula::And(fs)
            } else {
                Formula::Or(fs)
            })
        }
        "implies" => {
            arity(2)?;
            Ok(Formula::Implies(Box::new(build(&args[0])?), Box::new(build(&args[1])?)))
        }
        kw => match Quantifier::from_keyword(kw) {
            Some(q) => {
                arity(2)?;
                Ok(Formula::Quant(q, var(&args[0])?, Box::new(build(&args[1])?)))
            }
            None => Err(AutoError::FormulaParse(format!("unknown operator {kw}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for text in [
            "(forall u (exists-even v (adj u v)))",
            "(exists-unique u (exists-odd v (adj u v)))",
            "(and (in x) (not (eq x y)) (or (adj x y) (exists-inf z (adj z x))))",
            "(implies (adj x y) (adj y x))",
        ] {
            let f = Formula::parse(text).unwrap();
            assert_eq!(f.to_string(), text);
        }
    }

    #[test]
    fn free_variables() {
        let f = Formula::parse("(exists v (and (adj u v) (eq v w)))").unwrap();
        assert_eq!(f.free_vars(), ["u".to_string(), "w".to_string()].into());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "(adj u)", "(frob u v)", "(adj u v", "adj", "(adj u v))", "(and)"] {
            assert!(Formula::parse(bad).is_err(), "{bad}");
        }
    }
}
