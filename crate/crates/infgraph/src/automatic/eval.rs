//! Bottom-up evaluation of formulas into relation automata.

use super::formula::{Formula, Quantifier};
use super::presentation::Presentation;
use super::relation::RelationAutomaton;
use super::semiring::CountMode;
use super::AutoError;

/// Keeps one length-lexicographically least word per equality class, so the
/// counting quantifiers count vertices rather than codes.
pub fn normalize(p: &Presentation) -> Presentation {
    let Some(eq) = &p.equality else {
        return p.clone();
    };
    let sigma = p.sigma();
    let dom = p.domain_relation();
    let square = dom.cylindrify(1).intersect(&dom.cylindrify(0)).unwrap();
    if eq.intersect(&square).unwrap().equivalent(
        &RelationAutomaton::diagonal(sigma).intersect(&square).unwrap(),
    ) {
        return Presentation {
            equality: None,
            ..p.clone()
        };
    }
    // tracks (w, u): w ∈ L, w ~ u, w < u
    let beaten = dom
        .cylindrify(1)
        .intersect(eq)
        .unwrap()
        .intersect(&RelationAutomaton::llex_less(sigma))
        .unwrap()
        .project_exists(0);
    let reps = dom.intersect(&beaten.complement()).unwrap();
    let reps_sq = reps.cylindrify(1).intersect(&reps.cylindrify(0)).unwrap();
    Presentation {
        symbols: p.symbols.clone(),
        domain: reps.dfa,
        adjacency: p.adjacency.intersect(&reps_sq).unwrap(),
        equality: None,
    }
}

/// The value of a formula: a truth value when closed, otherwise the set of
/// satisfying assignments over the domain, one track per free variable in
/// sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalResult {
    Truth(bool),
    Relation {
        vars: Vec<String>,
        automaton: RelationAutomaton,
    },
}

struct Evaluator {
    sigma: usize,
    domain: RelationAutomaton,
    adjacency: RelationAutomaton,
}

type Value = (Vec<String>, RelationAutomaton);

impl Evaluator {
    fn binary(&self, base: &RelationAutomaton, x: &str, y: &str) -> Value {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => {
                let diag = base.intersect(&RelationAutomaton::diagonal(self.sigma)).unwrap();
                (vec![x.to_string()], diag.project_exists(1))
            }
            std::cmp::Ordering::Less => (vec![x.to_string(), y.to_string()], base.clone()),
            std::cmp::Ordering::Greater => {
                (vec![y.to_string(), x.to_string()], base.permute(&[1, 0]))
            }
        }
    }

    /// Adds unconstrained tracks so the value ranges over `target`.
    fn widen(&self, (vars, mut r): Value, target: &[String]) -> RelationAutomaton {
        let mut have = vars;
        for (i, v) in target.iter().enumerate() {
            if have.get(i) != Some(v) {
                r = r.cylindrify(i);
                have.insert(i, v.clone());
            }
        }
        debug_assert_eq!(have, target);
        r
    }

    fn combine(
        &self,
        a: Value,
        b: Value,
        op: impl Fn(&RelationAutomaton, &RelationAutomaton) -> RelationAutomaton,
    ) -> Value {
        let mut vars: Vec<String> = a.0.iter().chain(&b.0).cloned().collect();
        vars.sort();
        vars.dedup();
        let (ra, rb) = (self.widen(a, &vars), self.widen(b, &vars));
        let r = op(&ra, &rb);
        (vars, r)
    }

    fn go(&self, f: &Formula) -> Result<Value, AutoError> {
        Ok(match f {
            Formula::Adj(x, y) => self.binary(&self.adjacency, x, y),
            Formula::Eq(x, y) => self.binary(&RelationAutomaton::diagonal(self.sigma), x, y),
            Formula::In(x) => (vec![x.clone()], self.domain.clone()),
            Formula::Not(g) => {
                let (vars, r) = self.go(g)?;
                (vars, r.complement())
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let and = matches!(f, Formula::And(_));
                let mut acc = self.go(&fs[0])?;
                for g in &fs[1..] {
                    let next = self.go(g)?;
                    acc = self.combine(acc, next, |a, b| {
                        if and {
                            a.intersect(b).unwrap()
                        } else {
                            a.union(b).unwrap()
                        }
                    });
                }
                acc
            }
            Formula::Implies(a, b) => {
                let (va, ra) = self.go(a)?;
                let vb = self.go(b)?;
                self.combine((va, ra.complement()), vb, |a, b| a.union(b).unwrap())
            }
            Formula::Quant(q, x, body) => {
                let (mut vars, r) = self.go(body)?;
                let value = if vars.contains(x) {
                    (vars.clone(), r)
                } else {
                    let mut wider = vars.clone();
                    wider.push(x.clone());
                    wider.sort();
                    let r = self.widen((vars, r), &wider);
                    vars = wider;
                    (vars.clone(), r)
                };
                let pos = vars.iter().position(|v| v == x).unwrap();
                let in_dom = self.widen((vec![x.clone()], self.domain.clone()), &vars);
                let r = value.1;
                let out = match q {
                    Quantifier::Exists => r.intersect(&in_dom)?.project_exists(pos),
                    Quantifier::Forall => r
                        .complement()
                        .intersect(&in_dom)?
                        .project_exists(pos)
                        .complement(),
                    Quantifier::ExistsEven => r.intersect(&in_dom)?.counting_project(pos, CountMode::Even),
                    Quantifier::ExistsOdd => r.intersect(&in_dom)?.counting_project(pos, CountMode::Odd),
                    Quantifier::ExistsInf => {
                        r.intersect(&in_dom)?.counting_project(pos, CountMode::Infinite)
                    }
                    Quantifier::ExistsUnique => {
                        r.intersect(&in_dom)?.counting_project(pos, CountMode::ExactlyOne)
                    }
                };
                vars.remove(pos);
                (vars, out)
            }
        })
    }
}

pub fn eval(p: &Presentation, f: &Formula) -> Result<EvalResult, AutoError> {
    let p = normalize(p);
    let ev = Evaluator {
        sigma: p.sigma(),
        domain: p.domain_relation(),
        adjacency: p.adjacency.clone(),
    };
    let (vars, mut r) = ev.go(f)?;
    if vars.is_empty() {
        return Ok(EvalResult::Truth(r.truth()));
    }
    for i in 0..vars.len() {
        let d = ev.widen((vec![vars[i].clone()], ev.domain.clone()), &vars);
        r = r.intersect(&d)?;
    }
    Ok(EvalResult::Relation { vars, automaton: r })
}

/// Evaluates a closed formula.
pub fn eval_sentence(p: &Presentation, f: &Formula) -> Result<bool, AutoError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(AutoError::UnboundVariable(v));
    }
    match eval(p, f)? {
        EvalResult::Truth(b) => Ok(b),
        EvalResult::Relation { .. } => unreachable!("closed formula evaluated to a relation"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerKind {
    /// Exactly one vertex of odd degree.
    OneWay,
    /// Every degree even.
    TwoWay,
}

impl EulerKind {
    pub fn formula(self) -> Formula {
        let text = match self {
            EulerKind::OneWay => "(exists-unique u (exists-odd v (adj u v)))",
            EulerKind::TwoWay => "(forall u (exists-even v (adj u v)))",
        };
        Formula::parse(text).unwrap()
    }
}

/// The degree condition for a one- or two-way infinite Eulerian path, on a
/// presented graph assumed connected and one-ended.
pub fn decide_eulerian_automatic(p: &Presentation, which: EulerKind) -> bool {
    eval_sentence(p, &which.formula()).expect("fixed sentence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automatic::dfa::Dfa;
    use crate::automatic::presentation::{grid, nat_line};
    use crate::automatic::relation::{encode, num_letters};

    fn rel(p: &Presentation, text: &str) -> RelationAutomaton {
        match eval(p, &Formula::parse(text).unwrap()).unwrap() {
            EvalResult::Relation { automaton, .. } => automaton,
            EvalResult::Truth(_) => panic!("expected an open formula"),
        }
    }

    #[test]
    fn nat_line_sets() {
        let p = nat_line();
        assert!(rel(&p, "(exists y (adj x y))").equivalent(&p.domain_relation()));
        let odd = rel(&p, "(exists-odd v (adj u v))");
        assert!(odd.accepts(&[&[]]));
        assert!(!odd.accepts(&[&[0]]));
        assert!(!odd.accepts(&[&[0, 0, 0]]));
        let both = rel(&p, "(and (adj x y) (not (adj y x)))");
        assert!(both.is_empty());
    }

    #[test]
    fn euler_deciders() {
        assert!(decide_eulerian_automatic(&nat_line(), EulerKind::OneWay));
        assert!(!decide_eulerian_automatic(&nat_line(), EulerKind::TwoWay));
        assert!(decide_eulerian_automatic(&grid(), EulerKind::TwoWay));
        assert!(!decide_eulerian_automatic(&grid(), EulerKind::OneWay));
    }

    #[test]
    fn grid_degree_four() {
        let g = grid();
        assert!(rel(&g, "(exists-even v (adj u v))").equivalent(&g.domain_relation()));
        let two = "(exists-inf v (adj u v))";
        assert!(rel(&g, two).is_empty());
    }

    #[test]
    fn unbound_variable() {
        let f = Formula::parse("(exists u (adj u v))").unwrap();
        assert_eq!(
            eval_sentence(&nat_line(), &f),
            Err(AutoError::UnboundVariable("v".into()))
        );
    }

    /// Unary ℕ where `1^n` and `1^n 0` name the same vertex.
    fn duplicated() -> Presentation {
        let sigma = 2; // 0 = '1', 1 = '0'
        let domain = Dfa::from_partial(2, 2, 0, &[0, 1], &[(0, 0, 0), (0, 1, 1)]);
        let l = num_letters(2, sigma);
        let e = |a, b| encode(&[a, b], sigma);
        // equality: equal prefixes of 1s, then optionally one trailing 0 on either side
        let eq = Dfa::from_partial(
            l,
            2,
            0,
            &[0, 1],
            &[(0, e(0, 0), 0), (0, e(1, 1), 1), (0, e(1, 2), 1), (0, e(2, 1), 1)],
        );
        Presentation {
            symbols: vec!["1".into(), "0".into()],
            domain,
            adjacency: nat_line_two_symbols(),
            equality: Some(RelationAutomaton::new(2, sigma, eq).unwrap()),
        }
    }

    /// Successor in either direction, ignoring a trailing 0.
    fn nat_line_two_symbols() -> RelationAutomaton {
        let sigma = 2;
        let l = num_letters(2, sigma);
        let e = |a, b| encode(&[a, b], sigma);
        // after the common run of 1s one side reads one more 1, then at most
        // one trailing 0
        let mut t = vec![(0, e(0, 0), 0)];
        for (x, y) in [(0, 2), (0, 1), (2, 0), (1, 0)] {
            t.push((0, e(x, y), 1));
        }
        for (x, y) in [(1, 2), (2, 1)] {
            t.push((1, e(x, y), 2));
        }
        RelationAutomaton::new(2, sigma, Dfa::from_partial(l, 3, 0, &[1, 2], &t)).unwrap()
    }

    #[test]
    fn normalize_shrinks_duplicates() {
        let p = duplicated();
        p.validate().unwrap();
        let n = normalize(&p);
        let ones = Dfa::from_partial(2, 1, 0, &[0], &[(0, 0, 0)]);
        assert!(n.domain.equivalent(&ones));
        assert_eq!(normalize(&n), n);
        assert_eq!(normalize(&nat_line()), nat_line());
        assert!(decide_eulerian_automatic(&p, EulerKind::OneWay));
        assert!(!decide_eulerian_automatic(&p, EulerKind::TwoWay));
    }
}
