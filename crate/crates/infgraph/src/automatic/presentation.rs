//! Automatic presentations: a regular domain plus synchronous adjacency and
//! equality relations, with a line-oriented text format.
//!
//! ```text
//! ; the ray 0 - 1 - 2 - ... in unary
//! alphabet 1
//! domain
//! states a
//! start a
//! accept a
//! a 1 a
//! adjacency
//! states s d
//! start s
//! accept d
//! s 1|1 s
//! s 1|# d
//! s #|1 d
//! ```
//!
//! `equality` is optional and defaults to the identity. Missing transitions
//! go to a rejecting dead state.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::dfa::Dfa;
use super::relation::{decode, encode, num_letters, RelationAutomaton};
use super::AutoError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub symbols: Vec<String>,
    /// Over letters `0..sigma`.
    pub domain: Dfa,
    pub adjacency: RelationAutomaton,
    /// `None` is the identity.
    pub equality: Option<RelationAutomaton>,
}

impl Presentation {
    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    pub fn domain_relation(&self) -> RelationAutomaton {
        RelationAutomaton::new(1, self.sigma(), self.domain.clone()).unwrap()
    }

    /// Equality as a relation, identity included.
    pub fn equality_relation(&self) -> RelationAutomaton {
        match &self.equality {
            Some(eq) => eq.clone(),
            None => RelationAutomaton::diagonal(self.sigma()),
        }
    }

    /// `L × L`.
    fn domain_square(&self) -> RelationAutomaton {
        let d = self.domain_relation();
        d.cylindrify(1).intersect(&d.cylindrify(0)).unwrap()
    }

    /// Checks the structural invariants: nonempty domain, symmetric
    /// adjacency, and equality an equivalence relation on the domain.
    pub fn validate(&self) -> Result<(), AutoError> {
        let bad = |m: &str| Err(AutoError::InvalidPresentation(m.into()));
        if self.domain.is_empty() {
            return bad("domain is empty");
        }
        let sq = self.domain_square();
        let adj = self.adjacency.intersect(&sq)?;
        if !adj.equivalent(&adj.permute(&[1, 0])) {
            return bad("adjacency is not symmetric");
        }
        let eq = self.equality_relation().intersect(&sq)?;
        let diag = RelationAutomaton::diagonal(self.sigma()).intersect(&sq)?;
        if !diag.dfa.subset_of(&eq.dfa) {
            return bad("equality is not reflexive on the domain");
        }
        if !eq.equivalent(&eq.permute(&[1, 0])) {
            return bad("equality is not symmetric");
        }
        // tracks (x, y, z): E(x,y) ∧ E(y,z) must imply E(x,z)
        let chain = eq
            .cylindrify(2)
            .intersect(&eq.cylindrify(0))?
            .project_exists(1);
        if !chain.dfa.subset_of(&eq.dfa) {
            return bad("equality is not transitive");
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Presentation, AutoError> {
        Parser::default().run(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alphabet {}", self.symbols.join(" ")).unwrap();
        self.write_section(&mut out, "domain", 1, &self.domain);
        self.write_section(&mut out, "adjacency", 2, &self.adjacency.dfa);
        if let Some(eq) = &self.equality {
            self.write_section(&mut out, "equality", 2, &eq.dfa);
        }
        out
    }

    fn symbol_text(&self, letter: usize, arity: usize) -> String {
        let parts: Vec<&str> = decode(letter, arity, self.sigma())
            .into_iter()
            .map(|c| self.symbols.get(c).map_or("#", String::as_str))
            .collect();
        parts.join("|")
    }

    fn write_section(&self, out: &mut String, name: &str, arity: usize, d: &Dfa) {
        let live = d.coreachable();
        let keep: Vec<usize> = (0..d.num_states())
            .filter(|&q| live[q] || q == d.start)
            .collect();
        let names: HashMap<usize, String> =
            keep.iter().enumerate().map(|(i, &q)| (q, format!("q{i}"))).collect();
        writeln!(out, "{name}").unwrap();
        let all: Vec<&str> = keep.iter().map(|q| names[q].as_str()).collect();
        writeln!(out, "states {}", all.join(" ")).unwrap();
        writeln!(out, "start {}", names[&d.start]).unwrap();
        let acc: Vec<&str> = keep
            .iter()
            .filter(|&&q| d.accepting[q])
            .map(|q| names[q].as_str())
            .collect();
        writeln!(out, "accept {}", acc.join(" ")).unwrap();
        for &q in &keep {
            for a in 0..d.num_letters {
                let r = d.delta[q][a];
                if let Some(rn) = names.get(&r).filter(|_| live[r]) {
                    writeln!(out, "{} {} {rn}", names[&q], self.symbol_text(a, arity)).unwrap();
                }
            }
        }
    }
}

#[derive(Default)]
struct Section {
    states: Vec<String>,
    start: Option<String>,
    accept: Vec<String>,
    transitions: Vec<(String, String, String, usize)>,
}

#[derive(Default)]
struct Parser {
    symbols: Vec<String>,
    sections: HashMap<String, Section>,
}

fn perr(line: usize, msg: impl Into<String>) -> AutoError {
    AutoError::PresentationParse {
        line,
        msg: msg.into(),
    }
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Presentation, AutoError> {
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split(';').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "alphabet" => {
                    for &s in &words[1..] {
                        if s.contains('|') || s == "#" {
                            return Err(perr(n, format!("reserved symbol {s}")));
                        }
                        if self.symbols.iter().any(|x| x == s) {
                            return Err(perr(n, format!("duplicate symbol {s}")));
                        }
                        self.symbols.push(s.to_string());
                    }
                }
                "domain" | "adjacency" | "equality" if words.len() == 1 => {
                    if self.sections.contains_key(words[0]) {
                        return Err(perr(n, format!("section {} repeated", words[0])));
                    }
                    self.sections.insert(words[0].to_string(), Section::default());
                    current = Some(words[0].to_string());
                }
                kw => {
                    let name = current
                        .as_ref()
                        .ok_or_else(|| perr(n, "expected a section header"))?;
                    let sec = self.sections.get_mut(name).unwrap();
                    let rest = || words[1..].iter().map(|s| s.to_string());
                    match kw {
                        "states" => sec.states.extend(rest()),
                        "start" if words.len() == 2 => sec.start = Some(words[1].to_string()),
                        "accept" => sec.accept.extend(rest()),
                        _ if words.len() == 3 => sec.transitions.push((
                            words[0].to_string(),
                            words[1].to_string(),
                            words[2].to_string(),
                            n,
                        )),
                        _ => return Err(perr(n, format!("cannot read line: {line}"))),
                    }
                }
            }
        }
        if self.symbols.is_empty() {
            return Err(perr(0, "missing alphabet"));
        }
        let sigma = self.symbols.len();
        let domain = self.build("domain", 1)?;
        let adjacency = RelationAutomaton::new(2, sigma, self.build("adjacency", 2)?)?;
        let equality = if self.sections.contains_key("equality") {
            Some(RelationAutomaton::new(2, sigma, self.build("equality", 2)?)?)
        } else {
            None
        };
        Ok(Presentation {
            symbols: self.symbols,
            domain: RelationAutomaton::new(1, sigma, domain)?.dfa,
            adjacency,
            equality,
        })
    }

    fn letter(&self, text: &str, arity: usize, line: usize) -> Result<usize, AutoError> {
        let sigma = self.symbols.len();
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != arity {
            return Err(perr(line, format!("symbol {text} should have {arity} tracks")));
        }
        let mut tracks = Vec::with_capacity(arity);
        for p in parts {
            let c = if p == "#" {
                sigma
            } else {
                self.symbols
                    .iter()
                    .position(|s| s == p)
                    .ok_or_else(|| perr(line, format!("unknown symbol {p}")))?
            };
            tracks.push(c);
        }
        if tracks.iter().all(|&c| c == sigma) {
            return Err(perr(line, "the all-padding symbol is not a letter"));
        }
        Ok(encode(&tracks, sigma))
    }

    fn build(&self, name: &str, arity: usize) -> Result<Dfa, AutoError> {
        let sec = self
            .sections
            .get(name)
            .ok_or_else(|| perr(0, format!("missing section {name}")))?;
        let index: HashMap<&str, usize> =
            sec.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let state = |s: &str, line: usize| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| perr(line, format!("undeclared state {s} in {name}")))
        };
        let start = state(
            sec.start
                .as_deref()
                .ok_or_else(|| perr(0, format!("{name} has no start state")))?,
            0,
        )?;
        let accept = sec
            .accept
            .iter()
            .map(|s| state(s, 0))
            .collect::<Result<Vec<_>, _>>()?;
        let mut trans = Vec::new();
        let mut seen = HashMap::new();
        for (q, sym, r, line) in &sec.transitions {
            let (q, r, a) = (state(q, *line)?, state(r, *line)?, self.letter(sym, arity, *line)?);
            if seen.insert((q, a), r).is_some_and(|old| old != r) {
                return Err(perr(*line, "nondeterministic transition"));
            }
            trans.push((q, a, r));
        }
        Ok(Dfa::from_partial(
            num_letters(arity, self.symbols.len()),
            sec.states.len(),
            start,
            &accept,
            &trans,
        ))
    }
}

/// The ray ℕ: vertex `n` is `1^n`, adjacent to `n ± 1`.
pub fn nat_line() -> Presentation {
    let sigma = 1;
    let domain = Dfa::from_partial(1, 1, 0, &[0], &[(0, 0, 0)]);
    let l = num_letters(2, sigma);
    let adj = Dfa::from_partial(
        l,
        2,
        0,
        &[1],
        &[
            (0, encode(&[0, 0], sigma), 0),
            (0, encode(&[0, sigma], sigma), 1),
            (0, encode(&[sigma, 0], sigma), 1),
        ],
    );
    Presentation {
        symbols: vec!["1".into()],
        domain,
        adjacency: RelationAutomaton::new(2, sigma, adj).unwrap(),
        equality: None,
    }
}

const SIGNS: [char; 3] = ['+', '-', '0'];

/// The grid ℤ². A point `(x, y)` is a word of length `max(|x|, |y|)` over
/// sign pairs: position `i` carries `sign(x)` if `i < |x|` and `0` otherwise,
/// likewise for `y`. Neighbors differ in one component at one position,
/// between `0` and a sign, with padding read as `00`.
pub fn grid() -> Presentation {
    let symbols: Vec<String> = SIGNS
        .iter()
        .flat_map(|&a| SIGNS.iter().map(move |&b| format!("{a}{b}")))
        .collect();
    let sigma = symbols.len();
    let comps = |c: usize| (c / 3, c % 3); // indices into SIGNS; 2 is '0'
    const ZERO: usize = 2;

    // domain: per component a run of one sign then zeros; the last letter is
    // not 00. State: (component phase x2, last letter zero), phase 0 = start,
    // 1 = '+', 2 = '-', 3 = zeros.
    let phase = |p: usize, s: usize| -> Option<usize> {
        match (p, s) {
            (0, ZERO) | (1, ZERO) | (2, ZERO) | (3, ZERO) => Some(3),
            (0, 0) | (1, 0) => Some(1),
            (0, 1) | (2, 1) => Some(2),
            _ => None,
        }
    };
    let id = |p1: usize, p2: usize, z: bool| (p1 * 4 + p2) * 2 + usize::from(z);
    let mut trans = Vec::new();
    let mut accept = vec![id(0, 0, false)];
    for p1 in 0..4 {
        for p2 in 0..4 {
            for z in [false, true] {
                if !z && (p1, p2) != (0, 0) {
                    accept.push(id(p1, p2, z));
                }
                for c in 0..sigma {
                    let (a, b) = comps(c);
                    if let (Some(n1), Some(n2)) = (phase(p1, a), phase(p2, b)) {
                        trans.push((id(p1, p2, z), c, id(n1, n2, a == ZERO && b == ZERO)));
                    }
                }
            }
        }
    }
    let domain = Dfa::from_partial(sigma, 32, id(0, 0, false), &accept, &trans).minimize();

    let l = num_letters(2, sigma);
    let mut adj = Vec::new();
    for a in 0..l {
        let t = decode(a, 2, sigma);
        let pair = |c: usize| if c == sigma { (ZERO, ZERO) } else { comps(c) };
        let ((x1, y1), (x2, y2)) = (pair(t[0]), pair(t[1]));
        let step = |p: usize, q: usize| p != q && (p == ZERO || q == ZERO);
        let one_step = (x1 == x2 && step(y1, y2)) || (y1 == y2 && step(x1, x2));
        if t[0] == t[1] {
            adj.push((0, a, 0));
            adj.push((1, a, 1));
        } else if one_step {
            adj.push((0, a, 1));
        }
    }
    let adjacency = Dfa::from_partial(l, 2, 0, &[1], &adj);
    Presentation {
        symbols,
        domain,
        adjacency: RelationAutomaton::new(2, sigma, adjacency).unwrap(),
        equality: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        nat_line().validate().unwrap();
        grid().validate().unwrap();
    }

    #[test]
    fn text_round_trip() {
        for p in [nat_line(), grid()] {
            let q = Presentation::parse(&p.to_text()).unwrap();
            assert!(q.domain.equivalent(&p.domain));
            assert!(q.adjacency.equivalent(&p.adjacency));
            assert_eq!(q.equality, None);
        }
    }

    #[test]
    fn parses_documented_example() {
        let text = "; ray\nalphabet 1\ndomain\nstates a\nstart a\naccept a\na 1 a\n\
                    adjacency\nstates s d\nstart s\naccept d\ns 1|1 s\ns 1|# d\ns #|1 d\n";
        let p = Presentation::parse(text).unwrap();
        assert!(p.adjacency.equivalent(&nat_line().adjacency));
    }

    #[test]
    fn parse_errors() {
        let base = "alphabet 1\ndomain\nstates a\nstart a\naccept a\n";
        for bad in [
            "",
            "domain\n",
            "alphabet 1\n",
            &format!("{base}a 2 a\n"),
            &format!("{base}adjacency\nstates s\nstart s\naccept s\ns #|# s\n"),
            &format!("{base}adjacency\nstates s\nstart t\naccept s\n"),
        ] {
            assert!(Presentation::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_words() {
        let p = grid();
        let sym = |s: &str| p.symbols.iter().position(|x| x == s).unwrap();
        // (2, -1) = "+-" "+0"
        let w = [sym("+-"), sym("+0")];
        assert!(p.domain.accepts(&w));
        assert!(!p.domain.accepts(&[sym("00")]));
        assert!(!p.domain.accepts(&[sym("+0"), sym("-0")]));
        // (2,-1) ~ (2,0) = "+0" "+0"
        let v = [sym("+0"), sym("+0")];
        assert!(p.adjacency.accepts(&[&w, &v]));
        // (2,-1) ~ (3,-1)
        let u = [sym("+-"), sym("+0"), sym("+0")];
        assert!(p.adjacency.accepts(&[&w, &u]));
        assert!(!p.adjacency.accepts(&[&v, &u]));
    }
}
