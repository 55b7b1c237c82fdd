//! Independent oracles shared by the integration tests: plain BFS component
//! counts, certified fixtures, and a reference evaluator for counting
//! sentences over random automatic presentations.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use infgraph::automatic::relation::{encode, num_letters};
use infgraph::automatic::{eval, Dfa, EvalResult, Formula, Presentation, Quantifier, RelationAutomaton};
use infgraph::gadgets::{build_gadget, GadgetKind, IntLine, Schedule};
use infgraph::separation::{comp_approx, EndsCertificate};
use infgraph::{ball, EdgeRef, EdgeSet, GraphOracle, VertexId};
use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn es(pairs: &[(i64, i64)]) -> EdgeSet {
    pairs.iter().map(|&(a, b)| EdgeRef::new(a, b, 0)).collect()
}

/// Every parallel copy of the edge `a - b`.
pub fn copies(g: &dyn GraphOracle, a: VertexId, b: VertexId) -> Vec<EdgeRef> {
    let m = g
        .neighbors(a)
        .into_iter()
        .find(|&(w, _)| w == b)
        .map_or(0, |(_, m)| m);
    (0..m).map(|s| EdgeRef::new(a, b, s)).collect()
}

/// BFS distances from the basepoint up to `r`, straight from the oracle.
pub fn distances(g: &dyn GraphOracle, r: usize) -> HashMap<VertexId, usize> {
    let bp = g.basepoint();
    let mut dist = HashMap::from([(bp, 0)]);
    let mut queue = VecDeque::from([bp]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == r {
            continue;
        }
        for (w, _) in g.neighbors(v) {
            if !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Components of `B_r ∖ e` that reach the sphere of radius `r`.
pub fn sphere_components(g: &dyn GraphOracle, e: &EdgeSet, r: usize) -> usize {
    let dist = distances(g, r);
    let index: HashMap<VertexId, usize> = dist.keys().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(index.len());
    for (&v, &i) in &index {
        for (w, m) in g.neighbors(v) {
            let Some(&j) = index.get(&w) else { continue };
            if (0..m).any(|s| !e.contains(&EdgeRef::new(v, w, s))) {
                uf.union(i, j);
            }
        }
    }
    let mut roots: Vec<usize> = dist
        .iter()
        .filter(|&(_, &d)| d == r)
        .map(|(v, _)| uf.find(index[v]))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Brute {
    pub value: usize,
    /// Smallest radius from which the sphere count no longer changes.
    pub stable_from: usize,
}

/// Sphere-component counts for every radius past `e` up to `max_r`; the
/// answer is the value at `max_r`, trusted when it has been stable for a while.
pub fn brute_comp(g: &dyn GraphOracle, e: &EdgeSet, max_r: usize) -> Brute {
    let dist = distances(g, max_r);
    let lo = e.vertices().iter().map(|v| dist[v]).max().unwrap_or(0) + 1;
    let counts: BTreeMap<usize, usize> =
        (lo..=max_r).map(|r| (r, sphere_components(g, e, r))).collect();
    let value = counts[&max_r];
    let mut stable_from = max_r;
    for (&r, &c) in counts.iter().rev() {
        if c != value {
            break;
        }
        stable_from = r;
    }
    Brute { value, stable_from }
}

pub fn min_comp_approx(g: &dyn GraphOracle, e: &EdgeSet, n: usize) -> usize {
    (0..=n).map(|k| comp_approx(g, e, k).unwrap()).min().unwrap()
}

pub struct Fixture {
    pub family: &'static str,
    pub label: String,
    pub g: Arc<dyn GraphOracle>,
    pub e: EdgeSet,
    pub cert: EndsCertificate,
}

fn random_edge_sets(g: &dyn GraphOracle, rng: &mut ChaCha8Rng, count: usize) -> Vec<EdgeSet> {
    let edges = ball(g, g.basepoint(), 3).unwrap().edges;
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(edges.len()));
            edges.choose_multiple(rng, k).copied().collect()
        })
        .collect()
}

fn last_event(s: &Schedule) -> Option<u64> {
    s.last_event().map(|l| l.unwrap_or(0))
}

/// The criterion-1 fixture families with their certificates.
pub fn separation_fixtures() -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();

    let z: Arc<dyn GraphOracle> = Arc::new(IntLine);
    let z_cert = EndsCertificate::new(2, es(&[(0, 1)]));
    let mut z_sets: Vec<EdgeSet> = (-5..=5).map(|x| es(&[(x, x + 1)])).collect();
    for (a, b) in [(-3, 2), (0, 4), (-6, -1), (1, 2), (-2, -1), (3, 9), (-9, 0), (5, 6), (-4, 4)] {
        z_sets.push(es(&[(a, a + 1), (b, b + 1)]));
    }
    for e in z_sets {
        out.push(Fixture {
            family: "z-line",
            label: format!("z-line {e}"),
            g: z.clone(),
            e,
            cert: z_cert.clone(),
        });
    }

    for lit in ["events@", "events@2", "events@3,7", "events@1,4,9", "events-all", "events@2,5+"] {
        let s: Schedule = lit.parse().unwrap();
        let g = build_gadget(GadgetKind::CycleChain, s.clone()).unwrap();
        let cert = match last_event(&s) {
            Some(k) => EndsCertificate::new(2, es(&[(k as i64, k as i64 + 1)])),
            None => EndsCertificate::one_ended(),
        };
        for e in random_edge_sets(g.as_ref(), &mut rng, 4) {
            out.push(Fixture {
                family: "cycle-chain",
                label: format!("cycle-chain:{lit} {e}"),
                g: g.clone(),
                e,
                cert: cert.clone(),
            });
        }
    }

    for k in [2u32, 3] {
        let family = if k == 2 { "cycle-chain-rays-2" } else { "cycle-chain-rays-3" };
        for lit in ["events@2,5", "events-all", "events@3"] {
            let s: Schedule = lit.parse().unwrap();
            let g = build_gadget(GadgetKind::CycleChainWithRays(k), s.clone()).unwrap();
            let k64 = i64::from(k);
            let mut w: EdgeSet = (1..k64).map(|j| EdgeRef::new(0, k64 + j, 0)).collect();
            let ends = match last_event(&s) {
                Some(t) => {
                    let t = t as i64;
                    w.insert(EdgeRef::new(t * k64, (t + 1) * k64, 0));
                    k as usize + 1
                }
                None => k as usize,
            };
            let cert = EndsCertificate::new(ends, w);
            for e in random_edge_sets(g.as_ref(), &mut rng, 7) {
                out.push(Fixture {
                    family,
                    label: format!("cycle-chain-rays-{k}:{lit} {e}"),
                    g: g.clone(),
                    e,
                    cert: cert.clone(),
                });
            }
        }
    }

    for lit in ["never", "halt@0", "halt@1", "halt@2", "halt@3", "halt@4", "halt@5"] {
        let s: Schedule = lit.parse().unwrap();
        let g = build_gadget(GadgetKind::LinesWithSticks, s.clone()).unwrap();
        let w = match s {
            Schedule::Halting { halt_step: Some(h) } => es(&[(h as i64 + 1, h as i64 + 2)]),
            _ => es(&[(0, 1)]),
        };
        let cert = EndsCertificate::new(2, w);
        for e in random_edge_sets(g.as_ref(), &mut rng, 3) {
            out.push(Fixture {
                family: "lines-with-sticks",
                label: format!("lines-with-sticks:{lit} {e}"),
                g: g.clone(),
                e,
                cert: cert.clone(),
            });
        }
    }

    for lit in ["changes@", "changes@2", "changes@2,5", "changes@3,4,8", "changes@2,3,4,6"] {
        let s: Schedule = lit.parse().unwrap();
        let g = build_gadget(GadgetKind::Delta2TwoEnded, s.clone()).unwrap();
        let cert = delta2_cert(g.as_ref(), &s);
        for e in random_edge_sets(g.as_ref(), &mut rng, 4) {
            out.push(Fixture {
                family: "delta2",
                label: format!("delta2:{lit} {e}"),
                g: g.clone(),
                e,
                cert: cert.clone(),
            });
        }
    }
    out
}

/// All copies of the edge after the last mind change cut off the positive
/// ray; the graph is two-ended.
pub fn delta2_cert(g: &dyn GraphOracle, s: &Schedule) -> EndsCertificate {
    let Schedule::LimitApprox { changes } = s else {
        panic!("not a limit schedule")
    };
    let k = changes.last().copied().unwrap_or(0) as i64;
    EndsCertificate::new(2, copies(g, k, k + 1).into_iter().collect())
}

// ---------------------------------------------------------------------------
// Reference evaluator for sentences `Q1 u Q2 v body(u, v)` with a
// quantifier-free body.

/// A random presentation as raw transition tables. The adjacency table is
/// invariant under swapping the two tracks, so the relation is symmetric as
/// drawn.
#[derive(Debug, Clone)]
pub struct RawPresentation {
    pub sigma: usize,
    pub dom: Vec<Vec<usize>>,
    pub dom_acc: Vec<bool>,
    pub adj: Vec<Vec<usize>>,
    pub adj_acc: Vec<bool>,
}

impl RawPresentation {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let sigma = rng.gen_range(1..=2);
        let accepting = |rng: &mut ChaCha8Rng, n: usize| {
            let mut acc: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            acc[rng.gen_range(0..n)] = true;
            acc
        };
        let n = rng.gen_range(1..=4);
        let dom: Vec<Vec<usize>> = (0..n)
            .map(|_| (0..sigma).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        let dom_acc = accepting(rng, n);
        let m = rng.gen_range(1..=4);
        let letters = num_letters(2, sigma);
        let mut adj = vec![vec![0; letters]; m];
        for row in adj.iter_mut() {
            for a in 0..=sigma {
                for b in a..=sigma {
                    if a == sigma {
                        continue;
                    }
                    let t = rng.gen_range(0..m);
                    row[encode(&[a, b], sigma)] = t;
                    row[encode(&[b, a], sigma)] = t;
                }
            }
        }
        let adj_acc = accepting(rng, m);
        RawPresentation {
            sigma,
            dom,
            dom_acc,
            adj,
            adj_acc,
        }
    }

    pub fn presentation(&self) -> Presentation {
        let dfa = |delta: &Vec<Vec<usize>>, acc: &Vec<bool>, letters| Dfa {
            num_letters: letters,
            start: 0,
            accepting: acc.clone(),
            delta: delta.clone(),
        };
        let sigma = self.sigma;
        let adjacency =
            RelationAutomaton::new(2, sigma, dfa(&self.adj, &self.adj_acc, num_letters(2, sigma)))
                .unwrap();
        Presentation {
            symbols: (0..sigma).map(|c| format!("s{c}")).collect(),
            domain: dfa(&self.dom, &self.dom_acc, sigma),
            adjacency,
            equality: None,
        }
    }
}

pub const BATTERY: [&str; 10] = [
    "(exists u (exists v (adj u v)))",
    "(forall u (exists v (adj u v)))",
    "(forall u (exists-even v (adj u v)))",
    "(exists-unique u (exists-odd v (adj u v)))",
    "(exists u (exists-inf v (adj u v)))",
    "(exists-inf u (forall v (implies (adj u v) (not (eq u v)))))",
    "(exists-odd u (exists-unique v (and (adj u v) (not (eq u v)))))",
    "(exists-even u (exists v (and (adj u v) (adj v u) (in v))))",
    "(forall u (exists-odd v (or (adj u v) (eq u v))))",
    "(exists-even u (exists-inf v (or (adj u v) (adj u u))))",
];

/// Saturating count with exact parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Cnt {
    n: u128,
    odd: bool,
}

impl Cnt {
    const ONE: Cnt = Cnt { n: 1, odd: true };
    fn add(self, o: Cnt) -> Cnt {
        Cnt {
            n: self.n.saturating_add(o.n),
            odd: self.odd ^ o.odd,
        }
    }
    fn mul(self, o: Cnt) -> Cnt {
        Cnt {
            n: self.n.saturating_mul(o.n),
            odd: self.odd && o.odd,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Class {
    finite: Cnt,
    infinite: bool,
}

fn satisfies(q: Quantifier, c: Class) -> bool {
    let (n, odd, inf) = (c.finite.n, c.finite.odd, c.infinite);
    match q {
        Quantifier::Exists => inf || n >= 1,
        // counted set is the complement of the body
        Quantifier::Forall => !inf && n == 0,
        Quantifier::ExistsEven => !inf && !odd,
        Quantifier::ExistsOdd => !inf && odd,
        Quantifier::ExistsInf => inf,
        Quantifier::ExistsUnique => !inf && n == 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Atom {
    /// The adjacency table read on tracks (x, y).
    Raw(Var, Var),
    Eq(Var, Var),
    In(Var),
}

/// Body compiled to atoms; truth is computed from the atoms' acceptance.
enum Body {
    Atom(usize),
    True,
    Not(Box<Body>),
    And(Vec<Body>),
    Or(Vec<Body>),
}

impl Body {
    fn truth(&self, bits: &[bool]) -> bool {
        match self {
            Body::Atom(i) => bits[*i],
            Body::True => true,
            Body::Not(b) => !b.truth(bits),
            Body::And(bs) => bs.iter().all(|b| b.truth(bits)),
            Body::Or(bs) => bs.iter().any(|b| b.truth(bits)),
        }
    }
}

struct Compiler<'a> {
    u: &'a str,
    atoms: Vec<Atom>,
}

impl Compiler<'_> {
    fn var(&self, x: &str) -> Var {
        if x == self.u {
            Var::U
        } else {
            Var::V
        }
    }

    fn atom(&mut self, a: Atom) -> Body {
        let i = self.atoms.iter().position(|&b| b == a).unwrap_or_else(|| {
            self.atoms.push(a);
            self.atoms.len() - 1
        });
        Body::Atom(i)
    }

    fn compile(&mut self, f: &Formula) -> Body {
        match f {
            Formula::Adj(x, y) => {
                let (x, y) = (self.var(x), self.var(y));
                self.atom(Atom::Raw(x, y))
            }
            Formula::Eq(x, y) if x == y => Body::True,
            Formula::Eq(x, y) => {
                let (x, y) = (self.var(x), self.var(y));
                self.atom(Atom::Eq(x, y))
            }
            Formula::In(x) => {
                let x = self.var(x);
                self.atom(Atom::In(x))
            }
            Formula::Not(g) => Body::Not(Box::new(self.compile(g))),
            Formula::And(fs) => Body::And(fs.iter().map(|g| self.compile(g)).collect()),
            Formula::Or(fs) => Body::Or(fs.iter().map(|g| self.compile(g)).collect()),
            Formula::Implies(a, b) => {
                Body::Or(vec![Body::Not(Box::new(self.compile(a))), self.compile(b)])
            }
            Formula::Quant(..) => panic!("body must be quantifier-free"),
        }
    }
}

/// Product state: one state per atom, and whether `v` has ended.
type PState = (Vec<usize>, bool);

struct Reference<'a> {
    raw: &'a RawPresentation,
    atoms: Vec<Atom>,
    body: Body,
    /// The inner quantifier counts `v ∈ L` with `body` (or `¬body` for ∀).
    negate: bool,
    v_in: usize,
    tails: HashMap<Vec<usize>, Class>,
}

impl<'a> Reference<'a> {
    fn pad(&self) -> usize {
        self.raw.sigma
    }

    fn start(&self) -> Vec<usize> {
        self.atoms.iter().map(|_| 0).collect()
    }

    fn step(&self, q: &[usize], cu: usize, cv: usize) -> Vec<usize> {
        let pad = self.pad();
        let pick = |x: Var| if x == Var::U { cu } else { cv };
        self.atoms
            .iter()
            .zip(q)
            .map(|(a, &s)| match *a {
                Atom::Raw(x, y) => {
                    let (cx, cy) = (pick(x), pick(y));
                    if cx == pad && cy == pad {
                        s
                    } else {
                        self.raw.adj[s][encode(&[cx, cy], self.raw.sigma)]
                    }
                }
                Atom::Eq(x, y) => usize::from(s == 1 || pick(x) != pick(y)),
                Atom::In(x) => {
                    let c = pick(x);
                    if c == pad {
                        s
                    } else {
                        self.raw.dom[s][c]
                    }
                }
            })
            .collect()
    }

    fn accepted(&self, q: &[usize]) -> bool {
        let bits: Vec<bool> = self
            .atoms
            .iter()
            .zip(q)
            .map(|(a, &s)| match a {
                Atom::Raw(..) => self.raw.adj_acc[s],
                Atom::Eq(..) => s == 0,
                Atom::In(_) => self.raw.dom_acc[s],
            })
            .collect();
        bits[self.v_in] && (self.body.truth(&bits) != self.negate)
    }

    /// Accepted continuations of `v` alone from `q`: exact below the number
    /// of reachable states, and infinite iff one exists between that and
    /// twice that length.
    fn tail(&mut self, q: &[usize]) -> Class {
        if let Some(&c) = self.tails.get(q) {
            return c;
        }
        let pad = self.pad();
        let mut reach: HashMap<Vec<usize>, ()> = HashMap::from([(q.to_vec(), ())]);
        let mut queue = VecDeque::from([q.to_vec()]);
        while let Some(s) = queue.pop_front() {
            for c in 0..pad {
                let t = self.step(&s, pad, c);
                if reach.insert(t.clone(), ()).is_none() {
                    queue.push_back(t);
                }
            }
        }
        let p = reach.len();
        let mut layer: HashMap<Vec<usize>, Cnt> = HashMap::from([(q.to_vec(), Cnt::ONE)]);
        let mut finite = Cnt::default();
        let mut infinite = false;
        for len in 0..2 * p {
            let here = layer
                .iter()
                .filter(|(s, _)| self.accepted(s))
                .fold(Cnt::default(), |acc, (_, &c)| acc.add(c));
            if len < p {
                finite = finite.add(here);
            } else if here.n > 0 {
                infinite = true;
                break;
            }
            let mut next: HashMap<Vec<usize>, Cnt> = HashMap::new();
            for (s, &c) in &layer {
                for sym in 0..pad {
                    let t = self.step(s, pad, sym);
                    let e = next.entry(t).or_default();
                    *e = e.add(c);
                }
            }
            layer = next;
        }
        let class = Class { finite, infinite };
        self.tails.insert(q.to_vec(), class);
        class
    }

    /// Class of the inner count once `u` has ended.
    fn close(&mut self, vec: &HashMap<PState, Cnt>) -> Class {
        let mut finite = Cnt::default();
        let mut infinite = false;
        for ((q, ended), &c) in vec {
            if *ended {
                if self.accepted(q) {
                    finite = finite.add(c);
                }
            } else {
                let t = self.tail(q);
                if t.infinite && c.n > 0 {
                    infinite = true;
                }
                finite = finite.add(c.mul(t.finite));
            }
        }
        Class { finite, infinite }
    }

    fn advance(&self, vec: &HashMap<PState, Cnt>, cu: usize) -> HashMap<PState, Cnt> {
        let pad = self.pad();
        let mut next: HashMap<PState, Cnt> = HashMap::new();
        for ((q, ended), &c) in vec {
            let choices: Vec<usize> = if *ended { vec![pad] } else { (0..=pad).collect() };
            for cv in choices {
                let key = (self.step(q, cu, cv), *ended || cv == pad);
                let e = next.entry(key).or_default();
                *e = e.add(c);
            }
        }
        next
    }
}

/// Outcome of checking one sentence on one presentation.
#[derive(Debug, Clone)]
pub enum RefOutcome {
    /// The enumeration bound needed exceeds the budget.
    TooLarge { bound: usize },
    Checked {
        reference: bool,
        engine: bool,
        /// Words `u` where the engine's open inner set disagreed.
        open_mismatches: usize,
        words: usize,
    },
}

fn states_of(p: &Presentation, f: &Formula) -> usize {
    match eval(p, f).unwrap() {
        EvalResult::Relation { automaton, .. } => automaton.dfa.num_states(),
        EvalResult::Truth(_) => 1,
    }
}

/// Checks `Q1 u Q2 v body` against the engine. Outer words are enumerated
/// up to twice a DFA-size bound taken from the engine's automata for the
/// inner set and its complement; inner counts are exact.
pub fn check_sentence(raw: &RawPresentation, text: &str, max_words: usize) -> RefOutcome {
    let f = Formula::parse(text).unwrap();
    let Formula::Quant(q1, u, inner) = &f else { panic!("expected Q1 u ...") };
    let Formula::Quant(q2, _v, body_f) = inner.as_ref() else { panic!("expected Q2 v ...") };
    let p = raw.presentation();
    let engine = infgraph::automatic::eval_sentence(&p, &f).unwrap();

    let in_u = Formula::In(u.clone());
    let pos = Formula::And(vec![in_u.clone(), inner.as_ref().clone()]);
    let neg = Formula::And(vec![in_u, Formula::not(inner.as_ref().clone())]);
    let bound = states_of(&p, &pos).max(states_of(&p, &neg));
    let sigma = raw.sigma;
    let words: usize = (0..2 * bound).map(|l| sigma.pow(l as u32)).sum();
    if words > max_words {
        return RefOutcome::TooLarge { bound };
    }
    let open = match eval(&p, inner).unwrap() {
        EvalResult::Relation { automaton, .. } => Some(automaton),
        EvalResult::Truth(_) => None,
    };

    let mut c = Compiler { u, atoms: vec![Atom::In(Var::V)] };
    let body = c.compile(body_f);
    let mut r = Reference {
        raw,
        atoms: c.atoms,
        body,
        negate: *q2 == Quantifier::Forall,
        v_in: 0,
        tails: HashMap::new(),
    };

    // DFS over u with the domain state and the inner count vector
    let start: HashMap<PState, Cnt> = HashMap::from([((r.start(), false), Cnt::ONE)]);
    let mut stack: Vec<(Vec<usize>, usize, HashMap<PState, Cnt>)> = vec![(Vec::new(), 0, start)];
    let mut set = Class { finite: Cnt::default(), infinite: false };
    let mut open_mismatches = 0;
    let mut visited = 0;
    while let Some((word, dstate, vec)) = stack.pop() {
        visited += 1;
        if raw.dom_acc[dstate] {
            let inner_true = satisfies(*q2, r.close(&vec));
            if let Some(a) = &open {
                if a.accepts(&[&word]) != inner_true {
                    open_mismatches += 1;
                }
            }
            // the outer ∀ counts counterexamples
            let counted = if *q1 == Quantifier::Forall { !inner_true } else { inner_true };
            if counted {
                if word.len() < bound {
                    set.finite = set.finite.add(Cnt::ONE);
                } else {
                    set.infinite = true;
                }
            }
        }
        if word.len() + 1 < 2 * bound {
            for cu in 0..sigma {
                let mut w = word.clone();
                w.push(cu);
                stack.push((w, raw.dom[dstate][cu], r.advance(&vec, cu)));
            }
        }
    }
    RefOutcome::Checked {
        reference: satisfies(*q1, set),
        engine,
        open_mismatches,
        words: visited,
    }
}
