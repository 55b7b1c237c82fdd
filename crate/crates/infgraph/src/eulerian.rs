//! Checkers for the degree/end/cut conditions characterizing one-way and
//! two-way infinite Eulerian paths in locally finite multigraphs.
//!
//! One-way: exactly one odd vertex and one end. Two-way: every degree even,
//! one or two ends, and no finite edge set inducing an even subgraph leaves
//! two infinite components. The conditions about all vertices or all edge
//! sets are only decided relative to a certificate naming a finite region.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::graph_core::{ball, degree, EdgeRef, EdgeSet, Fuel, GraphOracle, Spent, VertexId};
use crate::separation::{decide_comp, prepare, Bounded, EndsCertificate, PreparedComp, SepError};

/// Asserts every odd-degree vertex lies within `radius` of the basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityCertificate {
    pub radius: usize,
}

/// Asserts that if some finite even-inducing edge set separates, one lies
/// within `radius` of the basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalizationCertificate {
    pub radius: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    OneEnd,
    OneOrTwoEnds,
    ExactlyOneOddVertex,
    AllDegreesEven,
    NoSeparatingEvenSet,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::OneEnd => "one end",
            Clause::OneOrTwoEnds => "one or two ends",
            Clause::ExactlyOneOddVertex => "exactly one odd vertex",
            Clause::AllDegreesEven => "all degrees even",
            Clause::NoSeparatingEvenSet => "no even-inducing separating set",
        };
        f.write_str(s)
    }
}

/// How a clause was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Follows from the ends certificate.
    EndsCertificate,
    /// Checked exhaustively inside a certified radius.
    Certified { radius: usize },
    /// Implied by the other clauses.
    Implied,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::EndsCertificate => write!(f, "ends certificate"),
            Basis::Certified { radius } => write!(f, "checked within certified radius {radius}"),
            Basis::Implied => write!(f, "implied"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Ends(usize),
    OddVertices(Vec<VertexId>),
    NoOddVertex { radius: usize },
    SeparatingEvenSet { edges: EdgeSet, components: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ends(k) => write!(f, "{k} ends"),
            Witness::OddVertices(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "odd vertices {{{}}}", parts.join(","))
            }
            Witness::NoOddVertex { radius } => {
                write!(f, "no odd vertex within certified radius {radius}")
            }
            Witness::SeparatingEvenSet { edges, components } => {
                write!(f, "{edges} induces an even subgraph and leaves {components} infinite components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub clause: Clause,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerVerdict {
    Holds(Vec<(Clause, Basis)>),
    Fails(Failure),
    Unknown(Spent),
}

impl EulerVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EulerVerdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, EulerVerdict::Fails(_))
    }

    fn fail(clause: Clause, witness: Witness) -> Self {
        EulerVerdict::Fails(Failure { clause, witness })
    }
}

impl fmt::Display for EulerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerVerdict::Holds(clauses) => {
                write!(f, "holds")?;
                for (c, b) in clauses {
                    write!(f, "\n  {c}: {b}")?;
                }
                Ok(())
            }
            EulerVerdict::Fails(fl) => write!(f, "fails: {} ({})", fl.clause, fl.witness),
            EulerVerdict::Unknown(s) => write!(f, "unknown ({s})"),
        }
    }
}

/// Odd-degree vertices within `radius` of the basepoint, sorted by id.
pub fn odd_vertex_scan(g: &dyn GraphOracle, radius: usize) -> Result<Vec<VertexId>, SepError> {
    let b = ball(g, g.basepoint(), radius)?;
    let mut odd = Vec::new();
    for v in b.vertices() {
        if degree(g, v)? % 2 == 1 {
            odd.push(v);
        }
    }
    Ok(odd)
}

pub fn check_one_way(
    g: &dyn GraphOracle,
    ends: &EndsCertificate,
    parity: Option<ParityCertificate>,
    fuel: Fuel,
) -> Result<EulerVerdict, SepError> {
    if ends.ends != 1 {
        return Ok(EulerVerdict::fail(Clause::OneEnd, Witness::Ends(ends.ends)));
    }
    let radius = parity.map_or(fuel.max_radius, |p| p.radius);
    let odd = odd_vertex_scan(g, radius)?;
    if odd.len() >= 2 {
        return Ok(EulerVerdict::fail(
            Clause::ExactlyOneOddVertex,
            Witness::OddVertices(odd[..2].to_vec()),
        ));
    }
    match parity {
        Some(p) if odd.len() == 1 => Ok(EulerVerdict::Holds(vec![
            (Clause::OneEnd, Basis::EndsCertificate),
            (Clause::ExactlyOneOddVertex, Basis::Certified { radius: p.radius }),
        ])),
        Some(p) => Ok(EulerVerdict::fail(
            Clause::ExactlyOneOddVertex,
            Witness::NoOddVertex { radius: p.radius },
        )),
        None => Ok(EulerVerdict::Unknown(Spent {
            rounds: radius,
            steps: 0,
        })),
    }
}

/// Bitset over the edges of a ball.
type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn flip(b: &mut Bits, i: usize) {
    b[i / 64] ^= 1 << (i % 64);
}

fn xor(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// Fundamental cycles of a spanning forest, one per non-forest edge (loops
/// and parallel copies included).
fn cycle_basis(edges: &[EdgeRef]) -> Vec<Bits> {
    let words = edges.len().div_ceil(64);
    let mut adj: HashMap<VertexId, Vec<(VertexId, usize)>> = HashMap::new();
    let mut index: HashMap<VertexId, usize> = HashMap::new();
    for x in edges {
        for v in [x.u, x.v] {
            let n = index.len();
            index.entry(v).or_insert(n);
        }
    }
    let mut uf = UnionFind::new(index.len());
    let mut extra = Vec::new();
    for (i, x) in edges.iter().enumerate() {
        if uf.union(index[&x.u], index[&x.v]) {
            adj.entry(x.u).or_default().push((x.v, i));
            adj.entry(x.v).or_default().push((x.u, i));
        } else {
            extra.push(i);
        }
    }
    // parent pointers in the forest
    let mut parent: HashMap<VertexId, (VertexId, usize)> = HashMap::new();
    let mut depth: HashMap<VertexId, usize> = HashMap::new();
    let mut verts: Vec<VertexId> = index.keys().copied().collect();
    verts.sort_unstable();
    for root in verts {
        if depth.contains_key(&root) {
            continue;
        }
        depth.insert(root, 0);
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            for &(b, i) in adj.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
                if !depth.contains_key(&b) {
                    depth.insert(b, depth[&a] + 1);
                    parent.insert(b, (a, i));
                    stack.push(b);
                }
            }
        }
    }
    extra
        .into_iter()
        .map(|i| {
            let mut c = vec![0u64; words];
            flip(&mut c, i);
            let (mut a, mut b) = (edges[i].u, edges[i].v);
            while a != b {
                if depth[&a] >= depth[&b] {
                    let (p, j) = parent[&a];
                    flip(&mut c, j);
                    a = p;
                } else {
                    let (p, j) = parent[&b];
                    flip(&mut c, j);
                    b = p;
                }
            }
            c
        })
        .collect()
}

pub fn check_two_way(
    g: &dyn GraphOracle,
    ends: &EndsCertificate,
    parity: Option<ParityCertificate>,
    loc: Option<LocalizationCertificate>,
    fuel: Fuel,
) -> Result<EulerVerdict, SepError> {
    if ends.ends == 0 || ends.ends > 2 {
        return Ok(EulerVerdict::fail(Clause::OneOrTwoEnds, Witness::Ends(ends.ends)));
    }
    let pr = parity.map_or(fuel.max_radius, |p| p.radius);
    let odd = odd_vertex_scan(g, pr)?;
    if let Some(&v) = odd.first() {
        return Ok(EulerVerdict::fail(
            Clause::AllDegreesEven,
            Witness::OddVertices(vec![v]),
        ));
    }
    let mut clauses = vec![(Clause::OneOrTwoEnds, Basis::EndsCertificate)];
    if let Some(p) = parity {
        clauses.push((Clause::AllDegreesEven, Basis::Certified { radius: p.radius }));
    }
    if ends.ends == 1 {
        clauses.push((Clause::NoSeparatingEvenSet, Basis::Implied));
        return Ok(match parity {
            Some(_) => EulerVerdict::Holds(clauses),
            None => EulerVerdict::Unknown(Spent {
                rounds: pr,
                steps: 0,
            }),
        });
    }

    let radius = loc.map_or(fuel.max_radius, |l| l.radius);
    let b = ball(g, g.basepoint(), radius)?;
    let edges = &b.edges;
    let prep = match prepare(g, ends, radius, fuel)? {
        Bounded::Done(p) => p,
        Bounded::Unknown(s) => return Ok(EulerVerdict::Unknown(s)),
    };
    if let Some((witness, comps)) = even_class_witness(edges, &prep) {
        return refute(g, ends, fuel, witness, comps);
    }
    let basis = cycle_basis(edges);
    let dim = basis.len();
    let total: u64 = if dim >= 63 { u64::MAX } else { 1u64 << dim };
    if total > fuel.max_steps {
        return Ok(EulerVerdict::Unknown(Spent {
            rounds: 0,
            steps: 0,
        }));
    }

    // Union-find inputs: the fixed part plus ball edges that may be removed.
    let vindex: HashMap<VertexId, usize> = prep
        .u_vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let eindex: HashMap<EdgeRef, usize> =
        edges.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut fixed = Vec::new();
    let mut optional = Vec::new();
    for x in &prep.u_edges {
        let pair = (vindex[&x.u], vindex[&x.v]);
        match eindex.get(x) {
            Some(&i) => optional.push((i, pair)),
            None => fixed.push(pair),
        }
    }
    let mut base = UnionFind::new(prep.u_vertices.len());
    for grp in &prep.groups {
        for w in grp.windows(2) {
            base.union(vindex[&w[0]], vindex[&w[1]]);
        }
    }
    for &(a, c) in &fixed {
        base.union(a, c);
    }
    let reps: Vec<usize> = prep.groups.iter().map(|grp| vindex[&grp[0]]).collect();

    let words = edges.len().div_ceil(64);
    let mut cur: Bits = vec![0; words];
    let mut best: Option<(usize, Vec<EdgeRef>, usize)> = None;
    for step in 1..total {
        // Gray code: flip the basis vector at the lowest set bit of `step`.
        xor(&mut cur, &basis[step.trailing_zeros() as usize]);
        let mut uf = base.clone();
        for &(i, (a, c)) in &optional {
            if !bit(&cur, i) {
                uf.union(a, c);
            }
        }
        let mut roots: Vec<usize> = reps.iter().map(|&r| uf.find(r)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() >= 2 {
            let set: Vec<EdgeRef> = (0..edges.len())
                .filter(|&i| bit(&cur, i))
                .map(|i| edges[i])
                .collect();
            let better = match &best {
                None => true,
                Some((n, s, _)) => (set.len(), &set) < (*n, s),
            };
            if better {
                best = Some((set.len(), set, roots.len()));
            }
        }
    }
    if let Some((_, set, comps)) = best {
        return refute(g, ends, fuel, set.into_iter().collect(), comps);
    }
    match (parity, loc) {
        (Some(_), Some(l)) => {
            clauses.push((Clause::NoSeparatingEvenSet, Basis::Certified { radius: l.radius }));
            Ok(EulerVerdict::Holds(clauses))
        }
        _ => Ok(EulerVerdict::Unknown(Spent {
            rounds: radius,
            steps: total,
        })),
    }
}

/// Reports an even separating set after checking it with `decide_comp`.
fn refute(
    g: &dyn GraphOracle,
    ends: &EndsCertificate,
    fuel: Fuel,
    witness: EdgeSet,
    comps: usize,
) -> Result<EulerVerdict, SepError> {
    let check = decide_comp(g, &witness, ends, fuel)?;
    if check != Bounded::Done(comps) {
        return Err(SepError::UnsoundCertificateDetected(format!(
            "separating set {witness} did not re-verify"
        )));
    }
    Ok(EulerVerdict::fail(
        Clause::NoSeparatingEvenSet,
        Witness::SeparatingEvenSet {
            edges: witness,
            components: comps,
        },
    ))
}

/// A whole parallel class of even multiplicity is an even set, and removing
/// more edges never merges infinite components. So if the union of those
/// classes in the ball separates, classes are dropped one at a time while it
/// still does. Cheap, and covers doubled graphs whose cycle space is too big
/// to sweep.
fn even_class_witness(edges: &[EdgeRef], prep: &PreparedComp) -> Option<(EdgeSet, usize)> {
    let mut classes: BTreeMap<(VertexId, VertexId), Vec<EdgeRef>> = BTreeMap::new();
    for x in edges.iter().filter(|x| x.u != x.v) {
        classes.entry((x.u, x.v)).or_default().push(*x);
    }
    let mut keep: Vec<Vec<EdgeRef>> =
        classes.into_values().filter(|c| c.len() % 2 == 0).collect();
    let union = |cs: &[Vec<EdgeRef>]| cs.iter().flatten().copied().collect::<EdgeSet>();
    if keep.is_empty() || prep.comp(&union(&keep)) < 2 {
        return None;
    }
    let mut i = 0;
    while i < keep.len() {
        let c = keep.remove(i);
        if prep.comp(&union(&keep)) < 2 {
            keep.insert(i, c);
            i += 1;
        }
    }
    let w = union(&keep);
    let comps = prep.comp(&w);
    Some((w, comps))
}

/// Whether every vertex has even degree in the subgraph formed by `e`
/// (loops count twice).
pub fn induces_even_subgraph(e: &EdgeSet) -> bool {
    let mut deg: HashMap<VertexId, u32> = HashMap::new();
    for x in e {
        *deg.entry(x.u).or_default() += 1;
        *deg.entry(x.v).or_default() += 1;
    }
    deg.values().all(|d| d % 2 == 0)
}
