//! Oracle interface for infinite, locally finite (multi)graphs and the
//! finite-extraction primitives every algorithm in this crate consumes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

/// Opaque vertex encoding. Gadgets indexed by ℤ use the integer directly;
/// others document their own packing.
pub type VertexId = i64;

/// A total, deterministic description of a connected, infinite, locally
/// finite multigraph.
///
/// Connectivity and infiniteness are part of the contract and are not
/// checked at runtime.
pub trait GraphOracle: Send + Sync {
    /// Whether `v` encodes a vertex of the graph.
    fn contains(&self, v: VertexId) -> bool;

    /// Neighbors of a valid vertex together with edge multiplicities.
    ///
    /// Each neighbor appears once, sorted by id. A loop at `v` appears as
    /// `(v, m)` where `m` counts loops, not degree contribution. The result
    /// must be symmetric: `u` lists `v` with the same multiplicity `v` lists `u`.
    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)>;

    /// A fixed valid vertex used as the center of all radius computations.
    fn basepoint(&self) -> VertexId;

    /// Whether the oracle may report multiplicities above one or loops.
    fn is_multigraph(&self) -> bool;
}

impl<T: GraphOracle + ?Sized> GraphOracle for Arc<T> {
    fn contains(&self, v: VertexId) -> bool {
        (**self).contains(v)
    }
    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        (**self).neighbors(v)
    }
    fn basepoint(&self) -> VertexId {
        (**self).basepoint()
    }
    fn is_multigraph(&self) -> bool {
        (**self).is_multigraph()
    }
}

impl<T: GraphOracle + ?Sized> GraphOracle for Box<T> {
    fn contains(&self, v: VertexId) -> bool {
        (**self).contains(v)
    }
    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        (**self).neighbors(v)
    }
    fn basepoint(&self) -> VertexId {
        (**self).basepoint()
    }
    fn is_multigraph(&self) -> bool {
        (**self).is_multigraph()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    InvalidVertex(VertexId),
    #[error("edge {0} is not in the graph")]
    InvalidEdge(EdgeRef),
}

/// One concrete edge: an unordered vertex pair plus a slot distinguishing
/// parallel edges. Always stored with `u <= v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub u: VertexId,
    pub v: VertexId,
    pub slot: u32,
}

impl EdgeRef {
    pub fn new(a: VertexId, b: VertexId, slot: u32) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        EdgeRef { u, v, slot }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x`, or `None` if `x` is not an endpoint.
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// Checks that the pair is adjacent with enough multiplicity for `slot`.
    pub fn is_valid(&self, g: &dyn GraphOracle) -> bool {
        if !g.contains(self.u) || !g.contains(self.v) {
            return false;
        }
        g.neighbors(self.u)
            .iter()
            .any(|&(w, m)| w == self.v && self.slot < m)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slot == 0 {
            write!(f, "({},{})", self.u, self.v)
        } else {
            write!(f, "({},{},{})", self.u, self.v, self.slot)
        }
    }
}

/// A finite set of edges, ordered lexicographically by `(u, v, slot)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(BTreeSet<EdgeRef>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: EdgeRef) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: &EdgeRef) -> bool {
        self.0.remove(e)
    }

    pub fn contains(&self, e: &EdgeRef) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EdgeRef> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    /// All endpoints of edges in the set.
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.0.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    pub fn validate(&self, g: &dyn GraphOracle) -> Result<(), GraphError> {
        match self.0.iter().find(|e| !e.is_valid(g)) {
            Some(e) => Err(GraphError::InvalidEdge(*e)),
            None => Ok(()),
        }
    }
}

impl FromIterator<EdgeRef> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeRef>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a EdgeRef;
    type IntoIter = std::collections::btree_set::Iter<'a, EdgeRef>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Explicit bound on searches that terminate only in the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    pub max_radius: usize,
    pub max_steps: u64,
}

impl Fuel {
    pub fn new(max_radius: usize, max_steps: u64) -> Self {
        Fuel {
            max_radius,
            max_steps,
        }
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(64, 10_000_000)
    }
}

/// Resources consumed by a search that ran out of fuel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Spent {
    pub rounds: usize,
    pub steps: u64,
}

impl fmt::Display for Spent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rounds, {} steps", self.rounds, self.steps)
    }
}

/// Every concrete edge incident to `v`, one `EdgeRef` per slot.
pub fn edges_at(g: &dyn GraphOracle, v: VertexId) -> Vec<EdgeRef> {
    g.neighbors(v)
        .into_iter()
        .flat_map(|(w, m)| (0..m).map(move |s| EdgeRef::new(v, w, s)))
        .collect()
}

/// Degree with loops counted twice.
pub fn degree(g: &dyn GraphOracle, v: VertexId) -> Result<u64, GraphError> {
    if !g.contains(v) {
        return Err(GraphError::InvalidVertex(v));
    }
    Ok(g.neighbors(v)
        .iter()
        .map(|&(w, m)| if w == v { 2 * m as u64 } else { m as u64 })
        .sum())
}

/// The induced subgraph on all vertices within `radius` of `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: VertexId,
    pub radius: usize,
    /// BFS distance from the center for every vertex of the ball.
    pub distances: BTreeMap<VertexId, usize>,
    /// Edges of the induced subgraph, sorted.
    pub edges: Vec<EdgeRef>,
}

impl Ball {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.distances.keys().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.distances.contains_key(&v)
    }

    pub fn distance(&self, v: VertexId) -> Option<usize> {
        self.distances.get(&v).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.distances.len()
    }

    /// Vertices at exactly distance `d`.
    pub fn layer(&self, d: usize) -> Vec<VertexId> {
        self.distances
            .iter()
            .filter(|&(_, &dv)| dv == d)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// Graphviz rendering; parallel edges are drawn separately and edges in
    /// `removed` are dashed.
    pub fn to_dot(&self, removed: &EdgeSet) -> String {
        let mut out = String::from("graph ball {\n");
        for (v, d) in &self.distances {
            out.push_str(&format!("  \"{v}\" [label=\"{v}\\nd={d}\"];\n"));
        }
        for e in &self.edges {
            let style = if removed.contains(e) {
                " [style=dashed]"
            } else {
                ""
            };
            out.push_str(&format!("  \"{}\" -- \"{}\"{};\n", e.u, e.v, style));
        }
        out.push_str("}\n");
        out
    }
}

/// Exact ball of `radius` around `center`.
pub fn ball(g: &dyn GraphOracle, center: VertexId, radius: usize) -> Result<Ball, GraphError> {
    if !g.contains(center) {
        return Err(GraphError::InvalidVertex(center));
    }
    let mut dist: HashMap<VertexId, usize> = HashMap::new();
    let mut adjacency: HashMap<VertexId, Vec<(VertexId, u32)>> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(center, 0);
    queue.push_back(center);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        let nbrs = g.neighbors(x);
        if dx < radius {
            for &(y, _) in &nbrs {
                if !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        adjacency.insert(x, nbrs);
    }
    let mut edges = Vec::new();
    for (&x, nbrs) in &adjacency {
        for &(y, m) in nbrs {
            if x <= y && dist.contains_key(&y) {
                edges.extend((0..m).map(|s| EdgeRef::new(x, y, s)));
            }
        }
    }
    edges.sort_unstable();
    Ok(Ball {
        center,
        radius,
        distances: dist.into_iter().collect(),
        edges,
    })
}

/// Connected components of the finite multigraph `(vertices, edges ∖ removed)`,
/// each sorted, listed by their least vertex. Edges with an endpoint outside
/// `vertices` are ignored.
pub fn finite_components<'a>(
    vertices: impl IntoIterator<Item = VertexId>,
    edges: impl IntoIterator<Item = &'a EdgeRef>,
    removed: &EdgeSet,
) -> Vec<BTreeSet<VertexId>> {
    let verts: Vec<VertexId> = vertices
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(verts.len());
    for e in edges {
        if removed.contains(e) {
            continue;
        }
        if let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().insert(v);
    }
    let mut comps: Vec<BTreeSet<VertexId>> = groups.into_values().collect();
    comps.sort_by_key(|c| *c.iter().next().unwrap());
    comps
}

/// Graph distance between `a` and `b` by bidirectional BFS, or `None` if it
/// exceeds `max`.
pub fn distance(
    g: &dyn GraphOracle,
    a: VertexId,
    b: VertexId,
    max: usize,
) -> Result<Option<usize>, GraphError> {
    for v in [a, b] {
        if !g.contains(v) {
            return Err(GraphError::InvalidVertex(v));
        }
    }
    if a == b {
        return Ok(Some(0));
    }
    let mut seen = [HashMap::from([(a, 0usize)]), HashMap::from([(b, 0usize)])];
    let mut frontier = [vec![a], vec![b]];
    let mut depth = [0usize, 0usize];
    while depth[0] + depth[1] < max {
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        if frontier[side].is_empty() {
            return Ok(None);
        }
        depth[side] += 1;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for &x in &frontier[side] {
            for (y, _) in g.neighbors(x) {
                if seen[side].contains_key(&y) {
                    continue;
                }
                seen[side].insert(y, depth[side]);
                if let Some(&dy) = seen[1 - side].get(&y) {
                    let total = depth[side] + dy;
                    best = Some(best.map_or(total, |b: usize| b.min(total)));
                }
                next.push(y);
            }
        }
        if let Some(d) = best {
            return Ok(if d <= max { Some(d) } else { None });
        }
        frontier[side] = next;
    }
    Ok(None)
}

/// A violated oracle contract found while auditing a ball.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("{u} lists {v} with multiplicity {forward} but {v} lists {u} with {backward}")]
    Asymmetric {
        u: VertexId,
        v: VertexId,
        forward: u32,
        backward: u32,
    },
    #[error("neighbor list of {0} is not sorted or has duplicates")]
    Unsorted(VertexId),
    #[error("{0} is listed as a neighbor but is not a vertex")]
    Dangling(VertexId),
    #[error("ball around {0} is disconnected")]
    Disconnected(VertexId),
}

/// Checks symmetry, sortedness and connectivity on every vertex of `b`.
pub fn audit_ball(g: &dyn GraphOracle, b: &Ball) -> Result<(), AuditError> {
    for v in b.vertices() {
        let nbrs = g.neighbors(v);
        if nbrs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(AuditError::Unsorted(v));
        }
        for &(w, m) in &nbrs {
            if !g.contains(w) {
                return Err(AuditError::Dangling(w));
            }
            let back = g
                .neighbors(w)
                .iter()
                .find(|&&(x, _)| x == v)
                .map_or(0, |&(_, m)| m);
            if back != m {
                return Err(AuditError::Asymmetric {
                    u: v,
                    v: w,
                    forward: m,
                    backward: back,
                });
            }
        }
    }
    if finite_components(b.vertices(), &b.edges, &EdgeSet::new()).len() > 1 {
        return Err(AuditError::Disconnected(b.center));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct NatLine;
    impl GraphOracle for NatLine {
        fn contains(&self, v: VertexId) -> bool {
            v >= 0
        }
        fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
            if v == 0 {
                vec![(1, 1)]
            } else {
                vec![(v - 1, 1), (v + 1, 1)]
            }
        }
        fn basepoint(&self) -> VertexId {
            0
        }
        fn is_multigraph(&self) -> bool {
            false
        }
    }

    /// A ray with a loop at 0 and a doubled edge 0-1.
    struct LoopRay;
    impl GraphOracle for LoopRay {
        fn contains(&self, v: VertexId) -> bool {
            v >= 0
        }
        fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
            match v {
                0 => vec![(0, 1), (1, 2)],
                1 => vec![(0, 2), (2, 1)],
                _ => vec![(v - 1, 1), (v + 1, 1)],
            }
        }
        fn basepoint(&self) -> VertexId {
            0
        }
        fn is_multigraph(&self) -> bool {
            true
        }
    }

    #[test]
    fn edge_ref_is_canonical() {
        assert_eq!(EdgeRef::new(3, 1, 0), EdgeRef::new(1, 3, 0));
        assert_eq!(EdgeRef::new(3, 1, 2).to_string(), "(1,3,2)");
        assert_eq!(EdgeRef::new(-2, 5, 0).other(5), Some(-2));
    }

    #[test]
    fn ball_on_nat_line() {
        let b = ball(&NatLine, 0, 2).unwrap();
        assert_eq!(b.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(b.edges.len(), 2);
        assert_eq!(b.distance(2), Some(2));
    }

    #[test]
    fn radius_zero_keeps_only_loops() {
        let b = ball(&LoopRay, 0, 0).unwrap();
        assert_eq!(b.num_vertices(), 1);
        assert_eq!(b.edges, vec![EdgeRef::new(0, 0, 0)]);
    }

    #[test]
    fn invalid_center_is_rejected() {
        assert_eq!(ball(&NatLine, -1, 3), Err(GraphError::InvalidVertex(-1)));
    }

    #[test]
    fn degree_counts_loops_twice() {
        assert_eq!(degree(&NatLine, 0).unwrap(), 1);
        assert_eq!(degree(&LoopRay, 0).unwrap(), 4);
        assert_eq!(degree(&LoopRay, 1).unwrap(), 3);
    }

    #[test]
    fn parallel_edges_get_slots() {
        let b = ball(&LoopRay, 0, 1).unwrap();
        assert_eq!(
            b.edges,
            vec![EdgeRef::new(0, 0, 0), EdgeRef::new(0, 1, 0), EdgeRef::new(0, 1, 1)]
        );
        assert!(EdgeRef::new(0, 1, 1).is_valid(&LoopRay));
        assert!(!EdgeRef::new(0, 1, 2).is_valid(&LoopRay));
    }

    #[test]
    fn components_after_removal() {
        let edges = [EdgeRef::new(0, 1, 0), EdgeRef::new(1, 2, 0)];
        let removed: EdgeSet = [EdgeRef::new(1, 2, 0)].into_iter().collect();
        let comps = finite_components([0, 1, 2], &edges, &removed);
        assert_eq!(comps, vec![BTreeSet::from([0, 1]), BTreeSet::from([2])]);

        let tri = [EdgeRef::new(0, 1, 0), EdgeRef::new(1, 2, 0), EdgeRef::new(0, 2, 0)];
        let removed: EdgeSet = [EdgeRef::new(0, 2, 0)].into_iter().collect();
        assert_eq!(finite_components([0, 1, 2], &tri, &removed).len(), 1);
        assert!(finite_components([], &tri, &EdgeSet::new()).is_empty());
    }

    #[test]
    fn removing_one_parallel_edge_keeps_connection() {
        let b = ball(&LoopRay, 0, 3).unwrap();
        let removed: EdgeSet = [EdgeRef::new(0, 1, 0)].into_iter().collect();
        assert_eq!(finite_components(b.vertices(), &b.edges, &removed).len(), 1);
    }

    #[test]
    fn bidirectional_distance() {
        assert_eq!(distance(&NatLine, 2, 9, 20).unwrap(), Some(7));
        assert_eq!(distance(&NatLine, 2, 9, 6).unwrap(), None);
        assert_eq!(distance(&NatLine, 4, 4, 0).unwrap(), Some(0));
    }

    #[test]
    fn audit_accepts_good_oracles() {
        audit_ball(&LoopRay, &ball(&LoopRay, 0, 5).unwrap()).unwrap();
        audit_ball(&NatLine, &ball(&NatLine, 3, 5).unwrap()).unwrap();
    }

    #[test]
    fn dot_marks_removed_edges() {
        let b = ball(&LoopRay, 0, 1).unwrap();
        let removed: EdgeSet = [EdgeRef::new(0, 1, 1)].into_iter().collect();
        let dot = b.to_dot(&removed);
        assert_eq!(dot.matches("\"0\" -- \"1\"").count(), 2);
        assert_eq!(dot.matches("dashed").count(), 1);
    }
}
