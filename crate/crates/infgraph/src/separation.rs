//! Counting infinite components of `G ∖ E` for finite `E`.
//!
//! Without extra information only an upper approximation is computable
//! ([`comp_approx`]). Given the number of ends and one maximal separating set
//! the count becomes exact ([`decide_comp`]).

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph_core::{
    ball, edges_at, finite_components, Ball, EdgeRef, EdgeSet, Fuel, GraphError, GraphOracle,
    Spent, VertexId,
};

/// Largest shell whose subsets we are willing to enumerate.
pub const MAX_SHELL_EDGES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unsound ends certificate: {0}")]
    UnsoundCertificateDetected(String),
    #[error("edge set is not the edge set of a sphere shell")]
    NotAShell,
    #[error("shell has {0} edges; at most {MAX_SHELL_EDGES} are supported")]
    ShellTooLarge(usize),
}

/// The number of ends together with one edge set attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndsCertificate {
    pub ends: usize,
    pub witness: EdgeSet,
}

impl EndsCertificate {
    pub fn new(ends: usize, witness: EdgeSet) -> Self {
        EndsCertificate { ends, witness }
    }

    pub fn one_ended() -> Self {
        EndsCertificate::new(1, EdgeSet::new())
    }
}

/// Result of a search that may run out of fuel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bounded<T> {
    Done(T),
    Unknown(Spent),
}

impl<T> Bounded<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Bounded::Done(t) => Some(t),
            Bounded::Unknown(_) => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Bounded<U> {
        match self {
            Bounded::Done(t) => Bounded::Done(f(t)),
            Bounded::Unknown(s) => Bounded::Unknown(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriBool {
    Yes,
    No,
    Unknown(Spent),
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::Yes => write!(f, "yes"),
            TriBool::No => write!(f, "no"),
            TriBool::Unknown(s) => write!(f, "unknown ({s})"),
        }
    }
}

/// Boundary vertices of `E` sorted by the infinite component of `G ∖ E` they
/// lie in. `finite_group` collects those in finite components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPartition {
    pub infinite_groups: Vec<BTreeSet<VertexId>>,
    pub finite_group: BTreeSet<VertexId>,
}

/// Endpoints of `E` that keep at least one edge outside `E`. Endpoints whose
/// every edge lies in `E` become isolated and are dropped.
pub fn boundary_vertices(g: &dyn GraphOracle, e: &EdgeSet) -> BTreeSet<VertexId> {
    e.vertices()
        .into_iter()
        .filter(|&v| edges_at(g, v).iter().any(|x| !e.contains(x)))
        .collect()
}

/// Edges of `G ∖ E` reachable by a walk of length at most `n` from `v`, and
/// whether that set grows when `n` increases by one.
fn reach_within(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    v: VertexId,
    n: usize,
) -> (Vec<EdgeRef>, bool) {
    let mut dist: HashMap<VertexId, usize> = HashMap::from([(v, 0)]);
    let mut queue = VecDeque::from([v]);
    let mut edges = Vec::new();
    let mut grows = false;
    while let Some(a) = queue.pop_front() {
        let da = dist[&a];
        for x in edges_at(g, a) {
            if e.contains(&x) {
                continue;
            }
            let b = x.other(a).unwrap();
            match dist.get(&b) {
                Some(&db) if db < da => continue,
                Some(&db) if db == da && b < a => continue,
                _ => {}
            }
            if da < n {
                edges.push(x);
                if !dist.contains_key(&b) {
                    dist.insert(b, da + 1);
                    queue.push_back(b);
                }
            } else {
                grows = true;
            }
        }
    }
    (edges, grows)
}

/// Upper approximation of the number of infinite components of `G ∖ E` seen
/// from walks of length `n`. Its minimum over `n` is the exact count.
pub fn comp_approx(g: &dyn GraphOracle, e: &EdgeSet, n: usize) -> Result<usize, SepError> {
    e.validate(g)?;
    let mut growing = Vec::new();
    let mut reach = Vec::new();
    for v in boundary_vertices(g, e) {
        let (edges, grows) = reach_within(g, e, v, n);
        if grows {
            growing.push(v);
            reach.push(edges);
        }
    }
    let mut uf = UnionFind::new(growing.len());
    let mut owner: HashMap<EdgeRef, usize> = HashMap::new();
    for (i, edges) in reach.iter().enumerate() {
        for x in edges {
            match owner.entry(*x) {
                Entry::Occupied(o) => {
                    uf.union(i, *o.get());
                }
                Entry::Vacant(slot) => {
                    slot.insert(i);
                }
            }
        }
    }
    Ok((0..growing.len()).map(|i| uf.find(i)).collect::<BTreeSet<_>>().len())
}

/// Runs one breadth-first search per source in `G ∖ removed`, a layer at a
/// time. A search that claims an edge already claimed by another merges the
/// two groups; a layer that claims nothing proves the component finite.
struct Explorer<'a> {
    g: &'a dyn GraphOracle,
    removed: &'a dyn Fn(&EdgeRef) -> bool,
    sources: Vec<VertexId>,
    dist: Vec<HashMap<VertexId, usize>>,
    frontier: Vec<Vec<VertexId>>,
    depth: Vec<usize>,
    claimed: Vec<Vec<EdgeRef>>,
    owner: HashMap<EdgeRef, usize>,
    uf: UnionFind<usize>,
    finished: Vec<bool>,
}

impl<'a> Explorer<'a> {
    fn new(
        g: &'a dyn GraphOracle,
        removed: &'a dyn Fn(&EdgeRef) -> bool,
        sources: Vec<VertexId>,
    ) -> Self {
        let n = sources.len();
        Explorer {
            g,
            removed,
            dist: sources.iter().map(|&v| HashMap::from([(v, 0)])).collect(),
            frontier: sources.iter().map(|&v| vec![v]).collect(),
            sources,
            depth: vec![0; n],
            claimed: vec![Vec::new(); n],
            owner: HashMap::new(),
            uf: UnionFind::new(n),
            finished: vec![false; n],
        }
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.uf.find(i), self.uf.find(j));
        if ri != rj {
            let fin = self.finished[ri] || self.finished[rj];
            self.uf.union(ri, rj);
            let r = self.uf.find(ri);
            self.finished[r] = fin;
        }
    }

    fn claim(&mut self, i: usize, x: EdgeRef) {
        self.claimed[i].push(x);
        match self.owner.entry(x) {
            Entry::Occupied(o) => {
                let j = *o.get();
                self.union(i, j);
            }
            Entry::Vacant(slot) => {
                slot.insert(i);
            }
        }
    }

    fn advance(&mut self, i: usize, steps: &mut u64) {
        let d = self.depth[i];
        let mut next = Vec::new();
        let mut any = false;
        for a in std::mem::take(&mut self.frontier[i]) {
            *steps += 1;
            for (b, m) in self.g.neighbors(a) {
                let db = self.dist[i].get(&b).copied();
                match db {
                    Some(db) if db < d => continue,
                    Some(db) if db == d && b < a => continue,
                    _ => {}
                }
                let mut fresh = false;
                for s in 0..m {
                    let x = EdgeRef::new(a, b, s);
                    if (self.removed)(&x) {
                        continue;
                    }
                    fresh = true;
                    self.claim(i, x);
                }
                if fresh {
                    any = true;
                    if db.is_none() {
                        self.dist[i].insert(b, d + 1);
                        next.push(b);
                    }
                }
            }
        }
        self.frontier[i] = next;
        self.depth[i] += 1;
        if !any {
            let r = self.uf.find(i);
            self.finished[r] = true;
        }
    }

    fn round(&mut self, steps: &mut u64) {
        for i in 0..self.sources.len() {
            if self.uf.find(i) == i && !self.finished[i] {
                self.advance(i, steps);
            }
        }
    }

    fn roots(&self) -> Vec<usize> {
        (0..self.sources.len())
            .filter(|&i| self.uf.find(i) == i)
            .collect()
    }

    fn open_groups(&self) -> usize {
        self.roots().into_iter().filter(|&r| !self.finished[r]).count()
    }

    /// `(finished, members)` per group, ordered by least member.
    fn groups(&self) -> Vec<(bool, Vec<usize>)> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.sources.len() {
            by_root.entry(self.uf.find(i)).or_default().push(i);
        }
        let mut out: Vec<(bool, Vec<usize>)> = by_root
            .into_iter()
            .map(|(r, members)| (self.finished[r], members))
            .collect();
        out.sort_by_key(|(_, m)| m.iter().map(|&i| self.sources[i]).min());
        out
    }

    /// Advances until exactly `k` groups remain open.
    fn run_until(&mut self, k: usize, spent: &mut Spent, fuel: Fuel) -> Result<bool, SepError> {
        loop {
            let open = self.open_groups();
            if open == k {
                return Ok(true);
            }
            if open < k {
                return Err(SepError::UnsoundCertificateDetected(format!(
                    "only {open} infinite components remain but {k} ends were claimed"
                )));
            }
            if spent.rounds >= fuel.max_radius || spent.steps >= fuel.max_steps {
                return Ok(false);
            }
            self.round(&mut spent.steps);
            spent.rounds += 1;
        }
    }
}

/// Largest distance from the basepoint among `targets`, or `None` if some
/// target lies beyond `max_radius`.
fn covering_radius(
    g: &dyn GraphOracle,
    targets: &BTreeSet<VertexId>,
    max_radius: usize,
) -> Option<usize> {
    if targets.is_empty() {
        return Some(0);
    }
    let b = g.basepoint();
    let mut dist = HashMap::from([(b, 0usize)]);
    let mut queue = VecDeque::from([b]);
    let mut found = 0;
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        if targets.contains(&x) {
            found += 1;
            if found == targets.len() {
                return Some(dx);
            }
        }
        if dx >= max_radius {
            continue;
        }
        for (y, _) in g.neighbors(x) {
            if let Entry::Vacant(slot) = dist.entry(y) {
                slot.insert(dx + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Vertices at distance exactly `r` with a neighbor at distance `r + 1`.
fn ports(outer: &Ball, r: usize) -> Vec<VertexId> {
    let layer: BTreeSet<VertexId> = outer.layer(r).into_iter().collect();
    let mut out = BTreeSet::new();
    for x in &outer.edges {
        let (du, dv) = (outer.distance(x.u).unwrap(), outer.distance(x.v).unwrap());
        if du == r && dv == r + 1 && layer.contains(&x.u) {
            out.insert(x.u);
        }
        if dv == r && du == r + 1 && layer.contains(&x.v) {
            out.insert(x.v);
        }
    }
    out.into_iter().collect()
}

fn inside(b: &Ball, r: usize, x: &EdgeRef) -> bool {
    b.distance(x.u).is_some_and(|d| d <= r) && b.distance(x.v).is_some_and(|d| d <= r)
}

fn check_certificate(g: &dyn GraphOracle, cert: &EndsCertificate) -> Result<(), SepError> {
    if cert.ends == 0 {
        return Err(SepError::UnsoundCertificateDetected(
            "an infinite graph has at least one end".into(),
        ));
    }
    if cert.ends >= 2 && cert.witness.is_empty() {
        return Err(SepError::UnsoundCertificateDetected(
            "the empty set leaves one infinite component".into(),
        ));
    }
    cert.witness.validate(g)?;
    Ok(())
}

/// Reusable finite data from which the component count of any edge set
/// inside the ball of radius `r0` is read off by union-find.
#[derive(Debug, Clone)]
pub struct PreparedComp {
    pub ends: usize,
    pub r0: usize,
    pub r1: usize,
    /// The ports of each infinite component of `G ∖ U_{r1}`.
    pub groups: Vec<Vec<VertexId>>,
    /// The induced ball of radius `r1` plus every finite component of
    /// `G ∖ U_{r1}`.
    pub u_edges: Vec<EdgeRef>,
    pub u_vertices: Vec<VertexId>,
    pub spent: Spent,
}

impl PreparedComp {
    fn classes(&self, e: &EdgeSet) -> (HashMap<VertexId, usize>, UnionFind<usize>) {
        let index: HashMap<VertexId, usize> = self
            .u_vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut uf = UnionFind::new(self.u_vertices.len());
        for grp in &self.groups {
            for w in grp.windows(2) {
                uf.union(index[&w[0]], index[&w[1]]);
            }
        }
        for x in &self.u_edges {
            if !e.contains(x) {
                uf.union(index[&x.u], index[&x.v]);
            }
        }
        (index, uf)
    }

    /// Number of infinite components of `G ∖ e`; `e` must lie in `U_{r0}`.
    pub fn comp(&self, e: &EdgeSet) -> usize {
        let (index, uf) = self.classes(e);
        self.groups
            .iter()
            .map(|grp| uf.find(index[&grp[0]]))
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn partition(&self, g: &dyn GraphOracle, e: &EdgeSet) -> BoundaryPartition {
        let (index, uf) = self.classes(e);
        let roots: BTreeSet<usize> = self
            .groups
            .iter()
            .map(|grp| uf.find(index[&grp[0]]))
            .collect();
        let mut infinite: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        let mut finite = BTreeSet::new();
        for v in boundary_vertices(g, e) {
            let r = uf.find(index[&v]);
            if roots.contains(&r) {
                infinite.entry(r).or_default().insert(v);
            } else {
                finite.insert(v);
            }
        }
        let mut infinite_groups: Vec<_> = infinite.into_values().collect();
        infinite_groups.sort_by_key(|s| *s.iter().next().unwrap());
        BoundaryPartition {
            infinite_groups,
            finite_group: finite,
        }
    }
}

/// Builds the finite data for counting components of edge sets within
/// distance `radius` of the basepoint. Requires `cert.ends >= 2`.
pub fn prepare(
    g: &dyn GraphOracle,
    cert: &EndsCertificate,
    radius: usize,
    fuel: Fuel,
) -> Result<Bounded<PreparedComp>, SepError> {
    check_certificate(g, cert)?;
    let k = cert.ends;
    let mut spent = Spent::default();
    let Some(wr) = covering_radius(g, &cert.witness.vertices(), fuel.max_radius) else {
        return Ok(Bounded::Unknown(spent));
    };
    let r0 = radius.max(wr);
    let bp = g.basepoint();

    let outer0 = ball(g, bp, r0 + 1)?;
    let removed0 = |x: &EdgeRef| inside(&outer0, r0, x);
    let mut ex0 = Explorer::new(g, &removed0, ports(&outer0, r0));
    if !ex0.run_until(k, &mut spent, fuel)? {
        return Ok(Bounded::Unknown(spent));
    }
    let open0: Vec<Vec<VertexId>> = ex0
        .groups()
        .into_iter()
        .filter(|(fin, _)| !fin)
        .map(|(_, m)| m.into_iter().map(|i| ex0.sources[i]).collect())
        .collect();

    // Smallest r1 such that each infinite group's ports are joined outside U_{r0}.
    let mut r1 = r0;
    loop {
        let b = ball(g, bp, r1)?;
        let outside: Vec<EdgeRef> = b
            .edges
            .iter()
            .filter(|x| !inside(&b, r0, x))
            .copied()
            .collect();
        let comps = finite_components(b.vertices(), &outside, &EdgeSet::new());
        let comp_of: HashMap<VertexId, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
            .collect();
        if open0
            .iter()
            .all(|grp| grp.iter().map(|v| comp_of[v]).all_equal())
        {
            break;
        }
        if spent.rounds >= fuel.max_radius {
            return Ok(Bounded::Unknown(spent));
        }
        spent.rounds += 1;
        r1 += 1;
    }

    let outer1 = ball(g, bp, r1 + 1)?;
    let removed1 = |x: &EdgeRef| inside(&outer1, r1, x);
    let mut ex1 = Explorer::new(g, &removed1, ports(&outer1, r1));
    if !ex1.run_until(k, &mut spent, fuel)? {
        return Ok(Bounded::Unknown(spent));
    }
    let mut groups = Vec::new();
    let mut u_edges: BTreeSet<EdgeRef> =
        outer1.edges.iter().filter(|x| inside(&outer1, r1, x)).copied().collect();
    let mut u_vertices: BTreeSet<VertexId> = outer1
        .distances
        .iter()
        .filter(|&(_, &d)| d <= r1)
        .map(|(&v, _)| v)
        .collect();
    for (fin, members) in ex1.groups() {
        if fin {
            for &i in &members {
                for x in &ex1.claimed[i] {
                    u_edges.insert(*x);
                    u_vertices.insert(x.u);
                    u_vertices.insert(x.v);
                }
            }
        } else {
            groups.push(members.into_iter().map(|i| ex1.sources[i]).collect());
        }
    }
    Ok(Bounded::Done(PreparedComp {
        ends: k,
        r0,
        r1,
        groups,
        u_edges: u_edges.into_iter().collect(),
        u_vertices: u_vertices.into_iter().collect(),
        spent,
    }))
}

/// Exact number of infinite components of `G ∖ e`, given a sound
/// certificate.
pub fn decide_comp(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    cert: &EndsCertificate,
    fuel: Fuel,
) -> Result<Bounded<usize>, SepError> {
    e.validate(g)?;
    check_certificate(g, cert)?;
    // One end bounds the count by 1; an infinite graph always has one.
    if e.is_empty() || cert.ends == 1 {
        return Ok(Bounded::Done(1));
    }
    let Some(r) = covering_radius(g, &e.vertices(), fuel.max_radius) else {
        return Ok(Bounded::Unknown(Spent::default()));
    };
    let prep = match prepare(g, cert, r, fuel)? {
        Bounded::Done(p) => p,
        Bounded::Unknown(s) => return Ok(Bounded::Unknown(s)),
    };
    let c = prep.comp(e);
    if c > cert.ends {
        return Err(SepError::UnsoundCertificateDetected(format!(
            "found {c} infinite components but only {} ends were claimed",
            cert.ends
        )));
    }
    Ok(Bounded::Done(c))
}

/// Splits the boundary vertices of `e` by the infinite component containing
/// them.
pub fn boundary_partition(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    cert: &EndsCertificate,
    fuel: Fuel,
) -> Result<Bounded<BoundaryPartition>, SepError> {
    e.validate(g)?;
    check_certificate(g, cert)?;
    let boundary = boundary_vertices(g, e);
    if boundary.is_empty() {
        return Ok(Bounded::Done(BoundaryPartition {
            infinite_groups: Vec::new(),
            finite_group: BTreeSet::new(),
        }));
    }
    if cert.ends == 1 {
        // Every finite set attains the single end, so explore G ∖ e directly.
        let removed = |x: &EdgeRef| e.contains(x);
        let mut ex = Explorer::new(g, &removed, boundary.iter().copied().collect());
        let mut spent = Spent::default();
        if !ex.run_until(1, &mut spent, fuel)? {
            return Ok(Bounded::Unknown(spent));
        }
        let mut infinite_groups = Vec::new();
        let mut finite_group = BTreeSet::new();
        for (fin, members) in ex.groups() {
            let set = members.into_iter().map(|i| ex.sources[i]);
            if fin {
                finite_group.extend(set);
            } else {
                infinite_groups.push(set.collect());
            }
        }
        return Ok(Bounded::Done(BoundaryPartition {
            infinite_groups,
            finite_group,
        }));
    }
    let Some(r) = covering_radius(g, &e.vertices(), fuel.max_radius) else {
        return Ok(Bounded::Unknown(Spent::default()));
    };
    Ok(prepare(g, cert, r, fuel)?.map(|p| p.partition(g, e)))
}

/// Answers `Yes` once some approximation level shows at most one infinite
/// component. Never answers `No`.
pub fn semidecide_not_separating(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    fuel: Fuel,
) -> Result<TriBool, SepError> {
    e.validate(g)?;
    for n in 0..=fuel.max_radius {
        if comp_approx(g, e, n)? <= 1 {
            return Ok(TriBool::Yes);
        }
    }
    Ok(TriBool::Unknown(Spent {
        rounds: fuel.max_radius + 1,
        steps: 0,
    }))
}

/// Edges of the subgraph induced by vertices at distance `r-1` or `r` from
/// the basepoint.
pub fn shell(g: &dyn GraphOracle, r: usize) -> Result<EdgeSet, SepError> {
    let b = ball(g, g.basepoint(), r)?;
    let lo = r.saturating_sub(1);
    Ok(b.edges
        .iter()
        .filter(|x| b.distance(x.u).unwrap() >= lo && b.distance(x.v).unwrap() >= lo)
        .copied()
        .collect())
}

/// The radius `r` with `shell(g, r) == s`.
pub fn shell_radius(g: &dyn GraphOracle, s: &EdgeSet) -> Result<usize, SepError> {
    s.validate(g)?;
    let r = covering_radius(g, &s.vertices(), usize::MAX).ok_or(SepError::NotAShell)?;
    if r == 0 || shell(g, r)? != *s {
        return Err(SepError::NotAShell);
    }
    Ok(r)
}

/// Subsets of `shell` that are minimal for inclusion among those accepted by
/// `decider`, which must be upward closed. Ordered by size, then
/// lexicographically.
pub fn minimal_separating_subsets(
    g: &dyn GraphOracle,
    shell: &EdgeSet,
    decider: &dyn Fn(&EdgeSet) -> bool,
) -> Result<Vec<EdgeSet>, SepError> {
    shell_radius(g, shell)?;
    minimal_subsets(shell, decider)
}

fn minimal_subsets(
    shell: &EdgeSet,
    decider: &dyn Fn(&EdgeSet) -> bool,
) -> Result<Vec<EdgeSet>, SepError> {
    if shell.len() > MAX_SHELL_EDGES {
        return Err(SepError::ShellTooLarge(shell.len()));
    }
    let edges: Vec<EdgeRef> = shell.iter().copied().collect();
    let mut found: Vec<EdgeSet> = Vec::new();
    for size in 0..=edges.len() {
        for combo in edges.iter().copied().combinations(size) {
            let cand: EdgeSet = combo.into_iter().collect();
            if found.iter().any(|f| f.is_subset(&cand)) {
                continue;
            }
            if decider(&cand) {
                found.push(cand);
            }
        }
    }
    Ok(found)
}

/// Number of ends, given a membership oracle for maximal separating sets.
pub fn ends_from_sepmax(
    g: &dyn GraphOracle,
    sepmax: &dyn Fn(&EdgeSet) -> bool,
    fuel: Fuel,
) -> Result<Bounded<usize>, SepError> {
    if sepmax(&EdgeSet::new()) {
        return Ok(Bounded::Done(1));
    }
    for r in 1..=fuel.max_radius {
        let sh = shell(g, r)?;
        if !sepmax(&sh) {
            continue;
        }
        let mins = minimal_subsets(&sh, sepmax)?;
        let b = ball(g, g.basepoint(), r)?;
        let sphere = b.layer(r);
        let touches = |w: &EdgeSet, u: VertexId| w.iter().any(|x| x.touches(u));
        let infinite: Vec<VertexId> = sphere
            .into_iter()
            .filter(|&u| mins.iter().any(|w| touches(w, u)))
            .collect();
        let mut uf = UnionFind::new(infinite.len());
        for (i, j) in (0..infinite.len()).tuple_combinations() {
            let (u, v) = (infinite[i], infinite[j]);
            if mins.iter().any(|w| !touches(w, u) && !touches(w, v)) {
                uf.union(i, j);
            }
        }
        let classes = (0..infinite.len())
            .map(|i| uf.find(i))
            .collect::<BTreeSet<_>>()
            .len();
        return Ok(Bounded::Done(classes));
    }
    Ok(Bounded::Unknown(Spent {
        rounds: fuel.max_radius,
        steps: 0,
    }))
}

/// Edges from distance `r-1` to distance `r`.
fn crossing_edges(g: &dyn GraphOracle, r: usize) -> Result<EdgeSet, SepError> {
    let b = ball(g, g.basepoint(), r)?;
    Ok(b.edges
        .iter()
        .filter(|x| b.distance(x.u).unwrap().abs_diff(b.distance(x.v).unwrap()) == 1)
        .filter(|x| b.distance(x.u).unwrap().max(b.distance(x.v).unwrap()) == r)
        .copied()
        .collect())
}

/// A shell attaining all `k` ends, given a membership oracle for separating
/// sets.
///
/// The disjointness test runs on the edges leaving the ball of radius `r-1`
/// rather than on the induced shell: there, each minimal separating subset is
/// exactly the set of edges reaching one infinite component of the rest, so
/// `k` of them means `k` components. Edges inside a layer break that
/// correspondence (a strip of triangles has overlapping minimal cuts). The
/// induced shell contains the crossing edges, so it separates at least as
/// much and is returned.
pub fn sepmax_witness_from_ends(
    g: &dyn GraphOracle,
    k: usize,
    sep: &dyn Fn(&EdgeSet) -> bool,
    fuel: Fuel,
) -> Result<Bounded<EdgeSet>, SepError> {
    if k <= 1 {
        return Ok(Bounded::Done(EdgeSet::new()));
    }
    for r in 1..=fuel.max_radius {
        let cross = crossing_edges(g, r)?;
        if minimal_subsets(&cross, sep)?.len() == k {
            return Ok(Bounded::Done(shell(g, r)?));
        }
    }
    Ok(Bounded::Unknown(Spent {
        rounds: fuel.max_radius,
        steps: 0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{build_gadget, GadgetKind, IntLine, NatLine, Schedule};

    fn es(pairs: &[(i64, i64)]) -> EdgeSet {
        pairs.iter().map(|&(a, b)| EdgeRef::new(a, b, 0)).collect()
    }

    fn fuel() -> Fuel {
        Fuel::new(64, 1_000_000)
    }

    #[test]
    fn approx_on_int_line() {
        let e = es(&[(0, 1)]);
        assert_eq!(comp_approx(&IntLine, &e, 0).unwrap(), 2);
        assert_eq!(comp_approx(&IntLine, &e, 5).unwrap(), 2);
        assert_eq!(comp_approx(&IntLine, &EdgeSet::new(), 5).unwrap(), 0);
    }

    #[test]
    fn approx_sees_finite_side() {
        let e = es(&[(3, 4)]);
        assert_eq!(comp_approx(&NatLine, &e, 2).unwrap(), 2);
        assert_eq!(comp_approx(&NatLine, &e, 4).unwrap(), 1);
        assert_eq!(semidecide_not_separating(&NatLine, &e, fuel()).unwrap(), TriBool::Yes);
        assert!(matches!(
            semidecide_not_separating(&IntLine, &es(&[(0, 1)]), Fuel::new(10, 100)).unwrap(),
            TriBool::Unknown(_)
        ));
    }

    #[test]
    fn sticks_reconnect() {
        let g = build_gadget(GadgetKind::LinesWithSticks, Schedule::halt_at(3)).unwrap();
        assert_eq!(comp_approx(g.as_ref(), &es(&[(0, 1)]), 20).unwrap(), 1);
    }

    #[test]
    fn decide_on_int_line() {
        let cert = EndsCertificate::new(2, es(&[(0, 1)]));
        let got = decide_comp(&IntLine, &es(&[(5, 6)]), &cert, fuel()).unwrap();
        assert_eq!(got, Bounded::Done(2));
        let got = decide_comp(&IntLine, &es(&[(5, 6), (8, 9)]), &cert, fuel()).unwrap();
        assert_eq!(got, Bounded::Done(2));
    }

    #[test]
    fn decide_on_three_ended_chain() {
        let g = build_gadget(GadgetKind::CycleChainWithRays(3), Schedule::events_all()).unwrap();
        let w = es(&[(0, 3), (0, 4), (0, 5)]);
        let cert = EndsCertificate::new(3, w.clone());
        assert_eq!(decide_comp(g.as_ref(), &w, &cert, fuel()).unwrap(), Bounded::Done(3));
        assert_eq!(
            decide_comp(g.as_ref(), &es(&[(0, 4)]), &cert, fuel()).unwrap(),
            Bounded::Done(2)
        );
    }

    #[test]
    fn wrong_certificate_is_caught() {
        let g = build_gadget(GadgetKind::CycleChainWithRays(3), Schedule::events_all()).unwrap();
        let w = es(&[(0, 3), (0, 4), (0, 5)]);
        let bad = EndsCertificate::new(2, EdgeSet::new());
        assert!(matches!(
            boundary_partition(g.as_ref(), &w, &bad, fuel()),
            Err(SepError::UnsoundCertificateDetected(_))
        ));
        // Too few ends cannot be refuted in finite time; the search runs dry.
        let bad = EndsCertificate::new(2, w.clone());
        assert!(matches!(
            decide_comp(g.as_ref(), &w, &bad, Fuel::new(30, 100_000)),
            Ok(Bounded::Unknown(_))
        ));
    }

    #[test]
    fn partition_on_int_line() {
        let cert = EndsCertificate::new(2, es(&[(0, 1)]));
        let p = boundary_partition(&IntLine, &es(&[(0, 1)]), &cert, fuel())
            .unwrap()
            .done()
            .unwrap();
        assert_eq!(p.infinite_groups, vec![BTreeSet::from([0]), BTreeSet::from([1])]);
        assert!(p.finite_group.is_empty());
    }

    #[test]
    fn shells_and_minimal_subsets() {
        let sh = shell(&IntLine, 3).unwrap();
        assert_eq!(sh, es(&[(-3, -2), (2, 3)]));
        assert_eq!(shell_radius(&IntLine, &sh).unwrap(), 3);
        assert_eq!(shell_radius(&IntLine, &es(&[(2, 3)])), Err(SepError::NotAShell));
        let sep = |e: &EdgeSet| !e.is_empty();
        let mins = minimal_separating_subsets(&IntLine, &sh, &sep).unwrap();
        assert_eq!(mins, vec![es(&[(-3, -2)]), es(&[(2, 3)])]);
    }

    #[test]
    fn ends_round_trip_on_lines() {
        let one = |_: &EdgeSet| true;
        assert_eq!(ends_from_sepmax(&NatLine, &one, fuel()).unwrap(), Bounded::Done(1));
        let two = |e: &EdgeSet| !e.is_empty();
        assert_eq!(ends_from_sepmax(&IntLine, &two, fuel()).unwrap(), Bounded::Done(2));
        let w = sepmax_witness_from_ends(&IntLine, 2, &two, fuel()).unwrap();
        assert_eq!(w, Bounded::Done(es(&[(-1, 0), (0, 1)])));
    }
}
