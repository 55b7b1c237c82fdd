//! Finite simple paths that extend to infinite ones, and the greedy
//! construction of arbitrarily long prefixes of an infinite simple path.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph_core::{ball, edges_at, EdgeSet, Fuel, GraphOracle, VertexId};
use crate::separation::{
    boundary_partition, boundary_vertices, Bounded, EndsCertificate, SepError, TriBool,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("not a simple path: {0}")]
    NotASimplePath(String),
    #[error("path ending at {0} cannot be extended; the certificate is unsound")]
    NoExtension(VertexId),
    #[error(transparent)]
    Sep(#[from] SepError),
}

/// A nonempty sequence of distinct, consecutively adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplePath(Vec<VertexId>);

impl SimplePath {
    pub fn new(g: &dyn GraphOracle, vertices: Vec<VertexId>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::NotASimplePath("empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !g.contains(v) {
                return Err(PathError::NotASimplePath(format!("{v} is not a vertex")));
            }
            if !seen.insert(v) {
                return Err(PathError::NotASimplePath(format!("{v} repeats")));
            }
        }
        for w in vertices.windows(2) {
            if !g.neighbors(w[0]).iter().any(|&(x, _)| x == w[1]) {
                return Err(PathError::NotASimplePath(format!(
                    "{} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(SimplePath(vertices))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().unwrap()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    fn extended(&self, v: VertexId) -> SimplePath {
        let mut next = self.0.clone();
        next.push(v);
        SimplePath(next)
    }
}

impl fmt::Display for SimplePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(VertexId::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Whether `p` is a prefix of some infinite simple path: removing the
/// vertices of `p` must leave a neighbor of its last vertex in an infinite
/// component.
pub fn decide_extendable(
    g: &dyn GraphOracle,
    p: &SimplePath,
    cert: &EndsCertificate,
    fuel: Fuel,
) -> Result<TriBool, PathError> {
    let e: EdgeSet = p.vertices().iter().flat_map(|&v| edges_at(g, v)).collect();
    let part = match boundary_partition(g, &e, cert, fuel)? {
        Bounded::Done(part) => part,
        Bounded::Unknown(s) => return Ok(TriBool::Unknown(s)),
    };
    let last = p.last();
    let ok = g
        .neighbors(last)
        .into_iter()
        .filter(|&(w, _)| !p.contains(w))
        .any(|(w, _)| part.infinite_groups.iter().any(|grp| grp.contains(&w)));
    Ok(if ok { TriBool::Yes } else { TriBool::No })
}

/// A simple path with `length` edges from `start`, always stepping to the
/// least neighbor that keeps the path extendable.
pub fn greedy_infinite_path(
    g: &dyn GraphOracle,
    start: VertexId,
    cert: &EndsCertificate,
    length: usize,
    fuel: Fuel,
) -> Result<Bounded<SimplePath>, PathError> {
    let mut p = SimplePath::new(g, vec![start])?;
    while p.len() < length {
        let last = p.last();
        let mut next = None;
        for (w, _) in g.neighbors(last) {
            if p.contains(w) {
                continue;
            }
            let q = p.extended(w);
            match decide_extendable(g, &q, cert, fuel)? {
                TriBool::Yes => {
                    next = Some(q);
                    break;
                }
                TriBool::No => {}
                TriBool::Unknown(s) => return Ok(Bounded::Unknown(s)),
            }
        }
        p = next.ok_or(PathError::NoExtension(last))?;
    }
    Ok(Bounded::Done(p))
}

/// Simple paths from `u` with exactly `len` edges that use no edge of `e`.
fn paths_avoiding(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    u: VertexId,
    len: usize,
) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![u]];
    while let Some(path) = stack.pop() {
        if path.len() == len + 1 {
            out.push(path);
            continue;
        }
        let last = *path.last().unwrap();
        for x in edges_at(g, last) {
            let w = x.other(last).unwrap();
            if e.contains(&x) || path.contains(&w) {
                continue;
            }
            let mut next = path.clone();
            next.push(w);
            stack.push(next);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Decides `e ∈ Sep(G)` on a tree from a membership oracle for extendable
/// paths.
///
/// A boundary vertex `u` lies in an infinite component of `G ∖ e` exactly
/// when some path from `u` avoiding `e` and reaching past every endpoint of
/// `e` is extendable. Components are then read off a ball, since tree paths
/// between two vertices never leave the ball of the farther one.
pub fn tree_sep_from_path(
    g: &dyn GraphOracle,
    e: &EdgeSet,
    path_oracle: &dyn Fn(&SimplePath) -> bool,
) -> Result<bool, SepError> {
    e.validate(g)?;
    let ends = e.vertices();
    let bp = g.basepoint();
    let mut radius = 0;
    let mut infinite = Vec::new();
    for u in boundary_vertices(g, e) {
        // distances from u to the endpoints of e, inside a tree ball
        let mut r = 1;
        let reach = loop {
            let b = ball(g, u, r)?;
            if ends.iter().all(|v| b.contains(*v)) {
                break ends.iter().map(|v| b.distance(*v).unwrap()).max().unwrap_or(0);
            }
            r *= 2;
        };
        let depth = reach + 1;
        let extendable = paths_avoiding(g, e, u, depth)
            .into_iter()
            .any(|p| path_oracle(&SimplePath(p)));
        if extendable {
            infinite.push(u);
        }
    }
    for &v in &ends {
        let mut r = 0;
        while !ball(g, bp, r)?.contains(v) {
            r += 1;
        }
        radius = radius.max(r);
    }
    let b = ball(g, bp, radius)?;
    let index: HashMap<VertexId, usize> = b.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let mut uf = UnionFind::new(index.len());
    for x in &b.edges {
        if !e.contains(x) {
            uf.union(index[&x.u], index[&x.v]);
        }
    }
    let classes: BTreeSet<usize> = infinite.iter().map(|v| uf.find(index[v])).collect();
    Ok(classes.len() >= 2)
}
