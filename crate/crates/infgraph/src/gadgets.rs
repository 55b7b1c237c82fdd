//! Schedule-parameterized graph families used in reductions and
//! counterexamples, plus the product construction Λ = T × T.
//!
//! Every ℤ- or ℕ-indexed family is written as a per-stage edge law: stage `s`
//! contributes a fixed multiset of edges, and a vertex `v` can only be touched
//! by stages `|v|-1` and `|v|`. Neighbor queries replay those two stages.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::graph_core::{distance, Fuel, GraphOracle, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("bad schedule literal {literal:?}: {reason}")]
    ScheduleParse { literal: String, reason: String },
    #[error("gadget {kind} needs a {expected} schedule, got {got}")]
    KindScheduleMismatch {
        kind: String,
        expected: &'static str,
        got: String,
    },
}

/// A finite stand-in for a machine trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Halts at exactly `halt_step` (halted at every later stage), or never.
    Halting { halt_step: Option<u64> },
    /// Elements appear at the listed stages and, if `every_from` is set, at
    /// every stage from there on.
    CeEnumeration {
        stages: Vec<u64>,
        every_from: Option<u64>,
    },
    /// A {0,1}-valued approximation starting at 0 that flips at each listed
    /// stage.
    LimitApprox { changes: Vec<u64> },
}

impl Schedule {
    pub fn never() -> Self {
        Schedule::Halting { halt_step: None }
    }

    pub fn halt_at(s: u64) -> Self {
        Schedule::Halting { halt_step: Some(s) }
    }

    pub fn events(stages: &[u64]) -> Self {
        Schedule::CeEnumeration {
            stages: stages.to_vec(),
            every_from: None,
        }
    }

    pub fn events_all() -> Self {
        Schedule::CeEnumeration {
            stages: Vec::new(),
            every_from: Some(1),
        }
    }

    pub fn changes(stages: &[u64]) -> Self {
        Schedule::LimitApprox {
            changes: stages.to_vec(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Schedule::Halting { .. } => "halting",
            Schedule::CeEnumeration { .. } => "enumeration",
            Schedule::LimitApprox { .. } => "limit",
        }
    }

    /// Whether the machine has halted within `s` steps.
    pub fn halted_by(&self, s: u64) -> bool {
        matches!(self, Schedule::Halting { halt_step: Some(h) } if *h <= s)
    }

    /// Whether an element is enumerated exactly at stage `s`.
    pub fn is_event(&self, s: u64) -> bool {
        match self {
            Schedule::CeEnumeration { stages, every_from } => {
                s >= 1 && (every_from.is_some_and(|m| s >= m) || stages.binary_search(&s).is_ok())
            }
            _ => false,
        }
    }

    /// Value of the limit approximation at stage `s`.
    pub fn value(&self, s: u64) -> u8 {
        match self {
            Schedule::LimitApprox { changes } => {
                (changes.partition_point(|&c| c <= s) % 2) as u8
            }
            _ => 0,
        }
    }

    /// Whether the approximation changes its mind at stage `s`.
    pub fn changes_at(&self, s: u64) -> bool {
        match self {
            Schedule::LimitApprox { changes } => changes.binary_search(&s).is_ok(),
            _ => false,
        }
    }

    /// Whether infinitely many events occur.
    pub fn is_infinite(&self) -> bool {
        matches!(
            self,
            Schedule::CeEnumeration {
                every_from: Some(_),
                ..
            }
        )
    }

    /// Last event stage of a finite enumeration; `Some(None)` if there are no
    /// events, `None` if there are infinitely many.
    pub fn last_event(&self) -> Option<Option<u64>> {
        match self {
            Schedule::CeEnumeration {
                stages,
                every_from: None,
            } => Some(stages.last().copied()),
            Schedule::CeEnumeration { .. } => None,
            _ => Some(None),
        }
    }

    /// The `j`-th event stage in increasing order, if it exists.
    pub fn nth_event(&self, j: u64) -> Option<u64> {
        let Schedule::CeEnumeration { stages, every_from } = self else {
            return None;
        };
        match every_from {
            None => stages.get(j as usize).copied(),
            Some(m) => {
                let below = stages.partition_point(|&s| s < *m) as u64;
                if j < below {
                    Some(stages[j as usize])
                } else {
                    m.checked_add(j - below)
                }
            }
        }
    }

    fn validate(&self) -> Result<(), String> {
        let check = |v: &[u64]| {
            if v.first() == Some(&0) {
                return Err("stages start at 1".to_string());
            }
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err("stages must be strictly increasing".to_string());
            }
            Ok(())
        };
        match self {
            Schedule::Halting { .. } => Ok(()),
            Schedule::CeEnumeration { stages, every_from } => {
                check(stages)?;
                if *every_from == Some(0) {
                    return Err("stages start at 1".to_string());
                }
                Ok(())
            }
            Schedule::LimitApprox { changes } => check(changes),
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Halting { halt_step: None } => write!(f, "never"),
            Schedule::Halting { halt_step: Some(s) } => write!(f, "halt@{s}"),
            Schedule::CeEnumeration {
                stages,
                every_from: None,
            } => write!(f, "events@{}", join(stages)),
            Schedule::CeEnumeration {
                stages,
                every_from: Some(1),
            } if stages.is_empty() => write!(f, "events-all"),
            Schedule::CeEnumeration {
                stages,
                every_from: Some(m),
            } => {
                if stages.is_empty() {
                    write!(f, "events@{m}+")
                } else {
                    write!(f, "events@{},{m}+", join(stages))
                }
            }
            Schedule::LimitApprox { changes } => write!(f, "changes@{}", join(changes)),
        }
    }
}

impl FromStr for Schedule {
    type Err = GadgetError;

    /// Literals: `never`, `halt@S`, `events@a,b,c`, `events@a,b+` (every stage
    /// from `b` on), `events-all`, `changes@a,b,c`. An empty list is allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GadgetError::ScheduleParse {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let s_trim = s.trim();
        let list = |body: &str| -> Result<Vec<u64>, GadgetError> {
            body.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| err("expected a stage number")))
                .collect()
        };
        let sched = match s_trim {
            "never" => Schedule::never(),
            "events-all" => Schedule::events_all(),
            _ => {
                let (head, body) = s_trim.split_once('@').ok_or_else(|| err("unknown literal"))?;
                match head {
                    "halt" => Schedule::halt_at(
                        body.trim()
                            .parse()
                            .map_err(|_| err("expected a halting step"))?,
                    ),
                    "events" => {
                        let (body, tail) = match body.trim().strip_suffix('+') {
                            Some(b) => (b, true),
                            None => (body, false),
                        };
                        let mut stages = list(body)?;
                        let every_from = if tail {
                            Some(stages.pop().ok_or_else(|| err("'+' needs a stage"))?)
                        } else {
                            None
                        };
                        Schedule::CeEnumeration { stages, every_from }
                    }
                    "changes" => Schedule::changes(&list(body)?),
                    _ => return Err(err("unknown literal")),
                }
            }
        };
        sched.validate().map_err(|r| err(&r))?;
        Ok(sched)
    }
}

/// Prefix-closed membership test for subtrees of the full binary tree.
pub type TreePredicate = Arc<dyn Fn(VertexId) -> bool + Send + Sync>;

/// The graph families available to `build_gadget`.
#[derive(Clone)]
pub enum GadgetKind {
    CycleChain,
    CycleChainWithRays(u32),
    OneWayMulti,
    Doubled,
    Sigma21Line,
    Pi1Line,
    Delta2TwoEnded,
    LinesWithSticks,
    Comb,
    BinaryTree(TreePredicate),
}

impl fmt::Debug for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::CycleChain => write!(f, "CycleChain"),
            GadgetKind::CycleChainWithRays(k) => write!(f, "CycleChainWithRays({k})"),
            GadgetKind::OneWayMulti => write!(f, "OneWayMulti"),
            GadgetKind::Doubled => write!(f, "Doubled"),
            GadgetKind::Sigma21Line => write!(f, "Sigma21Line"),
            GadgetKind::Pi1Line => write!(f, "Pi1Line"),
            GadgetKind::Delta2TwoEnded => write!(f, "Delta2TwoEnded"),
            GadgetKind::LinesWithSticks => write!(f, "LinesWithSticks"),
            GadgetKind::Comb => write!(f, "Comb"),
            GadgetKind::BinaryTree(_) => write!(f, "BinaryTree"),
        }
    }
}

impl GadgetKind {
    fn expected(&self) -> &'static str {
        match self {
            GadgetKind::CycleChain
            | GadgetKind::CycleChainWithRays(_)
            | GadgetKind::OneWayMulti
            | GadgetKind::Doubled
            | GadgetKind::Comb => "enumeration",
            GadgetKind::Sigma21Line | GadgetKind::Delta2TwoEnded => "limit",
            GadgetKind::Pi1Line | GadgetKind::LinesWithSticks | GadgetKind::BinaryTree(_) => {
                "halting"
            }
        }
    }
}

/// Builds the oracle for `kind` driven by `schedule`.
pub fn build_gadget(
    kind: GadgetKind,
    schedule: Schedule,
) -> Result<Arc<dyn GraphOracle>, GadgetError> {
    let (name, expected) = (format!("{kind:?}"), kind.expected());
    let mismatch = || GadgetError::KindScheduleMismatch {
        kind: name.clone(),
        expected,
        got: schedule.to_string(),
    };
    if schedule.kind_name() != expected {
        return Err(mismatch());
    }
    if let Err(reason) = schedule.validate() {
        return Err(GadgetError::ScheduleParse {
            literal: schedule.to_string(),
            reason,
        });
    }
    Ok(match kind {
        GadgetKind::CycleChain => Arc::new(StageGraph(CycleChain::new(schedule, Weight::Single))),
        GadgetKind::OneWayMulti => {
            Arc::new(StageGraph(CycleChain::new(schedule, Weight::DoubledForward)))
        }
        GadgetKind::Doubled => Arc::new(StageGraph(CycleChain::new(schedule, Weight::DoubledAll))),
        GadgetKind::CycleChainWithRays(k) => {
            if k == 0 {
                return Err(mismatch());
            }
            Arc::new(CycleChainWithRays::new(schedule, k))
        }
        GadgetKind::Sigma21Line => {
            if matches!(&schedule, Schedule::LimitApprox { changes } if changes.len() > 2) {
                return Err(mismatch());
            }
            Arc::new(StageGraph(Sigma21Line(schedule)))
        }
        GadgetKind::Pi1Line => Arc::new(StageGraph(Pi1Line(schedule))),
        GadgetKind::Delta2TwoEnded => Arc::new(StageGraph(Delta2TwoEnded(schedule))),
        GadgetKind::LinesWithSticks => Arc::new(StageGraph(LinesWithSticks(schedule))),
        GadgetKind::Comb => Arc::new(Comb(schedule)),
        GadgetKind::BinaryTree(pred) => {
            if schedule != Schedule::never() {
                return Err(mismatch());
            }
            Arc::new(BinaryTree::new(pred))
        }
    })
}

/// A graph on ℤ (or ℕ) assembled stage by stage.
trait StageLaw: Send + Sync {
    /// Edges created at stage `s`, with repetition for multiplicity.
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>);
    fn contains(&self, v: VertexId) -> bool;
    fn is_multigraph(&self) -> bool;
}

struct StageGraph<L>(L);

impl<L: StageLaw> GraphOracle for StageGraph<L> {
    fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v)
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let a = v.unsigned_abs();
        let mut edges = Vec::new();
        for s in a.saturating_sub(1)..=a {
            self.0.stage(s, &mut edges);
        }
        let mut out: BTreeMap<VertexId, u32> = BTreeMap::new();
        for (x, y) in edges {
            if x == v {
                *out.entry(y).or_default() += 1;
            } else if y == v {
                *out.entry(x).or_default() += 1;
            }
        }
        out.into_iter().collect()
    }

    fn basepoint(&self) -> VertexId {
        0
    }

    fn is_multigraph(&self) -> bool {
        self.0.is_multigraph()
    }
}

fn signed(s: u64) -> VertexId {
    s as VertexId
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Weight {
    Single,
    /// The forward edges `(s, s+1)`, `s ≥ 0`, are doubled.
    DoubledForward,
    /// Every edge is doubled.
    DoubledAll,
}

/// V = ℤ. Stage `s` adds `(s, s+1)`; then `(-s-1, -s)` if nothing is
/// enumerated at `s`, otherwise the two cross edges `(-s, s)` and `(-s-1, s)`.
struct CycleChain {
    schedule: Schedule,
    weight: Weight,
}

impl CycleChain {
    fn new(schedule: Schedule, weight: Weight) -> Self {
        CycleChain { schedule, weight }
    }
}

impl StageLaw for CycleChain {
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>) {
        let p = signed(s);
        let fwd = if self.weight == Weight::Single { 1 } else { 2 };
        let rest = if self.weight == Weight::DoubledAll { 2 } else { 1 };
        for _ in 0..fwd {
            out.push((p, p + 1));
        }
        for _ in 0..rest {
            if self.schedule.is_event(s) {
                out.push((-p, p));
                out.push((-p - 1, p));
            } else {
                out.push((-p - 1, -p));
            }
        }
    }

    fn contains(&self, _v: VertexId) -> bool {
        true
    }

    fn is_multigraph(&self) -> bool {
        self.weight != Weight::Single
    }
}

/// V = ℕ. Edge `(s, s+1)` is doubled while the approximation reads 0.
struct Sigma21Line(Schedule);

impl StageLaw for Sigma21Line {
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>) {
        let p = signed(s);
        let m = if self.0.value(s) == 0 { 2 } else { 1 };
        for _ in 0..m {
            out.push((p, p + 1));
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        v >= 0
    }

    fn is_multigraph(&self) -> bool {
        true
    }
}

/// V = ℕ. Edge `(s, s+1)` is doubled except at the halting step.
struct Pi1Line(Schedule);

impl StageLaw for Pi1Line {
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>) {
        let p = signed(s);
        let halts_here = matches!(self.0, Schedule::Halting { halt_step: Some(h) } if h == s);
        out.push((p, p + 1));
        if !halts_here {
            out.push((p, p + 1));
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        v >= 0
    }

    fn is_multigraph(&self) -> bool {
        true
    }
}

/// V = ℤ, always two ends and all degrees even. With `x(s)` the current
/// approximation:
/// - no change, `x = 0`: `(s,s+1)` and `(-s,-s-1)` twice each;
/// - no change, `x = 1`: the same edges once each;
/// - change to 1: `(-s,s)` twice, `(s,s+1)` and `(s,-s-1)` once;
/// - change to 0: `(-s,s)` once, `(s,s+1)` and `(s,-s-1)` twice.
struct Delta2TwoEnded(Schedule);

impl StageLaw for Delta2TwoEnded {
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>) {
        let p = signed(s);
        let x = self.0.value(s);
        let mut push = |a, b, m| {
            for _ in 0..m {
                out.push((a, b));
            }
        };
        if self.0.changes_at(s) {
            let (cross, rest) = if x == 1 { (2, 1) } else { (1, 2) };
            push(-p, p, cross);
            push(p, p + 1, rest);
            push(p, -p - 1, rest);
        } else {
            let m = if x == 0 { 2 } else { 1 };
            push(p, p + 1, m);
            push(-p, -p - 1, m);
        }
    }

    fn contains(&self, _v: VertexId) -> bool {
        true
    }

    fn is_multigraph(&self) -> bool {
        true
    }
}

/// V = ℤ, a tree. The positive ray is always present. At stage `t` the
/// negative side gets `(-t,-t-1)`, except at the halting step `S`, where
/// `(-S-1, S+1)` replaces it and cuts off the stick `{-S, …, 0}`.
struct LinesWithSticks(Schedule);

impl StageLaw for LinesWithSticks {
    fn stage(&self, s: u64, out: &mut Vec<(VertexId, VertexId)>) {
        let p = signed(s);
        out.push((p, p + 1));
        if matches!(self.0, Schedule::Halting { halt_step: Some(h) } if h == s) {
            out.push((-p - 1, p + 1));
        } else {
            out.push((-p, -p - 1));
        }
    }

    fn contains(&self, _v: VertexId) -> bool {
        true
    }

    fn is_multigraph(&self) -> bool {
        false
    }
}

/// The cycle chain with `k-1` copies of ℕ∖{0} glued at vertex 0.
///
/// Packing: chain vertex `n ∈ ℤ` is `n*k`; vertex `n ≥ 1` of ray `j` is
/// `n*k + j` for `j = 1..k`.
pub struct CycleChainWithRays {
    chain: StageGraph<CycleChain>,
    k: i64,
}

impl CycleChainWithRays {
    fn new(schedule: Schedule, k: u32) -> Self {
        CycleChainWithRays {
            chain: StageGraph(CycleChain::new(schedule, Weight::Single)),
            k: k as i64,
        }
    }

    pub fn chain_vertex(k: u32, n: i64) -> VertexId {
        n * k as i64
    }

    pub fn ray_vertex(k: u32, ray: u32, n: i64) -> VertexId {
        n * k as i64 + ray as i64
    }
}

impl GraphOracle for CycleChainWithRays {
    fn contains(&self, v: VertexId) -> bool {
        let tag = v.rem_euclid(self.k);
        tag == 0 || v.div_euclid(self.k) >= 1
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let k = self.k;
        let (n, tag) = (v.div_euclid(k), v.rem_euclid(k));
        let mut out = Vec::new();
        if tag == 0 {
            out.extend(self.chain.neighbors(n).into_iter().map(|(w, m)| (w * k, m)));
            if n == 0 {
                out.extend((1..k).map(|j| (k + j, 1)));
            }
        } else {
            let prev = if n == 1 { 0 } else { (n - 1) * k + tag };
            out.push((prev, 1));
            out.push(((n + 1) * k + tag, 1));
        }
        out.sort_unstable();
        out
    }

    fn basepoint(&self) -> VertexId {
        0
    }

    fn is_multigraph(&self) -> bool {
        false
    }
}

/// Cantor pairing ℕ² → ℕ; `None` on overflow.
pub fn cantor_pair(x: u64, y: u64) -> Option<u64> {
    let w = x.checked_add(y)?;
    let tri = w.checked_mul(w.checked_add(1)?)? / 2;
    tri.checked_add(y)
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let mut w = ((8u128 * z as u128 + 1).isqrt() as u64 - 1) / 2;
    while (w as u128) * (w as u128 + 1) / 2 > z as u128 {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let y = z - t;
    (w - y, y)
}

/// ℤ → ℕ, `0, -1, 1, -2, …` ↦ `0, 1, 2, 3, …`.
pub fn zigzag(a: i64) -> u64 {
    ((a << 1) ^ (a >> 63)) as u64
}

pub fn unzigzag(z: u64) -> i64 {
    ((z >> 1) as i64) ^ -((z & 1) as i64)
}

/// Packs a pair of signed ids: zigzag each coordinate, then Cantor-pair.
pub fn pack_pair(a: VertexId, b: VertexId) -> Option<VertexId> {
    cantor_pair(zigzag(a), zigzag(b)).and_then(|z| i64::try_from(z).ok())
}

pub fn unpack_pair(v: VertexId) -> Option<(VertexId, VertexId)> {
    if v < 0 {
        return None;
    }
    let (x, y) = cantor_unpair(v as u64);
    Some((unzigzag(x), unzigzag(y)))
}

/// Columns `e ≥ 0` of heights `h(e)` hanging from the spine `(e,0)-(e+1,0)`,
/// where `h(e)` is the `e`-th event stage (never-halting columns are
/// infinite). Vertex `(e,s)` is packed as `cantor_pair(e, s)`.
pub struct Comb(Schedule);

impl Comb {
    fn height(&self, e: u64) -> Option<u64> {
        self.0.nth_event(e)
    }

    pub fn pack(e: u64, s: u64) -> VertexId {
        cantor_pair(e, s).expect("comb coordinates overflow") as VertexId
    }

    pub fn unpack(v: VertexId) -> (u64, u64) {
        cantor_unpair(v as u64)
    }

    fn present(&self, e: u64, s: u64) -> bool {
        self.height(e).is_none_or(|h| s < h)
    }
}

impl GraphOracle for Comb {
    fn contains(&self, v: VertexId) -> bool {
        if v < 0 {
            return false;
        }
        let (e, s) = Comb::unpack(v);
        self.present(e, s)
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let (e, s) = Comb::unpack(v);
        let mut cand = Vec::new();
        if s == 0 {
            if e > 0 {
                cand.push((e - 1, 0));
            }
            cand.push((e + 1, 0));
        } else {
            cand.push((e, s - 1));
        }
        cand.push((e, s + 1));
        let mut out: Vec<(VertexId, u32)> = cand
            .into_iter()
            .filter(|&(a, b)| self.present(a, b))
            .map(|(a, b)| (Comb::pack(a, b), 1))
            .collect();
        out.sort_unstable();
        out
    }

    fn basepoint(&self) -> VertexId {
        0
    }

    fn is_multigraph(&self) -> bool {
        false
    }
}

/// A prefix-closed subtree of the full binary tree in heap numbering: root 1,
/// children `2v` and `2v+1`.
pub struct BinaryTree {
    keep: TreePredicate,
}

impl BinaryTree {
    pub fn new(keep: TreePredicate) -> Self {
        BinaryTree { keep }
    }

    pub fn full() -> Self {
        BinaryTree::new(Arc::new(|_| true))
    }
}

impl GraphOracle for BinaryTree {
    fn contains(&self, v: VertexId) -> bool {
        let mut u = v;
        while u >= 1 {
            if !(self.keep)(u) {
                return false;
            }
            u /= 2;
        }
        v >= 1
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let mut out = Vec::new();
        if v > 1 {
            out.push((v / 2, 1));
        }
        if let Some(c) = v.checked_mul(2) {
            for child in [c, c + 1] {
                if (self.keep)(child) {
                    out.push((child, 1));
                }
            }
        }
        out
    }

    fn basepoint(&self) -> VertexId {
        1
    }

    fn is_multigraph(&self) -> bool {
        false
    }
}

/// The one-ended ray 0 - 1 - 2 - ....
pub struct NatLine;

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

/// The two-ended line on ℤ.
pub struct IntLine;

impl GraphOracle for IntLine {
    fn contains(&self, _v: VertexId) -> bool {
        true
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        vec![(v - 1, 1), (v + 1, 1)]
    }

    fn basepoint(&self) -> VertexId {
        0
    }

    fn is_multigraph(&self) -> bool {
        false
    }
}

/// Cartesian product of two oracles. A vertex `(a, b)` is packed with
/// [`pack_pair`]; the basepoint is the pair of basepoints.
pub struct Product {
    pub left: Arc<dyn GraphOracle>,
    pub right: Arc<dyn GraphOracle>,
}

impl Product {
    pub fn pack(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        pack_pair(a, b)
    }

    pub fn unpack(&self, v: VertexId) -> Option<(VertexId, VertexId)> {
        unpack_pair(v)
    }
}

pub fn product_graph(t1: Arc<dyn GraphOracle>, t2: Arc<dyn GraphOracle>) -> Product {
    Product {
        left: t1,
        right: t2,
    }
}

impl GraphOracle for Product {
    fn contains(&self, v: VertexId) -> bool {
        match unpack_pair(v) {
            Some((a, b)) => {
                pack_pair(a, b) == Some(v) && self.left.contains(a) && self.right.contains(b)
            }
            None => false,
        }
    }

    fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        let Some((a, b)) = unpack_pair(v) else {
            return Vec::new();
        };
        let mut out: BTreeMap<VertexId, u32> = BTreeMap::new();
        for (a2, m) in self.left.neighbors(a) {
            if let Some(w) = pack_pair(a2, b) {
                *out.entry(w).or_default() += m;
            }
        }
        for (b2, m) in self.right.neighbors(b) {
            if let Some(w) = pack_pair(a, b2) {
                *out.entry(w).or_default() += m;
            }
        }
        out.into_iter().collect()
    }

    fn basepoint(&self) -> VertexId {
        pack_pair(self.left.basepoint(), self.right.basepoint()).expect("basepoint packs")
    }

    fn is_multigraph(&self) -> bool {
        self.left.is_multigraph() || self.right.is_multigraph()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("{0} is not a vertex of the product")]
    InvalidVertex(VertexId),
    #[error("distance exceeds the search radius {0}")]
    Unknown(usize),
    #[error("factor sum {formula} disagrees with product BFS {bfs}")]
    Mismatch { formula: usize, bfs: usize },
}

/// `d((u,v),(u',v')) = d(u,u') + d(v,v')`, checked against BFS in the product.
pub fn lambda_distance(
    g: &Product,
    a: VertexId,
    b: VertexId,
    fuel: Fuel,
) -> Result<usize, LambdaError> {
    let r = fuel.max_radius;
    let (u, v) = g
        .unpack(a)
        .filter(|_| g.contains(a))
        .ok_or(LambdaError::InvalidVertex(a))?;
    let (u2, v2) = g
        .unpack(b)
        .filter(|_| g.contains(b))
        .ok_or(LambdaError::InvalidVertex(b))?;
    let du = distance(g.left.as_ref(), u, u2, r).map_err(|_| LambdaError::InvalidVertex(a))?;
    let dv = distance(g.right.as_ref(), v, v2, r).map_err(|_| LambdaError::InvalidVertex(b))?;
    let formula = match (du, dv) {
        (Some(x), Some(y)) => x + y,
        _ => return Err(LambdaError::Unknown(r)),
    };
    let bfs = distance(g, a, b, r)
        .map_err(|_| LambdaError::InvalidVertex(a))?
        .ok_or(LambdaError::Unknown(r))?;
    if bfs != formula {
        return Err(LambdaError::Mismatch { formula, bfs });
    }
    Ok(formula)
}
