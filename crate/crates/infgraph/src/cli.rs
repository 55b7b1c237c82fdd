//! Command-line front end. Every report starts with `#` lines echoing the
//! resolved inputs, then the result. Exit codes: 0 definite answer,
//! 2 unknown within fuel, 1 usage or input error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automatic::{decide_eulerian_automatic, eval, EulerKind, EvalResult, Formula, Presentation};
use crate::eulerian::{check_one_way, check_two_way, EulerVerdict, LocalizationCertificate, ParityCertificate};
use crate::gadgets::{build_gadget, product_graph, BinaryTree, GadgetKind, IntLine, NatLine, Schedule};
use crate::graph_core::{ball, EdgeRef, EdgeSet, Fuel, GraphOracle, VertexId};
use crate::paths::{decide_extendable, greedy_infinite_path, SimplePath};
use crate::separation::{
    boundary_partition, comp_approx, decide_comp, ends_from_sepmax, minimal_separating_subsets,
    semidecide_not_separating, sepmax_witness_from_ends, shell, Bounded, EndsCertificate, TriBool,
};

#[derive(Parser, Debug)]
#[command(name = "infgraph", version, about = "Separation, ends, paths and Eulerian conditions on infinite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Registry gadget as `kind` or `kind:schedule`, e.g. `delta2:changes@2,5,9`.
    #[arg(long)]
    pub graph: String,
}

#[derive(Args, Debug, Clone)]
pub struct FuelArgs {
    #[arg(long, default_value_t = 64)]
    pub max_radius: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_steps: u64,
}

impl FuelArgs {
    fn fuel(&self) -> Fuel {
        Fuel::new(self.max_radius, self.max_steps)
    }
}

#[derive(Args, Debug, Clone)]
pub struct CertArgs {
    /// Claimed number of ends.
    #[arg(long, default_value_t = 1)]
    pub ends: usize,
    /// Edge set attaining the ends, e.g. `(0,1),(5,6)`, or `auto`.
    #[arg(long, default_value = "")]
    pub witness: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    OneWay,
    TwoWay,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Vertices and edges within a radius.
    Ball {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        center: Option<VertexId>,
    },
    /// Infinite-component count approximation at level n.
    CompApprox {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        edges: String,
        #[arg(long)]
        n: usize,
    },
    /// Exact number of infinite components left by removing the edges.
    DecideComp {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        edges: String,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Boundary vertices grouped by infinite component.
    Boundary {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        edges: String,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Confirms that the edges do not separate, if that is the case.
    SepSemidecide {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        edges: String,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Inclusion-minimal separating subsets of the shell at a radius.
    MinimalSep {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Number of ends, read off the sets attaining the certified count.
    EndsFromSepmax {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// A shell attaining `--ends` infinite components.
    SepmaxWitness {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        ends: usize,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Whether a finite simple path extends to an infinite one.
    PathExtend {
        #[command(flatten)]
        graph: GraphArg,
        /// Vertices, e.g. `0,1,2`.
        #[arg(long)]
        path: String,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Prefix of an infinite simple path, built greedily.
    GreedyPath {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        start: Option<VertexId>,
        #[arg(long)]
        length: usize,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Conditions for a one- or two-way infinite Eulerian path.
    EulerCheck {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        cert: CertArgs,
        #[arg(long)]
        parity_radius: Option<usize>,
        #[arg(long)]
        loc_radius: Option<usize>,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Registry names and the schedules they take.
    GadgetList,
    /// Evaluates a formula on an automatic presentation.
    AutomaticEval {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
    },
    /// Eulerian degree condition on a one-ended automatic graph.
    AutomaticEuler {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Graphviz snapshot of a ball, removed edges dashed.
    DotExport {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const REGISTRY: &[(&str, &str, &str)] = &[
    ("n-line", "-", "the ray 0 - 1 - 2 - ..."),
    ("z-line", "-", "the two-way infinite line"),
    ("cycle-chain", "events", "cycles around 0, cut open at event stages"),
    ("cycle-chain-rays-K", "events", "cycle chain with K-1 extra rays at 0"),
    ("one-way-multi", "events", "doubled forward edges; one odd vertex"),
    ("doubled", "events", "cycle chain with every edge doubled"),
    ("sigma21", "changes", "ray whose odd vertices track mind changes (at most 2)"),
    ("pi1", "halting", "doubled ray, single edge at the halting step"),
    ("delta2", "changes", "two-ended line whose cut parity tracks mind changes"),
    ("lines-with-sticks", "halting", "two rays, joined by a stick at the halting step"),
    ("comb", "events", "spine with columns as tall as the events"),
    ("binary-tree", "never", "the full binary tree"),
    ("lambda", "-", "product of two full binary trees"),
    ("lambda-n", "-", "product of two rays"),
];

#[derive(Debug)]
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Res = Result<(i32, String), Fail>;

fn fixed(name: &str, sched: Option<&str>, g: Arc<dyn GraphOracle>) -> Result<Arc<dyn GraphOracle>, Fail> {
    match sched {
        None | Some("") => Ok(g),
        Some(s) => Err(Fail(format!("{name} takes no schedule, got {s}"))),
    }
}

pub fn resolve_graph(literal: &str) -> Result<Arc<dyn GraphOracle>, String> {
    resolve(literal).map_err(|f| f.0)
}

fn resolve(literal: &str) -> Result<Arc<dyn GraphOracle>, Fail> {
    let (name, sched) = match literal.split_once(':') {
        Some((n, s)) => (n, Some(s)),
        None => (literal, None),
    };
    let full_tree = || -> Arc<dyn GraphOracle> { Arc::new(BinaryTree::full()) };
    match name {
        "n-line" => return fixed(name, sched, Arc::new(NatLine)),
        "z-line" => return fixed(name, sched, Arc::new(IntLine)),
        "lambda" => return fixed(name, sched, Arc::new(product_graph(full_tree(), full_tree()))),
        "lambda-n" => {
            return fixed(name, sched, Arc::new(product_graph(Arc::new(NatLine), Arc::new(NatLine))))
        }
        _ => {}
    }
    let kind = match name {
        "cycle-chain" => GadgetKind::CycleChain,
        "one-way-multi" => GadgetKind::OneWayMulti,
        "doubled" => GadgetKind::Doubled,
        "sigma21" => GadgetKind::Sigma21Line,
        "pi1" => GadgetKind::Pi1Line,
        "delta2" => GadgetKind::Delta2TwoEnded,
        "lines-with-sticks" => GadgetKind::LinesWithSticks,
        "comb" => GadgetKind::Comb,
        "binary-tree" => GadgetKind::BinaryTree(Arc::new(|_| true)),
        n => match n.strip_prefix("cycle-chain-rays-").map(str::parse::<u32>) {
            Some(Ok(k)) if k >= 1 => GadgetKind::CycleChainWithRays(k),
            _ => return Err(Fail(format!("unknown graph {n}; see gadget-list"))),
        },
    };
    let sched = match (sched, &kind) {
        (Some(s), _) => s.parse::<Schedule>()?,
        (None, GadgetKind::BinaryTree(_)) => Schedule::never(),
        (None, _) => return Err(Fail(format!("{name} needs a schedule, as {name}:<schedule>"))),
    };
    Ok(build_gadget(kind, sched)?)
}

/// Parses `(a,b),(c,d,slot)`; the empty string is the empty set.
pub fn parse_edges(text: &str) -> Result<EdgeSet, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = EdgeSet::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| format!("malformed edge list {text:?}"))?;
        let nums: Vec<&str> = inner.0.split(',').collect();
        let parse = |s: &str| s.parse::<i64>().map_err(|_| format!("bad number {s:?} in {text:?}"));
        let e = match nums.as_slice() {
            [a, b] => EdgeRef::new(parse(a)?, parse(b)?, 0),
            [a, b, s] => EdgeRef::new(parse(a)?, parse(b)?, parse(s)? as u32),
            _ => return Err(format!("an edge has two endpoints and an optional slot: {text:?}")),
        };
        out.insert(e);
        rest = inner.1.strip_prefix(',').unwrap_or(inner.1);
    }
    Ok(out)
}

fn parse_path(text: &str) -> Result<Vec<VertexId>, String> {
    text.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| format!("bad vertex {s:?}")))
        .collect()
}

/// Separation test used by `--witness auto`: some approximation level up to
/// the fuel radius still shows two infinite components.
fn bounded_sep(g: &dyn GraphOracle, fuel: Fuel) -> impl Fn(&EdgeSet) -> bool + '_ {
    move |w: &EdgeSet| {
        (0..=fuel.max_radius).all(|n| comp_approx(g, w, n).map(|c| c >= 2).unwrap_or(false))
    }
}

struct Report {
    head: String,
    body: String,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            head: format!("# command: {command}\n"),
            body: String::new(),
        }
    }

    fn input(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.head, "# {key}: {value}").unwrap();
    }

    fn line(&mut self, s: impl std::fmt::Display) {
        writeln!(self.body, "{s}").unwrap();
    }

    fn fuel(&mut self, f: Fuel) {
        self.input("fuel", format!("max_radius={} max_steps={}", f.max_radius, f.max_steps));
    }

    fn done(self, code: i32) -> Res {
        Ok((code, self.head + &self.body))
    }
}

fn certificate(
    g: &dyn GraphOracle,
    c: &CertArgs,
    fuel: Fuel,
    rep: &mut Report,
) -> Result<Option<EndsCertificate>, Fail> {
    rep.input("ends", c.ends);
    let witness = if c.witness.trim() == "auto" {
        match sepmax_witness_from_ends(g, c.ends, &bounded_sep(g, fuel), fuel)? {
            Bounded::Done(w) => w,
            Bounded::Unknown(s) => {
                rep.input("witness", "auto (not found)");
                rep.line(format!("unknown: no witness shell found ({s})"));
                return Ok(None);
            }
        }
    } else {
        parse_edges(&c.witness).map_err(Fail)?
    };
    rep.input("witness", if c.witness.trim() == "auto" { format!("auto = {witness}") } else { witness.to_string() });
    Ok(Some(EndsCertificate::new(c.ends, witness)))
}

fn tri(rep: &mut Report, t: TriBool) -> i32 {
    rep.line(t);
    if matches!(t, TriBool::Unknown(_)) {
        2
    } else {
        0
    }
}

fn execute(cmd: Command) -> Res {
    match cmd {
        Command::Ball { graph, radius, center } => {
            let g = resolve(&graph.graph)?;
            let c = center.unwrap_or_else(|| g.basepoint());
            let mut rep = Report::new("ball");
            rep.input("graph", &graph.graph);
            rep.input("center", c);
            rep.input("radius", radius);
            let b = ball(g.as_ref(), c, radius)?;
            rep.line(format!("vertices: {}", b.num_vertices()));
            rep.line(format!("edges: {}", b.edges.len()));
            for d in 0..=radius {
                let layer: Vec<String> = b.layer(d).iter().map(|v| v.to_string()).collect();
                rep.line(format!("layer {d}: {}", layer.join(" ")));
            }
            rep.line(format!("edge set: {}", b.edge_set()));
            rep.done(0)
        }
        Command::CompApprox { graph, edges, n } => {
            let g = resolve(&graph.graph)?;
            let e = parse_edges(&edges).map_err(Fail)?;
            let mut rep = Report::new("comp-approx");
            rep.input("graph", &graph.graph);
            rep.input("edges", &e);
            rep.input("n", n);
            rep.line(comp_approx(g.as_ref(), &e, n)?);
            rep.done(0)
        }
        Command::DecideComp { graph, edges, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let e = parse_edges(&edges).map_err(Fail)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("decide-comp");
            rep.input("graph", &graph.graph);
            rep.input("edges", &e);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            match decide_comp(g.as_ref(), &e, &c, fuel)? {
                Bounded::Done(k) => {
                    rep.line(k);
                    rep.done(0)
                }
                Bounded::Unknown(s) => {
                    rep.line(format!("unknown ({s})"));
                    rep.done(2)
                }
            }
        }
        Command::Boundary { graph, edges, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let e = parse_edges(&edges).map_err(Fail)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("boundary");
            rep.input("graph", &graph.graph);
            rep.input("edges", &e);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            match boundary_partition(g.as_ref(), &e, &c, fuel)? {
                Bounded::Done(p) => {
                    for (i, grp) in p.infinite_groups.iter().enumerate() {
                        rep.line(format!("infinite {i}: {grp:?}"));
                    }
                    rep.line(format!("finite: {:?}", p.finite_group));
                    rep.done(0)
                }
                Bounded::Unknown(s) => {
                    rep.line(format!("unknown ({s})"));
                    rep.done(2)
                }
            }
        }
        Command::SepSemidecide { graph, edges, fuel } => {
            let g = resolve(&graph.graph)?;
            let e = parse_edges(&edges).map_err(Fail)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("sep-semidecide");
            rep.input("graph", &graph.graph);
            rep.input("edges", &e);
            rep.fuel(fuel);
            let t = semidecide_not_separating(g.as_ref(), &e, fuel)?;
            rep.line(match t {
                TriBool::Yes => "not separating".to_string(),
                other => other.to_string(),
            });
            let code = if t == TriBool::Yes { 0 } else { 2 };
            rep.done(code)
        }
        Command::MinimalSep { graph, radius, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("minimal-sep");
            rep.input("graph", &graph.graph);
            rep.input("radius", radius);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            let sh = shell(g.as_ref(), radius)?;
            rep.input("shell", &sh);
            let unknown = std::cell::Cell::new(false);
            let decider = |w: &EdgeSet| match decide_comp(g.as_ref(), w, &c, fuel) {
                Ok(Bounded::Done(k)) => k >= 2,
                _ => {
                    unknown.set(true);
                    false
                }
            };
            let mins = minimal_separating_subsets(g.as_ref(), &sh, &decider)?;
            for m in &mins {
                rep.line(m);
            }
            if unknown.get() {
                rep.line("unknown: some subsets could not be decided");
                return rep.done(2);
            }
            rep.line(format!("{} minimal separating subsets", mins.len()));
            rep.done(0)
        }
        Command::EndsFromSepmax { graph, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("ends-from-sepmax");
            rep.input("graph", &graph.graph);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            let oracle = |w: &EdgeSet| {
                matches!(decide_comp(g.as_ref(), w, &c, fuel), Ok(Bounded::Done(k)) if k == c.ends)
            };
            match ends_from_sepmax(g.as_ref(), &oracle, fuel)? {
                Bounded::Done(k) => {
                    rep.line(k);
                    rep.done(0)
                }
                Bounded::Unknown(s) => {
                    rep.line(format!("unknown ({s})"));
                    rep.done(2)
                }
            }
        }
        Command::SepmaxWitness { graph, ends, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("sepmax-witness");
            rep.input("graph", &graph.graph);
            rep.input("ends", ends);
            rep.fuel(fuel);
            let sep = bounded_sep(g.as_ref(), fuel);
            let found = sepmax_witness_from_ends(g.as_ref(), ends, &sep, fuel)?;
            match found {
                Bounded::Done(w) => {
                    rep.line(w);
                    rep.done(0)
                }
                Bounded::Unknown(s) => {
                    rep.line(format!("unknown ({s})"));
                    rep.done(2)
                }
            }
        }
        Command::PathExtend { graph, path, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let p = SimplePath::new(g.as_ref(), parse_path(&path).map_err(Fail)?)?;
            let mut rep = Report::new("path-extend");
            rep.input("graph", &graph.graph);
            rep.input("path", &p);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            let t = decide_extendable(g.as_ref(), &p, &c, fuel)?;
            let code = tri(&mut rep, t);
            rep.done(code)
        }
        Command::GreedyPath { graph, start, length, cert, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let s = start.unwrap_or_else(|| g.basepoint());
            let mut rep = Report::new("greedy-path");
            rep.input("graph", &graph.graph);
            rep.input("start", s);
            rep.input("length", length);
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            match greedy_infinite_path(g.as_ref(), s, &c, length, fuel)? {
                Bounded::Done(p) => {
                    rep.line(p);
                    rep.done(0)
                }
                Bounded::Unknown(sp) => {
                    rep.line(format!("unknown ({sp})"));
                    rep.done(2)
                }
            }
        }
        Command::EulerCheck { graph, mode, cert, parity_radius, loc_radius, fuel } => {
            let g = resolve(&graph.graph)?;
            let fuel = fuel.fuel();
            let mut rep = Report::new("euler-check");
            rep.input("graph", &graph.graph);
            rep.input("mode", mode.to_possible_value().unwrap().get_name());
            rep.input("parity-radius", parity_radius.map_or("none".into(), |r| r.to_string()));
            rep.input("loc-radius", loc_radius.map_or("none".into(), |r| r.to_string()));
            rep.fuel(fuel);
            let Some(c) = certificate(g.as_ref(), &cert, fuel, &mut rep)? else {
                return rep.done(2);
            };
            let parity = parity_radius.map(|radius| ParityCertificate { radius });
            let loc = loc_radius.map(|radius| LocalizationCertificate { radius });
            let v = match mode {
                Mode::OneWay => check_one_way(g.as_ref(), &c, parity, fuel)?,
                Mode::TwoWay => check_two_way(g.as_ref(), &c, parity, loc, fuel)?,
            };
            let code = if matches!(v, EulerVerdict::Unknown(_)) { 2 } else { 0 };
            rep.line(v);
            rep.done(code)
        }
        Command::GadgetList => {
            let mut rep = Report::new("gadget-list");
            for (name, sched, what) in REGISTRY {
                rep.line(format!("{name:<20} {sched:<8} {what}"));
            }
            rep.line("schedules: never | halt@S | events@a,b,... | events@a,b+ | events-all | changes@a,b,...");
            rep.done(0)
        }
        Command::AutomaticEval { presentation, formula, formula_file } => {
            let text = std::fs::read_to_string(&presentation)
                .map_err(|e| Fail(format!("{}: {e}", presentation.display())))?;
            let p = Presentation::parse(&text)?;
            p.validate()?;
            let ftext = match (formula, formula_file) {
                (Some(f), _) => f,
                (None, Some(path)) => std::fs::read_to_string(&path)
                    .map_err(|e| Fail(format!("{}: {e}", path.display())))?,
                (None, None) => return Err(Fail("a formula is required".into())),
            };
            let f = Formula::parse(&ftext)?;
            let mut rep = Report::new("automatic-eval");
            rep.input("presentation", presentation.display());
            rep.input("formula", &f);
            match eval(&p, &f)? {
                EvalResult::Truth(b) => rep.line(b),
                EvalResult::Relation { vars, automaton } => {
                    rep.line(format!("free variables: {}", vars.join(" ")));
                    rep.line(format!("states: {}", automaton.dfa.num_states()));
                    rep.line(format!("empty: {}", automaton.is_empty()));
                }
            }
            rep.done(0)
        }
        Command::AutomaticEuler { presentation, mode } => {
            let text = std::fs::read_to_string(&presentation)
                .map_err(|e| Fail(format!("{}: {e}", presentation.display())))?;
            let p = Presentation::parse(&text)?;
            p.validate()?;
            let which = match mode {
                Mode::OneWay => EulerKind::OneWay,
                Mode::TwoWay => EulerKind::TwoWay,
            };
            let mut rep = Report::new("automatic-euler");
            rep.input("presentation", presentation.display());
            rep.input("mode", mode.to_possible_value().unwrap().get_name());
            rep.input("formula", which.formula());
            rep.line(decide_eulerian_automatic(&p, which));
            rep.done(0)
        }
        Command::DotExport { graph, radius, edges, out } => {
            let g = resolve(&graph.graph)?;
            let e = parse_edges(&edges).map_err(Fail)?;
            let b = ball(g.as_ref(), g.basepoint(), radius)?;
            let dot = b.to_dot(&e);
            let mut rep = Report::new("dot-export");
            rep.input("graph", &graph.graph);
            rep.input("radius", radius);
            rep.input("edges", &e);
            match out {
                Some(path) => {
                    std::fs::write(&path, dot).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
                    rep.line(format!("wrote {}", path.display()));
                }
                None => rep.body.push_str(&dot),
            }
            rep.done(0)
        }
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the exit
/// code and the report; on code 1 the report is the error message.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(Fail(msg)) => (1, format!("error: {msg}\n")),
    }
}
