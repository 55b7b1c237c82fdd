//! Automatic presentations and first-order model checking with counting
//! quantifiers over synchronous regular relations.

pub mod dfa;
pub mod eval;
pub mod formula;
pub mod presentation;
pub mod relation;
pub mod semiring;

use thiserror::Error;

pub use dfa::Dfa;
pub use eval::{decide_eulerian_automatic, eval, eval_sentence, normalize, EulerKind, EvalResult};
pub use formula::{Formula, Quantifier};
pub use presentation::{grid, nat_line, Presentation};
pub use relation::RelationAutomaton;
pub use semiring::{Count, CountMode, CountSemiring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutoError {
    #[error("automaton has {got} letters, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("formula: {0}")]
    FormulaParse(String),
    #[error("presentation line {line}: {msg}")]
    PresentationParse { line: usize, msg: String },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}
