//! Plan generation.
//!
//! A [`GenState`] walks an automaton from its start state. At every step the
//! transitions that apply are turned into [`Choice`]s; one option is taken
//! without asking, several go to a [`DecisionOracle`](crate::oracle::DecisionOracle).
//! Each decision is recorded on a trail so that dead ends can be undone, and
//! every tool read from the input becomes a node of the [`PlanTree`], wired to
//! the tool that will consume its output.

mod choice;
mod render;
mod session;
mod tools;
mod tree;

pub use choice::{transition_key, Choice, ChoiceKind};
pub use render::{render_plan, Style};
pub use session::{auto_step_cap, follow_word, init_session, Frame, GenState, Snapshot, StackEntry};
pub use tools::{ToolKind, ToolRegistry, ToolSpec};
pub use tree::{PlanNode, PlanTree, Shape};

use crate::automaton::Pda;
use crate::oracle::OracleError;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlanError {
    #[error("tool `{0}` is not an input symbol of the automaton")]
    UnknownTool(String),
    #[error("step cap must be at least 1")]
    ZeroStepCap,
    #[error("choice {index} is out of range (1..={len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("step cap of {0} reached")]
    StepCapExceeded(usize),
    #[error("the plan is already complete")]
    AlreadyComplete,
    #[error("no valid plan exists within the budgets and step cap")]
    NoValidPlan,
    #[error("oracle failed: {0}")]
    OracleFailure(#[from] OracleError),
    #[error("plan tree is incomplete")]
    IncompleteTree,
    #[error("unknown plan style `{0}` (expected prefix, functional, steps or dump)")]
    UnknownStyle(String),
    #[error("tool registry: {0}")]
    Registry(String),
}

/// Whether `word` is accepted and uses no tool more often than its budget.
/// Unknown symbols and undecided acceptance count as invalid.
pub fn validate_word<S: AsRef<str>>(pda: &Pda, registry: &ToolRegistry, word: &[S]) -> bool {
    let within_budget = registry
        .budgets()
        .iter()
        .all(|(tool, &budget)| word.iter().filter(|w| w.as_ref() == tool).count() <= budget as usize);
    within_budget && pda.accepts(word).unwrap_or(false)
}
