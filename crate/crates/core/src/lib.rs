//! Constrained plan generation over pushdown automata.
//!
//! Planning constraints are written as a context-free grammar (or directly as
//! a pushdown automaton). The grammar is converted into an automaton, and a
//! decision oracle (an LLM behind a chat endpoint, or a deterministic policy)
//! is asked to pick among the moves the automaton allows at every step. Tool
//! budgets bound how often each tool may appear; when a branch runs into a
//! dead end the session backtracks to the most recent decision that still has
//! untried options. Every plan that comes out is an accepted word of the
//! automaton.
//!
//! ```
//! use stackplan::{cfg_to_pda, parse_grammar};
//!
//! let grammar = parse_grammar("start S\nS -> eps | a S b\n").unwrap();
//! assert!(grammar.member(&["a", "a", "b", "b"]).unwrap());
//!
//! let pda = cfg_to_pda(&grammar);
//! assert!(pda.accepts(&["a", "b"]).unwrap());
//! assert!(!pda.accepts(&["a", "a", "b", "b", "b"]).unwrap());
//! ```
//!
//! The crate is organised by stage:
//!
//! - [`grammar`]: grammars, membership, bounded enumeration.
//! - [`automaton`]: pushdown automata and their text format.
//! - [`conversion`]: grammar to automaton.
//! - [`planner`]: generation sessions, backtracking, plan trees.
//! - [`oracle`]: prompts, reply parsing and the decision oracles.

pub mod automaton;
pub mod conversion;
pub mod fixtures;
pub mod grammar;
pub mod oracle;
pub mod planner;

pub use automaton::{load_pda, AutomatonError, Configuration, Pda, Transition};
pub use conversion::cfg_to_pda;
pub use grammar::{parse_grammar, Budgets, Enumeration, Grammar, GrammarError};
pub use oracle::{build_prompt, parse_reply, DecisionOracle, OracleConfig, OracleError, PromptContext, Template};
pub use planner::{render_plan, validate_word, GenState, PlanError, PlanTree, Style, ToolRegistry, ToolSpec};
