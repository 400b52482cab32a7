//! Pushdown automata.
//!
//! Transitions follow the triplet form `(input, pop; push)`: exactly one
//! stack symbol is popped, and `push` replaces it with the leftmost symbol
//! ending up on top. A finite automaton is the special case with a single
//! stack symbol that every transition pops and pushes back.

mod accept;
mod load;

use std::collections::HashMap;
use std::fmt;

pub use accept::DEFAULT_EXPLORATION_CAP;
pub use load::load_pda;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackSym(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InputSym(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    /// Position in the automaton's transition list.
    pub index: usize,
    pub from: StateId,
    /// `None` is an epsilon move.
    pub input: Option<InputSym>,
    pub pop: StackSym,
    /// Replacement for the popped symbol; `push[0]` becomes the new top.
    pub push: Vec<StackSym>,
    pub to: StateId,
    /// Grammar production this transition expands, when built from one.
    pub production: Option<usize>,
}

/// A snapshot of a run: current state, stack (top first), input consumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackSym>,
    pub consumed: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared state `{name}`")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: undeclared stack symbol `{name}`")]
    UndeclaredStackSymbol { line: usize, name: String },
    #[error("line {line}: undeclared input symbol `{name}`")]
    UndeclaredInput { line: usize, name: String },
    #[error("line {line}: `{name}` declared twice")]
    Duplicate { line: usize, name: String },
    #[error("missing start declaration")]
    MissingStart,
    #[error("missing accept declaration")]
    MissingAccept,
    #[error("line {line}: duplicate start declaration")]
    DuplicateStart { line: usize },
    #[error("unknown input symbol `{0}`")]
    UnknownSymbol(String),
    #[error("acceptance undecided after exploring {explored} configurations")]
    Undecided { explored: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    states: Vec<String>,
    stack_alphabet: Vec<String>,
    inputs: Vec<String>,
    transitions: Vec<Transition>,
    start: StateId,
    initial_stack: StackSym,
    accepting: Vec<bool>,
    /// Transition indices keyed by (state, popped symbol).
    by_top: HashMap<(StateId, StackSym), Vec<usize>>,
}

/// Incremental construction with name interning.
#[derive(Debug, Default)]
pub struct PdaBuilder {
    states: Vec<String>,
    stack_alphabet: Vec<String>,
    inputs: Vec<String>,
    transitions: Vec<Transition>,
    start: Option<(StateId, StackSym)>,
    accepting: Vec<StateId>,
}

fn intern(names: &mut Vec<String>, name: &str) -> usize {
    match names.iter().position(|n| n == name) {
        Some(i) => i,
        None => {
            names.push(name.to_string());
            names.len() - 1
        }
    }
}

impl PdaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, name: &str) -> StateId {
        StateId(intern(&mut self.states, name))
    }

    pub fn stack_symbol(&mut self, name: &str) -> StackSym {
        StackSym(intern(&mut self.stack_alphabet, name))
    }

    pub fn input(&mut self, name: &str) -> InputSym {
        InputSym(intern(&mut self.inputs, name))
    }

    pub fn start(&mut self, state: StateId, initial_stack: StackSym) -> &mut Self {
        self.start = Some((state, initial_stack));
        self
    }

    pub fn accept(&mut self, state: StateId) -> &mut Self {
        if !self.accepting.contains(&state) {
            self.accepting.push(state);
        }
        self
    }

    pub fn transition(
        &mut self,
        from: StateId,
        input: Option<InputSym>,
        pop: StackSym,
        push: Vec<StackSym>,
        to: StateId,
        production: Option<usize>,
    ) -> &mut Self {
        let index = self.transitions.len();
        self.transitions.push(Transition {
            index,
            from,
            input,
            pop,
            push,
            to,
            production,
        });
        self
    }

    pub fn build(self) -> Result<Pda, AutomatonError> {
        let (start, initial_stack) = self.start.ok_or(AutomatonError::MissingStart)?;
        if self.accepting.is_empty() {
            return Err(AutomatonError::MissingAccept);
        }
        let mut accepting = vec![false; self.states.len()];
        for s in &self.accepting {
            accepting[s.0] = true;
        }
        let mut by_top: HashMap<(StateId, StackSym), Vec<usize>> = HashMap::new();
        for t in &self.transitions {
            by_top.entry((t.from, t.pop)).or_default().push(t.index);
        }
        Ok(Pda {
            states: self.states,
            stack_alphabet: self.stack_alphabet,
            inputs: self.inputs,
            transitions: self.transitions,
            start,
            initial_stack,
            accepting,
            by_top,
        })
    }
}

impl Pda {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn stack_alphabet(&self) -> &[String] {
        &self.stack_alphabet
    }

    pub fn input_alphabet(&self) -> &[String] {
        &self.inputs
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn start_state(&self) -> StateId {
        self.start
    }

    pub fn initial_stack(&self) -> StackSym {
        self.initial_stack
    }

    pub fn accept_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| StateId(i))
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state.0]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn stack_name(&self, s: StackSym) -> &str {
        &self.stack_alphabet[s.0]
    }

    pub fn input_name(&self, s: InputSym) -> &str {
        &self.inputs[s.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name).map(StateId)
    }

    pub fn stack_id(&self, name: &str) -> Option<StackSym> {
        self.stack_alphabet.iter().position(|n| n == name).map(StackSym)
    }

    pub fn input_id(&self, name: &str) -> Option<InputSym> {
        self.inputs.iter().position(|n| n == name).map(InputSym)
    }

    /// The configuration before any move.
    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.start,
            stack: vec![self.initial_stack],
            consumed: 0,
        }
    }

    /// Transitions applicable from `state` with `top` on the stack, in order.
    pub fn transitions_from(&self, state: StateId, top: StackSym) -> impl Iterator<Item = &Transition> {
        self.by_top
            .get(&(state, top))
            .into_iter()
            .flatten()
            .map(|&i| &self.transitions[i])
    }

    /// Transitions leaving configuration `c`, ignoring input; empty when
    /// the stack is empty.
    pub fn outgoing(&self, c: &Configuration) -> Vec<&Transition> {
        match c.stack.first() {
            Some(&top) => self.transitions_from(c.state, top).collect(),
            None => Vec::new(),
        }
    }

    /// `(a, Z; S Z)` style rendering, with `ε` for empty input and push.
    pub fn transition_text(&self, t: &Transition) -> String {
        let input = t.input.map_or("ε", |i| self.input_name(i));
        let push = if t.push.is_empty() {
            "ε".to_string()
        } else {
            t.push.iter().map(|&s| self.stack_name(s)).collect::<Vec<_>>().join(" ")
        };
        format!("({input}, {}; {push})", self.stack_name(t.pop))
    }

    /// Resolves a word of input names.
    pub fn word<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<InputSym>, AutomatonError> {
        word.iter()
            .map(|s| {
                self.input_id(s.as_ref())
                    .ok_or_else(|| AutomatonError::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Whether some run consumes all of `word` and ends in an accept state.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Result<bool, AutomatonError> {
        self.accepts_with_cap(word, DEFAULT_EXPLORATION_CAP)
    }

    pub fn accepts_with_cap<S: AsRef<str>>(&self, word: &[S], cap: usize) -> Result<bool, AutomatonError> {
        let ids = self.word(word)?;
        accept::accepts(self, &ids, cap)
    }

    /// Single-stack-symbol automaton whose every move keeps that symbol and
    /// reads input, i.e. a finite automaton.
    pub fn is_stackless(&self) -> bool {
        self.stack_alphabet.len() == 1 && self.transitions.iter().all(|t| t.push == [t.pop] && t.input.is_some())
    }
}

/// Canonical automaton file form.
impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states {}", self.states.join(" "))?;
        writeln!(f, "stack {}", self.stack_alphabet.join(" "))?;
        if self.inputs.is_empty() {
            writeln!(f, "inputs")?;
        } else {
            writeln!(f, "inputs {}", self.inputs.join(" "))?;
        }
        writeln!(
            f,
            "start {} {}",
            self.state_name(self.start),
            self.stack_name(self.initial_stack)
        )?;
        let accept: Vec<&str> = self.accept_states().map(|s| self.state_name(s)).collect();
        writeln!(f, "accept {}", accept.join(" "))?;
        for t in &self.transitions {
            let input = t.input.map_or("~", |i| self.input_name(i));
            let push = if t.push.is_empty() {
                "~".to_string()
            } else {
                t.push.iter().map(|&s| self.stack_name(s)).collect::<Vec<_>>().join(" ")
            };
            writeln!(
                f,
                "{} ( {} , {} ; {} ) {}",
                self.state_name(t.from),
                input,
                self.stack_name(t.pop),
                push,
                self.state_name(t.to)
            )?;
        }
        Ok(())
    }
}
