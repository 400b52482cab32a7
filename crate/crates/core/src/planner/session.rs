use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Configuration, Pda, StackSym, StateId};
use crate::grammar::Budgets;
use crate::oracle::{DecisionOracle, PromptContext, Template};

use super::choice::{build_choices, Choice};
use super::tools::{ToolKind, ToolRegistry};
use super::tree::{PlanNode, PlanTree};
use super::PlanError;

/// A stack symbol plus where its eventual value goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackEntry {
    pub symbol: StackSym,
    /// Id of the tree node that resolving this entry creates.
    pub node_id: usize,
    /// Tool node that consumes the result.
    pub parent: Option<usize>,
    pub arg: Option<usize>,
}

/// Everything a decision can change; restored wholesale on backtrack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub state: StateId,
    /// Top of stack at the end.
    pub stack: Vec<StackEntry>,
    pub emitted: Vec<String>,
    pub budgets: Budgets,
    pub tree: PlanTree,
    /// Transition indices taken so far.
    pub path: Vec<usize>,
    pub next_node: usize,
    pub steps_taken: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub frame: Frame,
    pub choices: Vec<Choice>,
    /// Indices into `choices` already explored from this frame.
    pub tried: BTreeSet<usize>,
}

/// Choices left over after a backtrack, still to be offered.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Pending {
    choices: Vec<Choice>,
    tried: BTreeSet<usize>,
}

impl Pending {
    fn live(&self) -> Vec<(usize, &Choice)> {
        self.choices
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.tried.contains(i))
            .collect()
    }
}

type DeadKey = (StateId, Vec<StackSym>, Vec<u32>);

/// One plan generation session over an automaton.
#[derive(Debug, Clone)]
pub struct GenState<'a> {
    pda: &'a Pda,
    registry: &'a ToolRegistry,
    task: String,
    template: Template,
    frame: Frame,
    trail: Vec<Snapshot>,
    pending: Option<Pending>,
    step_cap: usize,
    backtracks: usize,
    oracle_calls: usize,
    /// Frames known to lead nowhere, with the most steps they were given.
    dead: HashMap<DeadKey, usize>,
}

/// `(sum of finite budgets × longest push) + 16`.
pub fn auto_step_cap(pda: &Pda, registry: &ToolRegistry) -> usize {
    let budget: usize = registry.budgets().values().map(|&b| b as usize).sum();
    let longest = pda.transitions().iter().map(|t| t.push.len()).max().unwrap_or(0);
    budget * longest + 16
}

pub fn init_session<'a>(
    pda: &'a Pda,
    registry: &'a ToolRegistry,
    task: &str,
    step_cap: Option<usize>,
) -> Result<GenState<'a>, PlanError> {
    GenState::new(pda, registry, task, step_cap)
}

impl<'a> GenState<'a> {
    pub fn new(
        pda: &'a Pda,
        registry: &'a ToolRegistry,
        task: &str,
        step_cap: Option<usize>,
    ) -> Result<Self, PlanError> {
        for t in &registry.tools {
            if t.budget.is_some() && pda.input_id(&t.terminal).is_none() {
                return Err(PlanError::UnknownTool(t.terminal.clone()));
            }
        }
        let step_cap = match step_cap {
            Some(0) => return Err(PlanError::ZeroStepCap),
            Some(n) => n,
            None => auto_step_cap(pda, registry),
        };
        let frame = Frame {
            state: pda.start_state(),
            stack: vec![StackEntry {
                symbol: pda.initial_stack(),
                node_id: 0,
                parent: None,
                arg: None,
            }],
            emitted: Vec::new(),
            budgets: registry.budgets(),
            tree: PlanTree::default(),
            path: Vec::new(),
            next_node: 1,
            steps_taken: 0,
        };
        Ok(GenState {
            pda,
            registry,
            task: task.to_string(),
            template: registry.template.unwrap_or(Template::OpenAgi),
            frame,
            trail: Vec::new(),
            pending: None,
            step_cap,
            backtracks: 0,
            oracle_calls: 0,
            dead: HashMap::new(),
        })
    }

    pub fn with_template(mut self, template: Template) -> Self {
        self.template = template;
        self
    }

    pub fn pda(&self) -> &Pda {
        self.pda
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn state(&self) -> StateId {
        self.frame.state
    }

    pub fn emitted(&self) -> &[String] {
        &self.frame.emitted
    }

    pub fn budgets_remaining(&self) -> &Budgets {
        &self.frame.budgets
    }

    pub fn tree(&self) -> &PlanTree {
        &self.frame.tree
    }

    pub fn trail(&self) -> &[Snapshot] {
        &self.trail
    }

    pub fn step_cap(&self) -> usize {
        self.step_cap
    }

    pub fn steps_taken(&self) -> usize {
        self.frame.steps_taken
    }

    /// How many times the session has rewound to an earlier decision.
    pub fn backtracks(&self) -> usize {
        self.backtracks
    }

    pub fn oracle_calls(&self) -> usize {
        self.oracle_calls
    }

    /// The current configuration with the stack top first.
    pub fn configuration(&self) -> Configuration {
        Configuration {
            state: self.frame.state,
            stack: self.frame.stack.iter().rev().map(|e| e.symbol).collect(),
            consumed: self.frame.emitted.len(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.pda.is_accepting(self.frame.state)
    }

    /// Transition path taken so far, as state names.
    pub fn state_path(&self) -> Vec<&str> {
        let mut out = vec![self.pda.state_name(self.pda.start_state())];
        for &i in &self.frame.path {
            out.push(self.pda.state_name(self.pda.transitions()[i].to));
        }
        out
    }

    fn fresh_choices(&self) -> Vec<Choice> {
        if self.is_complete() {
            return Vec::new();
        }
        match self.frame.stack.last() {
            Some(top) => build_choices(
                self.pda,
                self.registry,
                &self.frame.budgets,
                self.frame.state,
                top.symbol,
            ),
            None => Vec::new(),
        }
    }

    /// Options available now, in presentation order.
    pub fn feasible_choices(&self) -> Vec<Choice> {
        match &self.pending {
            Some(p) => p.live().into_iter().map(|(_, c)| c.clone()).collect(),
            None => self.fresh_choices(),
        }
    }

    /// Applies the `idx`-th (1-based) feasible choice.
    pub fn apply_choice(&mut self, idx: usize) -> Result<(), PlanError> {
        if self.is_complete() {
            return Err(PlanError::AlreadyComplete);
        }
        let (choices, mut tried) = match self.pending.take() {
            Some(p) => (p.choices, p.tried),
            None => (self.fresh_choices(), BTreeSet::new()),
        };
        let live: Vec<usize> = (0..choices.len()).filter(|i| !tried.contains(i)).collect();
        let restore = |s: &mut Self, choices: Vec<Choice>, tried: BTreeSet<usize>| {
            if !tried.is_empty() {
                s.pending = Some(Pending { choices, tried });
            }
        };
        if idx == 0 || idx > live.len() {
            restore(self, choices, tried);
            return Err(PlanError::IndexOutOfRange {
                index: idx,
                len: live.len(),
            });
        }
        if self.frame.steps_taken >= self.step_cap {
            restore(self, choices, tried);
            return Err(PlanError::StepCapExceeded(self.step_cap));
        }
        let pick = live[idx - 1];
        tried.insert(pick);
        let choice = choices[pick].clone();
        self.trail.push(Snapshot {
            frame: self.frame.clone(),
            choices,
            tried,
        });
        self.perform(&choice);
        Ok(())
    }

    fn perform(&mut self, choice: &Choice) {
        let pda = self.pda;
        let from = self.frame.state;
        let popped = self.frame.stack.pop().expect("choices need a stack top");

        // symbols replacing the popped entry, top first
        let mut pushed: Vec<StackSym> = vec![popped.symbol];
        let mut emitted: Option<&str> = None;
        for &ti in &choice.transitions {
            let t = &pda.transitions()[ti];
            debug_assert_eq!(pushed.first(), Some(&t.pop));
            pushed.splice(0..1, t.push.iter().copied());
            if let Some(input) = t.input {
                emitted = Some(pda.input_name(input));
            }
            self.frame.state = t.to;
            self.frame.path.push(ti);
        }

        let mut entries: Vec<StackEntry> = pushed
            .iter()
            .map(|&symbol| {
                let e = StackEntry {
                    symbol,
                    node_id: self.frame.next_node,
                    parent: popped.parent,
                    arg: popped.arg,
                };
                self.frame.next_node += 1;
                e
            })
            .collect();

        if let Some(terminal) = emitted {
            let tool = self.registry.tool(terminal);
            let declared = match tool {
                Some(t) if t.kind == ToolKind::Input => Some(0),
                Some(t) => t.input_modalities.as_ref().map(Vec::len),
                None => None,
            };
            // the bottom marker is never an argument
            let below = pda.initial_stack();
            let open = entries.iter().take_while(|e| e.symbol != below).count();
            let arity = declared.unwrap_or(open).min(open);
            for (k, e) in entries.iter_mut().take(arity).enumerate() {
                e.parent = Some(popped.node_id);
                e.arg = Some(k);
            }
            let kind = match tool {
                Some(t) => t.kind,
                None if arity > 0 => ToolKind::Tool,
                None => ToolKind::Input,
            };
            self.frame.tree.insert(PlanNode {
                id: popped.node_id,
                terminal: terminal.to_string(),
                kind,
                arity,
                children: Vec::new(),
                parent: popped.parent,
                arg: popped.arg,
                label_key: choice.label_key.clone(),
                from: pda.state_name(from).to_string(),
                to: pda.state_name(self.frame.state).to_string(),
            });
            self.frame.emitted.push(terminal.to_string());
            if let Some(b) = self.frame.budgets.get_mut(terminal) {
                assert!(*b > 0, "budget of `{terminal}` would go negative");
                *b -= 1;
            }
        }

        entries.reverse();
        self.frame.stack.extend(entries);
        self.frame.steps_taken += 1;
        if self.is_complete() {
            self.frame.tree.complete = true;
        }
    }

    fn dead_key(frame: &Frame) -> DeadKey {
        (
            frame.state,
            frame.stack.iter().map(|e| e.symbol).collect(),
            frame.budgets.values().copied().collect(),
        )
    }

    fn mark_dead(&mut self) {
        let left = self.step_cap - self.frame.steps_taken.min(self.step_cap);
        let slot = self.dead.entry(Self::dead_key(&self.frame)).or_insert(0);
        *slot = (*slot).max(left);
    }

    fn known_dead(&self) -> bool {
        let left = self.step_cap - self.frame.steps_taken.min(self.step_cap);
        self.dead.get(&Self::dead_key(&self.frame)).is_some_and(|&l| l >= left)
    }

    /// Rewinds to the latest decision with an untried option.
    pub fn backtrack(&mut self) -> Result<(), PlanError> {
        self.pending = None;
        loop {
            let Some(snap) = self.trail.pop() else {
                return Err(PlanError::NoValidPlan);
            };
            self.frame = snap.frame;
            if snap.tried.len() < snap.choices.len() {
                self.backtracks += 1;
                self.pending = Some(Pending {
                    choices: snap.choices,
                    tried: snap.tried,
                });
                return Ok(());
            }
            // every option from this frame failed
            self.mark_dead();
        }
    }

    /// Runs the session to a finished plan.
    ///
    /// Single options are taken without asking; otherwise the oracle picks.
    /// Dead ends (no options, step cap reached, or a configuration already
    /// known to fail) rewind to the latest decision with untried options.
    pub fn generate(&mut self, oracle: &mut dyn DecisionOracle) -> Result<PlanTree, PlanError> {
        loop {
            if self.is_complete() {
                return Ok(self.frame.tree.clone());
            }
            let choices = self.feasible_choices();
            let capped = self.frame.steps_taken >= self.step_cap;
            if choices.is_empty() || capped || (self.pending.is_none() && self.known_dead()) {
                if self.pending.is_none() {
                    self.mark_dead();
                }
                self.backtrack()?;
                continue;
            }
            let idx = if choices.len() == 1 {
                1
            } else {
                let ctx = self.prompt_context(&choices);
                self.oracle_calls += 1;
                let idx = oracle.decide(&ctx)?;
                if idx == 0 || idx > choices.len() {
                    return Err(PlanError::OracleFailure(crate::oracle::OracleError::OutOfRange {
                        value: idx as u64,
                        n: choices.len(),
                    }));
                }
                idx
            };
            self.apply_choice(idx)?;
        }
    }

    /// What the oracle is told about the pending decision.
    pub fn prompt_context(&self, choices: &[Choice]) -> PromptContext {
        let tree = &self.frame.tree;
        let top = self.frame.stack.last();
        let state_name = self.pda.state_name(self.frame.state);
        let symbol = top.map_or("", |e| self.pda.stack_name(e.symbol));
        let parent = top.and_then(|e| e.parent);
        let describe = |s: &str| self.registry.symbols.get(s).cloned().unwrap_or_else(|| s.to_string());

        let target_item = match self.registry.prompts.get(state_name) {
            Some(q) => q.clone(),
            None => match self.template {
                Template::OpenAgi => match parent {
                    Some(p) => format!(
                        "the input {} of \"{}\"",
                        describe(symbol),
                        self.registry.display_name(&tree.node(p).terminal)
                    ),
                    None => format!("the final {}", describe(symbol)),
                },
                Template::Cooking => describe(symbol),
                Template::Daily | Template::Risk => state_name.to_string(),
            },
        };
        let parent_step = parent.map(|p| format!("\"{}\"", tree.step_text(p, self.registry)));

        let progress_lines = match self.template {
            Template::OpenAgi => {
                let chain: Vec<usize> = match parent {
                    Some(p) => {
                        let mut c = tree.ancestors(p);
                        c.push(p);
                        c
                    }
                    None => Vec::new(),
                };
                let step = |d: usize| {
                    if d == 0 {
                        "Step n".to_string()
                    } else {
                        format!("Step (n-{d})")
                    }
                };
                let mut lines: Vec<String> = chain
                    .iter()
                    .enumerate()
                    .map(|(d, &id)| {
                        format!(
                            "{}: Use {};",
                            step(d),
                            self.registry.display_name(&tree.node(id).terminal)
                        )
                    })
                    .collect();
                lines.push(format!("{}: ?", step(chain.len())));
                lines
            }
            Template::Daily => tree
                .nodes
                .values()
                .map(|n| {
                    let name = self.registry.display_name(&n.terminal);
                    let name = name.strip_suffix('.').unwrap_or(name);
                    match (n.to.parse::<u32>(), n.from.parse::<u32>()) {
                        (Ok(lo), Ok(hi)) => format!("{lo}:00 - {hi}:00 {name}."),
                        _ => format!("{name}."),
                    }
                })
                .collect(),
            Template::Cooking => {
                let mut lines: Vec<String> = Vec::new();
                if let Some(goal) = &self.registry.goal {
                    lines.push(format!("Then, we get {goal}."));
                }
                for n in tree.nodes.values() {
                    let text = match (n.kind, n.parent) {
                        (ToolKind::Input, Some(p)) => {
                            let what = self
                                .registry
                                .tool(&n.terminal)
                                .map_or(n.terminal.as_str(), |t| t.choice_label());
                            format!("Prepare {what} for the step: \"{}\"", tree.step_text(p, self.registry))
                        }
                        _ => tree.step_text(n.id, self.registry),
                    };
                    lines.push(text);
                }
                lines.push("?".to_string());
                lines
                    .into_iter()
                    .enumerate()
                    .map(|(k, l)| {
                        if k == 0 {
                            format!("Step n: {l}")
                        } else {
                            format!("Step n-{k}: {l}")
                        }
                    })
                    .collect()
            }
            Template::Risk => Vec::new(),
        };

        PromptContext {
            task_description: self.task.clone(),
            progress_lines,
            target_item,
            parent_step,
            choices: choices.iter().map(|c| c.label.clone()).collect(),
        }
    }
}

/// Rebuilds the session that emits `word`, by depth-first search over the
/// options whose terminal matches the next symbol.
pub fn follow_word<'a, S: AsRef<str>>(
    pda: &'a Pda,
    registry: &'a ToolRegistry,
    word: &[S],
    step_cap: Option<usize>,
) -> Result<GenState<'a>, PlanError> {
    let cap = step_cap.unwrap_or_else(|| auto_step_cap(pda, registry) + 2 * word.len());
    let mut s = GenState::new(pda, registry, "", Some(cap))?;
    let word: Vec<&str> = word.iter().map(|w| w.as_ref()).collect();
    loop {
        let done = s.frame.emitted.len() == word.len();
        if s.is_complete() && done {
            return Ok(s);
        }
        let next = word.get(s.frame.emitted.len()).copied();
        let pick = if s.is_complete() || s.frame.steps_taken >= s.step_cap {
            None
        } else {
            s.feasible_choices().iter().position(|c| match (&c.terminal, next) {
                (Some(t), Some(n)) => t == n,
                (Some(_), None) => false,
                (None, _) => true,
            })
        };
        match pick {
            Some(i) => s.apply_choice(i + 1)?,
            None => s.backtrack()?,
        }
    }
}
