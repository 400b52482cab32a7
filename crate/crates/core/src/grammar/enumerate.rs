//! Brute-force enumeration of budget-bounded languages.
//!
//! Budgets cap how many times each listed terminal may appear in a word;
//! unlisted terminals are unbounded. The search walks leftmost derivations
//! depth first in production source order, and `max_steps` bounds the number
//! of production expansions along any one derivation.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Grammar, SymbolId};

/// Maximum uses per terminal name. Terminals not in the map are unbounded.
pub type Budgets = BTreeMap<String, u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Expansions allowed along one derivation.
    pub max_steps: usize,
    /// Stop after this many distinct words.
    pub limit: Option<usize>,
    /// Skip derivations whose word would exceed this length.
    pub max_len: Option<usize>,
}

impl EnumerateOptions {
    pub fn new(max_steps: usize) -> Self {
        EnumerateOptions {
            max_steps,
            limit: None,
            max_len: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Distinct words, in the order their first derivation was found.
    pub words: Vec<Vec<String>>,
    /// Some derivation was cut short by the step bound.
    pub truncated: bool,
}

/// All words derivable within `max_steps` expansions under `budgets`.
pub fn enumerate_words(g: &Grammar, budgets: &Budgets, max_steps: usize) -> Enumeration {
    g.enumerate(budgets, EnumerateOptions::new(max_steps))
}

/// Number of leftmost derivations (not distinct words) within the bounds.
/// Equals the word count for unambiguous grammars.
pub fn count_derivations(g: &Grammar, budgets: &Budgets, max_steps: usize) -> u128 {
    let limits = Limits::new(g, budgets);
    let mut counter = Counter {
        g,
        memo: HashMap::new(),
    };
    let mut remaining = limits.initial.clone();
    counter.count(&mut vec![g.start()], &limits, &mut remaining, max_steps)
}

/// Budget slots for the budgeted terminals of a grammar.
struct Limits {
    /// Slot in `initial` for every symbol that has a budget.
    slot: Vec<Option<usize>>,
    initial: Vec<u32>,
}

impl Limits {
    fn new(g: &Grammar, budgets: &Budgets) -> Self {
        let mut slot = vec![None; g.symbols().len()];
        let mut initial = Vec::new();
        for t in g.terminals() {
            if let Some(&b) = budgets.get(g.name(t)) {
                slot[t.0] = Some(initial.len());
                initial.push(b);
            }
        }
        Limits { slot, initial }
    }
}

impl Grammar {
    pub fn enumerate(&self, budgets: &Budgets, options: EnumerateOptions) -> Enumeration {
        let limits = Limits::new(self, budgets);
        let mut e = Enumerator {
            g: self,
            by_lhs: self.by_lhs(),
            min_len: self.min_lengths(),
            limits: &limits,
            options,
            found: Vec::new(),
            seen: HashSet::new(),
            truncated: false,
            stopped: false,
            dead: HashMap::new(),
        };
        let mut remaining = limits.initial.clone();
        e.walk(
            &mut vec![self.start()],
            &mut Vec::new(),
            &mut remaining,
            options.max_steps,
        );
        Enumeration {
            words: e
                .found
                .into_iter()
                .map(|w| w.into_iter().map(|s| self.name(s).to_string()).collect())
                .collect(),
            truncated: e.truncated,
        }
    }

    fn by_lhs(&self) -> Vec<Vec<usize>> {
        let mut by_lhs = vec![Vec::new(); self.symbols().len()];
        for (i, p) in self.productions().iter().enumerate() {
            by_lhs[p.lhs.0].push(i);
        }
        by_lhs
    }

    /// Shortest terminal word each symbol derives, ignoring budgets.
    /// `usize::MAX` marks symbols that derive nothing.
    fn min_lengths(&self) -> Vec<usize> {
        let mut min: Vec<usize> = self
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, _)| if self.is_terminal(SymbolId(i)) { 1 } else { usize::MAX })
            .collect();
        loop {
            let mut changed = false;
            for p in self.productions() {
                let len = p.rhs.iter().try_fold(0usize, |acc, s| match min[s.0] {
                    usize::MAX => None,
                    m => Some(acc + m),
                });
                if let Some(len) = len {
                    if len < min[p.lhs.0] {
                        min[p.lhs.0] = len;
                        changed = true;
                    }
                }
            }
            if !changed {
                return min;
            }
        }
    }
}

/// A search state: pending symbols (top last), budgets left, steps left,
/// length allowance left.
type StateKey = (Vec<SymbolId>, Vec<u32>, usize, usize);

struct Enumerator<'a> {
    g: &'a Grammar,
    by_lhs: Vec<Vec<usize>>,
    min_len: Vec<usize>,
    limits: &'a Limits,
    options: EnumerateOptions,
    found: Vec<Vec<SymbolId>>,
    seen: HashSet<Vec<SymbolId>>,
    truncated: bool,
    stopped: bool,
    /// States known to yield no word, with whether they hit the step bound.
    dead: HashMap<StateKey, bool>,
}

impl Enumerator<'_> {
    /// Returns whether any word (new or duplicate) was produced below.
    fn walk(
        &mut self,
        stack: &mut Vec<SymbolId>,
        word: &mut Vec<SymbolId>,
        remaining: &mut Vec<u32>,
        steps: usize,
    ) -> bool {
        if self.stopped {
            return false;
        }
        let Some(&top) = stack.last() else {
            if self.seen.insert(word.clone()) {
                self.found.push(word.clone());
                if self.options.limit.is_some_and(|l| self.found.len() >= l) {
                    self.stopped = true;
                }
            }
            return true;
        };

        let allowance = match self.options.max_len {
            Some(max) => {
                let need = stack.iter().try_fold(word.len(), |acc, s| match self.min_len[s.0] {
                    usize::MAX => None,
                    m => Some(acc + m),
                });
                match need {
                    Some(need) if need <= max => max - word.len(),
                    _ => return false,
                }
            }
            None if stack.iter().any(|s| self.min_len[s.0] == usize::MAX) => return false,
            None => 0,
        };

        let key: StateKey = (stack.clone(), remaining.clone(), steps, allowance);
        if let Some(&hit_bound) = self.dead.get(&key) {
            self.truncated |= hit_bound;
            return false;
        }
        let truncated_before = self.truncated;
        self.truncated = false;

        let produced = if self.g.is_terminal(top) {
            let slot = self.limits.slot[top.0];
            if slot.is_some_and(|s| remaining[s] == 0) {
                false
            } else {
                if let Some(s) = slot {
                    remaining[s] -= 1;
                }
                stack.pop();
                word.push(top);
                let produced = self.walk(stack, word, remaining, steps);
                word.pop();
                stack.push(top);
                if let Some(s) = slot {
                    remaining[s] += 1;
                }
                produced
            }
        } else if steps == 0 {
            self.truncated = true;
            false
        } else {
            stack.pop();
            let mut produced = false;
            for i in 0..self.by_lhs[top.0].len() {
                let p = self.by_lhs[top.0][i];
                let rhs = &self.g.productions()[p].rhs;
                let depth = stack.len();
                stack.extend(rhs.iter().rev());
                produced |= self.walk(stack, word, remaining, steps - 1);
                stack.truncate(depth);
                if self.stopped {
                    break;
                }
            }
            stack.push(top);
            produced
        };

        if !produced && !self.stopped {
            self.dead.insert(key, self.truncated);
        }
        self.truncated |= truncated_before;
        produced
    }
}

struct Counter<'a> {
    g: &'a Grammar,
    memo: HashMap<(Vec<SymbolId>, Vec<u32>, usize), u128>,
}

impl Counter<'_> {
    fn count(&mut self, stack: &mut Vec<SymbolId>, limits: &Limits, remaining: &mut Vec<u32>, steps: usize) -> u128 {
        let Some(&top) = stack.last() else {
            return 1;
        };
        let key = (stack.clone(), remaining.clone(), steps);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        stack.pop();
        let total = if self.g.is_terminal(top) {
            match limits.slot[top.0] {
                Some(s) if remaining[s] == 0 => 0,
                Some(s) => {
                    remaining[s] -= 1;
                    let n = self.count(stack, limits, remaining, steps);
                    remaining[s] += 1;
                    n
                }
                None => self.count(stack, limits, remaining, steps),
            }
        } else if steps == 0 {
            0
        } else {
            let mut total = 0;
            for (_, p) in self.g.productions_of(top) {
                let depth = stack.len();
                stack.extend(p.rhs.iter().rev());
                total += self.count(stack, limits, remaining, steps - 1);
                stack.truncate(depth);
            }
            total
        };
        stack.push(top);
        self.memo.insert(key, total);
        total
    }
}
