//! Exact acceptance by stack-segment summaries.
//!
//! A plain search over configurations cannot bound stack growth, so it gives
//! up on left-recursive automata. Instead we compute, for each state `p`,
//! stack symbol `X` and input position `i`:
//!
//! - `pops(p, X, i)`: the `(q, j)` such that a run starting in `p` with `X`
//!   on top at position `i` first uncovers the symbol below `X` in state `q`
//!   at position `j`;
//! - `reach(p, X, i)`: whether such a run can hit an accept state with the
//!   whole input read before uncovering what lies below `X`.
//!
//! Both are least fixpoints over finitely many keys, created on demand.

use std::collections::{HashMap, HashSet};

use super::{AutomatonError, InputSym, Pda, StackSym, StateId};

/// Default limit on summary keys before giving up with `Undecided`.
pub const DEFAULT_EXPLORATION_CAP: usize = 100_000;

type Key = (StateId, StackSym, usize);

struct Solver<'a> {
    pda: &'a Pda,
    word: &'a [InputSym],
    cap: usize,
    index: HashMap<Key, usize>,
    keys: Vec<Key>,
    pops: Vec<HashSet<(StateId, usize)>>,
    reach: Vec<bool>,
    dependents: Vec<HashSet<usize>>,
    queued: Vec<bool>,
    worklist: Vec<usize>,
}

impl Solver<'_> {
    fn key(&mut self, key: Key) -> Result<usize, AutomatonError> {
        if let Some(&k) = self.index.get(&key) {
            return Ok(k);
        }
        if self.keys.len() >= self.cap {
            return Err(AutomatonError::Undecided {
                explored: self.keys.len(),
            });
        }
        let k = self.keys.len();
        self.index.insert(key, k);
        self.keys.push(key);
        self.pops.push(HashSet::new());
        self.reach.push(false);
        self.dependents.push(HashSet::new());
        self.queued.push(true);
        self.worklist.push(k);
        Ok(k)
    }

    fn evaluate(&mut self, k: usize) -> Result<bool, AutomatonError> {
        let (p, x, i) = self.keys[k];
        let n = self.word.len();
        let mut reach = self.pda.is_accepting(p) && i == n;
        let mut pops: Vec<(StateId, usize)> = Vec::new();

        let moves: Vec<_> = self
            .pda
            .transitions_from(p, x)
            .filter_map(|t| match t.input {
                None => Some((t.to, i, &t.push)),
                Some(a) if i < n && self.word[i] == a => Some((t.to, i + 1, &t.push)),
                Some(_) => None,
            })
            .collect();
        for (to, j, push) in moves {
            let mut frontier: HashSet<(StateId, usize)> = HashSet::from([(to, j)]);
            for &y in push {
                let mut next = HashSet::new();
                for (r, j) in frontier {
                    let kk = self.key((r, y, j))?;
                    self.dependents[kk].insert(k);
                    reach |= self.reach[kk];
                    next.extend(self.pops[kk].iter().copied());
                }
                frontier = next;
                if frontier.is_empty() {
                    break;
                }
            }
            pops.extend(frontier);
        }

        let mut changed = reach && !self.reach[k];
        self.reach[k] |= reach;
        for pair in pops {
            changed |= self.pops[k].insert(pair);
        }
        Ok(changed)
    }

    fn accepted(&self, root: usize) -> bool {
        let n = self.word.len();
        self.reach[root] || self.pops[root].iter().any(|&(q, j)| j == n && self.pda.is_accepting(q))
    }
}

pub(super) fn accepts(pda: &Pda, word: &[InputSym], cap: usize) -> Result<bool, AutomatonError> {
    let mut s = Solver {
        pda,
        word,
        cap,
        index: HashMap::new(),
        keys: Vec::new(),
        pops: Vec::new(),
        reach: Vec::new(),
        dependents: Vec::new(),
        queued: Vec::new(),
        worklist: Vec::new(),
    };
    let root = s.key((pda.start_state(), pda.initial_stack(), 0))?;
    while let Some(k) = s.worklist.pop() {
        s.queued[k] = false;
        if s.evaluate(k)? {
            if s.accepted(root) {
                return Ok(true);
            }
            let waiting: Vec<usize> = s.dependents[k].iter().copied().collect();
            for d in waiting {
                if !s.queued[d] {
                    s.queued[d] = true;
                    s.worklist.push(d);
                }
            }
        }
    }
    Ok(s.accepted(root))
}
