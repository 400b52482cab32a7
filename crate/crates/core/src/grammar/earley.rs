//! Earley recognizer.
//!
//! Works on the grammar as written: no normal form, epsilon productions
//! handled by advancing over nullable nonterminals at prediction time.

use std::collections::HashSet;

use super::{Grammar, SymbolId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    production: usize,
    dot: usize,
    origin: usize,
}

struct Chart {
    sets: Vec<Vec<Item>>,
    seen: Vec<HashSet<Item>>,
}

impl Chart {
    fn add(&mut self, at: usize, item: Item) {
        if self.seen[at].insert(item) {
            self.sets[at].push(item);
        }
    }
}

pub(super) fn recognize(g: &Grammar, word: &[SymbolId]) -> bool {
    let n = word.len();
    let nullable = g.nullable();
    let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); g.symbols().len()];
    for (i, p) in g.productions().iter().enumerate() {
        by_lhs[p.lhs.0].push(i);
    }

    let mut chart = Chart {
        sets: vec![Vec::new(); n + 1],
        seen: vec![HashSet::new(); n + 1],
    };
    for &p in &by_lhs[g.start().0] {
        chart.add(
            0,
            Item {
                production: p,
                dot: 0,
                origin: 0,
            },
        );
    }

    for i in 0..=n {
        let mut k = 0;
        while k < chart.sets[i].len() {
            let item = chart.sets[i][k];
            k += 1;
            let production = &g.productions()[item.production];
            match production.rhs.get(item.dot) {
                Some(&next) if g.is_terminal(next) => {
                    if word.get(i) == Some(&next) {
                        chart.add(
                            i + 1,
                            Item {
                                dot: item.dot + 1,
                                ..item
                            },
                        );
                    }
                }
                Some(&next) => {
                    for &p in &by_lhs[next.0] {
                        chart.add(
                            i,
                            Item {
                                production: p,
                                dot: 0,
                                origin: i,
                            },
                        );
                    }
                    if nullable[next.0] {
                        chart.add(
                            i,
                            Item {
                                dot: item.dot + 1,
                                ..item
                            },
                        );
                    }
                }
                None => {
                    let lhs = production.lhs;
                    let waiting: Vec<Item> = chart.sets[item.origin]
                        .iter()
                        .filter(|w| g.productions()[w.production].rhs.get(w.dot) == Some(&lhs))
                        .copied()
                        .collect();
                    for w in waiting {
                        chart.add(i, Item { dot: w.dot + 1, ..w });
                    }
                }
            }
        }
    }

    chart.sets[n].iter().any(|item| {
        let p = &g.productions()[item.production];
        item.origin == 0 && p.lhs == g.start() && item.dot == p.rhs.len()
    })
}

#[cfg(test)]
mod tests {
    use crate::grammar::parse_grammar;

    #[test]
    fn anbn_membership() {
        let g = parse_grammar("start S\nS -> eps | a S b").unwrap();
        assert!(g.member(&["a", "a", "b", "b"]).unwrap());
        assert!(!g.member(&["a", "a", "b", "b", "b"]).unwrap());
        assert!(g.member::<&str>(&[]).unwrap());
        assert!(!g.member(&["b", "a"]).unwrap());
    }

    #[test]
    fn left_recursion_and_nullable_chains() {
        let g = parse_grammar("start S\nS -> S a | A\nA -> B B\nB -> eps | b").unwrap();
        assert!(g.member::<&str>(&[]).unwrap());
        assert!(g.member(&["a", "a"]).unwrap());
        assert!(g.member(&["b", "b", "a"]).unwrap());
        assert!(!g.member(&["b", "b", "b"]).unwrap());
        assert!(!g.member(&["a", "b"]).unwrap());
    }

    #[test]
    fn openagi_plan_word() {
        let g = parse_grammar(crate::fixtures::OPENAGI_CFG).unwrap();
        assert!(g.member(&["e_1", "a_1", "i", "b_1", "i"]).unwrap());
        assert!(!g.member(&["e_1", "a_1", "i", "b_1"]).unwrap());
        assert!(!g.member(&["a_1", "i"]).unwrap());
    }
}
