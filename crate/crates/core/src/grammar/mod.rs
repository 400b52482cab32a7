//! Context-free grammars.
//!
//! A [`Grammar`] keeps its productions in source order; that order is what
//! the planner uses to order choices, so nothing here ever reorders or
//! normalises productions. Whether a symbol is a terminal is decided by
//! whether it ever appears on a left-hand side.

mod earley;
mod enumerate;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use enumerate::{count_derivations, enumerate_words, Budgets, EnumerateOptions, Enumeration};
pub use parse::parse_grammar;

/// Index of a symbol inside its grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
}

/// `lhs -> rhs`; an empty `rhs` is an epsilon production.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no start declaration")]
    NoStart,
    #[error("line {line}: duplicate start declaration")]
    DuplicateStart { line: usize },
    #[error("start symbol `{0}` has no productions")]
    StartNotProduced(String),
    #[error("symbol `{0}` is declared both terminal and nonterminal")]
    KindConflict(String),
    #[error("`{0}` is not a valid symbol name")]
    BadSymbol(String),
    #[error("unknown terminal `{0}`")]
    UnknownSymbol(String),
}

/// Characters that would clash with the grammar or automaton file formats.
pub(crate) const RESERVED_CHARS: &[char] = &['(', ')', ',', ';', '|', '#', '~', '*'];

pub(crate) fn valid_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && name != "eps"
        && name != "->"
        && !name.chars().any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    symbols: Vec<Symbol>,
    index: HashMap<String, SymbolId>,
    productions: Vec<Production>,
    start: SymbolId,
}

impl Grammar {
    /// Builds a grammar from named productions, inferring symbol kinds.
    ///
    /// Symbols are numbered by first appearance: the start symbol first, then
    /// left to right through the productions.
    pub fn new<L, R, S>(start: &str, productions: impl IntoIterator<Item = (L, R)>) -> Result<Self, GrammarError>
    where
        L: AsRef<str>,
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let named: Vec<(String, Vec<String>)> = productions
            .into_iter()
            .map(|(lhs, rhs)| {
                (
                    lhs.as_ref().to_string(),
                    rhs.into_iter().map(|s| s.as_ref().to_string()).collect(),
                )
            })
            .collect();
        let lhs_names: std::collections::HashSet<&str> = named.iter().map(|(l, _)| l.as_str()).collect();
        let kinds = named.iter().flat_map(|(l, r)| std::iter::once(l).chain(r)).map(|name| {
            let kind = if lhs_names.contains(name.as_str()) {
                SymbolKind::Nonterminal
            } else {
                SymbolKind::Terminal
            };
            (name.clone(), kind)
        });
        let kinds: Vec<(String, SymbolKind)> = std::iter::once((
            start.to_string(),
            if lhs_names.contains(start) {
                SymbolKind::Nonterminal
            } else {
                SymbolKind::Terminal
            },
        ))
        .chain(kinds)
        .collect();
        Self::with_kinds(start, kinds, named)
    }

    /// Builds a grammar with explicitly declared symbol kinds.
    ///
    /// Fails when a name is declared with both kinds, when a terminal appears
    /// on a left-hand side, or when a production mentions an undeclared name.
    pub fn with_kinds(
        start: &str,
        kinds: impl IntoIterator<Item = (String, SymbolKind)>,
        productions: impl IntoIterator<Item = (String, Vec<String>)>,
    ) -> Result<Self, GrammarError> {
        let mut symbols: Vec<Symbol> = Vec::new();
        let mut index: HashMap<String, SymbolId> = HashMap::new();
        for (name, kind) in kinds {
            if !valid_symbol_name(&name) {
                return Err(GrammarError::BadSymbol(name));
            }
            match index.get(&name) {
                Some(id) if symbols[id.0].kind != kind => return Err(GrammarError::KindConflict(name)),
                Some(_) => {}
                None => {
                    index.insert(name.clone(), SymbolId(symbols.len()));
                    symbols.push(Symbol { name, kind });
                }
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GrammarError::UnknownSymbol(name.to_string()))
        };
        let mut prods = Vec::new();
        for (lhs, rhs) in productions {
            let lhs_id = lookup(&lhs)?;
            if symbols[lhs_id.0].kind != SymbolKind::Nonterminal {
                return Err(GrammarError::KindConflict(lhs));
            }
            let rhs = rhs.iter().map(|s| lookup(s)).collect::<Result<Vec<_>, _>>()?;
            prods.push(Production { lhs: lhs_id, rhs });
        }
        let start_id = lookup(start).map_err(|_| GrammarError::StartNotProduced(start.to_string()))?;
        if !prods.iter().any(|p| p.lhs == start_id) {
            return Err(GrammarError::StartNotProduced(start.to_string()));
        }
        for sym in &symbols {
            if sym.kind == SymbolKind::Nonterminal && !prods.iter().any(|p| symbols[p.lhs.0].name == sym.name) {
                return Err(GrammarError::KindConflict(sym.name.clone()));
            }
        }
        Ok(Grammar {
            symbols,
            index,
            productions: prods,
            start: start_id,
        })
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0].name
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn is_terminal(&self, id: SymbolId) -> bool {
        self.symbols[id.0].kind == SymbolKind::Terminal
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Productions of `lhs` with their source indices, in source order.
    pub fn productions_of(&self, lhs: SymbolId) -> impl Iterator<Item = (usize, &Production)> {
        self.productions.iter().enumerate().filter(move |(_, p)| p.lhs == lhs)
    }

    /// Terminals in order of first appearance.
    pub fn terminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len()).map(SymbolId).filter(|&id| self.is_terminal(id))
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len())
            .map(SymbolId)
            .filter(|&id| !self.is_terminal(id))
    }

    /// Which symbols can derive the empty word.
    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.symbols.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !nullable[p.lhs.0] && p.rhs.iter().all(|s| nullable[s.0]) {
                    nullable[p.lhs.0] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    /// Resolves a word of terminal names to symbol ids.
    pub fn word<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<SymbolId>, GrammarError> {
        word.iter()
            .map(|s| {
                let s = s.as_ref();
                self.lookup(s)
                    .filter(|&id| self.is_terminal(id))
                    .ok_or_else(|| GrammarError::UnknownSymbol(s.to_string()))
            })
            .collect()
    }

    /// Whether `word` is derivable from the start symbol.
    pub fn member<S: AsRef<str>>(&self, word: &[S]) -> Result<bool, GrammarError> {
        let ids = self.word(word)?;
        Ok(earley::recognize(self, &ids))
    }

    /// Renders a production as `A -> x y`, or `A -> eps`.
    pub fn production_text(&self, index: usize) -> String {
        let p = &self.productions[index];
        let rhs = if p.rhs.is_empty() {
            "eps".to_string()
        } else {
            p.rhs.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(" ")
        };
        format!("{} -> {}", self.name(p.lhs), rhs)
    }
}

/// Canonical source form: the start line, then one production per line.
impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.name(self.start))?;
        for i in 0..self.productions.len() {
            writeln!(f, "{}", self.production_text(i))?;
        }
        Ok(())
    }
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grammar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_follow_left_hand_sides() {
        let g = Grammar::new("S", [("S", vec!["a", "S", "b"]), ("S", vec![])]).unwrap();
        assert_eq!(g.symbol(g.start()).kind, SymbolKind::Nonterminal);
        let terms: Vec<&str> = g.terminals().map(|t| g.name(t)).collect();
        assert_eq!(terms, ["a", "b"]);
    }

    #[test]
    fn explicit_kind_conflict_is_rejected() {
        let err = Grammar::with_kinds(
            "S",
            [
                ("S".to_string(), SymbolKind::Nonterminal),
                ("a".to_string(), SymbolKind::Terminal),
                ("a".to_string(), SymbolKind::Nonterminal),
            ],
            [("S".to_string(), vec!["a".to_string()])],
        )
        .unwrap_err();
        assert_eq!(err, GrammarError::KindConflict("a".into()));
    }

    #[test]
    fn terminal_on_left_hand_side_is_rejected() {
        let err = Grammar::with_kinds(
            "S",
            [
                ("S".to_string(), SymbolKind::Nonterminal),
                ("a".to_string(), SymbolKind::Terminal),
            ],
            [("S".to_string(), vec!["a".to_string()]), ("a".to_string(), vec![])],
        )
        .unwrap_err();
        assert_eq!(err, GrammarError::KindConflict("a".into()));
    }

    #[test]
    fn nullable_propagates() {
        let g = Grammar::new(
            "S",
            [("S", vec!["A", "B"]), ("A", vec![]), ("B", vec!["A"]), ("B", vec!["b"])],
        )
        .unwrap();
        assert!(g.nullable().iter().take(3).all(|&n| n));
    }

    #[test]
    fn unknown_word_symbol() {
        let g = parse_grammar("start S\nS -> a").unwrap();
        assert_eq!(g.member(&["x"]), Err(GrammarError::UnknownSymbol("x".into())));
        // nonterminals are not terminal words either
        assert_eq!(g.member(&["S"]), Err(GrammarError::UnknownSymbol("S".into())));
    }
}
