//! Line-oriented grammar source format.
//!
//! ```text
//! # comment
//! start S
//! S -> eps | a S b
//! ```

use super::{valid_symbol_name, Grammar, GrammarError};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(text: &str, offset: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((offset + s + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((offset + s + 1, &text[s..]));
    }
    out.into_iter()
}

pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut start: Option<String> = None;
    let mut productions: Vec<(String, Vec<String>)> = Vec::new();

    for (n, raw) in text.split('\n').enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }

        let Some(arrow) = line.find("->") else {
            let toks: Vec<_> = tokens(line, 0).collect();
            if toks[0].1 != "start" {
                return Err(syntax(line_no, toks[0].0, "expected `start <symbol>` or a production"));
            }
            if start.is_some() {
                return Err(GrammarError::DuplicateStart { line: line_no });
            }
            if !productions.is_empty() {
                return Err(syntax(
                    line_no,
                    toks[0].0,
                    "start must be declared before any production",
                ));
            }
            match toks.as_slice() {
                [_, (col, sym)] => {
                    if !valid_symbol_name(sym) {
                        return Err(syntax(line_no, *col, format!("invalid symbol `{sym}`")));
                    }
                    start = Some(sym.to_string());
                }
                [(col, _)] => return Err(syntax(line_no, col + 5, "missing start symbol")),
                [_, _, (col, _), ..] => return Err(syntax(line_no, *col, "start takes exactly one symbol")),
                [] => unreachable!(),
            }
            continue;
        };

        if start.is_none() {
            return Err(GrammarError::NoStart);
        }
        let lhs: Vec<_> = tokens(&line[..arrow], 0).collect();
        let lhs = match lhs.as_slice() {
            [(_, sym)] if valid_symbol_name(sym) => sym.to_string(),
            [(col, sym)] => return Err(syntax(line_no, *col, format!("invalid symbol `{sym}`"))),
            [] => return Err(syntax(line_no, 1, "missing left-hand side")),
            [_, (col, _), ..] => return Err(syntax(line_no, *col, "left-hand side must be a single symbol")),
        };

        let mut offset = arrow + 2;
        for alt in line[arrow + 2..].split('|') {
            let toks: Vec<_> = tokens(alt, offset).collect();
            let alt_col = offset + 1;
            offset += alt.len() + 1;
            let rhs = match toks.as_slice() {
                [] => return Err(syntax(line_no, alt_col, "empty alternative (write `eps`)")),
                [(_, "eps")] => Vec::new(),
                _ => {
                    let mut rhs = Vec::with_capacity(toks.len());
                    for (col, sym) in toks {
                        if sym == "eps" {
                            return Err(syntax(line_no, col, "`eps` must stand alone"));
                        }
                        if !valid_symbol_name(sym) {
                            return Err(syntax(line_no, col, format!("invalid symbol `{sym}`")));
                        }
                        rhs.push(sym.to_string());
                    }
                    rhs
                }
            };
            productions.push((lhs.clone(), rhs));
        }
    }

    let start = start.ok_or(GrammarError::NoStart)?;
    Grammar::new(&start, productions)
}
