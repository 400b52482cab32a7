//! Automaton source format.
//!
//! ```text
//! states q0 q1 q2
//! stack Z S
//! inputs a b
//! start q0 Z
//! accept q2
//! q0 ( a , Z ; S Z ) q0
//! q1 ( ~ , Z ; Z ) q2
//! ```
//!
//! `~` stands for an epsilon input or an empty push. A `*` in pop position
//! expands into one transition per declared stack symbol, with every `*` in
//! the push replaced by that same symbol.

use super::{AutomatonError, Pda, PdaBuilder, StackSym};
use crate::grammar::valid_symbol_name;

fn syntax(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Syntax {
        line,
        message: message.into(),
    }
}

struct Decls {
    states: Vec<String>,
    stack: Vec<String>,
    inputs: Vec<String>,
    start: Option<(usize, String, String)>,
    accept: Vec<(usize, String)>,
}

struct RawTransition<'a> {
    line: usize,
    from: &'a str,
    input: &'a str,
    pop: &'a str,
    push: Vec<&'a str>,
    to: &'a str,
}

fn declare(list: &mut Vec<String>, names: &[&str], line: usize) -> Result<(), AutomatonError> {
    for &name in names {
        if !valid_symbol_name(name) {
            return Err(syntax(line, format!("invalid name `{name}`")));
        }
        if list.iter().any(|n| n == name) {
            return Err(AutomatonError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        list.push(name.to_string());
    }
    Ok(())
}

fn parse_transition(line: usize, text: &str) -> Result<RawTransition<'_>, AutomatonError> {
    let open = text.find('(').ok_or_else(|| syntax(line, "expected `(`"))?;
    let close = text.rfind(')').ok_or_else(|| syntax(line, "expected `)`"))?;
    if close < open {
        return Err(syntax(line, "`)` before `(`"));
    }
    let from = one_token(line, &text[..open], "source state")?;
    let to = one_token(line, &text[close + 1..], "target state")?;
    let inner = &text[open + 1..close];
    let (input, rest) = inner
        .split_once(',')
        .ok_or_else(|| syntax(line, "expected `,` after input"))?;
    let (pop, push) = rest
        .split_once(';')
        .ok_or_else(|| syntax(line, "expected `;` after pop symbol"))?;
    let input = one_token(line, input, "input symbol")?;
    let pop = one_token(line, pop, "pop symbol")?;
    let push: Vec<&str> = push.split_whitespace().collect();
    let push = match push.as_slice() {
        [] => return Err(syntax(line, "empty push (write `~`)")),
        ["~"] => Vec::new(),
        _ if push.contains(&"~") => return Err(syntax(line, "`~` must stand alone in push")),
        _ => push,
    };
    Ok(RawTransition {
        line,
        from,
        input,
        pop,
        push,
        to,
    })
}

fn one_token<'a>(line: usize, text: &'a str, what: &str) -> Result<&'a str, AutomatonError> {
    let mut toks = text.split_whitespace();
    match (toks.next(), toks.next()) {
        (Some(t), None) => Ok(t),
        (None, _) => Err(syntax(line, format!("missing {what}"))),
        (Some(_), Some(_)) => Err(syntax(line, format!("{what} must be a single token"))),
    }
}

pub fn load_pda(text: &str) -> Result<Pda, AutomatonError> {
    let mut decls = Decls {
        states: Vec::new(),
        stack: Vec::new(),
        inputs: Vec::new(),
        start: None,
        accept: Vec::new(),
    };
    let mut raw = Vec::new();

    for (n, line) in text.split('\n').enumerate() {
        let line_no = n + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let line = line.split_once('#').map_or(line, |(l, _)| l);
        if line.trim().is_empty() {
            continue;
        }
        if line.contains('(') || line.contains(')') {
            raw.push(parse_transition(line_no, line)?);
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "states" => declare(&mut decls.states, &toks[1..], line_no)?,
            "stack" => declare(&mut decls.stack, &toks[1..], line_no)?,
            "inputs" => declare(&mut decls.inputs, &toks[1..], line_no)?,
            "start" => {
                if decls.start.is_some() {
                    return Err(AutomatonError::DuplicateStart { line: line_no });
                }
                match toks.as_slice() {
                    [_, q, z] => decls.start = Some((line_no, q.to_string(), z.to_string())),
                    _ => return Err(syntax(line_no, "expected `start <state> <stack symbol>`")),
                }
            }
            "accept" => {
                if toks.len() < 2 {
                    return Err(syntax(line_no, "expected at least one accept state"));
                }
                decls.accept.extend(toks[1..].iter().map(|q| (line_no, q.to_string())));
            }
            other => return Err(syntax(line_no, format!("unknown declaration `{other}`"))),
        }
    }

    let mut b = PdaBuilder::new();
    for s in &decls.states {
        b.state(s);
    }
    for s in &decls.stack {
        b.stack_symbol(s);
    }
    for s in &decls.inputs {
        b.input(s);
    }

    let state = |line: usize, name: &str| {
        decls
            .states
            .iter()
            .position(|s| s == name)
            .map(super::StateId)
            .ok_or_else(|| AutomatonError::UndeclaredState {
                line,
                name: name.to_string(),
            })
    };
    let stack =
        |line: usize, name: &str| {
            decls.stack.iter().position(|s| s == name).map(StackSym).ok_or_else(|| {
                AutomatonError::UndeclaredStackSymbol {
                    line,
                    name: name.to_string(),
                }
            })
        };

    let (line, q, z) = decls.start.clone().ok_or(AutomatonError::MissingStart)?;
    b.start(state(line, &q)?, stack(line, &z)?);
    if decls.accept.is_empty() {
        return Err(AutomatonError::MissingAccept);
    }
    for (line, q) in &decls.accept {
        b.accept(state(*line, q)?);
    }

    for t in raw {
        let from = state(t.line, t.from)?;
        let to = state(t.line, t.to)?;
        let input = match t.input {
            "~" => None,
            name => Some(
                decls
                    .inputs
                    .iter()
                    .position(|s| s == name)
                    .map(super::InputSym)
                    .ok_or_else(|| AutomatonError::UndeclaredInput {
                        line: t.line,
                        name: name.to_string(),
                    })?,
            ),
        };
        let pops: Vec<StackSym> = match t.pop {
            "*" => (0..decls.stack.len()).map(StackSym).collect(),
            name => vec![stack(t.line, name)?],
        };
        for pop in pops {
            let push = t
                .push
                .iter()
                .map(|&s| match s {
                    "*" if t.pop == "*" => Ok(pop),
                    "*" => Err(syntax(t.line, "`*` in push needs `*` in pop")),
                    name => stack(t.line, name),
                })
                .collect::<Result<Vec<_>, _>>()?;
            b.transition(from, input, pop, push, to, None);
        }
    }
    b.build()
}
