//! Turning automaton transitions into the options offered to an oracle.
//!
//! Expanding a tool category and then reading one of its tools is presented
//! as a single option naming the tool, rather than two separate decisions.

use crate::automaton::{Pda, StackSym, StateId, Transition};
use crate::grammar::Budgets;

use super::tools::ToolRegistry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChoiceKind {
    /// An epsilon move that emits nothing, e.g. a production whose
    /// right-hand side does not start with a tool category.
    Expand { production: Option<usize> },
    /// A move reading a terminal directly.
    Consume,
    /// An expansion followed by reading the tool it leads to.
    Fused { production: Option<usize> },
    /// An epsilon move into an accept state.
    Accept,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Choice {
    pub label: String,
    pub kind: ChoiceKind,
    pub terminal: Option<String>,
    /// Transition indices applied in order.
    pub transitions: Vec<usize>,
    /// Registry label key for the node this choice creates.
    pub(super) label_key: Option<String>,
}

/// `"X -> β"` for a transition, with `eps` for an empty push.
pub fn transition_key(pda: &Pda, t: &Transition) -> String {
    let push = if t.push.is_empty() {
        "eps".to_string()
    } else {
        t.push.iter().map(|&s| pda.stack_name(s)).collect::<Vec<_>>().join(" ")
    };
    format!("{} -> {}", pda.stack_name(t.pop), push)
}

/// Ways to get rid of `x` in `state` by reading exactly one terminal: either
/// reading it directly, or rewriting it to a single symbol that can only be
/// read. `None` when some transition on `x` does something else.
fn emitters(pda: &Pda, state: StateId, x: StackSym) -> Option<Vec<Vec<&Transition>>> {
    let mut out = Vec::new();
    for u in pda.transitions_from(state, x) {
        if u.input.is_some() {
            out.push(vec![u]);
            continue;
        }
        let [y] = u.push[..] else { return None };
        let reads: Vec<&Transition> = pda.transitions_from(u.to, y).collect();
        if reads.is_empty() || reads.iter().any(|r| r.input.is_none()) {
            return None;
        }
        out.extend(reads.into_iter().map(|r| vec![u, r]));
    }
    (!out.is_empty()).then_some(out)
}

/// All options at `state` with `top` on the stack, before removing tried ones.
pub(super) fn build_choices(
    pda: &Pda,
    registry: &ToolRegistry,
    budgets: &Budgets,
    state: StateId,
    top: StackSym,
) -> Vec<Choice> {
    let in_budget = |terminal: &str| budgets.get(terminal).is_none_or(|&b| b > 0);
    let lookup = |key: &str| registry.labels.get(key).map(|l| (key.to_string(), l.clone()));
    let terminal_label = |terminal: &str, keys: &[String]| -> (Option<String>, String) {
        if let Some((key, label)) = keys.iter().find_map(|k| lookup(k)) {
            return (Some(key), label);
        }
        let label = registry
            .tool(terminal)
            .map_or(terminal, |t| t.choice_label())
            .to_string();
        (None, label)
    };

    let mut choices = Vec::new();
    for t in pda.transitions_from(state, top) {
        let first_key = transition_key(pda, t);
        if let Some(input) = t.input {
            let terminal = pda.input_name(input);
            if in_budget(terminal) {
                let (label_key, label) = terminal_label(terminal, &[first_key]);
                choices.push(Choice {
                    label,
                    kind: ChoiceKind::Consume,
                    terminal: Some(terminal.to_string()),
                    transitions: vec![t.index],
                    label_key,
                });
            }
            continue;
        }
        if pda.is_accepting(t.to) {
            choices.push(Choice {
                label: registry
                    .labels
                    .get(&first_key)
                    .cloned()
                    .unwrap_or_else(|| "Finish the plan.".to_string()),
                kind: ChoiceKind::Accept,
                terminal: None,
                transitions: vec![t.index],
                label_key: None,
            });
            continue;
        }
        let fused = match t.push.first() {
            Some(&x) if x != t.pop => emitters(pda, t.to, x),
            _ => None,
        };
        match fused {
            Some(paths) => {
                for path in paths {
                    let read = path.last().expect("paths are nonempty");
                    let terminal = pda.input_name(read.input.expect("paths end with a read"));
                    if !in_budget(terminal) {
                        continue;
                    }
                    let keys = match path[..] {
                        [category, _] => vec![transition_key(pda, category), first_key.clone()],
                        _ => vec![first_key.clone()],
                    };
                    let (label_key, label) = terminal_label(terminal, &keys);
                    choices.push(Choice {
                        label,
                        kind: ChoiceKind::Fused {
                            production: t.production,
                        },
                        terminal: Some(terminal.to_string()),
                        transitions: std::iter::once(t.index).chain(path.iter().map(|p| p.index)).collect(),
                        label_key,
                    });
                }
            }
            None => {
                let label = registry
                    .labels
                    .get(&first_key)
                    .cloned()
                    .unwrap_or_else(|| first_key.clone());
                choices.push(Choice {
                    label,
                    kind: ChoiceKind::Expand {
                        production: t.production,
                    },
                    terminal: None,
                    transitions: vec![t.index],
                    label_key: lookup(&first_key).map(|(k, _)| k),
                });
            }
        }
    }
    disambiguate(&mut choices);
    choices
}

/// Makes labels distinct by suffixing the terminal (or the transition) to
/// every member of a clash, then a counter if that is not enough.
fn disambiguate(choices: &mut [Choice]) {
    let clashes = |choices: &[Choice], i: usize| {
        choices
            .iter()
            .enumerate()
            .any(|(j, c)| j != i && c.label == choices[i].label)
    };
    let clashing: Vec<usize> = (0..choices.len()).filter(|&i| clashes(choices, i)).collect();
    for &i in &clashing {
        let tag = match &choices[i].terminal {
            Some(t) => t.clone(),
            None => format!("transition {}", choices[i].transitions[0]),
        };
        choices[i].label = format!("{} ({tag})", choices[i].label);
    }
    for i in 0..choices.len() {
        let mut n = 2;
        let base = choices[i].label.clone();
        while choices[..i].iter().any(|c| c.label == choices[i].label) {
            choices[i].label = format!("{base} #{n}");
            n += 1;
        }
    }
}
