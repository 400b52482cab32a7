use std::fmt;
use std::str::FromStr;

use super::tools::{ToolKind, ToolRegistry};
use super::tree::PlanTree;
use super::PlanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// `e_1 a_1 i b_1 i`
    #[default]
    Prefix,
    /// `e_1(a_1(i), b_1(i))`
    Functional,
    /// Numbered natural-language steps, inputs before the tools using them.
    Steps,
    /// One `id<TAB>terminal<TAB>parent<TAB>arg` record per node.
    Dump,
}

impl FromStr for Style {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(Style::Prefix),
            "functional" => Ok(Style::Functional),
            "steps" => Ok(Style::Steps),
            "dump" => Ok(Style::Dump),
            other => Err(PlanError::UnknownStyle(other.to_string())),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Prefix => "prefix",
            Style::Functional => "functional",
            Style::Steps => "steps",
            Style::Dump => "dump",
        })
    }
}

pub fn render_plan(tree: &PlanTree, registry: &ToolRegistry, style: Style) -> Result<String, PlanError> {
    if !tree.complete || !tree.is_saturated() {
        return Err(PlanError::IncompleteTree);
    }
    Ok(match style {
        Style::Prefix => tree.preorder().join(" "),
        Style::Functional => {
            fn call(t: &PlanTree, id: usize) -> String {
                let n = t.node(id);
                if n.children.is_empty() {
                    return n.terminal.clone();
                }
                let args: Vec<String> = n.children.iter().map(|&c| call(t, c)).collect();
                format!("{}({})", n.terminal, args.join(", "))
            }
            tree.roots.iter().map(|&r| call(tree, r)).collect::<Vec<_>>().join("; ")
        }
        Style::Steps => steps(tree, registry),
        Style::Dump => tree
            .nodes
            .values()
            .map(|n| {
                let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
                format!("{}\t{}\t{}\t{}", n.id, n.terminal, opt(n.parent), opt(n.arg))
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn steps(tree: &PlanTree, registry: &ToolRegistry) -> String {
    let mut roots = tree.roots.clone();
    if registry.reverse {
        roots.reverse();
    }
    let order = tree.postorder(&roots);
    if !tree.is_empty() && order.iter().all(|&id| tree.node(id).kind == ToolKind::Input) {
        return "Step 1: use the task input.".to_string();
    }

    let mut numbers = std::collections::HashMap::new();
    let mut lines = Vec::new();
    for id in order {
        let n = tree.node(id);
        if n.kind != ToolKind::Tool {
            continue;
        }
        let k = lines.len() + 1;
        numbers.insert(id, k);
        let name = registry.display_name(&n.terminal);
        let labelled = n.label_key.as_ref().and_then(|key| registry.labels.get(key));
        let line = if let Some(label) = labelled {
            format!("Step {k}: {label}")
        } else if registry.clock {
            let name = name.strip_suffix('.').unwrap_or(name);
            match (n.to.parse::<u32>(), n.from.parse::<u32>()) {
                (Ok(lo), Ok(hi)) => format!("{lo}:00 - {hi}:00 {name}."),
                _ => format!("Step {k}: {name}."),
            }
        } else if !n.children.is_empty() {
            let inputs: Vec<String> = n
                .children
                .iter()
                .map(|c| match numbers.get(c) {
                    Some(j) => format!("the output of Step {j}"),
                    None => registry.display_name(&tree.node(*c).terminal).to_string(),
                })
                .collect();
            format!("Step {k}: Use {name} on {}.", inputs.join(" and "))
        } else {
            let name = name.strip_suffix('.').unwrap_or(name);
            format!("Step {k}: {name}.")
        };
        lines.push(line);
    }
    lines.join("\n")
}
