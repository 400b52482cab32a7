use std::collections::BTreeMap;

use super::tools::{ToolKind, ToolRegistry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanNode {
    pub id: usize,
    pub terminal: String,
    pub kind: ToolKind,
    /// Number of input slots wired to this node.
    pub arity: usize,
    /// Children in argument order.
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub arg: Option<usize>,
    /// Label key (`"X -> β"`) of the transition that produced the node, if
    /// the registry has a label for it.
    pub label_key: Option<String>,
    /// States before and after the choice that produced the node.
    pub from: String,
    pub to: String,
}

/// The plan as a forest of tool applications.
///
/// Most grammars yield a single root. Automata whose transitions pass the
/// stack symbol through (schedules, flowcharts) yield a chain of roots, one
/// per step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlanTree {
    pub nodes: BTreeMap<usize, PlanNode>,
    pub roots: Vec<usize>,
    pub complete: bool,
}

impl PlanTree {
    /// The single root, when there is exactly one.
    pub fn root(&self) -> Option<&PlanNode> {
        match self.roots.as_slice() {
            [r] => self.nodes.get(r),
            _ => None,
        }
    }

    pub fn node(&self, id: usize) -> &PlanNode {
        &self.nodes[&id]
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(super) fn insert(&mut self, node: PlanNode) {
        match node.parent {
            Some(p) => self.nodes.get_mut(&p).expect("parent exists").children.push(node.id),
            None => self.roots.push(node.id),
        }
        self.nodes.insert(node.id, node);
    }

    /// Node terminals in preorder; for a finished session this is the
    /// emitted word.
    pub fn preorder(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut todo: Vec<usize> = self.roots.iter().rev().copied().collect();
        while let Some(id) = todo.pop() {
            let n = &self.nodes[&id];
            out.push(n.terminal.as_str());
            todo.extend(n.children.iter().rev());
        }
        out
    }

    /// Post-order node ids, roots taken in the given order.
    pub(super) fn postorder(&self, roots: &[usize]) -> Vec<usize> {
        fn visit(t: &PlanTree, id: usize, out: &mut Vec<usize>) {
            for &c in &t.nodes[&id].children {
                visit(t, c, out);
            }
            out.push(id);
        }
        let mut out = Vec::new();
        for &r in roots {
            visit(self, r, &mut out);
        }
        out
    }

    /// Ancestors of `id` from the root down, excluding `id` itself.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut at = self.nodes.get(&id).and_then(|n| n.parent);
        while let Some(p) = at {
            chain.push(p);
            at = self.nodes[&p].parent;
        }
        chain.reverse();
        chain
    }

    /// Tool/arity skeleton, ignoring node ids and states.
    pub fn shape(&self) -> Vec<Shape> {
        fn build(t: &PlanTree, id: usize) -> Shape {
            let n = &t.nodes[&id];
            Shape {
                terminal: n.terminal.clone(),
                kind: n.kind,
                children: n.children.iter().map(|&c| build(t, c)).collect(),
            }
        }
        self.roots.iter().map(|&r| build(self, r)).collect()
    }

    /// Whether every node has as many children as it has input slots.
    pub fn is_saturated(&self) -> bool {
        self.nodes.values().all(|n| n.children.len() == n.arity)
    }

    pub(super) fn step_text(&self, id: usize, registry: &ToolRegistry) -> String {
        let n = &self.nodes[&id];
        match n.label_key.as_ref().and_then(|k| registry.labels.get(k)) {
            Some(label) => label.clone(),
            None => registry.display_name(&n.terminal).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub terminal: String,
    pub kind: ToolKind,
    pub children: Vec<Shape>,
}
