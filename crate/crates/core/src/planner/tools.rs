//! Tool registries.
//!
//! A registry describes the terminals a plan can contain: display names,
//! input and output modalities, and budgets. It also carries the text used
//! when prompting (stack symbol descriptions, per-state questions, labels for
//! particular transitions) and a few rendering switches.
//!
//! ```toml
//! [plan]
//! template = "openagi"
//!
//! [symbols]
//! I = "image"
//!
//! [[tool]]
//! terminal = "a_1"
//! name = "Colorization"
//! inputs = ["image"]
//! output = "image"
//!
//! [[tool]]
//! terminal = "i"
//! name = "Input Image"
//! kind = "input"
//! budget = "unbounded"
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Deserialize;

use super::PlanError;
use crate::grammar::Budgets;
use crate::oracle::Template;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToolKind {
    /// Something that transforms inputs into an output.
    Tool,
    /// Data supplied with the task.
    Input,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToolSpec {
    pub terminal: String,
    pub display_name: String,
    /// Choice text; the display name is used when absent.
    pub label: Option<String>,
    /// `None` means "whatever the transition pushes".
    pub input_modalities: Option<Vec<String>>,
    pub output_modality: Option<String>,
    /// Maximum uses per plan; `None` is unbounded.
    pub budget: Option<u32>,
    pub kind: ToolKind,
}

impl ToolSpec {
    /// A tool with budget 1 and no declared modalities.
    pub fn new(terminal: &str, display_name: &str) -> Self {
        ToolSpec {
            terminal: terminal.to_string(),
            display_name: display_name.to_string(),
            label: None,
            input_modalities: None,
            output_modality: None,
            budget: Some(1),
            kind: ToolKind::Tool,
        }
    }

    pub fn choice_label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.display_name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ToolRegistry {
    pub tools: Vec<ToolSpec>,
    pub template: Option<Template>,
    /// Render plan roots last to first (for automata that plan backwards).
    pub reverse: bool,
    /// Render steps as hour ranges taken from numeric state names.
    pub clock: bool,
    /// What the finished plan produces, for progress text.
    pub goal: Option<String>,
    /// Stack symbol → description or modality.
    pub symbols: BTreeMap<String, String>,
    /// State name → question asked when deciding in that state.
    pub prompts: BTreeMap<String, String>,
    /// `"X -> β"` transition key → choice text.
    pub labels: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    plan: PlanSection,
    #[serde(default)]
    symbols: BTreeMap<String, String>,
    #[serde(default)]
    prompts: BTreeMap<String, String>,
    #[serde(default)]
    labels: BTreeMap<String, String>,
    #[serde(default)]
    tool: Vec<ToolEntry>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct PlanSection {
    template: Option<String>,
    #[serde(default)]
    reverse: bool,
    #[serde(default)]
    clock: bool,
    goal: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ToolEntry {
    terminal: String,
    name: String,
    label: Option<String>,
    inputs: Option<Vec<String>>,
    output: Option<String>,
    budget: Option<BudgetValue>,
    kind: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BudgetValue {
    Count(u32),
    Word(String),
}

impl ToolRegistry {
    pub fn new(tools: Vec<ToolSpec>) -> Self {
        ToolRegistry {
            tools,
            ..Default::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self, PlanError> {
        let file: File = toml::from_str(text).map_err(|e| PlanError::Registry(e.to_string()))?;
        let template = file
            .plan
            .template
            .map(|t| t.parse::<Template>())
            .transpose()
            .map_err(|e| PlanError::Registry(e.to_string()))?;

        let mut tools: Vec<ToolSpec> = Vec::new();
        for entry in file.tool {
            if tools.iter().any(|t| t.terminal == entry.terminal) {
                return Err(PlanError::Registry(format!("tool `{}` listed twice", entry.terminal)));
            }
            let budget = match entry.budget {
                None => Some(1),
                Some(BudgetValue::Count(n)) => Some(n),
                Some(BudgetValue::Word(w)) if w == "unbounded" => None,
                Some(BudgetValue::Word(w)) => {
                    return Err(PlanError::Registry(format!(
                        "budget of `{}` must be an integer or \"unbounded\", not `{w}`",
                        entry.terminal
                    )))
                }
            };
            let kind = match entry.kind.as_deref() {
                None | Some("tool") => ToolKind::Tool,
                Some("input") => ToolKind::Input,
                Some(other) => {
                    return Err(PlanError::Registry(format!(
                        "kind of `{}` must be \"tool\" or \"input\", not `{other}`",
                        entry.terminal
                    )))
                }
            };
            tools.push(ToolSpec {
                terminal: entry.terminal,
                display_name: entry.name,
                label: entry.label,
                input_modalities: entry.inputs,
                output_modality: entry.output,
                budget,
                kind,
            });
        }
        Ok(ToolRegistry {
            tools,
            template,
            reverse: file.plan.reverse,
            clock: file.plan.clock,
            goal: file.plan.goal,
            symbols: file.symbols,
            prompts: file.prompts,
            labels: file.labels,
        })
    }

    pub fn tool(&self, terminal: &str) -> Option<&ToolSpec> {
        self.tools.iter().find(|t| t.terminal == terminal)
    }

    /// Budgets of the budgeted tools; unbounded ones are left out.
    pub fn budgets(&self) -> Budgets {
        self.tools
            .iter()
            .filter_map(|t| t.budget.map(|b| (t.terminal.clone(), b)))
            .collect()
    }

    pub fn display_name<'a>(&'a self, terminal: &'a str) -> &'a str {
        self.tool(terminal).map_or(terminal, |t| &t.display_name)
    }

    pub fn set_budget(&mut self, terminal: &str, budget: Option<u32>) {
        if let Some(t) = self.tools.iter_mut().find(|t| t.terminal == terminal) {
            t.budget = budget;
        }
    }
}

impl FromStr for ToolRegistry {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn openagi_registry() {
        let r = ToolRegistry::parse(fixtures::OPENAGI_TOOLS).unwrap();
        assert_eq!(r.template, Some(Template::OpenAgi));
        assert_eq!(r.budgets().len(), 15);
        assert!(r.budgets().values().all(|&b| b == 1));
        let e1 = r.tool("e_1").unwrap();
        assert_eq!(e1.display_name, "Visual Question Answering");
        assert_eq!(
            e1.input_modalities.as_deref(),
            Some(&["image".to_string(), "text".to_string()][..])
        );
        assert_eq!(r.tool("i").unwrap().kind, ToolKind::Input);
        assert_eq!(r.symbols["I"], "image");
    }

    #[test]
    fn budgets_default_to_one() {
        let r = ToolRegistry::parse("[[tool]]\nterminal = \"x\"\nname = \"X\"\n").unwrap();
        assert_eq!(r.tool("x").unwrap().budget, Some(1));
        assert_eq!(r.template, None);
    }

    #[test]
    fn bad_entries_are_rejected() {
        for bad in [
            "[[tool]]\nterminal = \"x\"\nname = \"X\"\nbudget = \"lots\"\n",
            "[[tool]]\nterminal = \"x\"\nname = \"X\"\nkind = \"gadget\"\n",
            "[[tool]]\nterminal = \"x\"\nname = \"X\"\n[[tool]]\nterminal = \"x\"\nname = \"Y\"\n",
            "[plan]\ntemplate = \"poetry\"\n",
            "[[tool]]\nterminal = \"x\"\n",
            "[[tool]]\nterminal = \"x\"\nname = \"X\"\ncolour = \"red\"\n",
        ] {
            assert!(matches!(ToolRegistry::parse(bad), Err(PlanError::Registry(_))), "{bad}");
        }
    }

    #[test]
    fn every_fixture_registry_loads() {
        for src in [
            fixtures::OPENAGI_TOOLS,
            fixtures::COOKING_TOOLS,
            fixtures::DAILY_TOOLS,
            fixtures::RISK_TOOLS,
        ] {
            ToolRegistry::parse(src).unwrap();
        }
    }
}
