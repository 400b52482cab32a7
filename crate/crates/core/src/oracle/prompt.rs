use std::fmt;
use std::str::FromStr;

use super::OracleError;

/// What a prompt tells the oracle about one decision.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PromptContext {
    pub task_description: String,
    pub progress_lines: Vec<String>,
    /// What the pending choice produces, e.g. `the input image of "Colorization"`.
    pub target_item: String,
    /// Quoted text of the step that consumes the target, when there is one.
    pub parent_step: Option<String>,
    pub choices: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    OpenAgi,
    Daily,
    Cooking,
    Risk,
}

impl FromStr for Template {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "openagi" => Ok(Template::OpenAgi),
            "daily" => Ok(Template::Daily),
            "cooking" => Ok(Template::Cooking),
            "risk" => Ok(Template::Risk),
            other => Err(OracleError::UnknownTemplate(other.to_string())),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Template::OpenAgi => "openagi",
            Template::Daily => "daily",
            Template::Cooking => "cooking",
            Template::Risk => "risk",
        })
    }
}

const OPENAGI: &str =
    "You will help me generate a plan for the problem: {task_description} by answering a series of my questions.

{current_progress}

To get {target_item}, we have the following choices:

{choice_list}

Your answer should be only an integer, referring to the desired choice.";

const DAILY: &str = "{task_description}

Let's start planning from the end.

{current_progress}

Decide on the activity ending at {target_item}:00.

Here are possible options:

{choice_list}

Your reply should be only one number, such as 1, referring to the option.";

const COOKING: &str = "{task_description}

{current_progress}

Decide on the previous step before current progress.

Here are possible options to get {target_item} for the step: {parent_step}

{choice_list}

Your reply should be only one number, such as 1, referring to the option.";

const RISK: &str = "Task: You are a plan maker to design a risk management plan for deals related to companies.

Scenario: {task_description}

{target_item}

{choice_list}

Your answer should be only one number, such as 1, referring to the option.";

impl Template {
    pub fn text(self) -> &'static str {
        match self {
            Template::OpenAgi => OPENAGI,
            Template::Daily => DAILY,
            Template::Cooking => COOKING,
            Template::Risk => RISK,
        }
    }

    fn choice_list(self, choices: &[String]) -> String {
        let with_stop = |s: &str| {
            if s.ends_with('.') {
                s.to_string()
            } else {
                format!("{s}.")
            }
        };
        let last = choices.len();
        choices
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = i + 1;
                match self {
                    Template::OpenAgi if n == last => format!("{n}: {}.", c.strip_suffix('.').unwrap_or(c)),
                    Template::OpenAgi => format!("{n}: {},", c.strip_suffix('.').unwrap_or(c)),
                    Template::Daily => format!("{n}. {}", with_stop(c)),
                    Template::Cooking | Template::Risk => format!("{n}: {}", with_stop(c)),
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Replaces each `{name}` in `template` with its value, in one left-to-right
/// pass; braces inside the values are left alone.
fn fill(template: &str, values: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() * 2);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let hit = after.find('}').and_then(|close| {
            values
                .iter()
                .find(|(k, _)| *k == &after[..close])
                .map(|(_, v)| (close, v))
        });
        match hit {
            Some((close, v)) => {
                out.push_str(v);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

pub fn build_prompt(ctx: &PromptContext, template: Template) -> Result<String, OracleError> {
    if ctx.choices.is_empty() {
        return Err(OracleError::EmptyChoices);
    }
    let mut progress = String::from("Current Progress:\n\n");
    progress.push_str(&ctx.progress_lines.join("\n"));
    let choice_list = template.choice_list(&ctx.choices);
    let parent_step = ctx.parent_step.as_deref().unwrap_or("the final result");
    Ok(fill(
        template.text(),
        &[
            ("task_description", &ctx.task_description),
            ("current_progress", &progress),
            ("target_item", &ctx.target_item),
            ("parent_step", parent_step),
            ("choice_list", &choice_list),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn super_resolution() -> PromptContext {
        PromptContext {
            task_description: "\"Given a grayscale image, how to return the regular image step by step?\"".into(),
            progress_lines: vec!["Step n: Use Image Super Resolution;".into(), "Step (n-1): ?".into()],
            target_item: "the input image of \"Image Super Resolution\"".into(),
            parent_step: None,
            choices: vec![
                "the output of Colorization".into(),
                "the output of Image Denoising".into(),
                "the output of Image Deblurring".into(),
                "the output of Text to Image Generation".into(),
                "Input Image".into(),
            ],
        }
    }

    #[test]
    fn openagi_prompt_reproduces_worked_example() {
        let expected = "You will help me generate a plan for the problem: \"Given a grayscale image, how to return the regular image step by step?\" by answering a series of my questions.

Current Progress:

Step n: Use Image Super Resolution;
Step (n-1): ?

To get the input image of \"Image Super Resolution\", we have the following choices:

1: the output of Colorization,
2: the output of Image Denoising,
3: the output of Image Deblurring,
4: the output of Text to Image Generation,
5: Input Image.

Your answer should be only an integer, referring to the desired choice.";
        assert_eq!(build_prompt(&super_resolution(), Template::OpenAgi).unwrap(), expected);
    }

    #[test]
    fn daily_choices_use_dots() {
        let ctx = PromptContext {
            task_description: "Plan the day.".into(),
            progress_lines: vec!["17:00 - 20:00 Doing homework.".into()],
            target_item: "17".into(),
            parent_step: None,
            choices: vec!["Eating supper".into(), "Grocery shopping.".into()],
        };
        let text = build_prompt(&ctx, Template::Daily).unwrap();
        assert!(text.contains("1. Eating supper.\n2. Grocery shopping."));
        assert!(text
            .contains("Current Progress:\n\n17:00 - 20:00 Doing homework.\n\nDecide on the activity ending at 17:00."));
    }

    #[test]
    fn cooking_names_the_parent_step() {
        let ctx = PromptContext {
            task_description: "Generate a broccoli beef cooking plan.".into(),
            progress_lines: vec![
                "Step n: Then, we get the cooked broccoli beef.".into(),
                "Step n-1: ?".into(),
            ],
            target_item: "the mixture of beef and broccoli".into(),
            parent_step: Some("\"Stir-fry the beef and broccoli mixture with the seasoning in a wok.\"".into()),
            choices: vec!["Combine lightly cooked beef and lightly cooked broccoli in a wok.".into()],
        };
        let text = build_prompt(&ctx, Template::Cooking).unwrap();
        assert!(text.contains(
            "Here are possible options to get the mixture of beef and broccoli for the step: \"Stir-fry the beef and broccoli mixture with the seasoning in a wok.\"\n\n1: Combine"
        ));
    }

    #[test]
    fn every_placeholder_is_consumed() {
        let mut ctx = super_resolution();
        ctx.parent_step = Some("\"x\"".into());
        for t in [Template::OpenAgi, Template::Daily, Template::Cooking, Template::Risk] {
            let text = build_prompt(&ctx, t).unwrap();
            for p in [
                "task_description",
                "current_progress",
                "target_item",
                "parent_step",
                "choice_list",
            ] {
                assert!(!text.contains(&format!("{{{p}}}")), "{t}: {p}");
            }
            assert_eq!(text, build_prompt(&ctx, t).unwrap());
        }
    }

    #[test]
    fn placeholders_inside_values_are_not_expanded() {
        let mut ctx = super_resolution();
        ctx.task_description = "{choice_list}".into();
        let text = build_prompt(&ctx, Template::Risk).unwrap();
        assert!(text.contains("Scenario: {choice_list}\n"));
    }

    #[test]
    fn empty_choices_rejected() {
        let mut ctx = super_resolution();
        ctx.choices.clear();
        assert_eq!(build_prompt(&ctx, Template::OpenAgi), Err(OracleError::EmptyChoices));
    }

    #[test]
    fn template_names() {
        for t in [Template::OpenAgi, Template::Daily, Template::Cooking, Template::Risk] {
            assert_eq!(t.to_string().parse::<Template>().unwrap(), t);
        }
        assert_eq!(
            "haiku".parse::<Template>(),
            Err(OracleError::UnknownTemplate("haiku".into()))
        );
    }
}
