//! Bundled constraint files for the example scenarios.
//!
//! The same files live under `fixtures/` at the repository root, where the
//! command-line tool reads them.

/// `a^n b^n`, the smallest grammar with a stack.
pub const ANBN_CFG: &str = include_str!("../../../fixtures/anbn.cfg");
/// Hand-written automaton for `a^n b^n` with fused push-and-read edges.
pub const ANBN_PDA: &str = include_str!("../../../fixtures/anbn.pda");

/// OpenAGI tool constraints, image input and text output.
pub const OPENAGI_CFG: &str = include_str!("../../../fixtures/openagi.cfg");
/// OpenAGI tool constraints, image input and image output.
pub const OPENAGI_IMAGE_IMAGE_CFG: &str = include_str!("../../../fixtures/openagi-image-image.cfg");
/// OpenAGI tool constraints, text input and text output.
pub const OPENAGI_TEXT_TEXT_CFG: &str = include_str!("../../../fixtures/openagi-text-text.cfg");
/// OpenAGI tool constraints, text input and image output.
pub const OPENAGI_TEXT_IMAGE_CFG: &str = include_str!("../../../fixtures/openagi-text-image.cfg");
/// Hand-built automaton for the image-to-text OpenAGI task, reading tool
/// names straight off the category symbols.
pub const OPENAGI_PDA: &str = include_str!("../../../fixtures/openagi.pda");
/// The fifteen OpenAGI tools plus the two task inputs.
pub const OPENAGI_TOOLS: &str = include_str!("../../../fixtures/openagi.tools.toml");

/// Beef with broccoli recipe grammar.
pub const COOKING_CFG: &str = include_str!("../../../fixtures/cooking.cfg");
/// Utensils, ingredients and step wording for the recipe.
pub const COOKING_TOOLS: &str = include_str!("../../../fixtures/cooking.tools.toml");

/// Daily schedule automaton, 10:00 to 20:00, planned backwards.
pub const DAILY_PDA: &str = include_str!("../../../fixtures/daily.pda");
/// Activities for the daily schedule.
pub const DAILY_TOOLS: &str = include_str!("../../../fixtures/daily.tools.toml");

/// Acquisition risk review flowchart.
pub const RISK_PDA: &str = include_str!("../../../fixtures/risk.pda");
/// Answers and questions for the risk review.
pub const RISK_TOOLS: &str = include_str!("../../../fixtures/risk.tools.toml");
