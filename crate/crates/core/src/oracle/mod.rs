//! Deciding between options.
//!
//! Every oracle answers with a 1-based index into the choices of a
//! [`PromptContext`]. The HTTP oracle renders the context with one of the
//! [`Template`]s and asks a chat-completion endpoint; the others are
//! deterministic policies used for testing and batch runs.

mod http;
mod prompt;
mod reply;

use std::io::{BufRead, Write};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use http::HttpOracle;
pub use prompt::{build_prompt, PromptContext, Template};
pub use reply::parse_reply;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("no choices to decide between")]
    EmptyChoices,
    #[error("no integer in reply {0:?}")]
    NoInteger(String),
    #[error("{value} is not a choice between 1 and {n}")]
    OutOfRange { value: u64, n: usize },
    #[error("script exhausted after {0} answers")]
    ScriptExhausted(usize),
    #[error("script entries must be at least 1")]
    ZeroInScript,
    #[error("unknown template `{0}` (expected openagi, daily, cooking or risk)")]
    UnknownTemplate(String),
    #[error("unknown oracle `{0}` (expected scripted, exhaustive, random, interactive or http)")]
    UnknownKind(String),
    #[error("missing oracle setting: {0}")]
    Missing(&'static str),
    #[error("environment variable `{0}` is not set")]
    MissingCredential(String),
    #[error("request failed: {0}")]
    Transport(String),
    #[error("response has no message content: {0}")]
    BadResponse(String),
    #[error("no usable answer after {attempts} attempts; last reply {last:?}")]
    RetriesExhausted { attempts: u32, last: String },
    #[error("i/o: {0}")]
    Io(String),
}

pub trait DecisionOracle {
    /// A 1-based index into `ctx.choices`.
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError>;
}

impl<F> DecisionOracle for F
where
    F: FnMut(&PromptContext) -> Result<usize, OracleError>,
{
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        self(ctx)
    }
}

fn check(index: usize, ctx: &PromptContext) -> Result<usize, OracleError> {
    if ctx.choices.is_empty() {
        return Err(OracleError::EmptyChoices);
    }
    if index == 0 || index > ctx.choices.len() {
        return Err(OracleError::OutOfRange {
            value: index as u64,
            n: ctx.choices.len(),
        });
    }
    Ok(index)
}

/// Replays fixed answers.
#[derive(Debug, Clone)]
pub struct ScriptedOracle {
    script: Vec<usize>,
    next: usize,
    fallback: bool,
}

impl ScriptedOracle {
    pub fn new(script: Vec<usize>) -> Self {
        ScriptedOracle {
            script,
            next: 0,
            fallback: false,
        }
    }

    /// Answers 1 once the script runs out instead of failing.
    pub fn with_fallback(script: Vec<usize>) -> Self {
        ScriptedOracle {
            fallback: true,
            ..Self::new(script)
        }
    }

    pub fn used(&self) -> usize {
        self.next
    }
}

impl DecisionOracle for ScriptedOracle {
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        let answer = match self.script.get(self.next) {
            Some(&a) => {
                self.next += 1;
                a
            }
            None if self.fallback => 1,
            None => return Err(OracleError::ScriptExhausted(self.script.len())),
        };
        check(answer, ctx)
    }
}

/// Always takes the first option, which makes generation a plain
/// depth-first search in transition order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExhaustiveOracle;

impl DecisionOracle for ExhaustiveOracle {
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        check(1, ctx)
    }
}

/// Uniform choices from a seeded stream.
#[derive(Debug, Clone)]
pub struct RandomOracle {
    rng: ChaCha8Rng,
}

impl RandomOracle {
    pub fn new(seed: u64) -> Self {
        RandomOracle {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl DecisionOracle for RandomOracle {
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        if ctx.choices.is_empty() {
            return Err(OracleError::EmptyChoices);
        }
        Ok(self.rng.random_range(1..=ctx.choices.len()))
    }
}

/// Shows the prompt on `output` and reads the answer from `input`,
/// asking again until the reply names a valid option.
pub struct InteractiveOracle<R, W> {
    input: R,
    output: W,
    template: Template,
}

impl<R: BufRead, W: Write> InteractiveOracle<R, W> {
    pub fn new(input: R, output: W, template: Template) -> Self {
        InteractiveOracle {
            input,
            output,
            template,
        }
    }
}

impl<R: BufRead, W: Write> DecisionOracle for InteractiveOracle<R, W> {
    fn decide(&mut self, ctx: &PromptContext) -> Result<usize, OracleError> {
        let prompt = build_prompt(ctx, self.template)?;
        let io = |e: std::io::Error| OracleError::Io(e.to_string());
        writeln!(self.output, "{prompt}").map_err(io)?;
        loop {
            write!(self.output, "> ").map_err(io)?;
            self.output.flush().map_err(io)?;
            let mut line = String::new();
            if self.input.read_line(&mut line).map_err(io)? == 0 {
                return Err(OracleError::Io("input closed".into()));
            }
            match parse_reply(&line, ctx.choices.len()) {
                Ok(i) => return Ok(i),
                Err(e) => writeln!(self.output, "{e}").map_err(io)?,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleKind {
    Scripted,
    #[default]
    Exhaustive,
    Random,
    Interactive,
    Http,
}

impl std::str::FromStr for OracleKind {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scripted" => Ok(OracleKind::Scripted),
            "exhaustive" => Ok(OracleKind::Exhaustive),
            "random" => Ok(OracleKind::Random),
            "interactive" => Ok(OracleKind::Interactive),
            "http" => Ok(OracleKind::Http),
            other => Err(OracleError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub kind: OracleKind,
    pub seed: u64,
    pub script: Vec<usize>,
    /// Keep answering 1 after the script ends.
    pub script_fallback: bool,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: Option<String>,
    pub temperature: f64,
    pub max_retries: u32,
    pub timeout: Duration,
    pub template: Template,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            kind: OracleKind::Exhaustive,
            seed: 0,
            script: Vec::new(),
            script_fallback: false,
            endpoint: None,
            model: None,
            api_key_env: None,
            temperature: 0.0,
            max_retries: 3,
            timeout: Duration::from_secs(60),
            template: Template::OpenAgi,
        }
    }
}

impl OracleConfig {
    pub fn build(&self) -> Result<Box<dyn DecisionOracle>, OracleError> {
        Ok(match self.kind {
            OracleKind::Scripted => {
                if self.script.contains(&0) {
                    return Err(OracleError::ZeroInScript);
                }
                if self.script_fallback {
                    Box::new(ScriptedOracle::with_fallback(self.script.clone()))
                } else {
                    Box::new(ScriptedOracle::new(self.script.clone()))
                }
            }
            OracleKind::Exhaustive => Box::new(ExhaustiveOracle),
            OracleKind::Random => Box::new(RandomOracle::new(self.seed)),
            OracleKind::Interactive => Box::new(InteractiveOracle::new(
                std::io::stdin().lock(),
                std::io::stderr(),
                self.template,
            )),
            OracleKind::Http => {
                let endpoint = self.endpoint.clone().ok_or(OracleError::Missing("endpoint"))?;
                let model = self.model.clone().ok_or(OracleError::Missing("model"))?;
                let token = match &self.api_key_env {
                    Some(var) => Some(std::env::var(var).map_err(|_| OracleError::MissingCredential(var.clone()))?),
                    None => None,
                };
                let mut oracle = HttpOracle::new(endpoint, model, self.template);
                oracle.token = token;
                oracle.temperature = self.temperature;
                oracle.max_retries = self.max_retries;
                oracle.timeout = self.timeout;
                Box::new(oracle)
            }
        })
    }
}
