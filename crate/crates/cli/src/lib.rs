//! The `stackplan` command line: convert, accept, enumerate, plan, validate.
//!
//! [`run`] is the whole program minus the process boundary, so tests can
//! drive it with argument lists and in-memory writers.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use stackplan::grammar::{count_derivations, EnumerateOptions};
use stackplan::oracle::OracleKind;
use stackplan::planner::init_session;
use stackplan::{
    cfg_to_pda, load_pda, parse_grammar, render_plan, validate_word, AutomatonError, Grammar, GrammarError,
    OracleConfig, OracleError, Pda, PlanError, PlanTree, Style, Template, ToolRegistry,
};
use thiserror::Error;

pub mod config;

pub use config::RunFile;

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_ORACLE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Grammar { path: PathBuf, source: GrammarError },
    #[error("{path}: {source}")]
    Automaton { path: PathBuf, source: AutomatonError },
    #[error("{path}: {source}")]
    Registry { path: PathBuf, source: PlanError },
    #[error("run file line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Word(#[from] AutomatonError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Plan(PlanError::NoValidPlan) => EXIT_NO,
            CliError::Plan(PlanError::OracleFailure(_)) => EXIT_ORACLE,
            _ => EXIT_ERROR,
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[derive(Debug, Parser)]
#[command(name = "stackplan", version, about = "Grammar-supervised plan generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the pushdown automaton for a grammar
    Convert {
        #[arg(long)]
        grammar: PathBuf,
        /// Write here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide whether an automaton accepts a word
    Accept {
        #[command(flatten)]
        source: Source,
        /// Space-separated symbols; nothing means the empty word
        word: Vec<String>,
    },
    /// List the words of a grammar within a budget and step bound
    Enumerate {
        #[arg(long)]
        grammar: PathBuf,
        /// Tool registry supplying budgets
        #[arg(long)]
        tools: Option<PathBuf>,
        /// Production expansions allowed per derivation
        #[arg(long, default_value_t = 20)]
        max_steps: usize,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        /// Print the number of derivations instead of the words
        #[arg(long)]
        count: bool,
    },
    /// Generate a plan
    Plan(Box<PlanArgs>),
    /// Check a word against an automaton and tool budgets
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        tools: Option<PathBuf>,
        word: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct Source {
    #[arg(long, conflicts_with = "automaton")]
    grammar: Option<PathBuf>,
    #[arg(long)]
    automaton: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PlanArgs {
    /// Run file of `key = value` lines; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub grammar: Option<PathBuf>,
    #[arg(long)]
    pub automaton: Option<PathBuf>,
    #[arg(long)]
    pub tools: Option<PathBuf>,
    /// scripted, exhaustive, random, interactive or http
    #[arg(long)]
    pub oracle: Option<String>,
    /// Answers for the scripted oracle, e.g. `9,1,5,1,5`
    #[arg(long)]
    pub script: Option<String>,
    /// Keep answering 1 once the script runs out
    #[arg(long)]
    pub fallback: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub step_cap: Option<usize>,
    /// prefix, functional, steps or dump
    #[arg(long)]
    pub style: Option<String>,
    #[arg(long)]
    pub task: Option<String>,
    /// Prompt template: openagi, daily, cooking or risk
    #[arg(long)]
    pub template: Option<String>,
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// Environment variable holding the API token
    #[arg(long)]
    pub api_key_env: Option<String>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub max_retries: Option<u32>,
    /// Seconds per request
    #[arg(long)]
    pub timeout: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report backtracks and oracle calls on standard error
    #[arg(long)]
    pub stats: bool,
}

/// Parses arguments, runs the command, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let io = |e: std::io::Error| CliError::Usage(e.to_string());
    match command {
        Command::Convert { grammar, output } => {
            let text = cmd_convert(&grammar)?;
            match output {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Accept { source, word } => {
            let (pda, _) = load_source(source.grammar.as_deref(), source.automaton.as_deref())?;
            let accepted = cmd_accept(&pda, &split_word(&word))?;
            writeln!(out, "{}", if accepted { "accept" } else { "reject" }).map_err(io)?;
            Ok(if accepted { EXIT_OK } else { EXIT_NO })
        }
        Command::Enumerate {
            grammar,
            tools,
            max_steps,
            limit,
            max_len,
            count,
        } => {
            let g = load_grammar(&grammar)?;
            let registry = load_registry(tools.as_deref())?;
            let budgets = registry.budgets();
            if count {
                let n = count_derivations(&g, &budgets, max_steps);
                writeln!(out, "{n}").map_err(io)?;
                return Ok(if n == 0 { EXIT_NO } else { EXIT_OK });
            }
            let options = EnumerateOptions {
                max_steps,
                limit,
                max_len,
            };
            let e = g.enumerate(&budgets, options);
            for w in &e.words {
                writeln!(out, "{}", w.join(" ")).map_err(io)?;
            }
            if e.truncated {
                writeln!(err, "note: some derivations needed more than {max_steps} steps").map_err(io)?;
            }
            Ok(if e.words.is_empty() { EXIT_NO } else { EXIT_OK })
        }
        Command::Plan(args) => {
            let output = args.output.clone();
            let stats = args.stats;
            let run = cmd_plan(&args)?;
            let text = format!("{}\n", run.text);
            match output.or(run.output) {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            if stats {
                writeln!(
                    err,
                    "backtracks: {}\noracle calls: {}",
                    run.backtracks, run.oracle_calls
                )
                .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Validate { source, tools, word } => {
            let (pda, _) = load_source(source.grammar.as_deref(), source.automaton.as_deref())?;
            let registry = load_registry(tools.as_deref())?;
            let valid = validate_word(&pda, &registry, &split_word(&word));
            writeln!(out, "{}", if valid { "valid" } else { "invalid" }).map_err(io)?;
            Ok(if valid { EXIT_OK } else { EXIT_NO })
        }
    }
}

/// `["a a", "b"]` and `["a", "a", "b"]` are the same word.
pub fn split_word(args: &[String]) -> Vec<String> {
    args.iter()
        .flat_map(|a| a.split_whitespace())
        .map(str::to_string)
        .collect()
}

pub fn load_grammar(path: &Path) -> Result<Grammar, CliError> {
    parse_grammar(&read(path)?).map_err(|source| CliError::Grammar {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_automaton(path: &Path) -> Result<Pda, CliError> {
    load_pda(&read(path)?).map_err(|source| CliError::Automaton {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_registry(path: Option<&Path>) -> Result<ToolRegistry, CliError> {
    match path {
        None => Ok(ToolRegistry::default()),
        Some(path) => ToolRegistry::parse(&read(path)?).map_err(|source| CliError::Registry {
            path: path.to_path_buf(),
            source,
        }),
    }
}

/// The automaton given directly, or converted from a grammar.
pub fn load_source(grammar: Option<&Path>, automaton: Option<&Path>) -> Result<(Pda, Option<Grammar>), CliError> {
    match (grammar, automaton) {
        (Some(g), None) => {
            let g = load_grammar(g)?;
            Ok((cfg_to_pda(&g), Some(g)))
        }
        (None, Some(a)) => Ok((load_automaton(a)?, None)),
        (Some(_), Some(_)) => Err(CliError::Usage("give either --grammar or --automaton, not both".into())),
        (None, None) => Err(CliError::Usage("one of --grammar or --automaton is required".into())),
    }
}

pub fn cmd_convert(grammar: &Path) -> Result<String, CliError> {
    Ok(cfg_to_pda(&load_grammar(grammar)?).to_string())
}

pub fn cmd_accept(pda: &Pda, word: &[String]) -> Result<bool, CliError> {
    Ok(pda.accepts(word)?)
}

/// A finished `plan` run.
#[derive(Debug, Clone)]
pub struct PlanRun {
    pub text: String,
    pub tree: PlanTree,
    pub emitted: Vec<String>,
    pub backtracks: usize,
    pub oracle_calls: usize,
    /// Output path named in the run file.
    output: Option<PathBuf>,
}

/// Flag values merged over the run file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub grammar: Option<PathBuf>,
    pub automaton: Option<PathBuf>,
    pub tools: Option<PathBuf>,
    pub oracle: OracleConfig,
    pub step_cap: Option<usize>,
    pub style: Style,
    pub task: String,
    pub template: Option<Template>,
    pub output: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(args: &PlanArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => RunFile::load(path)?,
            None => RunFile::default(),
        };
        let text = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).map(str::to_string));
        let path = |flag: &Option<PathBuf>, key: &str| flag.clone().or_else(|| file.path(key));

        let mut oracle = OracleConfig::default();
        if let Some(kind) = text(&args.oracle, "oracle") {
            oracle.kind = kind.parse::<OracleKind>()?;
        }
        if let Some(script) = text(&args.script, "script") {
            oracle.script = parse_script(&script)?;
            if args.oracle.is_none() && file.get("oracle").is_none() {
                oracle.kind = OracleKind::Scripted;
            }
        }
        oracle.script_fallback = args.fallback || file.parsed::<bool>("fallback")?.unwrap_or(false);
        if let Some(seed) = args.seed.or(file.parsed("seed")?) {
            oracle.seed = seed;
        }
        oracle.endpoint = text(&args.endpoint, "endpoint");
        oracle.model = text(&args.model, "model");
        oracle.api_key_env = text(&args.api_key_env, "api-key-env");
        if let Some(t) = args.temperature.or(file.parsed("temperature")?) {
            oracle.temperature = t;
        }
        if let Some(n) = args.max_retries.or(file.parsed("max-retries")?) {
            oracle.max_retries = n;
        }
        if let Some(secs) = args.timeout.or(file.parsed("timeout")?) {
            oracle.timeout = Duration::from_secs(secs);
        }
        let template = text(&args.template, "template")
            .map(|t| t.parse::<Template>())
            .transpose()?;
        let style = match text(&args.style, "style") {
            Some(s) => s.parse::<Style>()?,
            None => Style::default(),
        };
        Ok(Settings {
            grammar: path(&args.grammar, "grammar"),
            automaton: path(&args.automaton, "automaton"),
            tools: path(&args.tools, "tools"),
            oracle,
            step_cap: args.step_cap.or(file.parsed("step-cap")?),
            style,
            task: text(&args.task, "task").unwrap_or_default(),
            template,
            output: file.path("output"),
        })
    }
}

fn parse_script(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad script entry `{t}`")))
        })
        .collect()
}

pub fn cmd_plan(args: &PlanArgs) -> Result<PlanRun, CliError> {
    let mut settings = Settings::resolve(args)?;
    let (pda, _) = load_source(settings.grammar.as_deref(), settings.automaton.as_deref())?;
    let registry = load_registry(settings.tools.as_deref())?;
    let template = settings.template.or(registry.template).unwrap_or(Template::OpenAgi);
    settings.oracle.template = template;
    let mut oracle = settings.oracle.build()?;
    let mut session = init_session(&pda, &registry, &settings.task, settings.step_cap)?.with_template(template);
    let tree = session.generate(&mut *oracle)?;
    Ok(PlanRun {
        text: render_plan(&tree, &registry, settings.style)?,
        emitted: session.emitted().to_vec(),
        backtracks: session.backtracks(),
        oracle_calls: session.oracle_calls(),
        tree,
        output: settings.output,
    })
}
