//! Command-line front end: argument handling, task dispatch, text and JSON
//! reports, exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use flpcheck_core::analysis::{Analyzer, OpAnalysis};
use flpcheck_core::equiv::{
    check_equiv, check_spec, specified_ops, Bounds, Counterexample, EquivTask, Evidence, Mode, Outcome, Stats, Verdict,
};
use flpcheck_core::eval::{EvalConfig, Evaluator, Reachability};
use flpcheck_core::lang::{parse_expr, parse_program, Annotation, Program};
use flpcheck_core::partial::{render, PartialValue};
use flpcheck_core::semver::{behavior_diff, diff_bounds, parse_version, ApiReport, Judgment};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Location of the JSON schema of reports, relative to the repository root.
pub const SCHEMA_PATH: &str = "docs/report.schema.json";

#[derive(Parser, Debug)]
#[command(name = "flpcheck", version, about = "Equivalence checking for a small functional-logic language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the set of values of an expression.
    Eval {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print termination, productivity, determinism and totality verdicts.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check every property and specification in a file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check two operations for equivalence.
    Equiv {
        file: PathBuf,
        lhs: String,
        rhs: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum)]
        annotation: Option<AnnotationArg>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compare two versions of a module.
    Diff {
        old: PathBuf,
        new: PathBuf,
        #[arg(long)]
        old_version: String,
        #[arg(long)]
        new_version: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Rule applications per evaluation branch.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: Option<u64>,
    /// Live branches per evaluation.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    branches: Option<u64>,
    /// Maximum depth of observed values.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,
    /// Maximum total size of generated inputs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    levels: Option<u64>,
    /// Maximum size of result templates.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    template_levels: Option<u64>,
    /// Skip properties whose operations may not be productive.
    #[arg(long, conflicts_with = "unsafe_mode")]
    safe: bool,
    /// Check every property even if it may not terminate.
    #[arg(long = "unsafe")]
    unsafe_mode: bool,
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Template,
    Set,
    Ground,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum AnnotationArg {
    Terminate,
    Productive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Eval,
    Analyze,
    Check,
    Equiv,
    Diff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Everything a run needs after argument parsing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub files: Vec<PathBuf>,
    pub bounds: Bounds,
    pub format: Format,
}

impl RunConfig {
    fn new(command: CommandKind, files: Vec<PathBuf>, opts: &Opts) -> RunConfig {
        let d = if command == CommandKind::Diff { diff_bounds() } else { Bounds::default() };
        let eval = EvalConfig {
            step_budget: opts.steps.unwrap_or(d.eval.step_budget),
            branch_budget: opts.branches.unwrap_or(d.eval.branch_budget),
            depth_budget: opts.depth.map_or(d.eval.depth_budget, |n| n as usize),
        };
        let bounds = Bounds {
            levels: opts.levels.map_or(d.levels, |n| n as usize),
            template_levels: opts.template_levels.map_or(d.template_levels, |n| n as usize),
            eval,
            safe_mode: if opts.safe { true } else if opts.unsafe_mode { false } else { d.safe_mode },
        };
        RunConfig { command, files, bounds, format: if opts.json { Format::Json } else { Format::Text } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Failed => EXIT_FAILED,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    fn join(self, other: Status) -> Status {
        match (self, other) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub inputs: Vec<String>,
    pub template: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeReport {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tests_run: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub mode: Mode,
    pub status: Status,
    pub outcome: OutcomeReport,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub expr: String,
    pub values: Vec<String>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehaviorReport {
    pub op: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffSection {
    pub old_version: String,
    pub new_version: String,
    pub api: ApiReport,
    pub behavior: Vec<BehaviorReport>,
    pub judgment: Judgment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Vec<OpAnalysis>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tasks: Option<Vec<TaskReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffSection>,
}

impl Report {
    fn new(command: &'static str, status: Status) -> Report {
        Report {
            tool: "flpcheck",
            version: env!("CARGO_PKG_VERSION"),
            command,
            status,
            eval: None,
            analysis: None,
            tasks: None,
            diff: None,
        }
    }
}

pub fn render_values(values: &[PartialValue]) -> String {
    format!("{{{}}}", values.iter().map(render).collect::<Vec<_>>().join(", "))
}

fn render_evidence(e: &Evidence) -> String {
    match e {
        Evidence::Reach(Reachability::Yes) => "reachable".into(),
        Evidence::Reach(Reachability::No) => "not reachable".into(),
        Evidence::Reach(Reachability::Unknown) => "unknown".into(),
        Evidence::Values { values, complete } => {
            let s = render_values(values);
            if *complete {
                s
            } else {
                format!("{s} (incomplete)")
            }
        }
    }
}

pub fn counterexample_report(c: &Counterexample) -> CounterexampleReport {
    CounterexampleReport {
        inputs: c.inputs.iter().map(render).collect(),
        template: c.template.as_ref().map(render),
        lhs: render_evidence(&c.lhs),
        rhs: render_evidence(&c.rhs),
    }
}

pub fn task_report(name: &str, lhs: &str, rhs: &str, v: &Verdict) -> TaskReport {
    let (status, outcome) = match &v.outcome {
        Outcome::EquivalentUpToBound { tests_run } => (
            Status::Ok,
            OutcomeReport { kind: "equivalent_up_to_bound", tests_run: Some(*tests_run), reason: None, counterexample: None },
        ),
        Outcome::Counterexample(c) => (
            Status::Failed,
            OutcomeReport {
                kind: "counterexample",
                tests_run: None,
                reason: None,
                counterexample: Some(counterexample_report(c)),
            },
        ),
        Outcome::Inconclusive { reason } => (
            Status::Inconclusive,
            OutcomeReport { kind: "inconclusive", tests_run: None, reason: Some(reason.clone()), counterexample: None },
        ),
        Outcome::Skipped { reason } => (
            Status::Inconclusive,
            OutcomeReport { kind: "skipped", tests_run: None, reason: Some(reason.clone()), counterexample: None },
        ),
    };
    TaskReport {
        name: name.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        mode: v.mode,
        status,
        outcome,
        stats: v.stats.clone(),
    }
}

fn aggregate<'a>(tasks: impl IntoIterator<Item = &'a TaskReport>) -> Status {
    tasks.into_iter().fold(Status::Ok, |s, t| s.join(t.status))
}

/// A failure that ends the run with exit code 3.
struct RunError(String);

impl<E: std::fmt::Display> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError(e.to_string())
    }
}

fn load(path: &Path) -> Result<Program, RunError> {
    let src = std::fs::read_to_string(path).map_err(|e| RunError(format!("{}: {e}", path.display())))?;
    parse_program(&src).map_err(|ds| {
        RunError(ds.iter().map(|d| format!("{}:{d}", path.display())).collect::<Vec<_>>().join("\n"))
    })
}

/// Runs the properties of a file, then the specification checks.
pub fn check_program(program: &Program, bounds: &Bounds) -> Result<Vec<TaskReport>, String> {
    let mut tasks = Vec::new();
    for prop in &program.props {
        let task = EquivTask { annotation: prop.annotation, bounds: bounds.clone(), ..EquivTask::new(&prop.lhs, &prop.rhs) };
        let v = check_equiv(program, &task).map_err(|e| format!("{}: {e}", prop.name))?;
        tasks.push(task_report(&prop.name, &prop.lhs, &prop.rhs, &v));
    }
    for op in specified_ops(program) {
        for nv in check_spec(program, &op, bounds).map_err(|e| format!("{op}: {e}"))? {
            let rhs = if nv.name.ends_with("PostCondition") { format!("{op}'post") } else { format!("{op}'spec") };
            tasks.push(task_report(&nv.name, &op, &rhs, &nv.verdict));
        }
    }
    Ok(tasks)
}

fn execute(cli: Cli) -> Result<(Report, RunConfig), RunError> {
    match cli.command {
        Command::Eval { file, expr, opts } => {
            let cfg = RunConfig::new(CommandKind::Eval, vec![file.clone()], &opts);
            let program = load(&file)?;
            let e = parse_expr(&program, &expr).map_err(|ds| {
                RunError(ds.iter().map(|d| format!("<expr>:{d}")).collect::<Vec<_>>().join("\n"))
            })?;
            let r = Evaluator::new(&program, &cfg.bounds.eval)?.eval_values(&e)?;
            let values: Vec<PartialValue> = r.outcomes.into_iter().collect();
            let status = if r.complete { Status::Ok } else { Status::Inconclusive };
            let mut report = Report::new("eval", status);
            report.eval =
                Some(EvalReport { expr, values: values.iter().map(render).collect(), complete: r.complete });
            Ok((report, cfg))
        }
        Command::Analyze { file, opts } => {
            let cfg = RunConfig::new(CommandKind::Analyze, vec![file.clone()], &opts);
            let program = load(&file)?;
            let mut report = Report::new("analyze", Status::Ok);
            report.analysis = Some(Analyzer::new(&program).analyze_all());
            Ok((report, cfg))
        }
        Command::Check { file, opts } => {
            let cfg = RunConfig::new(CommandKind::Check, vec![file.clone()], &opts);
            let program = load(&file)?;
            let tasks = check_program(&program, &cfg.bounds).map_err(RunError)?;
            let mut report = Report::new("check", aggregate(&tasks));
            report.tasks = Some(tasks);
            Ok((report, cfg))
        }
        Command::Equiv { file, lhs, rhs, mode, annotation, opts } => {
            let cfg = RunConfig::new(CommandKind::Equiv, vec![file.clone()], &opts);
            let program = load(&file)?;
            let task = EquivTask {
                annotation: match annotation {
                    None => Annotation::None,
                    Some(AnnotationArg::Terminate) => Annotation::Terminate,
                    Some(AnnotationArg::Productive) => Annotation::Productive,
                },
                mode_override: mode.map(|m| match m {
                    ModeArg::Template => Mode::PartialTemplate,
                    ModeArg::Set => Mode::PartialSet,
                    ModeArg::Ground => Mode::Ground,
                }),
                bounds: cfg.bounds.clone(),
                ..EquivTask::new(&lhs, &rhs)
            };
            let v = check_equiv(&program, &task)?;
            let tasks = vec![task_report(&format!("{lhs}_equiv_{rhs}"), &lhs, &rhs, &v)];
            let mut report = Report::new("equiv", aggregate(&tasks));
            report.tasks = Some(tasks);
            Ok((report, cfg))
        }
        Command::Diff { old, new, old_version, new_version, opts } => {
            let cfg = RunConfig::new(CommandKind::Diff, vec![old.clone(), new.clone()], &opts);
            let vold = parse_version(&old_version)?;
            let vnew = parse_version(&new_version)?;
            let (po, pn) = (load(&old)?, load(&new)?);
            let d = behavior_diff(&po, &pn, &vold, &vnew, &cfg.bounds)?;
            let behavior: Vec<BehaviorReport> = d
                .behavior
                .iter()
                .map(|b| BehaviorReport {
                    op: b.op.clone(),
                    task: b.verdict.as_ref().map(|v| {
                        task_report(&b.property, &format!("M_{}_1", b.op), &format!("M_{}_2", b.op), v)
                    }),
                    note: b.note.clone(),
                })
                .collect();
            let status = if !d.judgment.ok {
                Status::Failed
            } else {
                aggregate(behavior.iter().filter_map(|b| b.task.as_ref()))
            };
            let mut report = Report::new("diff", status);
            report.diff = Some(DiffSection {
                old_version: d.old_version.to_string(),
                new_version: d.new_version.to_string(),
                api: d.api,
                behavior,
                judgment: d.judgment,
            });
            Ok((report, cfg))
        }
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Failed => "FAILED",
        Status::Inconclusive => "inconclusive",
    }
}

fn write_task(out: &mut String, t: &TaskReport) {
    let head = match t.outcome.kind {
        "equivalent_up_to_bound" => format!("equivalent up to bound ({} tests)", t.outcome.tests_run.unwrap_or(0)),
        "counterexample" => format!("counterexample after {} tests", t.stats.tests),
        "inconclusive" => format!("inconclusive: {}", t.outcome.reason.as_deref().unwrap_or("")),
        _ => format!("skipped: {}", t.outcome.reason.as_deref().unwrap_or("")),
    };
    out.push_str(&format!("{} [{:?}]: {head}\n", t.name, t.mode));
    if let Some(c) = &t.outcome.counterexample {
        if !c.inputs.is_empty() {
            out.push_str(&format!("  arguments: {}\n", c.inputs.join(" ")));
        }
        if let Some(tpl) = &c.template {
            out.push_str(&format!("  template: {tpl}\n"));
        }
        out.push_str(&format!("  {}: {}\n  {}: {}\n", t.lhs, c.lhs, t.rhs, c.rhs));
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(e) = &r.eval {
        out.push_str(&format!("{{{}}}\n", e.values.join(", ")));
        if !e.complete {
            out.push_str("(search incomplete: a budget was exhausted)\n");
        }
        return out;
    }
    if let Some(ops) = &r.analysis {
        for a in ops {
            out.push_str(&format!("{}\n", a.op));
            for (what, v) in [
                ("termination", &a.termination),
                ("productivity", &a.productivity),
                ("deterministic", &a.deterministic),
                ("totally defined", &a.totally_defined),
            ] {
                out.push_str(&format!("  {what}: {:?} ({})\n", v.status, v.reason));
            }
        }
        return out;
    }
    for t in r.tasks.iter().flatten() {
        write_task(&mut out, t);
    }
    if let Some(d) = &r.diff {
        out.push_str(&format!("{} -> {}\n", d.old_version, d.new_version));
        for e in &d.api.entities {
            let status = serde_json::to_value(e.status).ok().and_then(|v| v.as_str().map(str::to_string));
            out.push_str(&format!("  {:?} {}: {}\n", e.kind, e.name, status.unwrap_or_default()));
        }
        for b in &d.behavior {
            match (&b.task, &b.note) {
                (Some(t), _) => write_task(&mut out, t),
                (None, Some(n)) => out.push_str(&format!("{}: not checked ({n})\n", b.op)),
                (None, None) => {}
            }
        }
        for v in &d.judgment.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out.push_str(&format!("judgment: {}\n", if d.judgment.ok { "ok" } else { "violation" }));
    }
    out.push_str(&format!("status: {}\n", status_word(r.status)));
    out
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `argv` (program name first), runs the command and writes the
/// report. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok((report, cfg)) => {
            let text = match cfg.format {
                Format::Json => render_json(&report),
                Format::Text => render_text(&report),
            };
            let _ = out.write_all(text.as_bytes());
            report.status.exit_code()
        }
        Err(RunError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}
