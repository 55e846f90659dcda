//! Command dispatch and report generation for the `ssiarch` tool.

mod emit;
mod payload;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

use ssiarch_core::analysis::{check_claims, coverage, derive_in_scope, diff_dependencies, responsibility_stats};
use ssiarch_core::dep_graph::{build_graph, graph_stats, to_dot, to_tsv, Scope};
use ssiarch_core::finding::sort_findings;
use ssiarch_core::lifecycle_sim::{check_trace, parse_scenarios, run_scenario};
use ssiarch_core::model_dsl::{parse_model, pattern_warnings, SystemModel};
use ssiarch_core::{builtin_kb, load_extension, Finding, KnowledgeBase, Severity};

pub use emit::{emit_human, emit_json, emit_markdown};
pub use payload::{
    CoveragePayload, DepsPayload, DiffPayload, GraphPayload, Payload, SimulatePayload, StatsPayload,
    ValidatePayload,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Coverage,
    Deps,
    Graph,
    Simulate,
    Stats,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Coverage => "coverage",
            Command::Deps => "deps",
            Command::Graph => "graph",
            Command::Simulate => "simulate",
            Command::Stats => "stats",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Dot,
    Tsv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Kb,
    Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub model_path: Option<PathBuf>,
    pub kb_extension_paths: Vec<PathBuf>,
    /// `None` picks the command default: dot for `graph`, human otherwise.
    pub output_format: Option<OutputFormat>,
    pub fail_on: Severity,
    pub scope: Option<ScopeArg>,
    pub diff: bool,
    pub scenario_path: Option<PathBuf>,
    /// Disables ANSI styling in human output.
    pub no_color: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            model_path: None,
            kb_extension_paths: Vec::new(),
            output_format: None,
            fail_on: Severity::Error,
            scope: None,
            diff: false,
            scenario_path: None,
            no_color: true,
        }
    }

    pub fn format(&self) -> OutputFormat {
        self.output_format.unwrap_or(match self.command {
            Command::Graph => OutputFormat::Dot,
            _ => OutputFormat::Human,
        })
    }
}

/// Problems that stop a run before a report exists. All map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", .diagnostics.join("\n"))]
    Parse { diagnostics: Vec<String> },
}

impl CliError {
    pub const EXIT_CODE: i32 = 2;

    fn parse(path: &Path, message: impl fmt::Display) -> Self {
        CliError::Parse {
            diagnostics: vec![format!("{}: {message}", path.display())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub findings: Vec<Finding>,
    pub payload: Payload,
}

impl Report {
    pub fn new(command: Command, mut findings: Vec<Finding>, payload: Payload) -> Self {
        sort_findings(&mut findings);
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.as_str().to_string(),
            findings,
            payload,
        }
    }

    /// 1 when any finding reaches `fail_on`, else 0.
    pub fn exit_code(&self, fail_on: Severity) -> i32 {
        i32::from(self.findings.iter().any(|f| f.severity >= fail_on))
    }
}

#[derive(Debug)]
pub struct Run {
    pub report: Report,
    /// Text for stdout in the requested format.
    pub output: String,
    pub exit_code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Built-in knowledge base with the extension files merged in order.
pub fn load_kb(paths: &[PathBuf]) -> Result<KnowledgeBase, CliError> {
    let mut kb = builtin_kb();
    for path in paths {
        let delta = load_extension(&read(path)?).map_err(|e| CliError::parse(path, e))?;
        kb = kb.merge(&delta).map_err(|e| CliError::parse(path, e))?;
    }
    Ok(kb)
}

enum Loaded {
    Model(SystemModel),
    /// Resolution failed; the findings go into the report.
    Rejected(Vec<Finding>),
}

fn load_model(path: &Path, kb: &KnowledgeBase) -> Result<Loaded, CliError> {
    let text = read(path)?;
    match parse_model(&text, kb) {
        Ok(model) => Ok(Loaded::Model(model)),
        Err(findings) if findings.iter().any(Finding::is_syntax) => Err(CliError::Parse {
            diagnostics: findings
                .iter()
                .map(|f| match f.span {
                    Some(s) => format!("{}:{}:{}: {}", path.display(), s.line, s.column, f.message),
                    None => format!("{}: {}", path.display(), f.message),
                })
                .collect(),
        }),
        Err(findings) => Ok(Loaded::Rejected(findings)),
    }
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, command: Command) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Usage(format!("`{command}` requires {flag} PATH")))
}

fn check_format(config: &RunConfig) -> Result<(), CliError> {
    use OutputFormat::*;
    let format = config.format();
    let ok = match config.command {
        Command::Graph => matches!(format, Dot | Tsv),
        Command::Simulate => matches!(format, Human | Json | Markdown | Tsv),
        _ => matches!(format, Human | Json | Markdown),
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "format `{}` is not available for `{}`",
            format.to_possible_value().expect("no skipped variants").get_name(),
            config.command
        )))
    }
}

/// Executes one command and renders its report.
pub fn run(config: &RunConfig) -> Result<Run, CliError> {
    check_format(config)?;
    if config.diff && config.command != Command::Deps {
        return Err(CliError::Usage("--diff only applies to `deps`".into()));
    }
    let kb = load_kb(&config.kb_extension_paths)?;
    let model = match &config.model_path {
        Some(path) => Some(load_model(path, &kb)?),
        None => None,
    };
    let scope = match (config.scope, &model) {
        (Some(ScopeArg::Model), None) => {
            return Err(CliError::Usage("--scope model requires --model PATH".into()));
        }
        (Some(ScopeArg::Model), Some(_)) | (None, Some(_)) => ScopeArg::Model,
        (Some(ScopeArg::Kb), _) | (None, None) => ScopeArg::Kb,
    };
    // every command except validate needs a usable model when one is in scope
    let resolved = match (model, scope, config.command) {
        (Some(Loaded::Rejected(findings)), _, Command::Validate) => {
            let report = Report::new(Command::Validate, findings, Payload::Validate(None));
            return Ok(finish(config, report, None));
        }
        (Some(Loaded::Rejected(findings)), ScopeArg::Model, _) => {
            let report = Report::new(config.command, findings, Payload::Empty);
            return Ok(finish(config, report, None));
        }
        (Some(Loaded::Model(m)), ScopeArg::Model, _) => Some(m),
        (Some(Loaded::Model(m)), ScopeArg::Kb, Command::Validate) => Some(m),
        _ => None,
    };

    let (report, raw) = match config.command {
        Command::Validate => {
            let path = require(&config.model_path, "--model", config.command)?;
            let model = resolved.ok_or_else(|| CliError::Usage(format!("{}: no model", path.display())))?;
            let mut findings = check_claims(&model, &kb);
            findings.extend(pattern_warnings(&model, &kb));
            (Report::new(config.command, findings, Payload::Validate(Some(ValidatePayload::new(&model)))), None)
        }
        Command::Coverage => {
            let report = coverage(&kb, resolved.as_ref());
            let findings = report.findings(&kb);
            (Report::new(config.command, findings, Payload::Coverage(CoveragePayload::new(&report, &kb))), None)
        }
        Command::Deps => {
            if config.diff {
                let diff = diff_dependencies(kb.dependencies(), &derive_in_scope(&kb));
                let findings = diff.findings();
                (Report::new(config.command, findings, Payload::Diff(DiffPayload::new(&diff))), None)
            } else {
                let mut relations = kb.dependencies().clone();
                if let Some(m) = &resolved {
                    for r in m.explicit_relations().iter() {
                        relations.insert(r.clone());
                    }
                }
                (Report::new(config.command, Vec::new(), Payload::Deps(DepsPayload::new(&relations))), None)
            }
        }
        Command::Graph => {
            let graph_scope = if resolved.is_some() { Scope::ModelScoped } else { Scope::KbOnly };
            let graph = build_graph(kb.dependencies(), kb.ownership(), graph_scope, resolved.as_ref())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let raw = match config.format() {
                OutputFormat::Tsv => to_tsv(&graph),
                _ => to_dot(&graph),
            };
            let payload = Payload::Graph(GraphPayload::new(graph_scope, &graph_stats(&graph)));
            (Report::new(config.command, Vec::new(), payload), Some(raw))
        }
        Command::Simulate => {
            let path = require(&config.scenario_path, "--scenario", config.command)?;
            let scenarios = parse_scenarios(&read(path)?).map_err(|e| CliError::parse(path, e))?;
            let mut findings = Vec::new();
            let mut traces = Vec::new();
            for s in &scenarios {
                let trace = run_scenario(s);
                findings.extend(check_trace(&trace, &kb).expect("simulated traces are well-formed"));
                traces.push(trace);
            }
            let raw = (config.format() == OutputFormat::Tsv)
                .then(|| traces.iter().map(|t| t.export()).collect::<Vec<_>>().join("\n"));
            (Report::new(config.command, findings, Payload::Simulate(SimulatePayload::new(&traces))), raw)
        }
        Command::Stats => {
            let stats = responsibility_stats(&kb);
            let findings = stats.findings();
            (Report::new(config.command, findings, Payload::Stats(StatsPayload::new(&stats, &kb))), None)
        }
    };
    Ok(finish(config, report, raw))
}

fn finish(config: &RunConfig, report: Report, raw: Option<String>) -> Run {
    let output = match (raw, config.format()) {
        (Some(raw), _) => raw,
        (None, OutputFormat::Json) => emit_json(&report),
        (None, OutputFormat::Markdown) => emit_markdown(&report),
        (None, _) => emit_human(&report, !config.no_color),
    };
    Run {
        exit_code: report.exit_code(config.fail_on),
        report,
        output,
    }
}
