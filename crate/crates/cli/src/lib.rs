//! Library side of the `spimg` command-line tool.
//!
//! Every subcommand maps onto one `spimg-core` operation. Commands come from
//! argv or from a TOML config file (`spimg run --config FILE`); both paths
//! produce a [`CommandConfig`], which is validated before any image is read.
//!
//! Exit codes: 0 on success (and for `--help`/`--version`), 1 for usage,
//! config and parameter-range errors, 2 for processing errors such as I/O
//! failures or a missing feature.

pub mod args;
mod exec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;
use spimg_core::imgcore::ImageFormat;

use args::*;

/// Bad arguments or configuration; maps to exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// One fully typed command.
#[derive(Debug, Clone)]
pub enum Command {
    Quantize(QuantizeArgs),
    Equalize(EqualizeArgs),
    Brighten(BrightenArgs),
    Sharpen(SharpenArgs),
    Filter(FilterArgs),
    PipelineForward(ForwardArgs),
    PipelineReverse(ReverseArgs),
    PipelineTune(TuneArgs),
    FeaturesEdges(EdgesArgs),
    FeaturesLines(LinesArgs),
    FeaturesCircles(CirclesArgs),
    FeaturesCorners(CornersArgs),
    FeaturesWindows(WindowsArgs),
    CueAngle(CueAngleArgs),
    CueAlign(CueArgs),
    CueIsolate(CueArgs),
    Compare(CompareArgs),
}

/// Names accepted by the `command` key of a config file.
pub const COMMAND_NAMES: [&str; 17] = [
    "quantize",
    "equalize",
    "brighten",
    "sharpen",
    "filter",
    "pipeline-forward",
    "pipeline-reverse",
    "pipeline-tune",
    "features-edges",
    "features-lines",
    "features-circles",
    "features-corners",
    "features-windows",
    "cue-angle",
    "cue-align",
    "cue-isolate",
    "compare",
];

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("plain data")
}

fn from_table<T: DeserializeOwned>(name: &str, table: toml::Table) -> Result<T, UsageError> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| UsageError(format!("command `{name}`: {e}")))
}

impl Command {
    pub fn name(&self) -> &'static str {
        use Command::*;
        match self {
            Quantize(_) => "quantize",
            Equalize(_) => "equalize",
            Brighten(_) => "brighten",
            Sharpen(_) => "sharpen",
            Filter(_) => "filter",
            PipelineForward(_) => "pipeline-forward",
            PipelineReverse(_) => "pipeline-reverse",
            PipelineTune(_) => "pipeline-tune",
            FeaturesEdges(_) => "features-edges",
            FeaturesLines(_) => "features-lines",
            FeaturesCircles(_) => "features-circles",
            FeaturesCorners(_) => "features-corners",
            FeaturesWindows(_) => "features-windows",
            CueAngle(_) => "cue-angle",
            CueAlign(_) => "cue-align",
            CueIsolate(_) => "cue-isolate",
            Compare(_) => "compare",
        }
    }

    /// Parameters as recorded in the report.
    pub fn params(&self) -> serde_json::Value {
        use Command::*;
        match self {
            Quantize(a) => to_json(a),
            Equalize(a) => to_json(a),
            Brighten(a) => to_json(a),
            Sharpen(a) => to_json(a),
            Filter(a) => to_json(a),
            PipelineForward(a) => to_json(a),
            PipelineReverse(a) => to_json(a),
            PipelineTune(a) => to_json(a),
            FeaturesEdges(a) => to_json(a),
            FeaturesLines(a) => to_json(a),
            FeaturesCircles(a) => to_json(a),
            FeaturesCorners(a) => to_json(a),
            FeaturesWindows(a) => to_json(a),
            CueAngle(a) => to_json(a),
            CueAlign(a) | CueIsolate(a) => to_json(a),
            Compare(a) => to_json(a),
        }
    }

    fn from_config(name: &str, table: toml::Table) -> Result<Self, UsageError> {
        use Command::*;
        Ok(match name {
            "quantize" => Quantize(from_table(name, table)?),
            "equalize" => Equalize(from_table(name, table)?),
            "brighten" => Brighten(from_table(name, table)?),
            "sharpen" => Sharpen(from_table(name, table)?),
            "filter" => Filter(from_table(name, table)?),
            "pipeline-forward" => PipelineForward(from_table(name, table)?),
            "pipeline-reverse" => PipelineReverse(from_table(name, table)?),
            "pipeline-tune" => PipelineTune(from_table(name, table)?),
            "features-edges" => FeaturesEdges(from_table(name, table)?),
            "features-lines" => FeaturesLines(from_table(name, table)?),
            "features-circles" => FeaturesCircles(from_table(name, table)?),
            "features-corners" => FeaturesCorners(from_table(name, table)?),
            "features-windows" => FeaturesWindows(from_table(name, table)?),
            "cue-angle" => CueAngle(from_table(name, table)?),
            "cue-align" => CueAlign(from_table(name, table)?),
            "cue-isolate" => CueIsolate(from_table(name, table)?),
            "compare" => Compare(from_table(name, table)?),
            other => {
                return usage(format!(
                    "unknown command `{other}`; expected one of: {}",
                    COMMAND_NAMES.join(", ")
                ))
            }
        })
    }

    fn inputs(&self) -> Vec<(&'static str, &Path)> {
        use Command::*;
        match self {
            Quantize(a) => vec![("input", &a.input)],
            Equalize(a) => vec![("input", &a.input)],
            Brighten(a) => vec![("input", &a.input)],
            Sharpen(a) => vec![("input", &a.input)],
            Filter(a) => vec![("input", &a.input)],
            PipelineForward(a) => vec![("input", &a.input)],
            PipelineReverse(a) => vec![("input", &a.input)],
            PipelineTune(a) => vec![("input", &a.input), ("target", &a.target)],
            FeaturesEdges(a) => vec![("input", &a.input)],
            FeaturesLines(a) => vec![("input", &a.input)],
            FeaturesCircles(a) => vec![("input", &a.input)],
            FeaturesCorners(a) => vec![("input", &a.input)],
            FeaturesWindows(a) => vec![("input", &a.input)],
            CueAngle(a) => vec![("input", &a.input)],
            CueAlign(a) | CueIsolate(a) => vec![("input", &a.input)],
            Compare(a) => vec![("a", &a.a), ("b", &a.b)],
        }
        .into_iter()
        .map(|(k, p)| (k, p.as_path()))
        .collect()
    }

    fn outputs(&self) -> Vec<(&'static str, &Path)> {
        use Command::*;
        let mut out: Vec<(&'static str, &PathBuf)> = match self {
            Quantize(a) => vec![("output", &a.output)],
            Equalize(a) => vec![("output", &a.output)],
            Brighten(a) => vec![("output", &a.output)],
            Sharpen(a) => vec![("output", &a.output)],
            Filter(a) => vec![("output", &a.output)],
            PipelineForward(a) => vec![("output", &a.output)],
            PipelineReverse(a) => vec![("output", &a.output)],
            PipelineTune(a) => a.output.iter().map(|p| ("output", p)).collect(),
            FeaturesEdges(a) => vec![("output", &a.output)],
            FeaturesLines(a) => vec![("output", &a.output)],
            FeaturesCircles(a) => vec![("output", &a.output)],
            FeaturesCorners(a) => vec![("output", &a.output)],
            FeaturesWindows(a) => vec![("output", &a.output)],
            CueAngle(_) | Compare(_) => vec![],
            CueAlign(a) | CueIsolate(a) => vec![("output", &a.output)],
        };
        if let FeaturesWindows(WindowsArgs { mask: Some(m), .. }) = self {
            out.push(("mask", m));
        }
        out.into_iter().map(|(k, p)| (k, p.as_path())).collect()
    }

    /// Checks paths and parameter ranges and folds flag overrides into the
    /// settings records, so that `params()` shows what will actually run.
    pub fn validate(&mut self) -> Result<(), UsageError> {
        for (key, path) in self.inputs() {
            if !path.is_file() {
                return usage(format!("`{key}`: no such file `{}`", path.display()));
            }
            ImageFormat::from_path(path).or_else(|e| usage(format!("`{key}`: {e}")))?;
        }
        for (key, path) in self.outputs() {
            ImageFormat::from_path(path).or_else(|e| usage(format!("`{key}`: {e}")))?;
        }
        exec::validate_params(self)
    }
}

/// A validated command plus where to write its report.
#[derive(Debug, Clone)]
pub struct CommandConfig {
    pub command: Command,
    pub report: Option<PathBuf>,
}

/// Reads a TOML command file.
///
/// Keys: `command` (one of [`COMMAND_NAMES`]), optional `report`, and the
/// command's own parameters at top level (`[settings]` tables for the window
/// and cue commands). Unknown keys are rejected; omitted parameters take the
/// same defaults as the command-line flags. Paths are relative to the current
/// directory.
pub fn parse_config(path: &Path) -> Result<CommandConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config `{}`: {e}", path.display())))?;
    let mut table: toml::Table =
        toml::from_str(&text).map_err(|e| UsageError(format!("config `{}`: {e}", path.display())))?;
    let name = match table.remove("command") {
        Some(toml::Value::String(s)) => s,
        Some(other) => return usage(format!("`command` must be a string, got {}", other.type_str())),
        None => return usage(format!("config `{}`: missing key `command`", path.display())),
    };
    let report = match table.remove("report") {
        Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
        Some(other) => return usage(format!("`report` must be a string, got {}", other.type_str())),
        None => None,
    };
    let mut command = Command::from_config(&name, table)?;
    command.validate()?;
    Ok(CommandConfig { command, report })
}

fn from_cli(cli: Cli) -> Result<CommandConfig, UsageError> {
    use Command as C;
    let command = match cli.command {
        CliCommand::Run(r) => {
            let mut cfg = parse_config(&r.config)?;
            if cli.report.is_some() {
                cfg.report = cli.report;
            }
            return Ok(cfg);
        }
        CliCommand::Quantize(a) => C::Quantize(a),
        CliCommand::Equalize(a) => C::Equalize(a),
        CliCommand::Brighten(a) => C::Brighten(a),
        CliCommand::Sharpen(a) => C::Sharpen(a),
        CliCommand::Filter(a) => C::Filter(a),
        CliCommand::Pipeline(PipelineCommand::Forward(a)) => C::PipelineForward(a),
        CliCommand::Pipeline(PipelineCommand::Reverse(a)) => C::PipelineReverse(a),
        CliCommand::Pipeline(PipelineCommand::Tune(a)) => C::PipelineTune(a),
        CliCommand::Features(FeaturesCommand::Edges(a)) => C::FeaturesEdges(a),
        CliCommand::Features(FeaturesCommand::Lines(a)) => C::FeaturesLines(a),
        CliCommand::Features(FeaturesCommand::Circles(a)) => C::FeaturesCircles(a),
        CliCommand::Features(FeaturesCommand::Corners(a)) => C::FeaturesCorners(a),
        CliCommand::Features(FeaturesCommand::Windows(a)) => C::FeaturesWindows(a),
        CliCommand::Cue(CueCommand::Angle(a)) => C::CueAngle(a),
        CliCommand::Cue(CueCommand::Align(a)) => C::CueAlign(a),
        CliCommand::Cue(CueCommand::Isolate(a)) => C::CueIsolate(a),
        CliCommand::Compare(a) => C::Compare(a),
    };
    let mut command = command;
    command.validate()?;
    Ok(CommandConfig {
        command,
        report: cli.report,
    })
}

/// Runs a validated command and returns the pretty-printed JSON report.
pub fn execute(cfg: &CommandConfig) -> anyhow::Result<String> {
    let result = exec::execute(&cfg.command)?;
    let report = serde_json::json!({
        "command": cfg.command.name(),
        "params": cfg.command.params(),
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    if let Some(path) = &cfg.report {
        std::fs::write(path, &text).map_err(spimg_core::Error::Io)?;
    }
    Ok(text)
}

/// Exit code for an error raised while validating or executing.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<spimg_core::Error>() {
        Some(spimg_core::Error::Argument(_)) => 1,
        _ => 2,
    }
}

/// Parses `argv` (program name first), runs the command, writes the report to
/// `out` and diagnostics to `err`, and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let outcome = from_cli(cli)
        .map_err(anyhow::Error::from)
        .and_then(|cfg| execute(&cfg));
    match outcome {
        Ok(report) => {
            let _ = out.write_all(report.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
