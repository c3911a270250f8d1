//! Per-command parameters. Each struct is filled either from command-line
//! flags or from the keys of a config file, with the same defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spimg_core::geometry::{CueConfig, WindowConfig};
use spimg_core::metrics::DEFAULT_WEIGHT;
use spimg_core::pipelines::{Axis, Direction};

fn default_w() -> f64 {
    DEFAULT_WEIGHT
}
fn default_sigma() -> f64 {
    0.5
}
fn default_median() -> usize {
    5
}
fn default_preset() -> String {
    "paper8".into()
}
fn default_size() -> usize {
    5
}
fn default_alpha() -> f64 {
    0.45
}
fn default_forward_gamma() -> f64 {
    0.26
}
fn default_beta() -> f64 {
    1.8
}
fn default_reverse_gamma() -> f64 {
    4.05
}
fn default_one() -> f64 {
    1.0
}
fn default_line_votes() -> u32 {
    100
}
fn default_r_min() -> usize {
    25
}
fn default_r_max() -> usize {
    33
}
fn default_circle_votes() -> u32 {
    500
}
fn default_k() -> f64 {
    0.04
}
fn default_rel() -> f64 {
    0.01
}
fn default_direction() -> DirectionArg {
    DirectionArg::Forward
}

/// `min:max:step`, or a single value.
fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    let axis = match parts.as_slice() {
        [v] => Axis::single(num(v)?),
        [lo, hi, step] => Axis {
            min: num(lo)?,
            max: num(hi)?,
            step: num(step)?,
        },
        _ => return Err(format!("expected MIN:MAX:STEP or a single value, got `{s}`")),
    };
    axis.validate().map_err(|e| e.to_string())?;
    Ok(axis)
}

#[derive(Debug, Parser)]
#[command(name = "spimg", version, about = "Deterministic spatial image processing")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Stepwise intensity quantization (posterization).
    Quantize(QuantizeArgs),
    /// Histogram equalization per RGB channel or on the YCrCb luma plane.
    Equalize(EqualizeArgs),
    /// Raise the HSV value channel.
    Brighten(BrightenArgs),
    /// 3x3 sharpening.
    Sharpen(SharpenArgs),
    /// Gaussian or median smoothing.
    Filter(FilterArgs),
    #[command(subcommand)]
    Pipeline(PipelineCommand),
    #[command(subcommand)]
    Features(FeaturesCommand),
    #[command(subcommand)]
    Cue(CueCommand),
    /// SSIM, NMI and blended score of two images.
    Compare(CompareArgs),
    /// Execute the command described by a TOML config file.
    Run(RunArgs),
}

/// Enhancement pipelines and their parameter search.
#[derive(Debug, Subcommand)]
pub enum PipelineCommand {
    Forward(ForwardArgs),
    Reverse(ReverseArgs),
    Tune(TuneArgs),
}

/// Edge, line, circle, corner and window detection.
#[derive(Debug, Subcommand)]
pub enum FeaturesCommand {
    Edges(EdgesArgs),
    Lines(LinesArgs),
    Circles(CirclesArgs),
    Corners(CornersArgs),
    Windows(WindowsArgs),
}

/// Billiard cue angle, alignment and isolation.
#[derive(Debug, Subcommand)]
pub enum CueCommand {
    Angle(CueAngleArgs),
    Align(CueArgs),
    Isolate(CueArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Builtin threshold/value table; ignored when --thresholds is given.
    #[arg(long, default_value = "paper8")]
    #[serde(default = "default_preset")]
    pub preset: String,
    /// Custom upper bounds, comma separated.
    #[arg(long, value_delimiter = ',', requires = "values")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<u8>>,
    /// Custom output levels, one more than the thresholds.
    #[arg(long, value_delimiter = ',', requires = "thresholds")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualizeMode {
    Rgb,
    Ycrcb,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualizeArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub mode: EqualizeMode,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrightenArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Amount added to the value channel.
    #[arg(long)]
    pub v: u8,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpenArgs {
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Gaussian,
    Median,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub kind: FilterKind,
    /// Odd aperture side.
    #[arg(long, default_value_t = default_size())]
    #[serde(default = "default_size")]
    pub size: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = default_alpha())]
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[arg(long, default_value_t = default_forward_gamma())]
    #[serde(default = "default_forward_gamma")]
    pub gamma: f64,
    #[arg(long, default_value_t = default_beta())]
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Accept parameters outside the standard ranges.
    #[arg(long)]
    #[serde(default)]
    pub override_ranges: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReverseArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = default_reverse_gamma())]
    #[serde(default = "default_reverse_gamma")]
    pub gamma: f64,
    #[arg(long)]
    #[serde(default)]
    pub override_ranges: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneArgs {
    /// Image fed through the pipeline.
    pub input: PathBuf,
    /// Image the pipeline output is scored against.
    pub target: PathBuf,
    #[arg(long, value_enum, default_value = "forward")]
    #[serde(default = "default_direction")]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = default_w())]
    #[serde(default = "default_w")]
    pub w: f64,
    /// Grid axis as MIN:MAX:STEP (forward only).
    #[arg(long, value_parser = parse_axis)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Axis>,
    /// Grid axis as MIN:MAX:STEP.
    #[arg(long, value_parser = parse_axis)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Axis>,
    /// Grid axis as MIN:MAX:STEP (forward only).
    #[arg(long, value_parser = parse_axis)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Axis>,
    #[arg(long)]
    #[serde(default)]
    pub override_ranges: bool,
    /// Write the pipeline output at the best grid point here.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// clap-facing mirror of [`Direction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Forward,
    Reverse,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Reverse => Direction::Reverse,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgesArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Spread of the median-derived hysteresis thresholds.
    #[arg(long, default_value_t = default_sigma())]
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[arg(long, default_value_t = default_median())]
    #[serde(default = "default_median")]
    pub median_size: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinesArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = default_sigma())]
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[arg(long, default_value_t = default_median())]
    #[serde(default = "default_median")]
    pub median_size: usize,
    #[arg(long, default_value_t = default_line_votes())]
    #[serde(default = "default_line_votes")]
    pub votes: u32,
    #[arg(long, default_value_t = default_one())]
    #[serde(default = "default_one")]
    pub rho_res: f64,
    /// Degrees.
    #[arg(long, default_value_t = default_one())]
    #[serde(default = "default_one")]
    pub theta_res: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirclesArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = default_r_min())]
    #[serde(default = "default_r_min")]
    pub r_min: usize,
    #[arg(long, default_value_t = default_r_max())]
    #[serde(default = "default_r_max")]
    pub r_max: usize,
    #[arg(long, default_value_t = default_circle_votes())]
    #[serde(default = "default_circle_votes")]
    pub votes: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornersArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value_t = default_k())]
    #[serde(default = "default_k")]
    pub k: f64,
    /// Keep responses at least this fraction of the maximum.
    #[arg(long, default_value_t = default_rel())]
    #[serde(default = "default_rel")]
    pub rel: f64,
    #[arg(long, default_value_t = default_median())]
    #[serde(default = "default_median")]
    pub median_size: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowsArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Also save the binary window mask.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<PathBuf>,
    /// Height/width ratio above which a region counts as a door.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub door_ratio: Option<f64>,
    /// Full settings; only settable from a config file.
    #[arg(skip)]
    #[serde(default)]
    pub settings: WindowConfig,
}

/// Flag overrides for [`CueConfig`]; config files set `[settings]` instead.
#[derive(Debug, Clone, Default, Args)]
pub struct CueOverrides {
    #[arg(long)]
    pub canny_lo: Option<u8>,
    #[arg(long)]
    pub canny_hi: Option<u8>,
    /// Vote threshold of the angle line pass.
    #[arg(long)]
    pub votes: Option<u32>,
    /// Vote threshold of the strip line pass.
    #[arg(long)]
    pub strip_votes: Option<u32>,
}

impl CueOverrides {
    /// Folds the flags into `cfg` and clears them.
    pub fn apply(&mut self, cfg: &mut CueConfig) {
        if let Some(v) = self.canny_lo.take() {
            cfg.canny_lo = v;
        }
        if let Some(v) = self.canny_hi.take() {
            cfg.canny_hi = v;
        }
        if let Some(v) = self.votes.take() {
            cfg.votes = v;
        }
        if let Some(v) = self.strip_votes.take() {
            cfg.strip_votes = v;
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CueAngleArgs {
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub overrides: CueOverrides,
    #[arg(skip)]
    #[serde(default)]
    pub settings: CueConfig,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CueArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub overrides: CueOverrides,
    #[arg(skip)]
    #[serde(default)]
    pub settings: CueConfig,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = default_w())]
    #[serde(default = "default_w")]
    pub w: f64,
}
