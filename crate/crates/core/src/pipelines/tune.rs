//! Exhaustive grid search over pipeline parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enhance::{
    amplify_residual, complement, convolve, gamma_correct, gaussian_blur, unsharp_kernel, NOISE_BLUR_SIDE,
};
use crate::error::{argument, Result};
use crate::imgcore::{ensure_same_dims, require_gray, ImageBuffer};
use crate::metrics::Reference;

use super::params::{ForwardParams, PipelineParams, ReverseParams};
use super::REVERSE_BLUR_SIDE;

const MAX_GRID_POINTS: usize = 1_000_000;

/// Inclusive `min..=max` sampled every `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let a = Axis { min, max, step };
        a.validate()?;
        Ok(a)
    }

    pub fn single(v: f64) -> Self {
        Axis {
            min: v,
            max: v,
            step: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.step.is_finite()) {
            return argument("grid bounds and step must be finite");
        }
        if !(self.step > 0.0) {
            return argument(format!("grid step must be > 0, got {}", self.step));
        }
        if self.min > self.max {
            return argument(format!("grid min {} exceeds max {}", self.min, self.max));
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    /// Sample values, rounded to 1e-9 so that e.g. `0.15 + 11 * 0.01` is
    /// exactly `0.26`.
    pub fn values(&self) -> Vec<f64> {
        (0..self.count())
            .map(|i| ((self.min + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardGrid {
    pub alpha: Axis,
    pub gamma: Axis,
    pub beta: Axis,
    /// Allow values outside the standard parameter ranges.
    #[serde(default)]
    pub override_ranges: bool,
}

impl Default for ForwardGrid {
    fn default() -> Self {
        let (a, g, b) = (ForwardParams::ALPHA_RANGE, ForwardParams::GAMMA_RANGE, ForwardParams::BETA_RANGE);
        ForwardGrid {
            alpha: Axis {
                min: a.0,
                max: a.1,
                step: 0.05,
            },
            gamma: Axis {
                min: g.0,
                max: g.1,
                step: 0.01,
            },
            beta: Axis {
                min: b.0,
                max: b.1,
                step: 0.05,
            },
            override_ranges: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReverseGrid {
    pub gamma: Axis,
    #[serde(default)]
    pub override_ranges: bool,
}

impl Default for ReverseGrid {
    fn default() -> Self {
        let g = ReverseParams::GAMMA_RANGE;
        ReverseGrid {
            gamma: Axis {
                min: g.0,
                max: g.1,
                step: 0.05,
            },
            override_ranges: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GridSpec {
    Forward(ForwardGrid),
    Reverse(ReverseGrid),
}

impl GridSpec {
    pub fn direction(&self) -> Direction {
        match self {
            GridSpec::Forward(_) => Direction::Forward,
            GridSpec::Reverse(_) => Direction::Reverse,
        }
    }

    pub fn default_for(direction: Direction) -> Self {
        match direction {
            Direction::Forward => GridSpec::Forward(ForwardGrid::default()),
            Direction::Reverse => GridSpec::Reverse(ReverseGrid::default()),
        }
    }

    /// Every grid point in lexicographic order, validated.
    pub fn points(&self) -> Result<Vec<PipelineParams>> {
        let pts = match self {
            GridSpec::Forward(g) => {
                for a in [&g.alpha, &g.gamma, &g.beta] {
                    a.validate()?;
                }
                let total = g.alpha.count().saturating_mul(g.gamma.count()).saturating_mul(g.beta.count());
                if total > MAX_GRID_POINTS {
                    return argument(format!("grid has {total} points, limit is {MAX_GRID_POINTS}"));
                }
                let mut pts = Vec::with_capacity(total);
                for &alpha in &g.alpha.values() {
                    for &gamma in &g.gamma.values() {
                        for &beta in &g.beta.values() {
                            let p = ForwardParams { alpha, gamma, beta };
                            p.validate(g.override_ranges)?;
                            pts.push(PipelineParams::Forward(p));
                        }
                    }
                }
                pts
            }
            GridSpec::Reverse(g) => {
                g.gamma.validate()?;
                if g.gamma.count() > MAX_GRID_POINTS {
                    return argument(format!("grid has {} points, limit is {MAX_GRID_POINTS}", g.gamma.count()));
                }
                let mut pts = Vec::new();
                for &gamma in &g.gamma.values() {
                    let p = ReverseParams { gamma };
                    p.validate(g.override_ranges)?;
                    pts.push(PipelineParams::Reverse(p));
                }
                pts
            }
        };
        Ok(pts)
    }
}

/// One scored grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub params: PipelineParams,
    pub ssim: f64,
    pub nmi: f64,
    pub blended: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneResult {
    pub direction: Direction,
    pub grid: GridSpec,
    pub w: f64,
    pub best: Evaluation,
    /// Every evaluated point, in grid order.
    pub log: Vec<Evaluation>,
}

impl TuneResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

fn evaluate(reference: &Reference, out: &ImageBuffer, params: PipelineParams, w: f64) -> Result<Evaluation> {
    let r = reference.score(out, w)?;
    Ok(Evaluation {
        params,
        ssim: r.ssim,
        nmi: r.nmi,
        blended: r.blended,
    })
}

/// Scores `pipeline(src, p)` against `target` for every grid point and keeps
/// the first maximum in grid order.
///
/// Forward evaluations share the unsharp/gamma/complement prefix and its blur
/// across all `beta` values; the outputs are the same as calling
/// [`super::forward_pipeline`] per point.
pub fn tune(src: &ImageBuffer, target: &ImageBuffer, grid: &GridSpec, w: f64) -> Result<TuneResult> {
    require_gray(src)?;
    require_gray(target)?;
    ensure_same_dims(src, target)?;
    if !(0.0..=1.0).contains(&w) {
        return argument(format!("blend weight w must lie in [0, 1], got {w}"));
    }
    let points = grid.points()?;
    if points.is_empty() {
        return argument("empty parameter grid");
    }
    let reference = Reference::new(target)?;

    let log: Vec<Evaluation> = match grid {
        GridSpec::Forward(g) => {
            let alphas = g.alpha.values();
            let gammas = g.gamma.values();
            let betas = g.beta.values();
            let prefixes: Vec<(f64, f64)> = alphas
                .iter()
                .flat_map(|&a| gammas.iter().map(move |&c| (a, c)))
                .collect();
            let chunks = prefixes
                .par_iter()
                .map(|&(alpha, gamma)| {
                    let sharpened = convolve(src, &unsharp_kernel(alpha)?)?;
                    let inverted = complement(&gamma_correct(&sharpened, gamma)?)?;
                    let blurred = gaussian_blur(&inverted, NOISE_BLUR_SIDE)?;
                    betas
                        .iter()
                        .map(|&beta| {
                            let out = amplify_residual(&inverted, &blurred, beta);
                            evaluate(&reference, &out, PipelineParams::Forward(ForwardParams { alpha, gamma, beta }), w)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            chunks.into_iter().flatten().collect()
        }
        GridSpec::Reverse(g) => {
            let inverted = complement(&gaussian_blur(src, REVERSE_BLUR_SIDE)?)?;
            g.gamma
                .values()
                .par_iter()
                .map(|&gamma| {
                    let out = gamma_correct(&inverted, gamma)?;
                    evaluate(&reference, &out, PipelineParams::Reverse(ReverseParams { gamma }), w)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let mut best = log[0];
    for e in &log[1..] {
        if e.blended > best.blended {
            best = *e;
        }
    }
    Ok(TuneResult {
        direction: grid.direction(),
        grid: *grid,
        w,
        best,
        log,
    })
}
