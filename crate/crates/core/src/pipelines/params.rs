use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};

/// Closed interval check with a little slack for grid arithmetic.
fn within(name: &str, v: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if !v.is_finite() || v < lo - 1e-9 || v > hi + 1e-9 {
        return argument(format!("{name} must lie in [{lo}, {hi}], got {v}"));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return argument(format!("{name} must be > 0, got {v}"));
    }
    Ok(())
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return argument(format!("{name} must be >= 0, got {v}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardParams {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl ForwardParams {
    pub const ALPHA_RANGE: (f64, f64) = (0.05, 0.5);
    pub const GAMMA_RANGE: (f64, f64) = (0.15, 0.35);
    pub const BETA_RANGE: (f64, f64) = (1.6, 2.1);

    /// Parameters inside the standard ranges.
    pub fn new(alpha: f64, gamma: f64, beta: f64) -> Result<Self> {
        let p = ForwardParams { alpha, gamma, beta };
        p.validate(false)?;
        Ok(p)
    }

    /// With `override_ranges` only the operations' own domains are enforced
    /// (alpha >= 0, gamma > 0, beta >= 0).
    pub fn validate(&self, override_ranges: bool) -> Result<()> {
        if override_ranges {
            non_negative("alpha", self.alpha)?;
            positive("gamma", self.gamma)?;
            non_negative("beta", self.beta)
        } else {
            within("alpha", self.alpha, Self::ALPHA_RANGE)?;
            within("gamma", self.gamma, Self::GAMMA_RANGE)?;
            within("beta", self.beta, Self::BETA_RANGE)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReverseParams {
    pub gamma: f64,
}

impl ReverseParams {
    pub const GAMMA_RANGE: (f64, f64) = (2.5, 5.0);

    pub fn new(gamma: f64) -> Result<Self> {
        let p = ReverseParams { gamma };
        p.validate(false)?;
        Ok(p)
    }

    pub fn validate(&self, override_ranges: bool) -> Result<()> {
        if override_ranges {
            positive("gamma", self.gamma)
        } else {
            within("gamma", self.gamma, Self::GAMMA_RANGE)
        }
    }
}

/// Either pipeline's parameters; serialized as the bare parameter object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PipelineParams {
    Forward(ForwardParams),
    Reverse(ReverseParams),
}
