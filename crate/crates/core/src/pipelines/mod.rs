//! Forward and reverse enhancement pipelines, their grid-search tuner and
//! cue alignment.
//!
//! Forward: unsharp mask, gamma, complement, noise amplification.
//! Reverse: 7x7 Gaussian blur, complement, gamma.

mod params;
mod tune;

pub use params::{ForwardParams, PipelineParams, ReverseParams};
pub use tune::{tune, Axis, Direction, Evaluation, ForwardGrid, GridSpec, ReverseGrid, TuneResult};

use crate::enhance::{amplify_noise, complement, convolve, gamma_correct, gaussian_blur, unsharp_kernel};
use crate::error::Result;
use crate::geometry::{estimate_cue_angle, rotate, CueConfig};
use crate::imgcore::{require_gray, ImageBuffer};

pub const REVERSE_BLUR_SIDE: usize = 7;

/// Checks the operations' own parameter domains; range policy is the
/// caller's concern (see [`ForwardParams::validate`]).
pub fn forward_pipeline(img: &ImageBuffer, p: &ForwardParams) -> Result<ImageBuffer> {
    require_gray(img)?;
    p.validate(true)?;
    let sharpened = convolve(img, &unsharp_kernel(p.alpha)?)?;
    let lifted = gamma_correct(&sharpened, p.gamma)?;
    amplify_noise(&complement(&lifted)?, p.beta)
}

pub fn reverse_pipeline(img: &ImageBuffer, p: &ReverseParams) -> Result<ImageBuffer> {
    require_gray(img)?;
    p.validate(true)?;
    let blurred = gaussian_blur(img, REVERSE_BLUR_SIDE)?;
    gamma_correct(&complement(&blurred)?, p.gamma)
}

/// Estimates the cue angle on an RGB table image and rotates by its negative
/// so the cue lies horizontal. Returns the rotated image and the angle.
pub fn cue_align(img: &ImageBuffer, cfg: &CueConfig) -> Result<(ImageBuffer, f64)> {
    cfg.validate()?;
    let angle = estimate_cue_angle(img, cfg.canny_lo, cfg.canny_hi, cfg.votes)?;
    Ok((rotate(img, -angle)?, angle))
}
