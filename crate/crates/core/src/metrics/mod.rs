//! Image similarity: SSIM, normalized mutual information and their blend.
//!
//! Scores against a fixed target can be computed repeatedly through
//! [`Reference`], which caches the target's window statistics and entropy;
//! it returns exactly the values of the free functions.

mod nmi;
mod ssim;

use serde::Serialize;

use crate::error::{argument, Result};
use crate::imgcore::{ensure_same_dims, require_gray, ImageBuffer};

pub use nmi::{entropy, joint_entropy, nmi};
pub use ssim::{ssim, ssim_window, SSIM_C1, SSIM_C2, SSIM_SIGMA, SSIM_SIDE};

use nmi::{marginal_entropy, nmi_from_parts};
use ssim::WindowStats;

pub const DEFAULT_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub ssim: f64,
    pub nmi: f64,
    pub blended: f64,
    pub w: f64,
}

fn check_weight(w: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&w) {
        return argument(format!("blend weight w must lie in [0, 1], got {w}"));
    }
    Ok(())
}

/// Blend of SSIM and the rescaled NMI, `w * ssim + (1 - w) * (nmi - 1) / 2`,
/// divided by its value for identical images so that identical inputs score
/// exactly 100 at every `w`, then clamped to `[0, 100]`.
pub fn blend(ssim: f64, nmi: f64, w: f64) -> f64 {
    let raw = w * ssim + (1.0 - w) * (nmi - 1.0) / 2.0;
    let full = w + (1.0 - w) / 2.0;
    (100.0 * raw / full).clamp(0.0, 100.0)
}

pub fn blended_score(a: &ImageBuffer, b: &ImageBuffer, w: f64) -> Result<SimilarityReport> {
    check_weight(w)?;
    let s = ssim(a, b)?;
    let n = nmi(a, b)?;
    Ok(SimilarityReport {
        ssim: s,
        nmi: n,
        blended: blend(s, n, w),
        w,
    })
}

/// Cached statistics of a target image for scoring many candidates.
#[derive(Debug, Clone)]
pub struct Reference {
    target: ImageBuffer,
    stats: WindowStats,
    entropy: f64,
}

impl Reference {
    pub fn new(target: &ImageBuffer) -> Result<Self> {
        require_gray(target)?;
        Ok(Reference {
            target: target.clone(),
            stats: WindowStats::of(target),
            entropy: marginal_entropy(target),
        })
    }

    pub fn target(&self) -> &ImageBuffer {
        &self.target
    }

    /// Same value as `ssim(candidate, target)`.
    pub fn ssim(&self, candidate: &ImageBuffer) -> Result<f64> {
        require_gray(candidate)?;
        ensure_same_dims(candidate, &self.target)?;
        Ok(ssim::ssim_with(candidate, &self.target, &WindowStats::of(candidate), &self.stats))
    }

    /// Same value as `nmi(candidate, target)`.
    pub fn nmi(&self, candidate: &ImageBuffer) -> Result<f64> {
        require_gray(candidate)?;
        ensure_same_dims(candidate, &self.target)?;
        Ok(nmi_from_parts(candidate, &self.target, marginal_entropy(candidate), self.entropy))
    }

    /// Same report as `blended_score(candidate, target, w)`.
    pub fn score(&self, candidate: &ImageBuffer, w: f64) -> Result<SimilarityReport> {
        check_weight(w)?;
        let s = self.ssim(candidate)?;
        let n = self.nmi(candidate)?;
        Ok(SimilarityReport {
            ssim: s,
            nmi: n,
            blended: blend(s, n, w),
            w,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::ColorSpace;

    fn sample(seed: u64) -> ImageBuffer {
        crate::synth::textured_scene(40, 32, seed)
    }

    #[test]
    fn blend_endpoints() {
        assert_eq!(blend(1.0, 2.0, 0.5), 100.0);
        assert_eq!(blend(1.0, 2.0, 0.0), 100.0);
        assert_eq!(blend(0.7, 1.3, 1.0), 70.0);
        assert_eq!(blend(-0.5, 1.0, 1.0), 0.0);
        // w = 0.5: (0.5 * 0.8 + 0.5 * 0.25) / 0.75
        assert!((blend(0.8, 1.5, 0.5) - 70.0).abs() < 1e-12);
    }

    #[test]
    fn identical_images_score_100() {
        let a = sample(1);
        let r = blended_score(&a, &a, 0.5).unwrap();
        assert_eq!(r.ssim, 1.0);
        assert_eq!(r.nmi, 2.0);
        assert_eq!(r.blended, 100.0);
        let r1 = blended_score(&a, &sample(2), 1.0).unwrap();
        assert_eq!(r1.blended, (100.0 * r1.ssim).clamp(0.0, 100.0));
    }

    #[test]
    fn weight_range() {
        let a = sample(1);
        let err = blended_score(&a, &a, 1.5).unwrap_err().to_string();
        assert!(err.contains("[0, 1]"), "{err}");
        assert!(blended_score(&a, &a, -0.1).is_err());
    }

    #[test]
    fn reference_is_bit_identical() {
        let t = sample(3);
        let reference = Reference::new(&t).unwrap();
        for seed in 4..8 {
            let c = sample(seed);
            assert_eq!(reference.score(&c, 0.5).unwrap(), blended_score(&c, &t, 0.5).unwrap());
        }
        let small = ImageBuffer::filled(4, 4, ColorSpace::Gray, 0);
        assert!(reference.score(&small, 0.5).is_err());
    }

    #[test]
    fn json_keys() {
        let r = SimilarityReport {
            ssim: 0.5,
            nmi: 1.5,
            blended: 62.5,
            w: 0.5,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"ssim":0.5,"nmi":1.5,"blended":62.5,"w":0.5}"#
        );
    }
}
