//! Convolution kernels and neighbourhood filters.
//!
//! All filters pad by replicating the border pixel. Convolution is computed as
//! correlation (the kernel is not flipped) in `f64`, then rounded half away
//! from zero and clamped to `[0, 255]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::imgcore::{require_gray, saturate, ColorSpace, ImageBuffer};

/// Square, odd-sided real-valued kernel stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    side: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(side: usize, weights: Vec<f64>) -> Result<Self> {
        if side % 2 == 0 {
            return argument(format!("kernel side must be odd, got {side}"));
        }
        if weights.len() != side * side {
            return argument(format!(
                "{side}x{side} kernel needs {} weights, got {}",
                side * side,
                weights.len()
            ));
        }
        Ok(Kernel { side, weights })
    }

    pub fn identity(side: usize) -> Result<Self> {
        let mut weights = vec![0.0; side * side];
        if let Some(center) = weights.get_mut(side * side / 2) {
            *center = 1.0;
        }
        Kernel::new(side, weights)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn radius(&self) -> usize {
        self.side / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.side + col]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// The fixed 3x3 sharpening kernel: centre 9, all eight neighbours -1.
pub fn sharpen_kernel() -> Kernel {
    let mut w = vec![-1.0; 9];
    w[4] = 9.0;
    Kernel::new(3, w).expect("3x3")
}

const UNSHARP_K1: [f64; 9] = [-1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0];
const UNSHARP_K2: [f64; 9] = [0.0, -1.0, 0.0, -1.0, 5.0, -1.0, 0.0, -1.0, 0.0];

/// Unsharp-mask kernel `(alpha * K1 + K2) / (alpha + 1)`.
///
/// Both `K1` and `K2` sum to one, so the blend does too for every `alpha`.
pub fn unsharp_kernel(alpha: f64) -> Result<Kernel> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return argument(format!("unsharp alpha must be >= 0, got {alpha}"));
    }
    let weights = UNSHARP_K1
        .iter()
        .zip(UNSHARP_K2)
        .map(|(k1, k2)| (alpha * k1 + k2) / (alpha + 1.0))
        .collect();
    Kernel::new(3, weights)
}

/// Standard deviation derived from the aperture when none is given.
pub fn gaussian_sigma(side: usize) -> f64 {
    0.3 * ((side as f64 - 1.0) / 2.0 - 1.0) + 0.8
}

/// Normalized `side x side` Gaussian (outer product of the 1-D profile).
pub fn gaussian_kernel(side: usize) -> Result<Kernel> {
    if side % 2 == 0 {
        return argument(format!("gaussian kernel side must be odd, got {side}"));
    }
    let sigma = gaussian_sigma(side);
    let r = (side / 2) as f64;
    let profile: Vec<f64> = (0..side)
        .map(|i| {
            let d = i as f64 - r;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let norm: f64 = profile.iter().sum();
    let profile: Vec<f64> = profile.iter().map(|v| v / norm).collect();
    let mut weights = Vec::with_capacity(side * side);
    for a in &profile {
        for b in &profile {
            weights.push(a * b);
        }
    }
    let total: f64 = weights.iter().sum();
    Kernel::new(side, weights.into_iter().map(|w| w / total).collect())
}

/// Clamped source indices for every output coordinate and kernel tap.
fn replicate_table(len: usize, radius: usize) -> Vec<usize> {
    let side = 2 * radius + 1;
    let mut table = Vec::with_capacity(len * side);
    for i in 0..len {
        for t in 0..side {
            let s = i as isize + t as isize - radius as isize;
            table.push(s.clamp(0, len as isize - 1) as usize);
        }
    }
    table
}

/// Unrounded correlation of a single-channel image with `k`.
pub(crate) fn correlate_f64(img: &ImageBuffer, k: &Kernel) -> Vec<f64> {
    let (w, h) = img.dims();
    let side = k.side();
    let xs = replicate_table(w, k.radius());
    let ys = replicate_table(h, k.radius());
    let src = img.data();
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let rows = &ys[y * side..(y + 1) * side];
        for (x, slot) in row.iter_mut().enumerate() {
            let cols = &xs[x * side..(x + 1) * side];
            let mut acc = 0.0;
            for (ky, &sy) in rows.iter().enumerate() {
                let line = &src[sy * w..(sy + 1) * w];
                let kw = &k.weights()[ky * side..(ky + 1) * side];
                for (kx, &sx) in cols.iter().enumerate() {
                    acc += kw[kx] * line[sx] as f64;
                }
            }
            *slot = acc;
        }
    });
    out
}

pub fn convolve(img: &ImageBuffer, k: &Kernel) -> Result<ImageBuffer> {
    require_gray(img)?;
    let data = correlate_f64(img, k).into_iter().map(saturate).collect();
    ImageBuffer::new(img.width(), img.height(), ColorSpace::Gray, data)
}

/// Sharpens a Gray image, or each channel of a color image independently.
pub fn sharpen(img: &ImageBuffer) -> Result<ImageBuffer> {
    let k = sharpen_kernel();
    img.per_channel(|plane| convolve(plane, &k))
}

pub fn gaussian_blur(img: &ImageBuffer, side: usize) -> Result<ImageBuffer> {
    require_gray(img)?;
    let k = gaussian_kernel(side)?;
    convolve(img, &k)
}

/// Median of each `side x side` neighbourhood.
///
/// Uses a sliding 256-bin histogram per row, so cost per pixel is linear in
/// `side` rather than quadratic.
pub fn median_filter(img: &ImageBuffer, side: usize) -> Result<ImageBuffer> {
    require_gray(img)?;
    if side % 2 == 0 {
        return argument(format!("median side must be odd, got {side}"));
    }
    let (w, h) = img.dims();
    let r = side / 2;
    let src = img.data();
    let ys = replicate_table(h, r);
    let clamp_x = |x: isize| x.clamp(0, w as isize - 1) as usize;
    let rank = (side * side / 2) as u32;
    let mut out = vec![0u8; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let rows = &ys[y * side..(y + 1) * side];
        let mut hist = [0u32; 256];
        for dx in -(r as isize)..=r as isize {
            let sx = clamp_x(dx);
            for &sy in rows {
                hist[src[sy * w + sx] as usize] += 1;
            }
        }
        for (x, slot) in row.iter_mut().enumerate() {
            if x > 0 {
                let leaving = clamp_x(x as isize - r as isize - 1);
                let entering = clamp_x(x as isize + r as isize);
                for &sy in rows {
                    hist[src[sy * w + leaving] as usize] -= 1;
                    hist[src[sy * w + entering] as usize] += 1;
                }
            }
            let mut seen = 0u32;
            for (v, &count) in hist.iter().enumerate() {
                seen += count;
                if seen > rank {
                    *slot = v as u8;
                    break;
                }
            }
        }
    });
    ImageBuffer::new(w, h, ColorSpace::Gray, out).map_err(|e| Error::InvalidBuffer(e.to_string()))
}
