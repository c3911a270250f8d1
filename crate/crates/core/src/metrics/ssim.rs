//! Structural similarity over Gaussian-weighted 11x11 windows.
//!
//! Only windows lying fully inside the image contribute. Images smaller than
//! the window use the largest odd side that fits.

use crate::error::Result;
use crate::imgcore::{ensure_same_dims, require_gray, ImageBuffer};

pub const SSIM_SIDE: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Normalised 1-D Gaussian weights for an image of the given size.
pub fn ssim_window(w: usize, h: usize) -> Vec<f64> {
    let mut side = SSIM_SIDE.min(w).min(h);
    if side % 2 == 0 {
        side -= 1;
    }
    let c = (side / 2) as f64;
    let raw: Vec<f64> = (0..side)
        .map(|i| (-((i as f64 - c).powi(2)) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Weighted window sums of `values` at every valid window position.
fn filter_valid(values: &[f64], w: usize, h: usize, g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let (ow, oh) = (w + 1 - n, h + 1 - n);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let src = &values[y * w..(y + 1) * w];
        for x in 0..ow {
            let mut s = 0.0;
            for (k, gk) in g.iter().enumerate() {
                s += gk * src[x + k];
            }
            rows[y * ow + x] = s;
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut s = 0.0;
            for (k, gk) in g.iter().enumerate() {
                s += gk * rows[(y + k) * ow + x];
            }
            out[y * ow + x] = s;
        }
    }
    out
}

/// Per-window mean and variance of one image.
#[derive(Debug, Clone)]
pub(crate) struct WindowStats {
    mean: Vec<f64>,
    var: Vec<f64>,
}

impl WindowStats {
    pub(crate) fn of(img: &ImageBuffer) -> Self {
        let (w, h) = img.dims();
        let g = ssim_window(w, h);
        let v: Vec<f64> = img.data().iter().map(|&p| p as f64).collect();
        let sq: Vec<f64> = img.data().iter().map(|&p| (p as u32 * p as u32) as f64).collect();
        let mean = filter_valid(&v, w, h, &g);
        let ex2 = filter_valid(&sq, w, h, &g);
        let var = ex2.iter().zip(&mean).map(|(e, m)| e - m * m).collect();
        WindowStats { mean, var }
    }
}

/// SSIM given both images' window statistics; the cross term is formed the
/// same way as the variances so that `a == b` yields exactly 1.
pub(crate) fn ssim_with(a: &ImageBuffer, b: &ImageBuffer, sa: &WindowStats, sb: &WindowStats) -> f64 {
    let (w, h) = a.dims();
    let g = ssim_window(w, h);
    let prod: Vec<f64> = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&p, &q)| (p as u32 * q as u32) as f64)
        .collect();
    let exy = filter_valid(&prod, w, h, &g);
    let mut total = 0.0;
    for i in 0..exy.len() {
        let (ma, mb) = (sa.mean[i], sb.mean[i]);
        let cov = exy[i] - ma * mb;
        let num = (2.0 * (ma * mb) + SSIM_C1) * (2.0 * cov + SSIM_C2);
        let den = (ma * ma + mb * mb + SSIM_C1) * (sa.var[i] + sb.var[i] + SSIM_C2);
        total += num / den;
    }
    total / exy.len() as f64
}

pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    require_gray(a)?;
    require_gray(b)?;
    ensure_same_dims(a, b)?;
    Ok(ssim_with(a, b, &WindowStats::of(a), &WindowStats::of(b)))
}
