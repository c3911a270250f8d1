use serde::Serialize;

use crate::enhance::median_filter;
use crate::error::{argument, Result};
use crate::imgcore::{require_gray, ImageBuffer};

use super::canny::sobel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corner {
    pub x: usize,
    pub y: usize,
    pub response: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerSet {
    pub points: Vec<Corner>,
    pub response_max: f64,
}

/// Corner response map `R = det(M) - k trace(M)^2`, where `M` sums the
/// Sobel gradient products over a 3x3 window. Row-major, same size as `img`.
pub fn harris_response(img: &ImageBuffer, k: f64, median_side: usize) -> Result<Vec<f64>> {
    require_gray(img)?;
    if !(k > 0.0) || !k.is_finite() {
        return argument(format!("harris k must be > 0, got {k}"));
    }
    let filtered = median_filter(img, median_side)?;
    let g = sobel(&filtered);
    let (w, h) = filtered.dims();
    let xx: Vec<f64> = g.gx.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = g.gy.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = g.gx.iter().zip(&g.gy).map(|(a, b)| a * b).collect();
    let window = |p: &[f64], x: usize, y: usize| -> f64 {
        let mut s = 0.0;
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                s += p[sy * w + sx];
            }
        }
        s
    };
    let mut r = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let (a, b, c) = (window(&xx, x, y), window(&yy, x, y), window(&xy, x, y));
            let tr = a + b;
            r[y * w + x] = a * b - c * c - k * tr * tr;
        }
    }
    Ok(r)
}

/// Harris corners: responses at least `rel_thresh * R_max` that survive 3x3
/// non-maximum suppression. Plateaus keep their first pixel in raster order.
pub fn harris(img: &ImageBuffer, k: f64, rel_thresh: f64, median_side: usize) -> Result<CornerSet> {
    if !(rel_thresh > 0.0 && rel_thresh < 1.0) {
        return argument(format!("relative threshold must lie in (0, 1), got {rel_thresh}"));
    }
    let r = harris_response(img, k, median_side)?;
    let (w, h) = img.dims();
    let response_max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut points = Vec::new();
    if response_max > 0.0 {
        let cut = rel_thresh * response_max;
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                let v = r[i];
                if v < cut {
                    continue;
                }
                let mut is_max = true;
                'nb: for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                        let j = ny * w + nx;
                        if (j < i && r[j] >= v) || (j > i && r[j] > v) {
                            is_max = false;
                            break 'nb;
                        }
                    }
                }
                if is_max {
                    points.push(Corner { x, y, response: v });
                }
            }
        }
    }
    Ok(CornerSet {
        points,
        response_max,
    })
}
