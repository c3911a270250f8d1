//! Sobel gradients and Canny edge detection.
//!
//! Gradient magnitude is the Euclidean norm of the 3x3 Sobel responses.
//! Non-maximum suppression keeps a pixel when it is strictly larger than its
//! neighbour against the gradient and not smaller than the one along it, so
//! a two-pixel ridge of equal magnitudes thins to one pixel. Hysteresis
//! grows edges from pixels above the upper threshold through 8-connected
//! pixels above the lower one.

use std::collections::VecDeque;

use serde::Serialize;

use crate::enhance::median_filter;
use crate::error::{argument, Error, Result};
use crate::imgcore::{histogram, require_gray, ColorSpace, ImageBuffer};

/// Per-pixel Sobel derivatives. `gy` grows downwards.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
}

impl Gradients {
    pub fn magnitude(&self) -> Vec<f64> {
        self.gx.iter().zip(&self.gy).map(|(x, y)| x.hypot(*y)).collect()
    }
}

/// Sobel derivatives of a single-channel image with replicated borders.
pub fn sobel(img: &ImageBuffer) -> Gradients {
    sobel_channel(img, 0)
}

fn sobel_channel(img: &ImageBuffer, c: usize) -> Gradients {
    let (w, h) = img.dims();
    let px = |x: isize, y: isize| -> f64 {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        img.get(x, y, c) as f64
    };
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            gx[i] = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            gy[i] = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1))
                - (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
        }
    }
    Gradients {
        width: w,
        height: h,
        gx,
        gy,
    }
}

/// Gradients of a three-channel image: at every pixel the channel with the
/// largest magnitude supplies both derivatives.
pub fn sobel_color(img: &ImageBuffer) -> Gradients {
    let per_channel: Vec<Gradients> = (0..3).map(|c| sobel_channel(img, c)).collect();
    let mut out = per_channel[0].clone();
    for i in 0..out.gx.len() {
        let mut best = out.gx[i].hypot(out.gy[i]);
        for g in &per_channel[1..] {
            let m = g.gx[i].hypot(g.gy[i]);
            if m > best {
                best = m;
                out.gx[i] = g.gx[i];
                out.gy[i] = g.gy[i];
            }
        }
    }
    out
}

/// Neighbour offset along the quantised gradient direction.
fn direction_step(gx: f64, gy: f64) -> (isize, isize) {
    let mut angle = gy.atan2(gx).to_degrees();
    if angle < 0.0 {
        angle += 180.0;
    }
    if !(22.5..157.5).contains(&angle) {
        (1, 0)
    } else if angle < 67.5 {
        (1, 1)
    } else if angle < 112.5 {
        (0, 1)
    } else {
        (-1, 1)
    }
}

/// Thin ridges of the gradient magnitude to one pixel.
pub(crate) fn non_max_suppression(g: &Gradients, mag: &[f64]) -> Vec<f64> {
    let (w, h) = (g.width as isize, g.height as isize);
    let at = |x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x >= w || y >= h {
            0.0
        } else {
            mag[(y * w + x) as usize]
        }
    };
    let mut out = vec![0.0; mag.len()];
    for y in 0..h {
        for x in 0..w {
            let i = (y * w + x) as usize;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let (dx, dy) = direction_step(g.gx[i], g.gy[i]);
            if m > at(x - dx, y - dy) && m >= at(x + dx, y + dy) {
                out[i] = m;
            }
        }
    }
    out
}

fn hysteresis(thin: &[f64], w: usize, h: usize, low: f64, high: f64) -> Vec<u8> {
    let mut out = vec![0u8; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m > high {
            out[i] = 255;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if out[j] == 0 && thin[j] > low {
                    out[j] = 255;
                    queue.push_back(j);
                }
            }
        }
    }
    out
}

fn canny_from_gradients(g: &Gradients, low: f64, high: f64) -> Result<ImageBuffer> {
    if !(low >= 0.0) || !(high >= low) {
        return argument(format!("canny thresholds must satisfy 0 <= low <= high, got ({low}, {high})"));
    }
    let mag = g.magnitude();
    let thin = non_max_suppression(g, &mag);
    let data = hysteresis(&thin, g.width, g.height, low, high);
    ImageBuffer::new(g.width, g.height, ColorSpace::Binary, data)
}

/// Canny with fixed thresholds on a Gray image.
pub fn canny(img: &ImageBuffer, low: f64, high: f64) -> Result<ImageBuffer> {
    require_gray(img)?;
    canny_from_gradients(&sobel(img), low, high)
}

/// Canny on a three-channel image using max-magnitude channel merging.
pub fn canny_color(img: &ImageBuffer, low: f64, high: f64) -> Result<ImageBuffer> {
    if img.channels() != 3 {
        return Err(Error::ImageType {
            expected: "three-channel",
            found: img.space(),
        });
    }
    canny_from_gradients(&sobel_color(img), low, high)
}

/// Median intensity, averaging the two middle samples for even counts.
pub fn image_median(img: &ImageBuffer) -> Result<f64> {
    require_gray(img)?;
    let h = histogram(img, 0)?;
    let n = h.total();
    let kth = |k: u64| -> f64 {
        let mut seen = 0;
        for (v, &c) in h.bins().iter().enumerate() {
            seen += c;
            if seen > k {
                return v as f64;
            }
        }
        255.0
    };
    Ok(if n % 2 == 1 {
        kth(n / 2)
    } else {
        (kth(n / 2 - 1) + kth(n / 2)) / 2.0
    })
}

/// Hysteresis thresholds derived from the median intensity `v`:
/// `max(0, (1 - sigma) v)` and `min(255, (1 + sigma) v)`.
pub fn canny_thresholds(median: f64, sigma: f64) -> (f64, f64) {
    (
        ((1.0 - sigma) * median).max(0.0),
        ((1.0 + sigma) * median).min(255.0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveThresholds {
    pub median: f64,
    pub lower: f64,
    pub upper: f64,
}

fn prefilter_and_thresholds(
    img: &ImageBuffer,
    sigma: f64,
    median_side: usize,
) -> Result<(ImageBuffer, AdaptiveThresholds)> {
    require_gray(img)?;
    if !(0.0..=1.0).contains(&sigma) {
        return argument(format!("canny sigma must lie in [0, 1], got {sigma}"));
    }
    let filtered = median_filter(img, median_side)?;
    let median = image_median(&filtered)?;
    let (lower, upper) = canny_thresholds(median, sigma);
    Ok((
        filtered,
        AdaptiveThresholds {
            median,
            lower,
            upper,
        },
    ))
}

/// Thresholds [`canny_adaptive`] would use on `img`.
pub fn adaptive_thresholds(img: &ImageBuffer, sigma: f64, median_side: usize) -> Result<AdaptiveThresholds> {
    prefilter_and_thresholds(img, sigma, median_side).map(|(_, t)| t)
}

/// Median prefilter followed by Canny with median-derived thresholds.
pub fn canny_adaptive(img: &ImageBuffer, sigma: f64, median_side: usize) -> Result<ImageBuffer> {
    let (filtered, t) = prefilter_and_thresholds(img, sigma, median_side)?;
    canny(&filtered, t.lower, t.upper)
}
