//! Rotation about the image centre with cubic B-spline interpolation.
//!
//! Each plane is first converted to B-spline coefficients (recursive filter
//! with pole `sqrt(3) - 2`, mirror boundary), then sampled at the inverse-
//! rotated positions. Multiples of 90 degrees use an exact index remap.

use rayon::prelude::*;

use crate::error::Result;
use crate::imgcore::{saturate, ColorSpace, ImageBuffer};

const POLE: f64 = -0.267_949_192_431_122_7;

fn mirror(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut k = i.rem_euclid(period);
    if k >= n as isize {
        k = period - k;
    }
    k as usize
}

/// In-place 1-D B-spline prefilter over `c`.
fn prefilter_line(c: &mut [f64]) {
    let n = c.len();
    if n < 2 {
        return;
    }
    let z = POLE;
    let gain = (1.0 - z) * (1.0 - 1.0 / z);
    for v in c.iter_mut() {
        *v *= gain;
    }
    // causal initialisation for mirror-symmetric extension
    let horizon = ((1e-12f64).ln() / z.abs().ln()).ceil() as usize;
    c[0] = if horizon < n {
        let mut zn = z;
        let mut sum = c[0];
        for v in c.iter().take(horizon).skip(1) {
            sum += zn * v;
            zn *= z;
        }
        sum
    } else {
        let iz = 1.0 / z;
        let mut zn = z;
        let mut z2n = z.powi(n as i32 - 1);
        let mut sum = c[0] + z2n * c[n - 1];
        z2n *= z2n * iz;
        for v in c.iter().take(n - 1).skip(1) {
            sum += (zn + z2n) * v;
            zn *= z;
            z2n *= iz;
        }
        sum / (1.0 - zn * zn)
    };
    for k in 1..n {
        c[k] += z * c[k - 1];
    }
    c[n - 1] = (z / (z * z - 1.0)) * (z * c[n - 2] + c[n - 1]);
    for k in (0..n - 1).rev() {
        c[k] = z * (c[k + 1] - c[k]);
    }
}

fn coefficients(img: &ImageBuffer, ch: usize) -> Vec<f64> {
    let (w, h) = img.dims();
    let mut c: Vec<f64> = (0..w * h).map(|i| img.data()[i * img.channels() + ch] as f64).collect();
    c.par_chunks_mut(w).for_each(prefilter_line);
    let mut col = vec![0.0; h];
    for x in 0..w {
        for y in 0..h {
            col[y] = c[y * w + x];
        }
        prefilter_line(&mut col);
        for y in 0..h {
            c[y * w + x] = col[y];
        }
    }
    c
}

fn bspline_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    let u = 1.0 - t;
    [
        u * u * u / 6.0,
        (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0,
        (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0,
        t3 / 6.0,
    ]
}

fn sample(c: &[f64], w: usize, h: usize, x: f64, y: f64) -> f64 {
    let (fx, fy) = (x.floor(), y.floor());
    let (wx, wy) = (bspline_weights(x - fx), bspline_weights(y - fy));
    let (ix, iy) = (fx as isize - 1, fy as isize - 1);
    let mut s = 0.0;
    for (j, wyj) in wy.iter().enumerate() {
        let row = mirror(iy + j as isize, h) * w;
        for (i, wxi) in wx.iter().enumerate() {
            s += wyj * wxi * c[row + mirror(ix + i as isize, w)];
        }
    }
    s
}

fn quarter_turns(img: &ImageBuffer, turns: usize) -> ImageBuffer {
    let (w, h) = img.dims();
    let ch = img.channels();
    let (ow, oh) = if turns % 2 == 1 { (h, w) } else { (w, h) };
    let mut out = Vec::with_capacity(ow * oh * ch);
    for yo in 0..oh {
        for xo in 0..ow {
            let (sx, sy) = match turns {
                0 => (xo, yo),
                1 => (w - 1 - yo, xo),
                2 => (w - 1 - xo, h - 1 - yo),
                _ => (yo, h - 1 - xo),
            };
            out.extend_from_slice(img.pixel(sx, sy));
        }
    }
    ImageBuffer::from_parts_unchecked(ow, oh, img.space(), out)
}

/// Rotates counter-clockwise by `angle` degrees about the centre. The output
/// canvas grows to hold the rotated extent and source-less pixels are 0.
/// Binary images are interpolated as gray and re-thresholded at 128.
pub fn rotate(img: &ImageBuffer, angle: f64) -> Result<ImageBuffer> {
    let a = angle.rem_euclid(360.0);
    let q = (a / 90.0).round();
    if (a - q * 90.0).abs() < 1e-9 {
        return Ok(quarter_turns(img, q as usize % 4));
    }
    let (w, h) = img.dims();
    let (s, c) = a.to_radians().sin_cos();
    let ow = ((w as f64 * c.abs() + h as f64 * s.abs()) + 0.5).floor().max(1.0) as usize;
    let oh = ((w as f64 * s.abs() + h as f64 * c.abs()) + 0.5).floor().max(1.0) as usize;
    let (icx, icy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (ocx, ocy) = ((ow as f64 - 1.0) / 2.0, (oh as f64 - 1.0) / 2.0);
    let ch = img.channels();
    let planes: Vec<Vec<f64>> = (0..ch).map(|k| coefficients(img, k)).collect();
    let eps = 1e-6;
    let mut out = vec![0u8; ow * oh * ch];
    out.par_chunks_mut(ow * ch).enumerate().for_each(|(yo, row)| {
        let dy = yo as f64 - ocy;
        for xo in 0..ow {
            let dx = xo as f64 - ocx;
            let sx = icx + dx * c - dy * s;
            let sy = icy + dx * s + dy * c;
            if sx < -eps || sy < -eps || sx > w as f64 - 1.0 + eps || sy > h as f64 - 1.0 + eps {
                continue;
            }
            for (k, p) in planes.iter().enumerate() {
                row[xo * ch + k] = saturate(sample(p, w, h, sx, sy));
            }
        }
    });
    if img.space() == ColorSpace::Binary {
        for v in out.iter_mut() {
            *v = if *v >= 128 { 255 } else { 0 };
        }
    }
    Ok(ImageBuffer::from_parts_unchecked(ow, oh, img.space(), out))
}
