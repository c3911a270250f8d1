//! Color-space conversion with BT.601 luma weights.
//!
//! Supported pairs: Gray <-> RGB/BGR, BGR <-> RGB, BGR <-> YCrCb and
//! BGR <-> HSV. HSV hue is stored halved (`0..=179`) so it fits a byte.
//! Binary images may be relabelled as Gray.

use super::buffer::{saturate, ColorSpace, ImageBuffer};
use crate::error::{Error, Result};

const WR: f64 = 0.299;
const WG: f64 = 0.587;
const WB: f64 = 0.114;

const CR_SCALE: f64 = 0.713;
const CB_SCALE: f64 = 0.564;
const CR_TO_R: f64 = 1.403;
const CR_TO_G: f64 = -0.714;
const CB_TO_G: f64 = -0.344;
const CB_TO_B: f64 = 1.773;

#[inline]
fn luma(r: u8, g: u8, b: u8) -> f64 {
    WR * r as f64 + WG * g as f64 + WB * b as f64
}

pub fn convert_color(img: &ImageBuffer, target: ColorSpace) -> Result<ImageBuffer> {
    use ColorSpace::*;
    let source = img.space();
    if source == target {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    let data = match (source, target) {
        (Binary, Gray) => img.data().to_vec(),
        (Gray, Rgb) | (Gray, Bgr) => img.data().iter().flat_map(|&v| [v, v, v]).collect(),
        (Rgb, Gray) => map_gray(img, |p| luma(p[0], p[1], p[2])),
        (Bgr, Gray) => map_gray(img, |p| luma(p[2], p[1], p[0])),
        (Rgb, Bgr) | (Bgr, Rgb) => map3(img, |p| [p[2], p[1], p[0]]),
        (Bgr, YCrCb) => map3(img, |p| bgr_to_ycrcb(p[0], p[1], p[2])),
        (YCrCb, Bgr) => map3(img, |p| ycrcb_to_bgr(p[0], p[1], p[2])),
        (Bgr, Hsv) => map3(img, |p| bgr_to_hsv(p[0], p[1], p[2])),
        (Hsv, Bgr) => map3(img, |p| hsv_to_bgr(p[0], p[1], p[2])),
        (from, to) => return Err(Error::Conversion { from, to }),
    };
    Ok(ImageBuffer::from_parts_unchecked(w, h, target, data))
}

fn map_gray(img: &ImageBuffer, f: impl Fn(&[u8]) -> f64) -> Vec<u8> {
    img.data().chunks_exact(3).map(|p| saturate(f(p))).collect()
}

fn map3(img: &ImageBuffer, f: impl Fn(&[u8]) -> [u8; 3]) -> Vec<u8> {
    img.data().chunks_exact(3).flat_map(f).collect()
}

/// Returns `[Y, Cr, Cb]`.
pub fn bgr_to_ycrcb(b: u8, g: u8, r: u8) -> [u8; 3] {
    let y = luma(r, g, b);
    let cr = (r as f64 - y) * CR_SCALE + 128.0;
    let cb = (b as f64 - y) * CB_SCALE + 128.0;
    [saturate(y), saturate(cr), saturate(cb)]
}

/// Returns `[B, G, R]`.
pub fn ycrcb_to_bgr(y: u8, cr: u8, cb: u8) -> [u8; 3] {
    let y = y as f64;
    let dr = cr as f64 - 128.0;
    let db = cb as f64 - 128.0;
    let r = y + CR_TO_R * dr;
    let g = y + CR_TO_G * dr + CB_TO_G * db;
    let b = y + CB_TO_B * db;
    [saturate(b), saturate(g), saturate(r)]
}

/// Returns `[H/2, S, V]` with H in degrees.
pub fn bgr_to_hsv(b: u8, g: u8, r: u8) -> [u8; 3] {
    let (bf, gf, rf) = (b as f64, g as f64, r as f64);
    let v = bf.max(gf).max(rf);
    let min = bf.min(gf).min(rf);
    let delta = v - min;
    let s = if v > 0.0 { 255.0 * delta / v } else { 0.0 };
    let mut hue = if delta == 0.0 {
        0.0
    } else if v == rf {
        60.0 * (gf - bf) / delta
    } else if v == gf {
        120.0 + 60.0 * (bf - rf) / delta
    } else {
        240.0 + 60.0 * (rf - gf) / delta
    };
    if hue < 0.0 {
        hue += 360.0;
    }
    let mut h = (hue / 2.0).round();
    if h >= 180.0 {
        h -= 180.0;
    }
    [h as u8, saturate(s), v as u8]
}

/// Inverse of [`bgr_to_hsv`]. Returns `[B, G, R]`.
pub fn hsv_to_bgr(h: u8, s: u8, v: u8) -> [u8; 3] {
    let v = v as f64;
    let s = s as f64 / 255.0;
    let hue = (h as f64 * 2.0) % 360.0;
    let c = v * s;
    let sector = hue / 60.0;
    let x = c * (1.0 - (sector % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match sector as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [saturate(b + m), saturate(g + m), saturate(r + m)]
}
