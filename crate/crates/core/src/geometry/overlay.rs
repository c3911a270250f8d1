//! Pure red annotations drawn on an RGB copy of an image.

use crate::error::Result;
use crate::imgcore::{convert_color, ensure_same_dims, require_binary, ColorSpace, ImageBuffer};

use super::circles::Circle;
use super::hough::Line;

pub const OVERLAY_RED: [u8; 3] = [255, 0, 0];

pub fn to_rgb(img: &ImageBuffer) -> Result<ImageBuffer> {
    match img.space() {
        ColorSpace::Binary => convert_color(&convert_color(img, ColorSpace::Gray)?, ColorSpace::Rgb),
        ColorSpace::Hsv | ColorSpace::YCrCb => convert_color(&convert_color(img, ColorSpace::Bgr)?, ColorSpace::Rgb),
        _ => convert_color(img, ColorSpace::Rgb),
    }
}

fn paint(img: &mut ImageBuffer, x: usize, y: usize) {
    for (c, v) in OVERLAY_RED.into_iter().enumerate() {
        img.set(x, y, c, v);
    }
}

fn paint_where(img: &ImageBuffer, hit: impl Fn(usize, usize) -> bool) -> Result<ImageBuffer> {
    let mut out = to_rgb(img)?;
    let (w, h) = out.dims();
    for y in 0..h {
        for x in 0..w {
            if hit(x, y) {
                paint(&mut out, x, y);
            }
        }
    }
    Ok(out)
}

pub fn overlay_mask(img: &ImageBuffer, mask: &ImageBuffer) -> Result<ImageBuffer> {
    require_binary(mask)?;
    ensure_same_dims(img, mask)?;
    paint_where(img, |x, y| mask.get(x, y, 0) != 0)
}

/// Pixels within half a pixel of any line.
pub fn overlay_lines(img: &ImageBuffer, lines: &[Line]) -> Result<ImageBuffer> {
    let trig: Vec<(f64, f64, f64)> = lines.iter().map(|l| (l.theta.cos(), l.theta.sin(), l.rho)).collect();
    paint_where(img, |x, y| {
        trig.iter()
            .any(|&(c, s, rho)| (x as f64 * c + y as f64 * s - rho).abs() < 0.5)
    })
}

/// Circle outlines plus a 3x3 mark at each centre.
pub fn overlay_circles(img: &ImageBuffer, circles: &[Circle]) -> Result<ImageBuffer> {
    paint_where(img, |x, y| {
        circles.iter().any(|c| {
            let (dx, dy) = (x as f64 - c.cx, y as f64 - c.cy);
            (dx.hypot(dy) - c.r).abs() < 0.5 || (dx.abs() <= 1.0 && dy.abs() <= 1.0)
        })
    })
}

/// 5x5 squares centred on each point.
pub fn overlay_points(img: &ImageBuffer, points: &[(usize, usize)]) -> Result<ImageBuffer> {
    paint_where(img, |x, y| points.iter().any(|&(px, py)| x.abs_diff(px) <= 2 && y.abs_diff(py) <= 2))
}
