//! Billiard cue angle estimation and isolation.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::imgcore::{convert_color, ColorSpace, ImageBuffer};

use super::canny::{canny, canny_color};
use super::circles::{hough_circles, Circle};
use super::hough::{hough_lines, Line};
use super::rotate::rotate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CueConfig {
    pub canny_lo: u8,
    pub canny_hi: u8,
    /// Vote threshold of the angle-estimation line pass.
    pub votes: u32,
    pub r_min: usize,
    pub r_max: usize,
    pub circle_votes: u32,
    /// Extra radius painted black around each detected ball.
    pub disk_margin: f64,
    /// Intensities strictly below this are zeroed.
    pub cloth_peak: u8,
    /// Vote threshold of the strip line pass.
    pub strip_votes: u32,
    pub parallel_tol_deg: f64,
    /// Slack in pixels on either side of the strip.
    pub strip_margin: f64,
}

impl Default for CueConfig {
    fn default() -> Self {
        CueConfig {
            canny_lo: 100,
            canny_hi: 200,
            votes: 200,
            r_min: 25,
            r_max: 33,
            circle_votes: 500,
            disk_margin: 2.0,
            cloth_peak: 49,
            strip_votes: 200,
            parallel_tol_deg: 5.0,
            strip_margin: 2.0,
        }
    }
}

impl CueConfig {
    pub fn validate(&self) -> Result<()> {
        if self.canny_lo >= self.canny_hi {
            return argument(format!(
                "canny_lo must be below canny_hi, got {} and {}",
                self.canny_lo, self.canny_hi
            ));
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return argument(format!("ball radii must satisfy 0 < r_min <= r_max, got [{}, {}]", self.r_min, self.r_max));
        }
        if !(self.parallel_tol_deg > 0.0) || !(self.strip_margin >= 0.0) || !(self.disk_margin >= 0.0) {
            return argument("tolerances and margins must be non-negative");
        }
        Ok(())
    }
}

fn require_rgb(img: &ImageBuffer) -> Result<()> {
    if img.space() != ColorSpace::Rgb {
        return Err(Error::ImageType {
            expected: "RGB",
            found: img.space(),
        });
    }
    Ok(())
}

/// Angle in degrees from `90 - mean(theta)` over the lines found by a
/// fixed-threshold colour Canny and a 1 px / 1 degree line transform.
pub fn estimate_cue_angle(img: &ImageBuffer, canny_lo: u8, canny_hi: u8, votes: u32) -> Result<f64> {
    Ok(cue_angle_from_lines(&cue_lines(img, canny_lo, canny_hi, votes)?))
}

fn cue_lines(img: &ImageBuffer, canny_lo: u8, canny_hi: u8, votes: u32) -> Result<Vec<Line>> {
    require_rgb(img)?;
    if canny_lo >= canny_hi {
        return argument(format!("canny_lo must be below canny_hi, got {canny_lo} and {canny_hi}"));
    }
    let edges = canny_color(img, canny_lo as f64, canny_hi as f64)?;
    let lines = hough_lines(&edges, 1.0, 1.0, votes)?;
    if lines.is_empty() {
        return Err(Error::NoFeature { stage: "cue angle lines" });
    }
    Ok(lines)
}

/// `90 - mean(theta)` in degrees.
pub fn cue_angle_from_lines(lines: &[Line]) -> f64 {
    let mean = lines.iter().map(|l| l.theta).sum::<f64>() / lines.len() as f64;
    90.0 - mean.to_degrees()
}

#[derive(Debug, Clone)]
pub struct CueIsolation {
    pub angle: f64,
    pub circles: Vec<Circle>,
    /// The two lines bounding the strip, strongest first.
    pub strip: [Line; 2],
    /// Gray image after ball removal, cloth suppression and strip masking.
    pub masked: ImageBuffer,
    /// `masked` rotated by `-angle`.
    pub rotated: ImageBuffer,
}

fn signed_offset(l: &Line, x: f64, y: f64) -> f64 {
    x * l.theta.cos() + y * l.theta.sin()
}

/// Mean offset along `reference`'s normal of the edge pixels that voted for
/// `line`.
fn support_offset(edges: &ImageBuffer, line: &Line, reference: &Line) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for y in 0..edges.height() {
        for x in 0..edges.width() {
            if edges.get(x, y, 0) == 0 {
                continue;
            }
            let (xf, yf) = (x as f64, y as f64);
            if (signed_offset(line, xf, yf) - line.rho).round() == 0.0 {
                sum += signed_offset(reference, xf, yf);
                n += 1;
            }
        }
    }
    if n == 0 {
        line.rho
    } else {
        sum / n as f64
    }
}

/// Zero-offset line whose normal bisects those of `a` and `b`.
fn mean_normal(a: &Line, b: &Line) -> Line {
    let mut tb = b.theta;
    if tb - a.theta > std::f64::consts::FRAC_PI_2 {
        tb -= std::f64::consts::PI;
    } else if a.theta - tb > std::f64::consts::FRAC_PI_2 {
        tb += std::f64::consts::PI;
    }
    Line {
        rho: 0.0,
        theta: ((a.theta + tb) / 2.0).rem_euclid(std::f64::consts::PI),
        votes: 0,
    }
}

fn angle_gap_deg(a: &Line, b: &Line) -> f64 {
    let d = (a.theta_deg() - b.theta_deg()).abs();
    d.min(180.0 - d)
}

/// Strongest line plus the strongest near-parallel partner lying more than
/// two pixels away from it. Returns the pair and the partner's offset along
/// the first line's normal.
fn strip_pair(edges: &ImageBuffer, lines: &[Line], tol_deg: f64) -> Option<(Line, Line, f64)> {
    let first = *lines.first()?;
    lines[1..]
        .iter()
        .filter(|l| angle_gap_deg(&first, l) < tol_deg)
        .map(|l| (*l, support_offset(edges, l, &first)))
        .find(|(_, off)| (off - first.rho).abs() > 2.0)
        .map(|(l, off)| (first, l, off))
}

pub fn isolate_cue(img: &ImageBuffer, cfg: &CueConfig) -> Result<ImageBuffer> {
    isolate_cue_detailed(img, cfg).map(|d| d.rotated)
}

/// Ball removal, cloth suppression, strip masking and rotation, keeping the
/// intermediate products.
pub fn isolate_cue_detailed(img: &ImageBuffer, cfg: &CueConfig) -> Result<CueIsolation> {
    require_rgb(img)?;
    cfg.validate()?;
    let angle = estimate_cue_angle(img, cfg.canny_lo, cfg.canny_hi, cfg.votes)?;

    let mut gray = convert_color(img, ColorSpace::Gray)?;
    let circles = hough_circles(&gray, cfg.r_min, cfg.r_max, cfg.circle_votes)?;
    let (w, h) = gray.dims();
    for c in &circles {
        let r = c.r + cfg.disk_margin;
        let y0 = (c.cy - r).floor().max(0.0) as usize;
        let y1 = ((c.cy + r).ceil() as usize).min(h - 1);
        let x0 = (c.cx - r).floor().max(0.0) as usize;
        let x1 = ((c.cx + r).ceil() as usize).min(w - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if (x as f64 - c.cx).hypot(y as f64 - c.cy) <= r {
                    gray.set(x, y, 0, 0);
                }
            }
        }
    }

    let suppressed = gray.map(|v| if v < cfg.cloth_peak { 0 } else { v });

    let edges = canny(&suppressed, cfg.canny_lo as f64, cfg.canny_hi as f64)?;
    let lines = hough_lines(&edges, 1.0, 1.0, cfg.strip_votes)?;
    let (a, b, _) =
        strip_pair(&edges, &lines, cfg.parallel_tol_deg).ok_or(Error::NoFeature { stage: "cue strip lines" })?;
    // bound the strip along the pair's mean normal; each line alone is off
    // by up to half a theta cell
    let mid = mean_normal(&a, &b);
    let (a_off, b_off) = (support_offset(&edges, &a, &mid), support_offset(&edges, &b, &mid));
    let lo = a_off.min(b_off) - cfg.strip_margin;
    let hi = a_off.max(b_off) + cfg.strip_margin;
    let mut masked = suppressed;
    for y in 0..h {
        for x in 0..w {
            let d = signed_offset(&mid, x as f64, y as f64);
            if d < lo || d > hi {
                masked.set(x, y, 0, 0);
            }
        }
    }

    let rotated = rotate(&masked, -angle)?;
    Ok(CueIsolation {
        angle,
        circles,
        strip: [a, b],
        masked,
        rotated,
    })
}
