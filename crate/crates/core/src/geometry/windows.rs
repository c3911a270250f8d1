//! Window localisation on façade images.
//!
//! Edge map, minus long diagonal runs; densified Harris corner blobs seed a geodesic
//! reconstruction along the remaining edges; the reconstructed outlines are
//! bridged, filled and cleaned, and tall components are discarded as doors.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::imgcore::{convert_color, ColorSpace, ImageBuffer};

use super::canny::canny_adaptive;
use super::harris::harris_response;
use super::morph::{dilate, intersect, morph, subtract, union, MorphOp, StructuringElement};
use super::regions::{connected_components, fill_holes, Region};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub median_side: usize,
    pub canny_sigma: f64,
    pub diagonal_side: usize,
    pub harris_k: f64,
    pub harris_rel: f64,
    pub corner_dilate: usize,
    pub corner_close: usize,
    pub recon_radius: usize,
    pub recon_iterations: usize,
    pub bridge_side: usize,
    pub clean_open: usize,
    pub clean_close: usize,
    /// Components taller than this many widths are treated as doors.
    pub door_ratio: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            median_side: 5,
            canny_sigma: 0.5,
            diagonal_side: 7,
            harris_k: 0.04,
            harris_rel: 0.01,
            corner_dilate: 9,
            corner_close: 11,
            recon_radius: 5,
            recon_iterations: 10,
            bridge_side: 3,
            clean_open: 7,
            clean_close: 9,
            door_ratio: 1.8,
        }
    }
}

impl WindowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.door_ratio > 0.0) {
            return argument(format!("door ratio must be > 0, got {}", self.door_ratio));
        }
        if !(self.harris_rel > 0.0 && self.harris_rel < 1.0) {
            return argument(format!("harris_rel must lie in (0, 1), got {}", self.harris_rel));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct WindowLocalization {
    pub mask: ImageBuffer,
    /// Input with mask pixels painted red.
    pub overlay: ImageBuffer,
    pub windows: Vec<Region>,
    pub doors: Vec<Region>,
}

fn threshold_mask(values: &[f64], w: usize, h: usize, cut: impl Fn(f64) -> bool) -> ImageBuffer {
    let data = values.iter().map(|&v| if cut(v) { 255 } else { 0 }).collect();
    ImageBuffer::from_parts_unchecked(w, h, ColorSpace::Binary, data)
}

pub fn localize_windows(img: &ImageBuffer, cfg: &WindowConfig) -> Result<WindowLocalization> {
    if img.space() != ColorSpace::Bgr {
        return Err(crate::Error::ImageType {
            expected: "BGR",
            found: img.space(),
        });
    }
    cfg.validate()?;
    let (w, h) = img.dims();
    let gray = convert_color(img, ColorSpace::Gray)?;

    let edges = canny_adaptive(&gray, cfg.canny_sigma, cfg.median_side)?;
    let diag = morph(&edges, &StructuringElement::diagonal(cfg.diagonal_side)?, MorphOp::Open)?;
    let anti = morph(&edges, &StructuringElement::anti_diagonal(cfg.diagonal_side)?, MorphOp::Open)?;
    let edges = subtract(&edges, &union(&diag, &anti)?)?;

    let response = harris_response(&gray, cfg.harris_k, cfg.median_side)?;
    let r_max = response.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cut = cfg.harris_rel * r_max;
    let corners = threshold_mask(&response, w, h, |v| r_max > 0.0 && v >= cut);
    let corners = dilate(&corners, &StructuringElement::square(cfg.corner_dilate)?)?;
    // an opening here would erase isolated corner blobs outright
    let corners = morph(&corners, &StructuringElement::square(cfg.corner_close)?, MorphOp::Close)?;

    let disk = StructuringElement::disk(cfg.recon_radius);
    let mut grown = intersect(&corners, &edges)?;
    for _ in 0..cfg.recon_iterations {
        grown = intersect(&dilate(&grown, &disk)?, &edges)?;
    }

    let bridged = dilate(&grown, &StructuringElement::square(cfg.bridge_side)?)?;
    let filled = fill_holes(&bridged)?;
    let cleaned = morph(&filled, &StructuringElement::square(cfg.clean_open)?, MorphOp::Open)?;
    let cleaned = morph(&cleaned, &StructuringElement::square(cfg.clean_close)?, MorphOp::Close)?;

    let cc = connected_components(&cleaned)?;
    let (doors, windows): (Vec<Region>, Vec<Region>) =
        cc.regions.iter().partition(|r| r.ratio() > cfg.door_ratio);
    let mask = cc.mask_where(|r| r.ratio() <= cfg.door_ratio);

    let mut overlay = img.clone();
    for y in 0..h {
        for x in 0..w {
            if mask.get(x, y, 0) != 0 {
                overlay.set(x, y, 0, 0);
                overlay.set(x, y, 1, 0);
                overlay.set(x, y, 2, 255);
            }
        }
    }
    Ok(WindowLocalization {
        mask,
        overlay,
        windows,
        doors,
    })
}
