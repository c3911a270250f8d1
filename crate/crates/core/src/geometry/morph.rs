use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::imgcore::{require_binary, ColorSpace, ImageBuffer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementShape {
    Square,
    Diagonal,
    AntiDiagonal,
    Disk,
}

/// Odd-sided boolean neighbourhood centred on its middle cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    side: usize,
    mask: Vec<bool>,
    shape: ElementShape,
}

fn check_side(side: usize) -> Result<()> {
    if side == 0 || side % 2 == 0 {
        return argument(format!("structuring element side must be odd, got {side}"));
    }
    Ok(())
}

impl StructuringElement {
    pub fn square(side: usize) -> Result<Self> {
        check_side(side)?;
        Ok(Self {
            side,
            mask: vec![true; side * side],
            shape: ElementShape::Square,
        })
    }

    /// Main diagonal: cells `(i, i)`.
    pub fn diagonal(side: usize) -> Result<Self> {
        check_side(side)?;
        let mask = (0..side * side).map(|k| k / side == k % side).collect();
        Ok(Self {
            side,
            mask,
            shape: ElementShape::Diagonal,
        })
    }

    /// Anti-diagonal: cells `(i, side - 1 - i)`.
    pub fn anti_diagonal(side: usize) -> Result<Self> {
        check_side(side)?;
        let mask = (0..side * side).map(|k| k / side + k % side == side - 1).collect();
        Ok(Self {
            side,
            mask,
            shape: ElementShape::AntiDiagonal,
        })
    }

    /// Cells within Euclidean distance `radius` of the centre.
    pub fn disk(radius: usize) -> Self {
        let side = 2 * radius + 1;
        let r = radius as isize;
        let mask = (0..side * side)
            .map(|k| {
                let (dy, dx) = ((k / side) as isize - r, (k % side) as isize - r);
                dx * dx + dy * dy <= r * r
            })
            .collect();
        Self {
            side,
            mask,
            shape: ElementShape::Disk,
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn shape(&self) -> ElementShape {
        self.shape
    }

    /// `mask[row * side + col]`.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Active cells as `(dx, dy)` offsets from the centre.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        let r = (self.side / 2) as isize;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(k, _)| ((k % self.side) as isize - r, (k / self.side) as isize - r))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphOp {
    Dilate,
    Erode,
    Open,
    Close,
}

fn raw_pass(img: &ImageBuffer, offsets: &[(isize, isize)], dilate: bool) -> ImageBuffer {
    let (w, h) = img.dims();
    let src = img.data();
    let mut out = vec![0u8; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, px) in row.iter_mut().enumerate() {
            let hit = if dilate {
                // x is covered when some x - d lies in the set
                offsets.iter().any(|&(dx, dy)| {
                    let (sx, sy) = (x as isize - dx, y as isize - dy);
                    sx >= 0 && sy >= 0 && (sx as usize) < w && (sy as usize) < h && src[sy as usize * w + sx as usize] != 0
                })
            } else {
                // pixels beyond the border count as foreground
                offsets.iter().all(|&(dx, dy)| {
                    let (sx, sy) = (x as isize + dx, y as isize + dy);
                    sx < 0 || sy < 0 || sx as usize >= w || sy as usize >= h || src[sy as usize * w + sx as usize] != 0
                })
            };
            *px = if hit { 255 } else { 0 };
        }
    });
    ImageBuffer::from_parts_unchecked(w, h, ColorSpace::Binary, out)
}

pub fn dilate(img: &ImageBuffer, elem: &StructuringElement) -> Result<ImageBuffer> {
    morph(img, elem, MorphOp::Dilate)
}

pub fn erode(img: &ImageBuffer, elem: &StructuringElement) -> Result<ImageBuffer> {
    morph(img, elem, MorphOp::Erode)
}

pub fn morph(img: &ImageBuffer, elem: &StructuringElement, op: MorphOp) -> Result<ImageBuffer> {
    require_binary(img)?;
    let offsets = elem.offsets();
    Ok(match op {
        MorphOp::Dilate => raw_pass(img, &offsets, true),
        MorphOp::Erode => raw_pass(img, &offsets, false),
        MorphOp::Open => raw_pass(&raw_pass(img, &offsets, false), &offsets, true),
        MorphOp::Close => raw_pass(&raw_pass(img, &offsets, true), &offsets, false),
    })
}

/// Pixelwise union of two binary masks.
pub fn union(a: &ImageBuffer, b: &ImageBuffer) -> Result<ImageBuffer> {
    combine(a, b, |p, q| p | q)
}

/// Pixelwise intersection of two binary masks.
pub fn intersect(a: &ImageBuffer, b: &ImageBuffer) -> Result<ImageBuffer> {
    combine(a, b, |p, q| p & q)
}

/// Pixels of `a` not in `b`.
pub fn subtract(a: &ImageBuffer, b: &ImageBuffer) -> Result<ImageBuffer> {
    combine(a, b, |p, q| p & !q)
}

fn combine(a: &ImageBuffer, b: &ImageBuffer, f: impl Fn(u8, u8) -> u8) -> Result<ImageBuffer> {
    require_binary(a)?;
    require_binary(b)?;
    crate::imgcore::ensure_same_dims(a, b)?;
    let data = a.data().iter().zip(b.data()).map(|(&p, &q)| f(p, q)).collect();
    Ok(ImageBuffer::from_parts_unchecked(a.width(), a.height(), ColorSpace::Binary, data))
}
