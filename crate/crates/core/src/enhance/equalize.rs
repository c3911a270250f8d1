//! Histogram equalization with a masked CDF: the normalization ignores empty
//! bins, so the least populated intensity present maps to 0 and the largest
//! to 255. A channel holding a single intensity is returned unchanged.

use crate::error::{Error, Result};
use crate::imgcore::{cdf, convert_color, histogram, ColorSpace, ImageBuffer};

/// Equalizes one single-channel plane.
pub fn equalize_plane(plane: &ImageBuffer) -> Result<ImageBuffer> {
    let c = cdf(&histogram(plane, 0)?);
    Ok(match c.equalization_lut() {
        Some(lut) => plane.map(|v| lut[v as usize]),
        None => plane.clone(),
    })
}

/// Equalizes each channel of an RGB or BGR image independently.
pub fn equalize_rgb(img: &ImageBuffer) -> Result<ImageBuffer> {
    match img.space() {
        ColorSpace::Rgb | ColorSpace::Bgr => img.per_channel(equalize_plane),
        found => Err(Error::ImageType {
            expected: "RGB or BGR",
            found,
        }),
    }
}

/// BGR -> YCrCb with the luma plane equalized; chroma planes untouched.
pub fn equalize_luma(img: &ImageBuffer) -> Result<ImageBuffer> {
    if img.space() != ColorSpace::Bgr {
        return Err(Error::ImageType {
            expected: "BGR",
            found: img.space(),
        });
    }
    let ycrcb = convert_color(img, ColorSpace::YCrCb)?;
    let y = equalize_plane(&ycrcb.channel(0)?)?;
    let cr = ycrcb.channel(1)?;
    let cb = ycrcb.channel(2)?;
    ImageBuffer::merge([&y, &cr, &cb], ColorSpace::YCrCb)
}

pub fn equalize_ycrcb(img: &ImageBuffer) -> Result<ImageBuffer> {
    convert_color(&equalize_luma(img)?, ColorSpace::Bgr)
}
