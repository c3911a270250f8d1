use crate::error::{argument, Result};
use crate::imgcore::{convert_color, require_gray, saturate, ColorSpace, ImageBuffer};

use super::filter::gaussian_blur;

fn require_bgr(img: &ImageBuffer) -> Result<()> {
    match img.space() {
        ColorSpace::Bgr => Ok(()),
        found => Err(crate::Error::ImageType {
            expected: "BGR",
            found,
        }),
    }
}

/// Power-law mapping `255 * (I / 255)^(1 / gamma)`.
pub fn gamma_lut(gamma: f64) -> Result<[u8; 256]> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return argument(format!("gamma must be > 0, got {gamma}"));
    }
    let inv = 1.0 / gamma;
    let mut lut = [0u8; 256];
    for (i, slot) in lut.iter_mut().enumerate() {
        *slot = saturate(255.0 * (i as f64 / 255.0).powf(inv));
    }
    Ok(lut)
}

pub fn gamma_correct(img: &ImageBuffer, gamma: f64) -> Result<ImageBuffer> {
    require_gray(img)?;
    let lut = gamma_lut(gamma)?;
    Ok(img.map(|v| lut[v as usize]))
}

pub fn complement(img: &ImageBuffer) -> Result<ImageBuffer> {
    require_gray(img)?;
    Ok(img.map(|v| 255 - v))
}

/// Adds `v` to the HSV value channel, saturating at 255. Hue and saturation
/// pass through unchanged.
pub fn hsv_brighten(img: &ImageBuffer, v: u8) -> Result<ImageBuffer> {
    require_bgr(img)?;
    let hsv = convert_color(img, ColorSpace::Hsv)?;
    let mut data = hsv.into_data();
    for px in data.chunks_exact_mut(3) {
        px[2] = px[2].saturating_add(v);
    }
    let hsv = ImageBuffer::new(img.width(), img.height(), ColorSpace::Hsv, data)?;
    convert_color(&hsv, ColorSpace::Bgr)
}

/// Side of the Gaussian used to isolate the noise residual.
pub const NOISE_BLUR_SIDE: usize = 7;

/// Boosts the residual between an image and its 7x7 Gaussian blur:
/// `I + beta * (I - blur(I))`.
pub fn amplify_noise(img: &ImageBuffer, beta: f64) -> Result<ImageBuffer> {
    require_gray(img)?;
    if !(beta >= 0.0) || !beta.is_finite() {
        return argument(format!("noise gain beta must be >= 0, got {beta}"));
    }
    let blurred = gaussian_blur(img, NOISE_BLUR_SIDE)?;
    Ok(amplify_residual(img, &blurred, beta))
}

/// Pointwise half of [`amplify_noise`] for callers that already hold the blur.
pub(crate) fn amplify_residual(img: &ImageBuffer, blurred: &ImageBuffer, beta: f64) -> ImageBuffer {
    let data = img
        .data()
        .iter()
        .zip(blurred.data())
        .map(|(&i, &b)| {
            let i = i as f64;
            saturate(i + beta * (i - b as f64))
        })
        .collect();
    ImageBuffer::new(img.width(), img.height(), ColorSpace::Gray, data).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::bgr_to_hsv;

    #[test]
    fn gamma_fixed_points_and_identity() {
        for g in [0.15, 0.26, 1.0, 4.05] {
            let lut = gamma_lut(g).unwrap();
            assert_eq!(lut[0], 0);
            assert_eq!(lut[255], 255);
        }
        let id = gamma_lut(1.0).unwrap();
        assert!(id.iter().enumerate().all(|(i, &v)| v as usize == i));
        // 255 * (64/255)^4 = 1.0127...
        assert_eq!(gamma_lut(0.25).unwrap()[64], 1);
        assert!(gamma_lut(0.0).is_err());
        assert!(gamma_lut(-2.0).is_err());
    }

    #[test]
    fn gamma_is_monotone() {
        for g in [0.15, 0.5, 2.5, 5.0] {
            let lut = gamma_lut(g).unwrap();
            assert!(lut.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn complement_values() {
        let img = ImageBuffer::new(3, 1, ColorSpace::Gray, vec![0, 100, 255]).unwrap();
        let c = complement(&img).unwrap();
        assert_eq!(c.data(), &[255, 155, 0]);
        assert_eq!(complement(&c).unwrap(), img);
    }

    #[test]
    fn hsv_value_clamps() {
        // pure gray pixels have V equal to the intensity
        let img = ImageBuffer::new(2, 1, ColorSpace::Bgr, vec![250, 250, 250, 100, 100, 100]).unwrap();
        let out = hsv_brighten(&img, 30).unwrap();
        assert_eq!(out.data(), &[255, 255, 255, 130, 130, 130]);
    }

    #[test]
    fn hsv_brighten_keeps_hue_and_saturation() {
        let img = ImageBuffer::from_fn3(16, 16, ColorSpace::Bgr, |x, y| {
            [(x * 16) as u8, (y * 16) as u8, 90]
        });
        let out = hsv_brighten(&img, 30).unwrap();
        let zero = hsv_brighten(&img, 0).unwrap();
        let round_trip = convert_color(&convert_color(&img, ColorSpace::Hsv).unwrap(), ColorSpace::Bgr).unwrap();
        assert_eq!(zero, round_trip);
        for (a, b) in img.data().chunks(3).zip(out.data().chunks(3)) {
            let [_, _, v0] = bgr_to_hsv(a[0], a[1], a[2]);
            let [_, _, v1] = bgr_to_hsv(b[0], b[1], b[2]);
            assert!(v1 as i32 >= (v0 as i32 + 30).min(255) - 2, "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn amplify_noise_cases() {
        let flat = ImageBuffer::filled(9, 9, ColorSpace::Gray, 120);
        assert_eq!(amplify_noise(&flat, 2.0).unwrap(), flat);
        let mut img = ImageBuffer::filled(15, 15, ColorSpace::Gray, 20);
        img.set(7, 7, 0, 200);
        assert_eq!(amplify_noise(&img, 0.0).unwrap(), img);
        let blurred = gaussian_blur(&img, 7).unwrap();
        let out = amplify_noise(&img, 2.0).unwrap();
        for y in 0..15 {
            for x in 0..15 {
                let i = img.get(x, y, 0) as f64;
                let b = blurred.get(x, y, 0) as f64;
                let expected = (i + 2.0 * (i - b)).round().clamp(0.0, 255.0) as u8;
                assert_eq!(out.get(x, y, 0), expected);
            }
        }
        assert!(amplify_noise(&img, -1.0).is_err());
    }
}
