use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Color space tag carried by every [`ImageBuffer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColorSpace {
    Gray,
    Rgb,
    Bgr,
    Hsv,
    YCrCb,
    /// Single channel, values restricted to `{0, 255}`.
    Binary,
}

impl ColorSpace {
    pub fn channels(self) -> usize {
        match self {
            ColorSpace::Gray | ColorSpace::Binary => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ColorSpace::Gray => "Gray",
            ColorSpace::Rgb => "RGB",
            ColorSpace::Bgr => "BGR",
            ColorSpace::Hsv => "HSV",
            ColorSpace::YCrCb => "YCrCb",
            ColorSpace::Binary => "Binary",
        };
        f.write_str(name)
    }
}

/// Row-major interleaved 8-bit image.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    space: ColorSpace,
    data: Vec<u8>,
}

impl fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImageBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("space", &self.space)
            .finish_non_exhaustive()
    }
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, space: ColorSpace, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width * height * space.channels();
        if data.len() != expected {
            return Err(Error::InvalidBuffer(format!(
                "{width}x{height} {space} needs {expected} samples, got {}",
                data.len()
            )));
        }
        if space == ColorSpace::Binary && data.iter().any(|&v| v != 0 && v != 255) {
            return Err(Error::InvalidBuffer(
                "binary images may only contain 0 and 255".into(),
            ));
        }
        Ok(ImageBuffer {
            width,
            height,
            space,
            data,
        })
    }

    /// Image with every sample set to `value`.
    ///
    /// Panics if a dimension is zero or if `space` is `Binary` and `value`
    /// is neither 0 nor 255.
    pub fn filled(width: usize, height: usize, space: ColorSpace, value: u8) -> Self {
        let len = width * height * space.channels();
        Self::new(width, height, space, vec![value; len]).expect("valid filled image")
    }

    /// Single-channel image built from a per-pixel function.
    ///
    /// Panics under the same conditions as [`ImageBuffer::filled`].
    pub fn from_fn(
        width: usize,
        height: usize,
        space: ColorSpace,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Self {
        assert_eq!(space.channels(), 1, "from_fn builds single-channel images");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, space, data).expect("valid generated image")
    }

    /// Three-channel image built from a per-pixel function.
    pub fn from_fn3(
        width: usize,
        height: usize,
        space: ColorSpace,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Self {
        assert_eq!(space.channels(), 3, "from_fn3 builds three-channel images");
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, space, data).expect("valid generated image")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.space.channels()
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[(y * self.width + x) * self.channels() + c]
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let n = self.channels();
        let i = (y * self.width + x) * n;
        &self.data[i..i + n]
    }

    /// Sets a sample. Binary images only accept 0 and 255; other values are
    /// saturated to 255.
    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: u8) {
        let n = self.channels();
        let v = if self.space == ColorSpace::Binary && value != 0 {
            255
        } else {
            value
        };
        self.data[(y * self.width + x) * n + c] = v;
    }

    /// Re-tags the buffer without touching samples. Channel counts must match.
    pub fn with_space(self, space: ColorSpace) -> Result<Self> {
        Self::new(self.width, self.height, space, self.data)
    }

    /// Extracts channel `c` as a Gray image.
    pub fn channel(&self, c: usize) -> Result<ImageBuffer> {
        let n = self.channels();
        if c >= n {
            return Err(Error::Argument(format!(
                "channel {c} out of range for {n}-channel image"
            )));
        }
        let data = self.data.iter().skip(c).step_by(n).copied().collect();
        ImageBuffer::new(self.width, self.height, ColorSpace::Gray, data)
    }

    /// Interleaves three single-channel planes into one image tagged `space`.
    pub fn merge(planes: [&ImageBuffer; 3], space: ColorSpace) -> Result<ImageBuffer> {
        let (w, h) = planes[0].dims();
        for p in &planes {
            if p.channels() != 1 {
                return Err(Error::ImageType {
                    expected: "single-channel",
                    found: p.space(),
                });
            }
            ensure_same_dims(planes[0], p)?;
        }
        let mut data = Vec::with_capacity(w * h * 3);
        for i in 0..w * h {
            data.extend(planes.iter().map(|p| p.data[i]));
        }
        ImageBuffer::new(w, h, space, data)
    }

    /// Applies `f` to every sample, keeping the color space.
    pub fn map(&self, mut f: impl FnMut(u8) -> u8) -> ImageBuffer {
        let data: Vec<u8> = self.data.iter().map(|&v| f(v)).collect();
        ImageBuffer::new(self.width, self.height, self.space, data)
            .expect("map preserves buffer shape")
    }

    pub(crate) fn from_parts_unchecked(
        width: usize,
        height: usize,
        space: ColorSpace,
        data: Vec<u8>,
    ) -> Self {
        debug_assert_eq!(data.len(), width * height * space.channels());
        ImageBuffer {
            width,
            height,
            space,
            data,
        }
    }

    /// Applies a single-channel operation to each plane and merges the results.
    pub fn per_channel(
        &self,
        mut op: impl FnMut(&ImageBuffer) -> Result<ImageBuffer>,
    ) -> Result<ImageBuffer> {
        if self.channels() == 1 {
            let gray = self.clone().with_space(ColorSpace::Gray)?;
            let out = op(&gray)?;
            return Ok(out.with_space(if self.space == ColorSpace::Binary {
                ColorSpace::Gray
            } else {
                self.space
            })?);
        }
        let planes = (0..3)
            .map(|c| self.channel(c).and_then(|p| op(&p)))
            .collect::<Result<Vec<_>>>()?;
        ImageBuffer::merge([&planes[0], &planes[1], &planes[2]], self.space)
    }
}

pub(crate) fn ensure_same_dims(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

pub(crate) fn require_gray(img: &ImageBuffer) -> Result<()> {
    match img.space() {
        ColorSpace::Gray => Ok(()),
        found => Err(Error::ImageType {
            expected: "Gray",
            found,
        }),
    }
}

pub(crate) fn require_binary(img: &ImageBuffer) -> Result<()> {
    match img.space() {
        ColorSpace::Binary => Ok(()),
        found => Err(Error::ImageType {
            expected: "Binary",
            found,
        }),
    }
}

/// Round half away from zero, then clamp to the 8-bit range.
#[inline]
pub(crate) fn saturate(v: f64) -> u8 {
    let r = v.round();
    if r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}
