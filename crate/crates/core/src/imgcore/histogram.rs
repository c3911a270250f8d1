use super::buffer::ImageBuffer;
use crate::error::{Error, Result};

/// 256-bin intensity histogram of one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
    total: u64,
}

impl Histogram {
    pub fn from_bins(bins: [u64; 256]) -> Self {
        let total = bins.iter().sum();
        Histogram { bins, total }
    }

    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of bins with a nonzero count.
    pub fn occupied(&self) -> usize {
        self.bins.iter().filter(|&&c| c > 0).count()
    }

    /// Intensity with the largest count (lowest intensity on ties).
    pub fn mode(&self) -> u8 {
        let mut best = 0;
        for k in 1..256 {
            if self.bins[k] > self.bins[best] {
                best = k;
            }
        }
        best as u8
    }
}

pub fn histogram(img: &ImageBuffer, channel: usize) -> Result<Histogram> {
    let n = img.channels();
    if channel >= n {
        return Err(Error::Argument(format!(
            "channel {channel} out of range for {n}-channel image"
        )));
    }
    let mut bins = [0u64; 256];
    for &v in img.data().iter().skip(channel).step_by(n) {
        bins[v as usize] += 1;
    }
    Ok(Histogram {
        bins,
        total: img.pixel_count() as u64,
    })
}

/// Cumulative distribution with the normalisation bounds used by masked
/// histogram equalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cdf {
    values: [u64; 256],
    /// Smallest CDF value over bins that are actually populated.
    masked_min: u64,
    masked_max: u64,
}

impl Cdf {
    pub fn values(&self) -> &[u64; 256] {
        &self.values
    }

    pub fn masked_min(&self) -> u64 {
        self.masked_min
    }

    pub fn masked_max(&self) -> u64 {
        self.masked_max
    }

    /// Lookup table mapping each intensity to
    /// `round((cdf[k] - min) * 255 / (max - min))`, or `None` when the
    /// channel holds a single intensity and the ratio is undefined.
    pub fn equalization_lut(&self) -> Option<[u8; 256]> {
        if self.masked_max == self.masked_min {
            return None;
        }
        let span = (self.masked_max - self.masked_min) as f64;
        let mut lut = [0u8; 256];
        for (k, slot) in lut.iter_mut().enumerate() {
            let c = self.values[k];
            // bins below the first populated one never occur in the image
            *slot = if c < self.masked_min {
                0
            } else {
                super::buffer::saturate((c - self.masked_min) as f64 * 255.0 / span)
            };
        }
        Some(lut)
    }
}

pub fn cdf(h: &Histogram) -> Cdf {
    let mut values = [0u64; 256];
    let mut acc = 0u64;
    let mut masked_min = None;
    for k in 0..256 {
        acc += h.bins[k];
        values[k] = acc;
        if h.bins[k] > 0 && masked_min.is_none() {
            masked_min = Some(acc);
        }
    }
    Cdf {
        values,
        masked_min: masked_min.unwrap_or(0),
        masked_max: values[255],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::ColorSpace;

    #[test]
    fn constant_image() {
        let img = ImageBuffer::filled(10, 10, ColorSpace::Gray, 7);
        let h = histogram(&img, 0).unwrap();
        assert_eq!(h.bins()[7], 100);
        assert_eq!(h.bins().iter().sum::<u64>(), 100);
        assert_eq!(h.occupied(), 1);
        assert_eq!(h.mode(), 7);
    }

    #[test]
    fn ramp_fills_every_bin_once() {
        let img = ImageBuffer::from_fn(256, 1, ColorSpace::Gray, |x, _| x as u8);
        let h = histogram(&img, 0).unwrap();
        assert!(h.bins().iter().all(|&c| c == 1));
    }

    #[test]
    fn channel_out_of_range() {
        let img = ImageBuffer::filled(2, 2, ColorSpace::Gray, 0);
        assert!(matches!(histogram(&img, 1), Err(Error::Argument(_))));
    }

    #[test]
    fn cdf_two_spikes() {
        let mut bins = [0u64; 256];
        bins[0] = 50;
        bins[255] = 50;
        let c = cdf(&Histogram::from_bins(bins));
        assert!(c.values()[..255].iter().all(|&v| v == 50));
        assert_eq!(c.values()[255], 100);
        assert_eq!(c.masked_min(), 50);
        assert_eq!(c.masked_max(), 100);
    }

    #[test]
    fn cdf_empty_and_single_bin() {
        let c = cdf(&Histogram::from_bins([0; 256]));
        assert!(c.values().iter().all(|&v| v == 0));
        let mut bins = [0u64; 256];
        bins[42] = 9;
        let c = cdf(&Histogram::from_bins(bins));
        assert_eq!(c.masked_min(), 9);
        assert_eq!(c.masked_max(), 9);
        assert!(c.equalization_lut().is_none());
    }
}
