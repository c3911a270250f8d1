use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::imgcore::{require_gray, ImageBuffer};

/// Stepwise intensity map: a pixel `p` becomes `outputs[i]` for the first
/// `i` with `p <= thresholds[i]`, or the last output when it exceeds every
/// threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct QuantizationMap {
    thresholds: Vec<u8>,
    outputs: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    thresholds: Vec<u8>,
    outputs: Vec<u8>,
}

impl TryFrom<RawMap> for QuantizationMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        QuantizationMap::new(raw.thresholds, raw.outputs)
    }
}

impl From<QuantizationMap> for RawMap {
    fn from(m: QuantizationMap) -> Self {
        RawMap {
            thresholds: m.thresholds,
            outputs: m.outputs,
        }
    }
}

impl QuantizationMap {
    pub fn new(thresholds: Vec<u8>, outputs: Vec<u8>) -> Result<Self> {
        if outputs.len() != thresholds.len() + 1 {
            return argument(format!(
                "{} thresholds need {} outputs, got {}",
                thresholds.len(),
                thresholds.len() + 1,
                outputs.len()
            ));
        }
        if thresholds.windows(2).any(|p| p[0] >= p[1]) {
            return argument("thresholds must be strictly ascending");
        }
        Ok(QuantizationMap {
            thresholds,
            outputs,
        })
    }

    /// Eight-level posterisation map.
    pub fn eight_level() -> Self {
        QuantizationMap::new(
            vec![30, 60, 90, 120, 160, 190, 220],
            vec![10, 20, 50, 70, 100, 140, 180, 200],
        )
        .expect("builtin map is valid")
    }

    /// Looks up a builtin map by name.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "paper8" => Ok(Self::eight_level()),
            other => argument(format!("unknown quantization preset `{other}`")),
        }
    }

    pub fn thresholds(&self) -> &[u8] {
        &self.thresholds
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }

    pub fn apply(&self, p: u8) -> u8 {
        let i = self.thresholds.partition_point(|&t| t < p);
        self.outputs[i]
    }

    pub fn lut(&self) -> [u8; 256] {
        let mut lut = [0u8; 256];
        for (p, slot) in lut.iter_mut().enumerate() {
            *slot = self.apply(p as u8);
        }
        lut
    }
}

pub fn step_quantize(img: &ImageBuffer, map: &QuantizationMap) -> Result<ImageBuffer> {
    require_gray(img)?;
    let lut = map.lut();
    Ok(img.map(|v| lut[v as usize]))
}
