//! Deterministic spatial image processing.
//!
//! The crate is organised by stage:
//!
//! * [`imgcore`]: 8-bit pixel buffers, color conversion, histograms, PNG/PNM I/O.
//! * [`enhance`]: point operations and convolution filters (quantization,
//!   equalization, gamma, sharpening, blurring, median, noise amplification).
//! * [`geometry`]: Canny, Hough lines and circles, Harris corners, binary
//!   morphology, connected components, rotation, window localization and
//!   billiard-cue isolation.
//! * [`metrics`]: SSIM, normalized mutual information and the blended score.
//! * [`pipelines`]: the forward/reverse enhancement pipelines, the grid-search
//!   tuner and cue alignment.
//! * [`synth`]: synthetic scenes with known geometry.
//!
//! Every operation is a pure function of its inputs and produces bit-identical
//! output across runs.

pub mod error;
pub mod enhance;
pub mod geometry;
pub mod imgcore;
pub mod metrics;
pub mod pipelines;
pub mod synth;

pub use error::{Error, Result};
pub use imgcore::{ColorSpace, ImageBuffer};
