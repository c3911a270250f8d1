//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spimg_core::{ColorSpace, ImageBuffer};

pub use spimg_core::synth::{cue_scene, facade, textured_scene};

/// Uniform gray noise, reproducible from `seed`.
pub fn noise(w: usize, h: usize, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ImageBuffer::new(w, h, ColorSpace::Gray, (0..w * h).map(|_| rng.gen()).collect()).unwrap()
}

pub fn binary_noise(w: usize, h: usize, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..w * h).map(|_| if rng.gen_bool(0.5) { 255 } else { 0 }).collect();
    ImageBuffer::new(w, h, ColorSpace::Binary, data).unwrap()
}
