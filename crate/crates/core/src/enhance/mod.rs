//! Point operations and convolution filters.

mod equalize;
mod filter;
mod point;
mod quantize;

pub use equalize::{equalize_luma, equalize_plane, equalize_rgb, equalize_ycrcb};
pub use filter::{
    convolve, gaussian_blur, gaussian_kernel, gaussian_sigma, median_filter, sharpen,
    sharpen_kernel, unsharp_kernel, Kernel,
};
pub use point::{amplify_noise, complement, gamma_correct, gamma_lut, hsv_brighten, NOISE_BLUR_SIDE};
pub use quantize::{step_quantize, QuantizationMap};

pub(crate) use point::amplify_residual;
