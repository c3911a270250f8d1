//! Pixel buffers, color conversion, histograms and file I/O.

mod buffer;
mod color;
mod histogram;
mod io;

pub use buffer::{ColorSpace, ImageBuffer};
pub use color::{bgr_to_hsv, bgr_to_ycrcb, convert_color, hsv_to_bgr, ycrcb_to_bgr};
pub use histogram::{cdf, histogram, Cdf, Histogram};
pub use io::{load_image, save_image, ImageFormat};

pub(crate) use buffer::{ensure_same_dims, require_binary, require_gray, saturate};
