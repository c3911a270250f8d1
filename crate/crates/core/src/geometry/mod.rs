//! Edges, lines, circles, corners, binary morphology, connected components,
//! rotation, and the composite window and cue procedures.

mod canny;
mod circles;
mod cue;
mod features;
mod harris;
mod hough;
mod morph;
mod overlay;
mod regions;
mod rotate;
mod windows;

pub use canny::{
    adaptive_thresholds, canny, canny_adaptive, canny_color, canny_thresholds, image_median, sobel, sobel_color,
    AdaptiveThresholds, Gradients,
};
pub use circles::{hough_circles, Circle, CIRCLE_CANNY_HIGH, CIRCLE_CANNY_LOW};
pub use cue::{cue_angle_from_lines, estimate_cue_angle, isolate_cue, isolate_cue_detailed, CueConfig, CueIsolation};
pub use features::{FeatureSet, LineRecord};
pub use harris::{harris, harris_response, Corner, CornerSet};
pub use hough::{hough_accumulator, hough_lines, roof_angle, Accumulator, Line};
pub use morph::{dilate, erode, intersect, morph, subtract, union, ElementShape, MorphOp, StructuringElement};
pub use overlay::{overlay_circles, overlay_lines, overlay_mask, overlay_points, to_rgb, OVERLAY_RED};
pub use regions::{connected_components, fill_holes, LabeledRegions, Region};
pub use rotate::rotate;
pub use windows::{localize_windows, WindowConfig, WindowLocalization};
