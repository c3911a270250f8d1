use std::path::Path;

use serde_json::{json, Value};
use spimg_core::enhance::{
    equalize_plane, equalize_rgb, equalize_ycrcb, gaussian_blur, hsv_brighten, median_filter, sharpen,
    step_quantize, QuantizationMap,
};
use spimg_core::geometry::{
    adaptive_thresholds, canny_adaptive, estimate_cue_angle, harris, hough_circles, hough_lines, isolate_cue_detailed,
    localize_windows, overlay_circles, overlay_lines, overlay_mask, overlay_points, roof_angle, FeatureSet,
    LineRecord,
};
use spimg_core::imgcore::{convert_color, histogram, load_image, save_image};
use spimg_core::metrics::blended_score;
use spimg_core::pipelines::{
    cue_align, forward_pipeline, reverse_pipeline, tune, Direction, ForwardGrid, ForwardParams, GridSpec,
    PipelineParams, ReverseGrid, ReverseParams,
};
use spimg_core::{ColorSpace, ImageBuffer};

use crate::args::{EqualizeMode, FilterKind, TuneArgs};
use crate::{usage, Command, UsageError};

fn core<T>(r: spimg_core::Result<T>) -> Result<T, UsageError> {
    r.map_err(|e| UsageError(e.to_string()))
}

fn check_w(w: f64) -> Result<(), UsageError> {
    if !(0.0..=1.0).contains(&w) {
        return usage(format!("`w` must lie in [0, 1], got {w}"));
    }
    Ok(())
}

fn check_odd(key: &str, v: usize) -> Result<(), UsageError> {
    if v % 2 == 0 {
        return usage(format!("`{key}` must be an odd number, got {v}"));
    }
    Ok(())
}

fn check_positive(key: &str, v: f64) -> Result<(), UsageError> {
    if !(v > 0.0) || !v.is_finite() {
        return usage(format!("`{key}` must be > 0, got {v}"));
    }
    Ok(())
}

fn check_votes(v: u32) -> Result<(), UsageError> {
    if v == 0 {
        return usage("`votes` must be at least 1");
    }
    Ok(())
}

fn check_sigma(v: f64) -> Result<(), UsageError> {
    if !(0.0..=1.0).contains(&v) {
        return usage(format!("`sigma` must lie in [0, 1], got {v}"));
    }
    Ok(())
}

fn quantization_map(thresholds: &Option<Vec<u8>>, values: &Option<Vec<u8>>, preset: &str) -> Result<QuantizationMap, UsageError> {
    match (thresholds, values) {
        (Some(t), Some(v)) => core(QuantizationMap::new(t.clone(), v.clone())),
        (None, None) => core(QuantizationMap::preset(preset)),
        _ => usage("`thresholds` and `values` must be given together"),
    }
}

fn grid_of(a: &TuneArgs) -> Result<GridSpec, UsageError> {
    Ok(match Direction::from(a.direction) {
        Direction::Forward => {
            let d = ForwardGrid::default();
            GridSpec::Forward(ForwardGrid {
                alpha: a.alpha.unwrap_or(d.alpha),
                gamma: a.gamma.unwrap_or(d.gamma),
                beta: a.beta.unwrap_or(d.beta),
                override_ranges: a.override_ranges,
            })
        }
        Direction::Reverse => {
            if a.alpha.is_some() || a.beta.is_some() {
                return usage("the reverse pipeline has only a `gamma` axis");
            }
            GridSpec::Reverse(ReverseGrid {
                gamma: a.gamma.unwrap_or(ReverseGrid::default().gamma),
                override_ranges: a.override_ranges,
            })
        }
    })
}

/// Range checks for every command, before any pixel is read.
pub(crate) fn validate_params(cmd: &mut Command) -> Result<(), UsageError> {
    match cmd {
        Command::Quantize(a) => {
            quantization_map(&a.thresholds, &a.values, &a.preset)?;
        }
        Command::Equalize(_) | Command::Brighten(_) | Command::Sharpen(_) => {}
        Command::Filter(a) => check_odd("size", a.size)?,
        Command::PipelineForward(a) => core(
            ForwardParams {
                alpha: a.alpha,
                gamma: a.gamma,
                beta: a.beta,
            }
            .validate(a.override_ranges),
        )?,
        Command::PipelineReverse(a) => core(ReverseParams { gamma: a.gamma }.validate(a.override_ranges))?,
        Command::PipelineTune(a) => {
            check_w(a.w)?;
            for axis in [&a.alpha, &a.gamma, &a.beta].into_iter().flatten() {
                core(axis.validate())?;
            }
            core(grid_of(a)?.points())?;
        }
        Command::FeaturesEdges(a) => {
            check_sigma(a.sigma)?;
            check_odd("median_size", a.median_size)?;
        }
        Command::FeaturesLines(a) => {
            check_sigma(a.sigma)?;
            check_odd("median_size", a.median_size)?;
            check_votes(a.votes)?;
            check_positive("rho_res", a.rho_res)?;
            check_positive("theta_res", a.theta_res)?;
        }
        Command::FeaturesCircles(a) => {
            check_votes(a.votes)?;
            if a.r_min == 0 || a.r_min > a.r_max {
                return usage(format!("radii must satisfy 0 < r_min <= r_max, got [{}, {}]", a.r_min, a.r_max));
            }
        }
        Command::FeaturesCorners(a) => {
            check_odd("median_size", a.median_size)?;
            if !(a.rel > 0.0 && a.rel < 1.0) {
                return usage(format!("`rel` must lie in (0, 1), got {}", a.rel));
            }
        }
        Command::FeaturesWindows(a) => {
            if let Some(r) = a.door_ratio.take() {
                a.settings.door_ratio = r;
            }
            core(a.settings.validate())?;
        }
        Command::CueAngle(a) => {
            a.overrides.apply(&mut a.settings);
            core(a.settings.validate())?;
            check_votes(a.settings.votes)?;
        }
        Command::CueAlign(a) | Command::CueIsolate(a) => {
            a.overrides.apply(&mut a.settings);
            core(a.settings.validate())?;
            check_votes(a.settings.votes)?;
        }
        Command::Compare(a) => check_w(a.w)?,
    }
    Ok(())
}

fn load(path: &Path) -> spimg_core::Result<ImageBuffer> {
    load_image(path)
}

fn load_as(path: &Path, space: ColorSpace) -> spimg_core::Result<ImageBuffer> {
    convert_color(&load_image(path)?, space)
}

fn image_info(img: &ImageBuffer) -> Value {
    json!({ "width": img.width(), "height": img.height(), "space": img.space().to_string() })
}

fn save(img: &ImageBuffer, path: &Path) -> spimg_core::Result<Value> {
    save_image(img, path)?;
    Ok(image_info(img))
}

pub(crate) fn execute(cmd: &Command) -> anyhow::Result<Value> {
    Ok(match cmd {
        Command::Quantize(a) => {
            let map = quantization_map(&a.thresholds, &a.values, &a.preset)?;
            let out = step_quantize(&load_as(&a.input, ColorSpace::Gray)?, &map)?;
            let hist = histogram(&out, 0)?;
            let levels: Vec<usize> = (0..256).filter(|&v| hist.bins()[v] > 0).collect();
            json!({
                "map": map,
                "levels": levels,
                "output": save(&out, &a.output)?,
            })
        }
        Command::Equalize(a) => {
            let img = load(&a.input)?;
            let out = match (a.mode, img.space()) {
                (_, ColorSpace::Gray) => equalize_plane(&img)?,
                (EqualizeMode::Rgb, _) => equalize_rgb(&img)?,
                (EqualizeMode::Ycrcb, _) => equalize_ycrcb(&convert_color(&img, ColorSpace::Bgr)?)?,
            };
            json!({ "output": save(&out, &a.output)? })
        }
        Command::Brighten(a) => {
            let out = hsv_brighten(&load_as(&a.input, ColorSpace::Bgr)?, a.v)?;
            json!({ "output": save(&out, &a.output)? })
        }
        Command::Sharpen(a) => {
            let out = sharpen(&load(&a.input)?)?;
            json!({ "output": save(&out, &a.output)? })
        }
        Command::Filter(a) => {
            let img = load(&a.input)?;
            let out = match a.kind {
                FilterKind::Gaussian => img.per_channel(|p| gaussian_blur(p, a.size))?,
                FilterKind::Median => img.per_channel(|p| median_filter(p, a.size))?,
            };
            json!({ "output": save(&out, &a.output)? })
        }
        Command::PipelineForward(a) => {
            let src = load_as(&a.input, ColorSpace::Gray)?;
            let p = ForwardParams {
                alpha: a.alpha,
                gamma: a.gamma,
                beta: a.beta,
            };
            let out = forward_pipeline(&src, &p)?;
            json!({
                "output": save(&out, &a.output)?,
                "similarity_to_input": blended_score(&out, &src, 0.5)?,
            })
        }
        Command::PipelineReverse(a) => {
            let src = load_as(&a.input, ColorSpace::Gray)?;
            let out = reverse_pipeline(&src, &ReverseParams { gamma: a.gamma })?;
            json!({
                "output": save(&out, &a.output)?,
                "similarity_to_input": blended_score(&out, &src, 0.5)?,
            })
        }
        Command::PipelineTune(a) => {
            let src = load_as(&a.input, ColorSpace::Gray)?;
            let target = load_as(&a.target, ColorSpace::Gray)?;
            let res = tune(&src, &target, &grid_of(a)?, a.w)?;
            if let Some(path) = &a.output {
                let best = match res.best.params {
                    PipelineParams::Forward(p) => forward_pipeline(&src, &p)?,
                    PipelineParams::Reverse(p) => reverse_pipeline(&src, &p)?,
                };
                save_image(&best, path)?;
            }
            serde_json::to_value(&res)?
        }
        Command::FeaturesEdges(a) => {
            let gray = load_as(&a.input, ColorSpace::Gray)?;
            let thresholds = adaptive_thresholds(&gray, a.sigma, a.median_size)?;
            let edges = canny_adaptive(&gray, a.sigma, a.median_size)?;
            let count = histogram(&edges, 0)?.bins()[255];
            json!({
                "thresholds": thresholds,
                "edge_pixels": count,
                "output": save(&edges, &a.output)?,
            })
        }
        Command::FeaturesLines(a) => {
            let img = load(&a.input)?;
            let edges = canny_adaptive(&convert_color(&img, ColorSpace::Gray)?, a.sigma, a.median_size)?;
            let lines = hough_lines(&edges, a.rho_res, a.theta_res, a.votes)?;
            let out = overlay_lines(&img, &lines)?;
            json!({
                "features": FeatureSet::default().with_lines(&lines),
                "roof_angles": roof_angle(&lines),
                "output": save(&out, &a.output)?,
            })
        }
        Command::FeaturesCircles(a) => {
            let img = load(&a.input)?;
            let circles = hough_circles(&convert_color(&img, ColorSpace::Gray)?, a.r_min, a.r_max, a.votes)?;
            let out = overlay_circles(&img, &circles)?;
            json!({
                "features": FeatureSet::default().with_circles(&circles),
                "output": save(&out, &a.output)?,
            })
        }
        Command::FeaturesCorners(a) => {
            let img = load(&a.input)?;
            let set = harris(&convert_color(&img, ColorSpace::Gray)?, a.k, a.rel, a.median_size)?;
            let pts: Vec<(usize, usize)> = set.points.iter().map(|c| (c.x, c.y)).collect();
            let out = overlay_points(&img, &pts)?;
            json!({
                "features": FeatureSet::default().with_corners(&set.points),
                "response_max": set.response_max,
                "output": save(&out, &a.output)?,
            })
        }
        Command::FeaturesWindows(a) => {
            let img = load_as(&a.input, ColorSpace::Bgr)?;
            let found = localize_windows(&img, &a.settings)?;
            if let Some(path) = &a.mask {
                save_image(&found.mask, path)?;
            }
            let out = overlay_mask(&img, &found.mask)?;
            json!({
                "windows": found.windows,
                "doors": found.doors,
                "output": save(&out, &a.output)?,
            })
        }
        Command::CueAngle(a) => {
            let s = &a.settings;
            let angle = estimate_cue_angle(&load_as(&a.input, ColorSpace::Rgb)?, s.canny_lo, s.canny_hi, s.votes)?;
            json!({ "angle": angle })
        }
        Command::CueAlign(a) => {
            let (out, angle) = cue_align(&load_as(&a.input, ColorSpace::Rgb)?, &a.settings)?;
            json!({ "angle": angle, "output": save(&out, &a.output)? })
        }
        Command::CueIsolate(a) => {
            let found = isolate_cue_detailed(&load_as(&a.input, ColorSpace::Rgb)?, &a.settings)?;
            let strip: Vec<LineRecord> = found.strip.iter().map(LineRecord::from).collect();
            json!({
                "angle": found.angle,
                "balls": found.circles,
                "strip": strip,
                "output": save(&found.rotated, &a.output)?,
            })
        }
        Command::Compare(a) => {
            let x = load_as(&a.a, ColorSpace::Gray)?;
            let y = load_as(&a.b, ColorSpace::Gray)?;
            serde_json::to_value(blended_score(&x, &y, a.w)?)?
        }
    })
}
