//! Deterministic synthetic scenes with known geometry, used by tests, benches
//! and demos.

use crate::imgcore::{ColorSpace, ImageBuffer};

/// Normal angle in degrees of a line drawn at `elevation` degrees above the
/// +x axis in an image whose y axis points down.
pub fn normal_of_elevation(elevation: f64) -> f64 {
    (90.0 - elevation).rem_euclid(180.0)
}

/// Binary image with one 8-connected segment of `length` pixels through
/// `(cx, cy)` at `elevation` degrees.
pub fn line_image(w: usize, h: usize, cx: f64, cy: f64, elevation: f64, length: f64) -> ImageBuffer {
    let mut img = ImageBuffer::filled(w, h, ColorSpace::Binary, 0);
    let (s, c) = elevation.to_radians().sin_cos();
    let (dx, dy) = (c, -s);
    let steps = (length * dx.abs().max(dy.abs())).ceil() as isize;
    let scale = 1.0 / dx.abs().max(dy.abs());
    for k in -steps / 2..=steps / 2 {
        let t = k as f64 * scale;
        let (x, y) = ((cx + t * dx).round(), (cy + t * dy).round());
        if x >= 0.0 && y >= 0.0 && (x as usize) < w && (y as usize) < h {
            img.set(x as usize, y as usize, 0, 255);
        }
    }
    img
}

/// Smooth gray test card: a ramp plus a low-frequency ripple.
pub fn smooth_gradient(w: usize, h: usize) -> ImageBuffer {
    ImageBuffer::from_fn(w, h, ColorSpace::Gray, |x, y| {
        let v = 40.0 + 120.0 * x as f64 / w as f64 + 60.0 * y as f64 / h as f64 + 12.0 * (x as f64 / 11.0).sin();
        v.round().clamp(0.0, 255.0) as u8
    })
}

fn hash(x: usize, y: usize, seed: u64) -> u64 {
    let mut z = seed ^ ((x as u64) << 32 | y as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Gray "photo": shaded blobs and bars with mild pixel noise, reproducible
/// from `seed`.
pub fn textured_scene(w: usize, h: usize, seed: u64) -> ImageBuffer {
    let (fw, fh) = (w as f64, h as f64);
    ImageBuffer::from_fn(w, h, ColorSpace::Gray, |x, y| {
        let (u, v) = (x as f64 / fw, y as f64 / fh);
        let mut p = 70.0 + 60.0 * u + 30.0 * (6.0 * v).sin();
        if (u - 0.35).hypot(v - 0.4) < 0.18 {
            p += 70.0 * (1.0 - (u - 0.35).hypot(v - 0.4) / 0.18);
        }
        if (0.6..0.8).contains(&u) && (0.15..0.85).contains(&v) {
            p -= 45.0;
        }
        if ((x / 6) + (y / 6)) % 2 == 0 && v > 0.75 {
            p += 20.0;
        }
        p += (hash(x, y, seed) % 13) as f64 - 6.0;
        p.round().clamp(0.0, 255.0) as u8
    })
}

/// Axis-aligned rectangle `(x0, y0, width, height)`.
pub type Rect = (usize, usize, usize, usize);

/// Bright wall with three dark windows and one tall door (ratio 2.5), BGR.
pub fn facade() -> (ImageBuffer, Vec<Rect>, Rect) {
    let windows = vec![(30, 40, 44, 40), (110, 40, 44, 42), (190, 40, 42, 40)];
    let door = (120, 120, 30, 75);
    let all: Vec<Rect> = windows.iter().copied().chain([door]).collect();
    let img = ImageBuffer::from_fn3(260, 220, ColorSpace::Bgr, |x, y| {
        let inside = all.iter().any(|&(x0, y0, w, h)| x >= x0 && x < x0 + w && y >= y0 && y < y0 + h);
        if inside {
            [50, 45, 40]
        } else {
            [190, 200, 210]
        }
    });
    (img, windows, door)
}

/// Billiard table layout and its ground truth.
#[derive(Debug, Clone)]
pub struct CueScene {
    pub image: ImageBuffer,
    pub elevation: f64,
    pub balls: Vec<(f64, f64)>,
    pub ball_radius: f64,
    /// Row-major flags marking cue-bar pixels.
    pub bar: Vec<bool>,
}

/// 512x512 RGB table: cloth of intensity `cloth`, three balls of radius 29,
/// and an 8 px wide, 400 px long bright cue through the centre at
/// `elevation` degrees.
pub fn cue_scene(elevation: f64, cloth: u8) -> CueScene {
    let (w, h) = (512, 512);
    let (cx, cy) = (256.0, 256.0);
    let (s, c) = elevation.to_radians().sin_cos();
    let (dx, dy) = (c, -s);
    let balls = vec![(90.0, 110.0), (420.0, 400.0), (440.0, 200.0)];
    let r = 29.0;
    let in_bar = |x: usize, y: usize| {
        let (px, py) = (x as f64 - cx, y as f64 - cy);
        (px * dx + py * dy).abs() <= 200.0 && (py * dx - px * dy).abs() < 4.0
    };
    let image = ImageBuffer::from_fn3(w, h, ColorSpace::Rgb, |x, y| {
        if balls.iter().any(|&(bx, by)| (x as f64 - bx).hypot(y as f64 - by) <= r) {
            [235, 235, 220]
        } else if in_bar(x, y) {
            [220, 200, 160]
        } else {
            [cloth, cloth, cloth]
        }
    });
    let bar = (0..w * h).map(|i| in_bar(i % w, i / w)).collect();
    CueScene {
        image,
        elevation,
        balls,
        ball_radius: r,
        bar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_lengths_and_normals() {
        let img = line_image(100, 100, 50.0, 50.0, 0.0, 41.0);
        assert_eq!(img.data().iter().filter(|&&v| v != 0).count(), 41);
        assert_eq!(normal_of_elevation(51.5), 38.5);
        assert_eq!(normal_of_elevation(0.0), 90.0);
        assert_eq!(normal_of_elevation(90.0), 0.0);
        assert_eq!(normal_of_elevation(120.0), 150.0);
    }

    #[test]
    fn scenes_are_reproducible() {
        assert_eq!(textured_scene(40, 30, 7), textured_scene(40, 30, 7));
        assert_ne!(textured_scene(40, 30, 7), textured_scene(40, 30, 8));
        let s = cue_scene(51.5, 60);
        assert!(s.bar.iter().filter(|&&b| b).count() > 3000);
        for &(bx, by) in &s.balls {
            assert!(!s.bar[by as usize * 512 + bx as usize]);
        }
    }
}
