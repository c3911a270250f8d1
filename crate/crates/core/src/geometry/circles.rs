use serde::Serialize;

use crate::error::{argument, Result};
use crate::imgcore::{require_gray, ImageBuffer};

use super::canny::{canny, sobel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    #[serde(skip)]
    pub votes: u32,
}

/// Fixed Canny thresholds for the circle edge map.
pub const CIRCLE_CANNY_LOW: f64 = 50.0;
pub const CIRCLE_CANNY_HIGH: f64 = 100.0;

/// Separable triangle weights smoothing raw centre votes into a score; the
/// votes of one circle scatter over a few pixels around its centre.
const SCORE_WEIGHTS: [u32; 5] = [1, 2, 3, 2, 1];
const REFINE_RADIUS: usize = 6;
const REFINE_STEPS: usize = 5;

fn smooth(acc: &[u32], w: usize, h: usize) -> Vec<u32> {
    let r = SCORE_WEIGHTS.len() / 2;
    let pass = |src: &[u32], horizontal: bool| -> Vec<u32> {
        let mut out = vec![0u32; w * h];
        for y in 0..h {
            for x in 0..w {
                let mut s = 0;
                for (k, wt) in SCORE_WEIGHTS.iter().enumerate() {
                    let (sx, sy) = if horizontal {
                        (x as isize + k as isize - r as isize, y as isize)
                    } else {
                        (x as isize, y as isize + k as isize - r as isize)
                    };
                    if sx >= 0 && sy >= 0 && (sx as usize) < w && (sy as usize) < h {
                        s += wt * src[sy as usize * w + sx as usize];
                    }
                }
                out[y * w + x] = s;
            }
        }
        out
    };
    pass(&pass(acc, true), false)
}

/// Mean-shift of the raw votes starting at a score peak.
fn refine(raw: &[u32], w: usize, h: usize, x: usize, y: usize) -> (f64, f64) {
    let (mut cx, mut cy) = (x as f64, y as f64);
    for _ in 0..REFINE_STEPS {
        let (px, py) = (cx.round() as usize, cy.round() as usize);
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
        for ny in py.saturating_sub(REFINE_RADIUS)..=(py + REFINE_RADIUS).min(h - 1) {
            for nx in px.saturating_sub(REFINE_RADIUS)..=(px + REFINE_RADIUS).min(w - 1) {
                let v = raw[ny * w + nx] as f64;
                sx += v * nx as f64;
                sy += v * ny as f64;
                n += v;
            }
        }
        if n == 0.0 {
            break;
        }
        (cx, cy) = (sx / n, sy / n);
    }
    (cx, cy)
}

/// Gradient-direction circle transform.
///
/// Every Canny edge pixel votes for the points at distance `r_min..=r_max`
/// along both senses of its gradient. Centres are 3x3 local maxima of the
/// smoothed vote grid scoring at least `votes`, refined by mean-shift over
/// the raw votes, visited strongest first and kept only
/// when farther than `r_min` from every centre already kept. The radius is
/// the most frequent rounded edge distance from the centre within the range.
pub fn hough_circles(img: &ImageBuffer, r_min: usize, r_max: usize, votes: u32) -> Result<Vec<Circle>> {
    require_gray(img)?;
    if r_min == 0 || r_min > r_max {
        return argument(format!("circle radii must satisfy 0 < r_min <= r_max, got [{r_min}, {r_max}]"));
    }
    if votes == 0 {
        return argument("vote threshold must be at least 1");
    }
    let (w, h) = img.dims();
    let edges = canny(img, CIRCLE_CANNY_LOW, CIRCLE_CANNY_HIGH)?;
    let g = sobel(img);
    let mut edge_pts = Vec::new();
    let mut acc = vec![0u32; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if edges.data()[i] == 0 {
                continue;
            }
            edge_pts.push((x as f64, y as f64));
            let m = g.gx[i].hypot(g.gy[i]);
            if m == 0.0 {
                continue;
            }
            let (ux, uy) = (g.gx[i] / m, g.gy[i] / m);
            for r in r_min..=r_max {
                for s in [-1.0, 1.0] {
                    let cx = (x as f64 + s * r as f64 * ux).round();
                    let cy = (y as f64 + s * r as f64 * uy).round();
                    if cx >= 0.0 && cy >= 0.0 && (cx as usize) < w && (cy as usize) < h {
                        acc[cy as usize * w + cx as usize] += 1;
                    }
                }
            }
        }
    }

    let raw = acc;
    let acc = smooth(&raw, w, h);
    // score ties inside a flat top go to the pixel with more raw votes
    let key = |i: usize| ((acc[i] as u64) << 32) | raw[i] as u64;
    let mut peaks = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let v = acc[i];
            if v < votes {
                continue;
            }
            let mut is_max = true;
            'nb: for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if (j < i && key(j) >= key(i)) || (j > i && key(j) > key(i)) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                peaks.push((key(i), x, y));
            }
        }
    }
    peaks.sort_by(|a, b| b.0.cmp(&a.0).then(a.2.cmp(&b.2)).then(a.1.cmp(&b.1)));

    let mut out: Vec<Circle> = Vec::new();
    for (k, x, y) in peaks {
        let v = (k >> 32) as u32;
        let (cx, cy) = refine(&raw, w, h, x, y);
        if out.iter().any(|c| (c.cx - cx).hypot(c.cy - cy) <= r_min as f64) {
            continue;
        }
        let mut hist = vec![0u32; r_max + 1];
        for &(ex, ey) in &edge_pts {
            let d = (ex - cx).hypot(ey - cy).round() as usize;
            if (r_min..=r_max).contains(&d) {
                hist[d] += 1;
            }
        }
        let best = (r_min..=r_max).fold(r_min, |b, r| if hist[r] > hist[b] { r } else { b });
        out.push(Circle {
            cx,
            cy,
            r: best as f64,
            votes: v,
        });
    }
    Ok(out)
}
