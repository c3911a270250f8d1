use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, Result};
use crate::imgcore::{require_binary, ImageBuffer};

/// A line in normal form `rho = x cos(theta) + y sin(theta)`, with `y`
/// pointing down and `theta` in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub rho: f64,
    pub theta: f64,
    pub votes: u32,
}

impl Line {
    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }
}

/// Vote grid of the standard line transform.
#[derive(Debug, Clone)]
pub struct Accumulator {
    pub thetas: Vec<f64>,
    pub rho_res: f64,
    /// Index of `rho = 0` along the rho axis.
    pub rho_offset: usize,
    pub n_rho: usize,
    /// Row-major by theta: `votes[t * n_rho + r]`.
    pub votes: Vec<u32>,
}

impl Accumulator {
    pub fn at(&self, t: usize, r: usize) -> u32 {
        self.votes[t * self.n_rho + r]
    }

    pub fn rho_of(&self, r: usize) -> f64 {
        (r as f64 - self.rho_offset as f64) * self.rho_res
    }
}

fn validate(edges: &ImageBuffer, rho_res: f64, theta_res: f64, votes: u32) -> Result<()> {
    require_binary(edges)?;
    if !(rho_res > 0.0) || !rho_res.is_finite() {
        return argument(format!("rho resolution must be > 0, got {rho_res}"));
    }
    if !(theta_res > 0.0 && theta_res <= 180.0) {
        return argument(format!("theta resolution must lie in (0, 180], got {theta_res}"));
    }
    if votes == 0 {
        return argument("vote threshold must be at least 1");
    }
    Ok(())
}

/// Fills the accumulator. Each theta row is independent, so rows are voted
/// in parallel and the counts are exact.
pub fn hough_accumulator(edges: &ImageBuffer, rho_res: f64, theta_res_deg: f64) -> Accumulator {
    let (w, h) = edges.dims();
    let n_theta = ((180.0 / theta_res_deg) - 1e-9).ceil().max(1.0) as usize;
    let thetas: Vec<f64> = (0..n_theta).map(|i| (i as f64 * theta_res_deg).to_radians()).collect();
    let diag = ((w * w + h * h) as f64).sqrt().ceil();
    let rho_offset = (diag / rho_res).round() as usize;
    let n_rho = 2 * rho_offset + 1;

    let points: Vec<(f64, f64)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| edges.get(x, y, 0) != 0)
        .map(|(x, y)| (x as f64, y as f64))
        .collect();

    let mut votes = vec![0u32; n_theta * n_rho];
    votes
        .par_chunks_mut(n_rho)
        .zip(thetas.par_iter())
        .for_each(|(row, &theta)| {
            let (s, c) = theta.sin_cos();
            for &(x, y) in &points {
                let r = ((x * c + y * s) / rho_res).round() as isize + rho_offset as isize;
                row[r as usize] += 1;
            }
        });
    Accumulator {
        thetas,
        rho_res,
        rho_offset,
        n_rho,
        votes,
    }
}

/// Standard line transform. Returns every accumulator cell with at least
/// `votes` hits that is also a local maximum along both axes, strongest
/// first; equal counts keep accumulator order (theta, then rho).
pub fn hough_lines(edges: &ImageBuffer, rho_res: f64, theta_res_deg: f64, votes: u32) -> Result<Vec<Line>> {
    validate(edges, rho_res, theta_res_deg, votes)?;
    let acc = hough_accumulator(edges, rho_res, theta_res_deg);
    let n_theta = acc.thetas.len();
    let get = |t: isize, r: isize| -> u32 {
        if t < 0 || r < 0 || t as usize >= n_theta || r as usize >= acc.n_rho {
            0
        } else {
            acc.at(t as usize, r as usize)
        }
    };
    let mut found = Vec::new();
    for t in 0..n_theta as isize {
        for r in 0..acc.n_rho as isize {
            let v = get(t, r);
            if v >= votes
                && v > get(t, r - 1)
                && v >= get(t, r + 1)
                && v > get(t - 1, r)
                && v >= get(t + 1, r)
            {
                found.push((v, t as usize, r as usize));
            }
        }
    }
    found.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(found
        .into_iter()
        .map(|(v, t, r)| Line {
            rho: acc.rho_of(r),
            theta: acc.thetas[t],
            votes: v,
        })
        .collect())
}

/// Per-line orientation `(90 + theta_deg) mod 180`.
pub fn roof_angle(lines: &[Line]) -> Vec<f64> {
    lines.iter().map(|l| (90.0 + l.theta_deg()).rem_euclid(180.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::ColorSpace;

    fn blank(w: usize, h: usize) -> ImageBuffer {
        ImageBuffer::filled(w, h, ColorSpace::Binary, 0)
    }

    #[test]
    fn horizontal_and_vertical() {
        let mut img = blank(120, 60);
        for x in 10..110 {
            img.set(x, 10, 0, 255);
        }
        let lines = hough_lines(&img, 1.0, 1.0, 50).unwrap();
        assert_eq!(lines[0].rho, 10.0);
        assert!((lines[0].theta_deg() - 90.0).abs() < 1e-9);
        assert_eq!(lines[0].votes, 100);

        let mut img = blank(60, 120);
        for y in 5..105 {
            img.set(10, y, 0, 255);
        }
        let lines = hough_lines(&img, 1.0, 1.0, 50).unwrap();
        assert_eq!((lines[0].rho, lines[0].theta), (10.0, 0.0));
    }

    #[test]
    fn empty_map_and_argument_checks() {
        assert!(hough_lines(&blank(10, 10), 1.0, 1.0, 1).unwrap().is_empty());
        assert!(hough_lines(&blank(10, 10), 0.0, 1.0, 1).is_err());
        assert!(hough_lines(&blank(10, 10), 1.0, 0.0, 1).is_err());
        assert!(hough_lines(&blank(10, 10), 1.0, 181.0, 1).is_err());
        assert!(hough_lines(&blank(10, 10), 1.0, 1.0, 0).is_err());
        let gray = ImageBuffer::filled(4, 4, ColorSpace::Gray, 0);
        assert!(hough_lines(&gray, 1.0, 1.0, 1).is_err());
    }

    /// Brute-force vote count for one cell.
    #[test]
    fn accumulator_matches_direct_count() {
        let mut img = blank(30, 20);
        for (x, y) in [(3, 4), (10, 10), (29, 19), (0, 0), (15, 2)] {
            img.set(x, y, 0, 255);
        }
        let acc = hough_accumulator(&img, 2.0, 7.0);
        assert_eq!(acc.thetas.len(), 26);
        for (t, &theta) in acc.thetas.iter().enumerate() {
            for r in 0..acc.n_rho {
                let expected = [(3, 4), (10, 10), (29, 19), (0, 0), (15, 2)]
                    .iter()
                    .filter(|&&(x, y)| {
                        let rho = x as f64 * theta.cos() + y as f64 * theta.sin();
                        (rho / 2.0).round() as isize == r as isize - acc.rho_offset as isize
                    })
                    .count() as u32;
                assert_eq!(acc.at(t, r), expected);
            }
        }
    }

    #[test]
    fn sorted_by_votes() {
        let mut img = blank(100, 100);
        for x in 0..90 {
            img.set(x, 20, 0, 255);
        }
        for y in 0..60 {
            img.set(70, y + 30, 0, 255);
        }
        let lines = hough_lines(&img, 1.0, 1.0, 40).unwrap();
        assert!(lines.windows(2).all(|p| p[0].votes >= p[1].votes));
        assert!((lines[0].theta_deg() - 90.0).abs() < 1e-9 && lines[0].rho == 20.0);
        assert!(lines.iter().any(|l| l.theta == 0.0 && l.rho == 70.0));
    }

    #[test]
    fn roof_angles() {
        let l = |deg: f64| Line {
            rho: 0.0,
            theta: deg.to_radians(),
            votes: 1,
        };
        let a = roof_angle(&[l(0.0), l(90.0), l(38.5)]);
        assert!((a[0] - 90.0).abs() < 1e-9);
        assert!(a[1].abs() < 1e-9);
        assert!((a[2] - 128.5).abs() < 1e-9);
        assert!(roof_angle(&[]).is_empty());
    }
}
