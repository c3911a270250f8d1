use serde::Serialize;

use super::circles::Circle;
use super::harris::Corner;
use super::hough::Line;
use super::regions::Region;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineRecord {
    pub rho: f64,
    pub theta_deg: f64,
    pub votes: u32,
}

impl From<&Line> for LineRecord {
    fn from(l: &Line) -> Self {
        LineRecord {
            rho: l.rho,
            theta_deg: l.theta_deg(),
            votes: l.votes,
        }
    }
}

/// Detected features in report form.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeatureSet {
    pub lines: Vec<LineRecord>,
    pub circles: Vec<Circle>,
    pub corners: Vec<Corner>,
    pub regions: Vec<Region>,
}

impl FeatureSet {
    pub fn with_lines(mut self, lines: &[Line]) -> Self {
        self.lines = lines.iter().map(LineRecord::from).collect();
        self
    }

    pub fn with_circles(mut self, circles: &[Circle]) -> Self {
        self.circles = circles.to_vec();
        self
    }

    pub fn with_corners(mut self, corners: &[Corner]) -> Self {
        self.corners = corners.to_vec();
        self
    }

    pub fn with_regions(mut self, regions: &[Region]) -> Self {
        self.regions = regions.to_vec();
        self
    }
}
