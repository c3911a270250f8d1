use std::collections::VecDeque;

use serde::Serialize;

use crate::error::Result;
use crate::imgcore::{require_binary, ColorSpace, ImageBuffer};

/// Sets every background pixel that cannot reach the border through
/// 4-connected background to foreground.
pub fn fill_holes(img: &ImageBuffer) -> Result<ImageBuffer> {
    require_binary(img)?;
    let (w, h) = img.dims();
    let src = img.data();
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    let mut seed = |i: usize, q: &mut VecDeque<usize>| {
        if src[i] == 0 && !outside[i] {
            outside[i] = true;
            q.push_back(i);
        }
    };
    for x in 0..w {
        seed(x, &mut queue);
        seed((h - 1) * w + x, &mut queue);
    }
    for y in 0..h {
        seed(y * w, &mut queue);
        seed(y * w + w - 1, &mut queue);
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let mut visit = |j: usize| {
            if src[j] == 0 && !outside[j] {
                outside[j] = true;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < w {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - w);
        }
        if y + 1 < h {
            visit(i + w);
        }
    }
    let data = outside.iter().map(|&o| if o { 0 } else { 255 }).collect();
    Ok(ImageBuffer::from_parts_unchecked(w, h, ColorSpace::Binary, data))
}

/// Bounding box is inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub label: u32,
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
    pub area: usize,
}

impl Region {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    /// Bounding-box height over width.
    pub fn ratio(&self) -> f64 {
        self.height() as f64 / self.width() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRegions {
    pub width: usize,
    pub height: usize,
    /// 0 is background; labels run 1..=regions.len() in raster order of
    /// each component's first pixel.
    pub labels: Vec<u32>,
    pub regions: Vec<Region>,
}

impl LabeledRegions {
    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Binary mask of the regions accepted by `keep`.
    pub fn mask_where(&self, keep: impl Fn(&Region) -> bool) -> ImageBuffer {
        let accepted: Vec<bool> = std::iter::once(false).chain(self.regions.iter().map(&keep)).collect();
        let data = self
            .labels
            .iter()
            .map(|&l| if accepted[l as usize] { 255 } else { 0 })
            .collect();
        ImageBuffer::from_parts_unchecked(self.width, self.height, ColorSpace::Binary, data)
    }
}

/// 8-connected component labelling.
pub fn connected_components(img: &ImageBuffer) -> Result<LabeledRegions> {
    require_binary(img)?;
    let (w, h) = img.dims();
    let src = img.data();
    let mut labels = vec![0u32; w * h];
    let mut regions = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if src[start] == 0 || labels[start] != 0 {
            continue;
        }
        let label = regions.len() as u32 + 1;
        let mut reg = Region {
            label,
            x0: usize::MAX,
            y0: usize::MAX,
            x1: 0,
            y1: 0,
            area: 0,
        };
        labels[start] = label;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            reg.x0 = reg.x0.min(x);
            reg.y0 = reg.y0.min(y);
            reg.x1 = reg.x1.max(x);
            reg.y1 = reg.y1.max(y);
            reg.area += 1;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if src[j] != 0 && labels[j] == 0 {
                        labels[j] = label;
                        queue.push_back(j);
                    }
                }
            }
        }
        regions.push(reg);
    }
    Ok(LabeledRegions {
        width: w,
        height: h,
        labels,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn blank(w: usize, h: usize) -> ImageBuffer {
        ImageBuffer::filled(w, h, ColorSpace::Binary, 0)
    }

    fn ring(img: &mut ImageBuffer, cx: f64, cy: f64, r_in: f64, r_out: f64) {
        for y in 0..img.height() {
            for x in 0..img.width() {
                let d = (x as f64 - cx).hypot(y as f64 - cy);
                if d >= r_in && d <= r_out {
                    img.set(x, y, 0, 255);
                }
            }
        }
    }

    #[test]
    fn ring_becomes_disk() {
        let mut img = blank(40, 40);
        ring(&mut img, 20.0, 20.0, 10.0, 13.0);
        let out = fill_holes(&img).unwrap();
        for y in 0..40 {
            for x in 0..40 {
                let d = (x as f64 - 20.0).hypot(y as f64 - 20.0);
                assert_eq!(out.get(x, y, 0) == 255, d <= 13.0);
            }
        }
    }

    #[test]
    fn nested_rings_and_open_shapes() {
        let mut img = blank(60, 60);
        ring(&mut img, 30.0, 30.0, 24.0, 26.0);
        ring(&mut img, 30.0, 30.0, 8.0, 10.0);
        let out = fill_holes(&img).unwrap();
        assert_eq!(out.get(30, 30, 0), 255);
        assert_eq!(out.get(30, 15, 0), 255);
        assert_eq!(out.get(2, 2, 0), 0);

        // a U shape touches the border through its opening
        let mut u = blank(20, 20);
        for i in 5..15 {
            u.set(5, i, 0, 255);
            u.set(14, i, 0, 255);
            u.set(i, 14, 0, 255);
        }
        assert_eq!(fill_holes(&u).unwrap(), u);
    }

    #[test]
    fn diagonal_gap_does_not_leak() {
        // background cavity sealed by 8-connected diagonal walls is still a
        // hole under 4-connected flooding
        let mut img = blank(5, 5);
        for (x, y) in [(2, 1), (1, 2), (3, 2), (2, 3)] {
            img.set(x, y, 0, 255);
        }
        assert_eq!(fill_holes(&img).unwrap().get(2, 2, 0), 255);
    }

    #[test]
    fn component_examples() {
        let cc = connected_components(&blank(10, 10)).unwrap();
        assert!(cc.regions.is_empty());

        let mut img = blank(20, 10);
        for y in 1..4 {
            for x in 1..4 {
                img.set(x, y, 0, 255);
                img.set(x + 10, y + 5, 0, 255);
            }
        }
        let cc = connected_components(&img).unwrap();
        assert_eq!(cc.regions.len(), 2);
        for r in &cc.regions {
            assert_eq!(r.area, 9);
            assert_eq!(r.ratio(), 1.0);
        }
        assert_eq!(cc.label_at(2, 2), 1);
        assert_eq!(cc.label_at(12, 7), 2);

        let bar = ImageBuffer::from_fn(50, 20, ColorSpace::Binary, |x, y| {
            if (5..45).contains(&x) && (5..15).contains(&y) { 255 } else { 0 }
        });
        let cc = connected_components(&bar).unwrap();
        assert_eq!(cc.regions[0].ratio(), 0.25);
    }

    #[test]
    fn diagonal_neighbours_join() {
        let mut img = blank(4, 4);
        img.set(0, 0, 0, 255);
        img.set(1, 1, 0, 255);
        img.set(3, 3, 0, 255);
        let cc = connected_components(&img).unwrap();
        assert_eq!(cc.regions.len(), 2);
        let only_first = cc.mask_where(|r| r.area == 2);
        assert_eq!(only_first.get(1, 1, 0), 255);
        assert_eq!(only_first.get(3, 3, 0), 0);
    }

    proptest! {
        #[test]
        fn fill_never_removes_and_labels_are_consistent(
            bits in proptest::collection::vec(proptest::bool::weighted(0.45), 144)
        ) {
            let data = bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
            let img = ImageBuffer::new(12, 12, ColorSpace::Binary, data).unwrap();
            let filled = fill_holes(&img).unwrap();
            for (a, b) in img.data().iter().zip(filled.data()) {
                prop_assert!(b >= a);
            }
            let cc = connected_components(&img).unwrap();
            let n = cc.regions.len() as u32;
            for y in 0..12 {
                for x in 0..12 {
                    let l = cc.label_at(x, y);
                    prop_assert_eq!(l == 0, img.get(x, y, 0) == 0);
                    prop_assert!(l <= n);
                    if l > 0 {
                        let r = cc.regions[l as usize - 1];
                        prop_assert!(r.x0 <= x && x <= r.x1 && r.y0 <= y && y <= r.y1);
                    }
                }
            }
            let total: usize = cc.regions.iter().map(|r| r.area).sum();
            prop_assert_eq!(total, img.data().iter().filter(|&&v| v != 0).count());
        }
    }
}
