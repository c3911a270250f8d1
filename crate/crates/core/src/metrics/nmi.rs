use crate::error::Result;
use crate::imgcore::{ensure_same_dims, require_gray, ImageBuffer};

/// Shannon entropy in bits of a count table, skipping empty cells.
pub fn entropy(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h
}

fn marginal_counts(img: &ImageBuffer) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &v in img.data() {
        bins[v as usize] += 1;
    }
    bins
}

pub(crate) fn marginal_entropy(img: &ImageBuffer) -> f64 {
    entropy(&marginal_counts(img), img.data().len() as u64)
}

/// Entropy of the 256x256 joint intensity histogram.
pub fn joint_entropy(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    require_gray(a)?;
    require_gray(b)?;
    ensure_same_dims(a, b)?;
    Ok(joint(a, b))
}

fn joint(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    let mut bins = vec![0u64; 256 * 256];
    for (&p, &q) in a.data().iter().zip(b.data()) {
        bins[p as usize * 256 + q as usize] += 1;
    }
    entropy(&bins, a.data().len() as u64)
}

pub(crate) fn nmi_from_parts(a: &ImageBuffer, b: &ImageBuffer, ha: f64, hb: f64) -> f64 {
    let hab = joint(a, b);
    if hab == 0.0 {
        // both constant
        return if a.data()[0] == b.data()[0] { 2.0 } else { 1.0 };
    }
    (ha + hb) / hab
}

/// `(H(a) + H(b)) / H(a, b)`, in `[1, 2]`.
pub fn nmi(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    require_gray(a)?;
    require_gray(b)?;
    ensure_same_dims(a, b)?;
    Ok(nmi_from_parts(a, b, marginal_entropy(a), marginal_entropy(b)))
}
