//! Salt-and-pepper impulse detector.
//!
//! A pixel is *suspicious* when it carries one of the two impulse values.
//! Suspicious pixels are then exempted (treated as uncorrupted) when their
//! whole `w x w` window consists of impulse values and the window leans
//! strongly (more than 3:1) toward the pixel's own impulse value.
//!
//! Windows are clipped to the image: counts only include in-bounds cells and
//! the "whole window" test compares against the clipped cardinality. The
//! centre pixel is part of its own window.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Grid, PixelMask};

/// Everything the detector computed on the way to the final mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorReport {
    pub n_min: u8,
    pub n_max: u8,
    /// Estimated noise density: fraction of suspicious pixels.
    pub p_hat: f64,
    /// Odd window side used for the neighbourhood counts.
    pub w: usize,
    pub c_min_map: Grid<u32>,
    pub c_max_map: Grid<u32>,
    pub mask: PixelMask,
}

impl DetectorReport {
    pub fn suspicious_count(&self) -> usize {
        (self.p_hat * self.mask.bits().len() as f64).round() as usize
    }

    pub fn corrupted_count(&self) -> usize {
        self.mask.count_noisy()
    }

    /// Machine-parseable `key=value` block, one pair per line.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n_min={}", self.n_min);
        let _ = writeln!(s, "n_max={}", self.n_max);
        let _ = writeln!(s, "p_hat={:.6}", self.p_hat);
        let _ = writeln!(s, "w={}", self.w);
        let _ = writeln!(s, "corrupted={}", self.corrupted_count());
        let _ = writeln!(s, "pixels={}", self.mask.bits().len());
        s
    }

    pub const CSV_HEADER: &'static str = "n_min,n_max,p_hat,w,corrupted,pixels";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{},{},{}",
            self.n_min,
            self.n_max,
            self.p_hat,
            self.w,
            self.corrupted_count(),
            self.mask.bits().len()
        )
    }
}

/// Caller-supplied impulse values that replace the min/max search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImpulseOverride {
    pub n_min: Option<u8>,
    pub n_max: Option<u8>,
}

impl ImpulseOverride {
    pub fn is_empty(&self) -> bool {
        self.n_min.is_none() && self.n_max.is_none()
    }
}

/// The two extreme grey-values of the image.
pub fn find_impulse_values(img: &GrayImage) -> Result<(u8, u8)> {
    let (lo, hi) = img.min_max();
    if lo == hi {
        return Err(Error::DegenerateImage(lo));
    }
    Ok((lo, hi))
}

pub fn suspicious_map(img: &GrayImage, n_min: u8, n_max: u8) -> Grid<bool> {
    img.map(|&v| v == n_min || v == n_max)
}

/// Smallest odd integer strictly greater than `sqrt(1 + 5 / (1 - p_hat))`.
pub fn window_size(p_hat: f64) -> Result<usize> {
    if p_hat >= 1.0 {
        return Err(Error::AllSuspicious);
    }
    if p_hat.is_nan() || p_hat < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise density estimate {p_hat} outside [0, 1)"
        )));
    }
    let root = (1.0 + 5.0 / (1.0 - p_hat)).sqrt();
    let w = root.floor() as usize + 1;
    Ok(if w.is_multiple_of(2) { w + 1 } else { w })
}

/// [`window_size`] for `p_hat = suspicious / total`, in exact integer arithmetic.
///
/// With `m = total - suspicious`, the condition `w > sqrt(1 + 5 total / m)`
/// becomes `w^2 m > m + 5 total`.
pub fn window_size_for_counts(suspicious: usize, total: usize) -> Result<usize> {
    if total == 0 || suspicious > total {
        return Err(Error::InvalidArgument(format!(
            "{suspicious} suspicious pixels out of {total}"
        )));
    }
    if suspicious == total {
        return Err(Error::AllSuspicious);
    }
    let m = (total - suspicious) as u128;
    let rhs = m + 5 * total as u128;
    let mut w: u128 = 3;
    while w * w * m <= rhs {
        w += 2;
    }
    Ok(w as usize)
}

/// Number of in-bounds cells of the `w x w` window centred on `(row, col)`.
#[inline]
pub fn window_cardinality(width: usize, height: usize, row: usize, col: usize, w: usize) -> u32 {
    let r = w / 2;
    let rows = (row + r).min(height - 1) - row.saturating_sub(r) + 1;
    let cols = (col + r).min(width - 1) - col.saturating_sub(r) + 1;
    (rows * cols) as u32
}

/// Per-pixel counts of `n_min` and `n_max` values in the clipped `w x w` window.
pub fn neighborhood_counts(
    img: &GrayImage,
    n_min: u8,
    n_max: u8,
    w: usize,
) -> (Grid<u32>, Grid<u32>) {
    let c_min = box_count(img, w, |v| v == n_min);
    let c_max = box_count(img, w, |v| v == n_max);
    (c_min, c_max)
}

/// Box sum of an indicator image through a summed-area table.
fn box_count(img: &GrayImage, w: usize, pred: impl Fn(u8) -> bool) -> Grid<u32> {
    let (width, height) = img.dims();
    let sw = width + 1;
    // sat[(r) * sw + c] = count over rows < r, cols < c
    let mut sat = vec![0u32; sw * (height + 1)];
    for (row, line) in img.rows().enumerate() {
        let mut acc = 0u32;
        for (col, &v) in line.iter().enumerate() {
            acc += u32::from(pred(v));
            sat[(row + 1) * sw + col + 1] = sat[row * sw + col + 1] + acc;
        }
    }
    let r = w / 2;
    let mut out = Vec::with_capacity(img.len());
    for row in 0..height {
        let top = row.saturating_sub(r);
        let bottom = (row + r + 1).min(height);
        for col in 0..width {
            let left = col.saturating_sub(r);
            let right = (col + r + 1).min(width);
            out.push(
                sat[bottom * sw + right] + sat[top * sw + left]
                    - sat[top * sw + right]
                    - sat[bottom * sw + left],
            );
        }
    }
    Grid::from_vec(width, height, out).expect("shape preserved")
}

/// Final corrupted/uncorrupted decision for every pixel.
///
/// A suspicious pixel is exempted only when its window is entirely made of
/// impulse values *and* it agrees with a more-than-3:1 majority impulse.
pub fn classify(
    img: &GrayImage,
    n_min: u8,
    n_max: u8,
    w: usize,
    c_min_map: &Grid<u32>,
    c_max_map: &Grid<u32>,
) -> Result<PixelMask> {
    img.ensure_same_dims(c_min_map)?;
    img.ensure_same_dims(c_max_map)?;
    let (width, height) = img.dims();
    let known = Grid::from_fn(width, height, |row, col| {
        let v = img.get(row, col);
        let is_min = v == n_min;
        let is_max = v == n_max;
        if !is_min && !is_max {
            return true;
        }
        let c_min = c_min_map.get(row, col);
        let c_max = c_max_map.get(row, col);
        let all_impulses = c_min + c_max == window_cardinality(width, height, row, col, w);
        let inclined = (is_min && 3 * c_max < c_min) || (is_max && 3 * c_min < c_max);
        all_impulses && inclined
    })?;
    Ok(PixelMask::new(known))
}

/// Runs the full detector with impulse values taken from the image extremes.
pub fn detect(img: &GrayImage) -> Result<DetectorReport> {
    detect_with(img, ImpulseOverride::default())
}

/// Runs the full detector, optionally with caller-supplied impulse values.
pub fn detect_with(img: &GrayImage, impulses: ImpulseOverride) -> Result<DetectorReport> {
    let (n_min, n_max) = match impulses {
        ImpulseOverride {
            n_min: Some(lo),
            n_max: Some(hi),
        } => (lo, hi),
        ImpulseOverride { n_min, n_max } => {
            let (lo, hi) = img.min_max();
            (n_min.unwrap_or(lo), n_max.unwrap_or(hi))
        }
    };
    if impulses.is_empty() {
        find_impulse_values(img)?;
    } else if n_min >= n_max {
        return Err(Error::InvalidImpulses(n_min, n_max));
    }

    let suspicious = suspicious_map(img, n_min, n_max);
    let count = suspicious.as_slice().iter().filter(|&&b| b).count();
    let total = img.len();
    let p_hat = count as f64 / total as f64;
    let w = window_size_for_counts(count, total)?;
    let (c_min_map, c_max_map) = neighborhood_counts(img, n_min, n_max, w);
    let mask = classify(img, n_min, n_max, w, &c_min_map, &c_max_map)?;
    Ok(DetectorReport {
        n_min,
        n_max,
        p_hat,
        w,
        c_min_map,
        c_max_map,
        mask,
    })
}
