//! Exact Euclidean distance transform of a known-pixel mask, with the map of
//! closest known pixels, and nearest-neighbour fill of the noisy pixels.
//!
//! The transform is separable and linear in the pixel count:
//!
//! 1. every column is scanned twice to find, for each cell, the nearest
//!    known pixel in the same column;
//! 2. every row then takes the lower envelope of the parabolas
//!    `(col - c)^2 + g(c)^2` over the column candidates `c`.
//!
//! All distances are compared as exact squared integers. When several known
//! pixels are equally close the one with the smallest row, then smallest
//! column, wins; the envelope is built over that total order so the result
//! matches an exhaustive search bit for bit.

use crate::error::{Error, Result};
use crate::image::{FloatImage, GrayImage, Grid, PixelMask};

/// Distance map (DM) and closest-pixel map (CPM) of a mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    /// Euclidean distance to the nearest known pixel.
    pub dm: FloatImage,
    /// `(row, col)` of that pixel.
    pub cpm: Grid<(u32, u32)>,
}

impl DistanceField {
    /// Squared distance from `(row, col)` to its closest known pixel.
    pub fn squared_distance(&self, row: usize, col: usize) -> u64 {
        let (r, c) = self.cpm.get(row, col);
        let dr = row.abs_diff(r as usize) as u64;
        let dc = col.abs_diff(c as usize) as u64;
        dr * dr + dc * dc
    }
}

const NONE: u32 = u32::MAX;

pub fn distance_transform(mask: &PixelMask) -> Result<DistanceField> {
    let (width, height) = (mask.width(), mask.height());
    if mask.count_known() == 0 {
        return Err(Error::NoKnownPixels);
    }

    // Pass 1: nearest known row in the same column, ties going upward.
    let mut nearest_row = vec![NONE; width * height];
    for col in 0..width {
        let mut last = NONE;
        for row in 0..height {
            if mask.is_known(row, col) {
                last = row as u32;
            }
            nearest_row[row * width + col] = last;
        }
        let mut next = NONE;
        for row in (0..height).rev() {
            if mask.is_known(row, col) {
                next = row as u32;
            }
            let above = nearest_row[row * width + col];
            let pick = match (above, next) {
                (NONE, b) => b,
                (a, NONE) => a,
                (a, b) => {
                    if row as u32 - a <= b - row as u32 {
                        a
                    } else {
                        b
                    }
                }
            };
            nearest_row[row * width + col] = pick;
        }
    }

    // Pass 2: lower envelope per row.
    let mut dm = Vec::with_capacity(width * height);
    let mut cpm = Vec::with_capacity(width * height);
    let mut env = Envelope::with_capacity(width);
    for row in 0..height {
        let cand = &nearest_row[row * width..(row + 1) * width];
        env.build(row as i64, cand, width as i64);
        let mut k = 0;
        for col in 0..width {
            while k + 1 < env.sites.len() && env.starts[k + 1] <= col as i64 {
                k += 1;
            }
            let site = env.sites[k];
            let site_row = cand[site as usize];
            let dr = row as i64 - i64::from(site_row);
            let dc = col as i64 - i64::from(site);
            dm.push(((dr * dr + dc * dc) as f64).sqrt());
            cpm.push((site_row, site));
        }
    }

    Ok(DistanceField {
        dm: Grid::from_vec(width, height, dm)?,
        cpm: Grid::from_vec(width, height, cpm)?,
    })
}

/// Lower envelope of the per-column candidates of one row.
struct Envelope {
    /// Candidate columns, left to right.
    sites: Vec<u32>,
    /// First column at which each site is the winner.
    starts: Vec<i64>,
}

impl Envelope {
    fn with_capacity(n: usize) -> Self {
        Self {
            sites: Vec::with_capacity(n),
            starts: Vec::with_capacity(n),
        }
    }

    fn build(&mut self, row: i64, cand: &[u32], width: i64) {
        self.sites.clear();
        self.starts.clear();
        for (col, &r) in cand.iter().enumerate() {
            if r == NONE {
                continue;
            }
            let col = col as u32;
            loop {
                let Some(&top) = self.sites.last() else {
                    self.sites.push(col);
                    self.starts.push(0);
                    break;
                };
                let t = first_win(row, top, cand[top as usize], col, r);
                if t <= *self.starts.last().unwrap() {
                    self.sites.pop();
                    self.starts.pop();
                    continue;
                }
                if t < width {
                    self.sites.push(col);
                    self.starts.push(t);
                }
                break;
            }
        }
    }
}

/// First column at which candidate `b` (in column `b`, row `rb`) beats
/// candidate `a` (column `a < b`, row `ra`) for a query on `row`.
///
/// `b` beats `a` at column `j` when its squared distance is smaller, or equal
/// with `(rb, b) < (ra, a)`. The difference of squared distances is linear
/// in `j`, so the winning set of `b` is a half-line.
fn first_win(row: i64, a: u32, ra: u32, b: u32, rb: u32) -> i64 {
    let (a, b) = (i64::from(a), i64::from(b));
    let ga = row - i64::from(ra);
    let gb = row - i64::from(rb);
    // cost_a(j) - cost_b(j) = j * den - num
    let num = b * b - a * a + gb * gb - ga * ga;
    let den = 2 * (b - a);
    let b_wins_ties = rb < ra;
    if b_wins_ties {
        // smallest j with j * den >= num
        -(-num).div_euclid(den)
    } else {
        // smallest j with j * den > num
        num.div_euclid(den) + 1
    }
}

/// Nearest-neighbour interpolation: every pixel takes the value of its
/// closest known pixel. Known pixels map to themselves.
pub fn nni_fill(img: &GrayImage, field: &DistanceField) -> Result<GrayImage> {
    img.ensure_same_dims(&field.cpm)?;
    Ok(field.cpm.map(|&(r, c)| img.get(r as usize, c as usize)))
}
