//! Independent loop-based reference implementations used by the integration
//! tests and the acceptance suite.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use ewa_denoise::{FloatImage, GrayImage, PixelMask};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

/// Straight transcription of the detector: impulse values, suspicious set,
/// density estimate, window size, windowed counts and the exemption rule,
/// each evaluated pixel by pixel. Returns `None` where the detector must
/// refuse the image (constant or fully suspicious).
pub fn detect_mask_oracle(img: &GrayImage) -> Option<(usize, Vec<Vec<u8>>)> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let px = |r: i64, c: i64| img.get(r as usize, c as usize);

    let mut n_min = u8::MAX;
    let mut n_max = u8::MIN;
    for r in 0..h {
        for c in 0..w {
            n_min = n_min.min(px(r, c));
            n_max = n_max.max(px(r, c));
        }
    }
    if n_min == n_max {
        return None;
    }

    let mut suspicious = 0i64;
    for r in 0..h {
        for c in 0..w {
            if px(r, c) == n_min || px(r, c) == n_max {
                suspicious += 1;
            }
        }
    }
    let n = w * h;
    if suspicious == n {
        return None;
    }
    // radicand 1 + 5 / (1 - s/n) = (6n - s) / (n - s)
    let radicand = (6 * n - suspicious) as f64 / (n - suspicious) as f64;
    let mut win = 1i64;
    while (win * win) as f64 <= radicand {
        win += 2;
    }

    let half = win / 2;
    let mut mask = vec![vec![1u8; w as usize]; h as usize];
    for r in 0..h {
        for c in 0..w {
            let v = px(r, c);
            let in_omega_n = v == n_min || v == n_max;
            let mut c_min = 0;
            let mut c_max = 0;
            let mut cells = 0;
            for dr in -half..=half {
                for dc in -half..=half {
                    let (rr, cc) = (r + dr, c + dc);
                    if rr < 0 || rr >= h || cc < 0 || cc >= w {
                        continue;
                    }
                    cells += 1;
                    if px(rr, cc) == n_min {
                        c_min += 1;
                    }
                    if px(rr, cc) == n_max {
                        c_max += 1;
                    }
                }
            }
            let d1 = c_min + c_max == cells;
            let d2 = (v == n_min && (c_max as f64) < c_min as f64 / 3.0)
                || (v == n_max && (c_min as f64) < c_max as f64 / 3.0);
            let corrupted = in_omega_n && (!d1 || !d2);
            if corrupted {
                mask[r as usize][c as usize] = 0;
            }
        }
    }
    Some((win as usize, mask))
}

/// Exhaustive nearest-known-pixel search. Scanning in row-major order and
/// keeping only strict improvements yields the smallest `(row, col)` among
/// equidistant candidates.
pub fn edt_oracle(mask: &PixelMask) -> Vec<Vec<(u64, (u32, u32))>> {
    let (w, h) = (mask.width(), mask.height());
    let mut out = vec![vec![(u64::MAX, (0, 0)); w]; h];
    for r in 0..h {
        for c in 0..w {
            let mut best = (u64::MAX, (0u32, 0u32));
            for kr in 0..h {
                for kc in 0..w {
                    if !mask.is_known(kr, kc) {
                        continue;
                    }
                    let dr = r.abs_diff(kr) as u64;
                    let dc = c.abs_diff(kc) as u64;
                    let d2 = dr * dr + dc * dc;
                    if d2 < best.0 {
                        best = (d2, (kr as u32, kc as u32));
                    }
                }
            }
            out[r][c] = best;
        }
    }
    out
}

/// Zero-padded "same" convolution with the 3x3 ones kernel, written against
/// an explicitly padded copy of the input.
pub fn convolve_oracle(a: &FloatImage) -> FloatImage {
    let (w, h) = a.dims();
    let mut padded = vec![vec![0.0; w + 2]; h + 2];
    for r in 0..h {
        for c in 0..w {
            padded[r + 1][c + 1] = a.get(r, c);
        }
    }
    FloatImage::from_fn(w, h, |r, c| {
        let mut s = 0.0;
        for pr in r..r + 3 {
            for pc in c..c + 3 {
                s += padded[pr][pc];
            }
        }
        s
    })
    .unwrap()
}

/// Per-pixel weighted mean of the in-bounds 3x3 neighbourhood.
pub fn weighted_average_oracle(x: &FloatImage, wm: &FloatImage) -> FloatImage {
    let (w, h) = x.dims();
    FloatImage::from_fn(w, h, |r, c| {
        let mut num = 0.0;
        let mut den = 0.0;
        for rr in r.saturating_sub(1)..=(r + 1).min(h - 1) {
            for cc in c.saturating_sub(1)..=(c + 1).min(w - 1) {
                num += x.get(rr, cc) * wm.get(rr, cc);
                den += wm.get(rr, cc);
            }
        }
        num / den
    })
    .unwrap()
}

/// Largest absolute difference relative to the largest reference magnitude.
pub fn relative_error(got: &FloatImage, reference: &FloatImage) -> f64 {
    let scale = reference
        .as_slice()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    got.as_slice()
        .iter()
        .zip(reference.as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}
