//! Fixed-valued impulse (salt-and-pepper) noise injection.
//!
//! Every pixel is an independent trial: with probability `p/2` it becomes
//! `n_min`, with probability `p/2` it becomes `n_max`, otherwise it is kept.
//!
//! Randomness comes from `rand_chacha::ChaCha8Rng` seeded with
//! `SeedableRng::seed_from_u64(seed)`. One uniform `f64` in `[0, 1)` is drawn
//! per pixel in row-major order; a draw `u < p/2` selects `n_min` and
//! `p/2 <= u < p` selects `n_max`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Grid, PixelMask};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub density: f64,
    /// Pepper value.
    pub n_min: u8,
    /// Salt value.
    pub n_max: u8,
    pub seed: u64,
}

impl NoiseParams {
    /// Classic salt-and-pepper: impulses at 0 and 255.
    pub fn new(density: f64, seed: u64) -> Self {
        Self {
            density,
            n_min: 0,
            n_max: 255,
            seed,
        }
    }

    pub fn with_impulses(mut self, n_min: u8, n_max: u8) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidNoiseParams(format!(
                "density {} outside [0, 1]",
                self.density
            )));
        }
        if self.n_min >= self.n_max {
            return Err(Error::InvalidNoiseParams(format!(
                "n_min {} must be below n_max {}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }
}

/// Corrupts `img` and returns the noisy image with its ground-truth mask.
///
/// The mask is 0 exactly where the noise process replaced the pixel, even
/// when the impulse equals the original value.
pub fn inject_spn(img: &GrayImage, params: &NoiseParams) -> Result<(GrayImage, PixelMask)> {
    params.validate()?;
    let half = params.density / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut noisy = Vec::with_capacity(img.len());
    let mut known = Vec::with_capacity(img.len());
    for &v in img.as_slice() {
        let u: f64 = rng.random();
        if u < half {
            noisy.push(params.n_min);
            known.push(false);
        } else if u < params.density {
            noisy.push(params.n_max);
            known.push(false);
        } else {
            noisy.push(v);
            known.push(true);
        }
    }
    let (w, h) = img.dims();
    Ok((
        GrayImage::from_vec(w, h, noisy)?,
        PixelMask::new(Grid::from_vec(w, h, known)?),
    ))
}
