//! Efficient weighted-average (EWA) restoration.
//!
//! Noisy pixels are first filled from their nearest known pixel. The filled
//! image is then smoothed with a 3x3 weighted average whose weights depend on
//! what each pixel is:
//!
//! * a known pixel weighs `9 / k`, where `k` is the number of known pixels in
//!   its 3x3 neighbourhood (itself included), so isolated known pixels count
//!   more than clustered ones;
//! * a noisy pixel weighs `1 / (1 + d)`, where `d` is the distance to the
//!   known pixel it was filled from.
//!
//! The average is evaluated for the whole image at once as the ratio of two
//! convolutions, `((x_init * WM) conv h) / (WM conv h)`.

use crate::convolve::{convolve_same, ConvBackend, Kernel};
use crate::detector::{detect_with, DetectorReport, ImpulseOverride};
use crate::distance::{distance_transform, nni_fill, DistanceField};
use crate::error::{Error, Result};
use crate::image::{FloatImage, GrayImage, PixelMask};

/// Per-pixel weights of the restoration filter.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    /// Information matrix, `1 / (Mask conv h)`.
    pub im: FloatImage,
    /// `9 * im`; meaningful at known pixels only.
    pub w_known: FloatImage,
    /// `1 / (1 + DM)`; meaningful at noisy pixels only.
    pub w_noisy: FloatImage,
    /// Combined weight matrix.
    pub wm: FloatImage,
}

impl WeightField {
    pub fn compute(mask: &PixelMask, field: &DistanceField, backend: ConvBackend) -> Result<Self> {
        let im = information_matrix(mask, backend);
        let w_known = weights_known(&im);
        let w_noisy = weights_noisy(&field.dm);
        let wm = weight_matrix(mask, &w_known, &w_noisy)?;
        Ok(Self {
            im,
            w_known,
            w_noisy,
            wm,
        })
    }

    /// Checks `W_known` in `[1, 9]` at known pixels, `W_noisy` in `(0, 1/2]`
    /// at noisy pixels and `WM > 0` everywhere.
    pub fn check_ranges(&self, mask: &PixelMask) -> Result<()> {
        let bits = mask.bits().as_slice();
        for (idx, &known) in bits.iter().enumerate() {
            let (row, col) = (idx / mask.width(), idx % mask.width());
            if known {
                let w = self.w_known.as_slice()[idx];
                if !(1.0..=9.0).contains(&w) {
                    return Err(Error::WeightRange(format!(
                        "known weight {w} at ({row}, {col}) outside [1, 9]"
                    )));
                }
            } else {
                let w = self.w_noisy.as_slice()[idx];
                if !(w > 0.0 && w <= 0.5) {
                    return Err(Error::WeightRange(format!(
                        "noisy weight {w} at ({row}, {col}) outside (0, 1/2]"
                    )));
                }
            }
            let wm = self.wm.as_slice()[idx];
            if wm.is_nan() || wm <= 0.0 {
                return Err(Error::WeightRange(format!(
                    "combined weight {wm} at ({row}, {col}) not positive"
                )));
            }
        }
        Ok(())
    }
}

/// `1 / (Mask conv h)` with zero padding; cells whose 3x3 neighbourhood has
/// no known pixel hold 1 (never read, they are noisy).
pub fn information_matrix(mask: &PixelMask, backend: ConvBackend) -> FloatImage {
    let counts = convolve_same(&mask.to_float(), &Kernel::ones(), backend);
    // FFT output is only near-integer; counts are small integers.
    counts.map(|&c| {
        let c = c.round();
        if c < 1.0 {
            1.0
        } else {
            1.0 / c
        }
    })
}

pub fn weights_known(im: &FloatImage) -> FloatImage {
    im.map(|&v| 9.0 * v)
}

pub fn weights_noisy(dm: &FloatImage) -> FloatImage {
    dm.map(|&d| 1.0 / (1.0 + d))
}

/// `Mask * w_known + (1 - Mask) * w_noisy`, pixel-wise.
pub fn weight_matrix(
    mask: &PixelMask,
    w_known: &FloatImage,
    w_noisy: &FloatImage,
) -> Result<FloatImage> {
    w_known.ensure_same_dims(mask.bits())?;
    w_noisy.ensure_same_dims(mask.bits())?;
    let picked = mask
        .bits()
        .zip_map(w_known, |&known, &wk| (known, wk))
        .zip_map(w_noisy, |&(known, wk), &wn| if known { wk } else { wn });
    Ok(picked)
}

/// `((x_init * wm) conv h) / (wm conv h)`.
pub fn restore(x_init: &FloatImage, wm: &FloatImage, backend: ConvBackend) -> Result<FloatImage> {
    x_init.ensure_same_dims(wm)?;
    let h = Kernel::ones();
    let weighted = x_init.zip_map(wm, |&x, &w| x * w);
    let num = convolve_same(&weighted, &h, backend);
    let den = convolve_same(wm, &h, backend);
    Ok(num.zip_map(&den, |&n, &d| n / d))
}

/// Intermediate products of one restoration pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Restoration {
    pub field: DistanceField,
    /// Nearest-neighbour filled image.
    pub initial: GrayImage,
    pub weights: WeightField,
    /// Unquantised filter output for every pixel.
    pub restored: FloatImage,
}

/// Runs the restoration filter for a given known/noisy mask.
pub fn ewa_filter(
    noisy: &GrayImage,
    mask: &PixelMask,
    backend: ConvBackend,
) -> Result<Restoration> {
    noisy.ensure_same_dims(mask.bits())?;
    let field = distance_transform(mask)?;
    let initial = nni_fill(noisy, &field)?;
    let weights = WeightField::compute(mask, &field, backend)?;
    weights.check_ranges(mask)?;
    let x_init = initial.to_float();
    let (lo, hi) = x_init.min_max();
    // A weighted mean lies within the input range; clamp away rounding excess.
    let restored = restore(&x_init, &weights.wm, backend)?.map(|&v| v.clamp(lo, hi));
    Ok(Restoration {
        field,
        initial,
        weights,
        restored,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DenoiseOptions {
    /// Replace every pixel with the filter output, known pixels included.
    /// By default known pixels keep their original value.
    pub full_filter: bool,
    pub impulses: ImpulseOverride,
    pub backend: ConvBackend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Denoised {
    pub image: GrayImage,
    pub report: DetectorReport,
    pub restoration: Restoration,
}

/// Merges the filter output into the noisy image and quantises.
pub fn assemble(
    noisy: &GrayImage,
    mask: &PixelMask,
    restored: &FloatImage,
    full_filter: bool,
) -> Result<GrayImage> {
    let merged = if full_filter {
        restored.clone()
    } else {
        let keep = mask.bits().zip_map(noisy, |&known, &v| (known, v));
        keep.zip_map(
            restored,
            |&(known, v), &y| if known { f64::from(v) } else { y },
        )
    };
    merged.quantize()
}

/// Detects impulse noise in `img` and restores the corrupted pixels.
pub fn denoise(img: &GrayImage, opts: &DenoiseOptions) -> Result<Denoised> {
    let report = detect_with(img, opts.impulses)?;
    let restoration = ewa_filter(img, &report.mask, opts.backend)?;
    let image = assemble(img, &report.mask, &restoration.restored, opts.full_filter)?;
    Ok(Denoised {
        image,
        report,
        restoration,
    })
}
