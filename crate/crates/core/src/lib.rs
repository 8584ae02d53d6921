//! Salt-and-pepper noise suppression for 8-bit grayscale images.
//!
//! The pipeline has two stages:
//!
//! 1. [`detector`] finds the two impulse values, estimates the noise density
//!    and marks which pixels are corrupted.
//! 2. [`restoration`] fills corrupted pixels from their nearest known pixel
//!    ([`distance`]) and refines the result with a weighted average computed
//!    as a ratio of two 3x3 convolutions ([`convolve`]).
//!
//! [`noise`] injects seeded salt-and-pepper noise and [`metrics`] provides
//! PSNR and a repeatable benchmark.
//!
//! ```
//! use ewa_denoise::{denoise, inject_spn, psnr, DenoiseOptions, GrayImage, NoiseParams};
//!
//! let clean = GrayImage::from_fn(64, 64, |r, c| (60 + r + c) as u8).unwrap();
//! let (noisy, _) = inject_spn(&clean, &NoiseParams::new(0.5, 1)).unwrap();
//! let restored = denoise(&noisy, &DenoiseOptions::default()).unwrap();
//! assert!(psnr(&clean, &restored.image).unwrap() > psnr(&clean, &noisy).unwrap());
//! ```

pub mod cli;
pub mod convolve;
pub mod detector;
pub mod distance;
pub mod error;
pub mod image;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod restoration;

pub use convolve::{convolve_same, ConvBackend, Kernel};
pub use detector::{detect, detect_with, DetectorReport, ImpulseOverride};
pub use distance::{distance_transform, nni_fill, DistanceField};
pub use error::{Error, Result};
pub use image::{FloatImage, GrayImage, Grid, PixelMask};
pub use io::{load_image, save_image};
pub use metrics::{bench, psnr, BenchConfig, BenchRecord};
pub use noise::{inject_spn, NoiseParams};
pub use restoration::{denoise, ewa_filter, DenoiseOptions, Denoised, Restoration, WeightField};
