//! PSNR and the seeded corrupt/denoise benchmark.

use std::io::{self, Write};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::noise::{inject_spn, NoiseParams};
use crate::restoration::{denoise, DenoiseOptions};

/// Peak signal-to-noise ratio in dB for 8-bit images.
///
/// Identical images give `f64::INFINITY`.
pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    reference.ensure_same_dims(test)?;
    let sse: u64 = reference
        .as_slice()
        .iter()
        .zip(test.as_slice())
        .map(|(&a, &b)| {
            let d = i64::from(a) - i64::from(b);
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / reference.len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Formats a PSNR value with two decimals, or `inf`.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db:.2}")
    }
}

/// Aggregate of `runs` corrupt → denoise → PSNR cycles at one density.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub image_id: String,
    pub density: f64,
    pub runs: usize,
    pub mean_psnr: f64,
    /// Sample standard deviation (0 for a single run).
    pub psnr_std: f64,
    /// Mean PSNR of the corrupted input, for reference.
    pub mean_input_psnr: f64,
    pub mean_runtime: f64,
    pub median_runtime: f64,
    pub seed_base: u64,
}

pub const CSV_HEADER: &str =
    "image,density,runs,mean_psnr,psnr_std,mean_runtime_s,median_runtime_s,seed_base";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{}",
            csv_field(&self.image_id),
            self.density,
            self.runs,
            format_stat(self.mean_psnr),
            format_stat(self.psnr_std),
            self.mean_runtime,
            self.median_runtime,
            self.seed_base
        )
    }
}

fn format_stat(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes records as CSV with a header line, LF line endings.
pub fn write_csv<W: Write>(mut out: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct BenchConfig {
    pub image_id: String,
    pub densities: Vec<f64>,
    pub runs: usize,
    pub seed_base: u64,
    pub denoise: DenoiseOptions,
}

/// For each density, runs `runs` cycles with seeds `seed_base + k`.
///
/// Only the `denoise` call is timed. One untimed warm-up call precedes the
/// measurements. Runs execute sequentially on the calling thread.
pub fn bench(image: &GrayImage, cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    if let Some(d) = cfg.densities.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "density {d} outside (0, 1)"
        )));
    }

    if let Some(&d) = cfg.densities.first() {
        let (noisy, _) = inject_spn(image, &NoiseParams::new(d, cfg.seed_base))?;
        denoise(&noisy, &cfg.denoise)?;
    }

    let mut records = Vec::with_capacity(cfg.densities.len());
    for &density in &cfg.densities {
        let mut psnrs = Vec::with_capacity(cfg.runs);
        let mut input_psnrs = Vec::with_capacity(cfg.runs);
        let mut times = Vec::with_capacity(cfg.runs);
        for k in 0..cfg.runs {
            let seed = cfg.seed_base.wrapping_add(k as u64);
            let (noisy, _) = inject_spn(image, &NoiseParams::new(density, seed))?;
            let start = Instant::now();
            let out = denoise(&noisy, &cfg.denoise)?;
            times.push(start.elapsed().as_secs_f64());
            psnrs.push(psnr(image, &out.image)?);
            input_psnrs.push(psnr(image, &noisy)?);
        }
        let (mean_psnr, psnr_std) = mean_std(&psnrs);
        records.push(BenchRecord {
            image_id: cfg.image_id.clone(),
            density,
            runs: cfg.runs,
            mean_psnr,
            psnr_std,
            mean_input_psnr: mean_std(&input_psnrs).0,
            mean_runtime: mean_std(&times).0,
            median_runtime: median(&mut times),
            seed_base: cfg.seed_base,
        });
    }
    Ok(records)
}

/// Mean and sample standard deviation. Infinite samples give `(inf, 0)`.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if !mean.is_finite() || xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}
