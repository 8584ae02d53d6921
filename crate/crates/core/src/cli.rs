//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on processing errors.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::convolve::ConvBackend;
use crate::detector::{detect_with, DetectorReport, ImpulseOverride};
use crate::error::{Error, Result};
use crate::image::FloatImage;
use crate::io::{load_image, save_image};
use crate::metrics::{bench, format_psnr, psnr, write_csv, BenchConfig};
use crate::noise::{inject_spn, NoiseParams};
use crate::restoration::{denoise, DenoiseOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROCESSING: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ewa-denoise",
    version,
    about = "Salt-and-pepper noise detection and weighted-average restoration for grayscale images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Add salt-and-pepper noise to an image
    Corrupt {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Noise density in [0, 1]
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Salt (high impulse) value
        #[arg(long, default_value_t = 255)]
        salt: u8,
        /// Pepper (low impulse) value
        #[arg(long, default_value_t = 0)]
        pepper: u8,
        /// Also write the ground-truth corruption mask (white = untouched)
        #[arg(long)]
        truth_mask: Option<PathBuf>,
    },
    /// Run the impulse detector and print its findings as key=value lines
    Detect {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        impulses: ImpulseArgs,
        /// Append a CSV summary row (header written if the file is new)
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the detected mask as an image (white = known)
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Detect and restore corrupted pixels
    Denoise {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Replace known pixels with the filter output too
        #[arg(long)]
        full_filter: bool,
        #[command(flatten)]
        impulses: ImpulseArgs,
        /// Convolution backend: direct or fft
        #[arg(long, default_value = "direct")]
        backend: ConvBackend,
        /// Dump intermediate fields (mask, initial image, weights) here
        #[arg(long)]
        debug_dir: Option<PathBuf>,
    },
    /// Print the PSNR between two images in dB (2 decimals, or "inf")
    Psnr {
        #[arg(short = 'a', long)]
        reference: PathBuf,
        #[arg(short = 'b', long)]
        test: PathBuf,
    },
    /// Repeated corrupt/denoise/PSNR runs over several densities
    Bench {
        #[arg(short, long)]
        input: PathBuf,
        /// Comma-separated densities in (0, 1)
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.6,0.7,0.8,0.9")]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// First seed; run k uses seed + k
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Image label for the CSV (defaults to the input file stem)
        #[arg(long)]
        image_id: Option<String>,
        #[arg(long)]
        full_filter: bool,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ImpulseArgs {
    /// Override the salt (high impulse) value instead of the image maximum
    #[arg(long)]
    salt: Option<u8>,
    /// Override the pepper (low impulse) value instead of the image minimum
    #[arg(long)]
    pepper: Option<u8>,
}

impl From<ImpulseArgs> for ImpulseOverride {
    fn from(a: ImpulseArgs) -> Self {
        ImpulseOverride {
            n_min: a.pepper,
            n_max: a.salt,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Error::InvalidArgument(msg)) | Err(Error::InvalidNoiseParams(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PROCESSING
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Corrupt {
            input,
            output,
            density,
            seed,
            salt,
            pepper,
            truth_mask,
        } => {
            let params = NoiseParams::new(density, seed).with_impulses(pepper, salt);
            params.validate()?;
            let img = load_image(&input)?;
            let (noisy, mask) = inject_spn(&img, &params)?;
            save_image(&noisy, &output)?;
            if let Some(path) = truth_mask {
                save_image(&mask.to_image(), path)?;
            }
        }
        Command::Detect {
            input,
            impulses,
            csv,
            mask,
        } => {
            let img = load_image(&input)?;
            let report = detect_with(&img, impulses.into())?;
            write!(out, "{}", report.summary())?;
            if let Some(path) = csv {
                append_detect_csv(&path, &report)?;
            }
            if let Some(path) = mask {
                save_image(&report.mask.to_image(), path)?;
            }
        }
        Command::Denoise {
            input,
            output,
            full_filter,
            impulses,
            backend,
            debug_dir,
        } => {
            let img = load_image(&input)?;
            let opts = DenoiseOptions {
                full_filter,
                impulses: impulses.into(),
                backend,
            };
            let result = denoise(&img, &opts)?;
            save_image(&result.image, &output)?;
            if let Some(dir) = debug_dir {
                fs::create_dir_all(&dir)?;
                save_image(&result.report.mask.to_image(), dir.join("mask.pgm"))?;
                save_image(&result.restoration.initial, dir.join("x_init.pgm"))?;
                write_field_csv(&result.restoration.weights.wm, &dir.join("wm.csv"))?;
                write_field_csv(&result.restoration.field.dm, &dir.join("dm.csv"))?;
            }
        }
        Command::Psnr { reference, test } => {
            let a = load_image(&reference)?;
            let b = load_image(&test)?;
            writeln!(out, "{}", format_psnr(psnr(&a, &b)?))?;
        }
        Command::Bench {
            input,
            densities,
            runs,
            seed,
            csv,
            image_id,
            full_filter,
        } => {
            let img = load_image(&input)?;
            let image_id = image_id.unwrap_or_else(|| {
                input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let cfg = BenchConfig {
                image_id,
                densities,
                runs,
                seed_base: seed,
                denoise: DenoiseOptions {
                    full_filter,
                    ..Default::default()
                },
            };
            let records = bench(&img, &cfg)?;
            match csv {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    write_csv(&mut file, &records)?;
                    file.flush()?;
                }
                None => write_csv(&mut *out, &records)?,
            }
        }
    }
    Ok(())
}

fn append_detect_csv(path: &Path, report: &DetectorReport) -> Result<()> {
    let fresh = !path.exists();
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if fresh {
        writeln!(file, "{}", DetectorReport::CSV_HEADER)?;
    }
    writeln!(file, "{}", report.csv_row())?;
    Ok(())
}

/// One CSV line per image row, full `f64` precision.
fn write_field_csv(field: &FloatImage, path: &Path) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    for row in field.rows() {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(file, "{}", line.join(","))?;
    }
    file.flush()?;
    Ok(())
}
