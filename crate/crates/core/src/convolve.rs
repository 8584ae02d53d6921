//! "Same"-size zero-padded linear convolution with the 3x3 all-ones kernel.
//!
//! Two interchangeable backends: a direct sliding window and an FFT path
//! (pad to the full linear size, multiply spectra, crop). Padding to the full
//! size means the FFT product never wraps around the image borders.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::image::FloatImage;

/// The restoration kernel `h`: a 3x3 grid of ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Kernel {
    _private: (),
}

impl Kernel {
    pub const SIZE: usize = 3;

    pub fn ones() -> Self {
        Self { _private: () }
    }

    /// Weight at kernel cell `(row, col)`, both in `0..3`.
    #[inline]
    pub fn weight(&self, _row: usize, _col: usize) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ConvBackend {
    #[default]
    Direct,
    Fft,
}

impl std::str::FromStr for ConvBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Self::Direct),
            "fft" => Ok(Self::Fft),
            other => Err(format!(
                "unknown convolution backend `{other}` (direct|fft)"
            )),
        }
    }
}

pub fn convolve_same(a: &FloatImage, k: &Kernel, backend: ConvBackend) -> FloatImage {
    match backend {
        ConvBackend::Direct => convolve_direct(a, k),
        ConvBackend::Fft => convolve_fft(a, k),
    }
}

pub fn convolve_direct(a: &FloatImage, k: &Kernel) -> FloatImage {
    let (width, height) = a.dims();
    let src = a.as_slice();
    let mut out = vec![0.0; src.len()];
    for row in 0..height {
        for col in 0..width {
            let mut acc = 0.0;
            // out[i][j] = sum a[i - di][j - dj] * k[di + 1][dj + 1]
            for kr in 0..Kernel::SIZE {
                let Some(r) = (row + 1).checked_sub(kr).filter(|&r| r < height) else {
                    continue;
                };
                for kc in 0..Kernel::SIZE {
                    let Some(c) = (col + 1).checked_sub(kc).filter(|&c| c < width) else {
                        continue;
                    };
                    acc += src[r * width + c] * k.weight(kr, kc);
                }
            }
            out[row * width + col] = acc;
        }
    }
    FloatImage::from_vec(width, height, out).expect("shape preserved")
}

pub fn convolve_fft(a: &FloatImage, k: &Kernel) -> FloatImage {
    let (width, height) = a.dims();
    let pw = width + Kernel::SIZE - 1;
    let ph = height + Kernel::SIZE - 1;

    let mut signal = vec![Complex::new(0.0, 0.0); pw * ph];
    for (row, line) in a.rows().enumerate() {
        for (col, &v) in line.iter().enumerate() {
            signal[row * pw + col] = Complex::new(v, 0.0);
        }
    }
    let mut kernel = vec![Complex::new(0.0, 0.0); pw * ph];
    for kr in 0..Kernel::SIZE {
        for kc in 0..Kernel::SIZE {
            kernel[kr * pw + kc] = Complex::new(k.weight(kr, kc), 0.0);
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    fft2(&mut planner, &mut signal, pw, ph, false);
    fft2(&mut planner, &mut kernel, pw, ph, false);
    for (s, k) in signal.iter_mut().zip(&kernel) {
        *s *= *k;
    }
    fft2(&mut planner, &mut signal, pw, ph, true);

    let scale = 1.0 / (pw * ph) as f64;
    let off = Kernel::SIZE / 2;
    let mut out = Vec::with_capacity(width * height);
    for row in 0..height {
        let base = (row + off) * pw + off;
        out.extend(signal[base..base + width].iter().map(|c| c.re * scale));
    }
    FloatImage::from_vec(width, height, out).expect("shape preserved")
}

/// In-place unnormalised 2-D FFT of a row-major `width x height` buffer.
fn fft2(
    planner: &mut FftPlanner<f64>,
    buf: &mut [Complex<f64>],
    width: usize,
    height: usize,
    inverse: bool,
) {
    let (row_fft, col_fft) = if inverse {
        (
            planner.plan_fft_inverse(width),
            planner.plan_fft_inverse(height),
        )
    } else {
        (
            planner.plan_fft_forward(width),
            planner.plan_fft_forward(height),
        )
    };
    row_fft.process(buf);

    let mut column = vec![Complex::new(0.0, 0.0); height];
    for col in 0..width {
        for (row, slot) in column.iter_mut().enumerate() {
            *slot = buf[row * width + col];
        }
        col_fft.process(&mut column);
        for (row, v) in column.iter().enumerate() {
            buf[row * width + col] = *v;
        }
    }
}
