//! Row-major 2-D grids and the grayscale image / mask types built on them.
//!
//! Coordinates are `(row, col)` with the origin at the top-left pixel.

use crate::error::{Error, Result};

/// A dense row-major grid of `height` rows by `width` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit grayscale image (integer form).
pub type GrayImage = Grid<u8>;

/// Double-precision working copy of an image or any per-pixel real field.
pub type FloatImage = Grid<f64>;

impl<T> Grid<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a grid by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Self::from_vec(width, height, data)
    }

    /// Builds a grid from nested rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self>
    where
        T: Clone,
    {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(width * height);
        for r in rows {
            let r = r.as_ref();
            if r.len() != width {
                return Err(Error::BufferSize {
                    width,
                    height,
                    len: data.len() + r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false: grids have at least one pixel.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.height && col < self.width);
        row * self.width + col
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.width)
    }

    pub fn same_dims<U>(&self, other: &Grid<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_dims<U>(&self, other: &Grid<U>) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ))
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Pixel-wise combination of two grids of equal shape.
    ///
    /// Panics if the shapes differ.
    pub fn zip_map<U, V>(&self, other: &Grid<U>, mut f: impl FnMut(&T, &U) -> V) -> Grid<V> {
        assert!(self.same_dims(other), "zip_map on grids of different shape");
        Grid {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl<T: Copy> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::from_vec(width, height, vec![value; width * height])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[self.index(row, col)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        let idx = self.index(row, col);
        self.data[idx] = value;
    }
}

impl GrayImage {
    pub fn to_float(&self) -> FloatImage {
        self.map(|&v| f64::from(v))
    }

    pub fn min_max(&self) -> (u8, u8) {
        self.data
            .iter()
            .fold((u8::MAX, u8::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

impl FloatImage {
    /// Rounds half away from zero and clamps to `[0, 255]`.
    pub fn quantize(&self) -> Result<GrayImage> {
        let mut out = Vec::with_capacity(self.len());
        for (idx, &v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / self.width,
                    col: idx % self.width,
                });
            }
            // f64::round is half-away-from-zero.
            out.push(v.round().clamp(0.0, 255.0) as u8);
        }
        GrayImage::from_vec(self.width, self.height, out)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Binary known/noisy map: `true` (1) marks a known, uncorrupted pixel and
/// `false` (0) a noisy, corrupted one.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask(Grid<bool>);

impl PixelMask {
    pub fn new(bits: Grid<bool>) -> Self {
        Self(bits)
    }

    pub fn all_known(width: usize, height: usize) -> Result<Self> {
        Grid::filled(width, height, true).map(Self)
    }

    /// Builds a mask from 0/1 rows; any non-zero value counts as known.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| v != 0).collect())
            .collect();
        Grid::from_rows(&rows).map(Self)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.0.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.0.height()
    }

    #[inline]
    pub fn is_known(&self, row: usize, col: usize) -> bool {
        self.0.get(row, col)
    }

    pub fn bits(&self) -> &Grid<bool> {
        &self.0
    }

    pub fn into_bits(self) -> Grid<bool> {
        self.0
    }

    pub fn count_known(&self) -> usize {
        self.0.as_slice().iter().filter(|&&b| b).count()
    }

    pub fn count_noisy(&self) -> usize {
        self.0.len() - self.count_known()
    }

    /// The mask as a 0.0/1.0 field.
    pub fn to_float(&self) -> FloatImage {
        self.0.map(|&b| if b { 1.0 } else { 0.0 })
    }

    /// The mask as a black (noisy) / white (known) image for inspection.
    pub fn to_image(&self) -> GrayImage {
        self.0.map(|&b| if b { 255 } else { 0 })
    }
}
