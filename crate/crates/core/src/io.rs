//! Grayscale image file I/O: PGM (P2 ASCII / P5 binary, maxval 255) and 8-bit PNG.
//!
//! Colour PNGs are converted to luma on load with integer-rounded Rec.601
//! weights, `(299 R + 587 G + 114 B + 500) / 1000`. Alpha is ignored.

use std::fs::{self, File};
use std::io::{BufWriter, Cursor, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Supported on-disk formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    /// Binary PGM (P5). ASCII P2 is accepted on load only.
    Pgm,
    Png,
}

impl ImageFormat {
    /// Picks a format from the file extension (`.pgm`/`.pnm` or `.png`).
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("pgm") | Some("pnm") => Ok(Self::Pgm),
            Some("png") => Ok(Self::Png),
            _ => Err(Error::UnsupportedFormat),
        }
    }
}

/// Loads a grayscale image, sniffing the format from the file contents.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let bytes = fs::read(path)?;
    decode(&bytes)
}

pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(b"\x89PNG") {
        decode_png(bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::UnsupportedFormat)
    }
}

/// Saves an image; the format follows the file extension.
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = match ImageFormat::from_path(path)? {
        ImageFormat::Pgm => encode_pgm(img),
        ImageFormat::Png => encode_png(img)?,
    };
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

/// Encodes as binary PGM (P5, maxval 255).
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.as_slice());
    out
}

/// Encodes as ASCII PGM (P2, maxval 255).
pub fn encode_pgm_ascii(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
    for row in img.rows() {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

struct PgmHeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmHeaderReader<'a> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<usize> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedPgm(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedPgm(format!("{what} out of range")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::MalformedPgm("bad magic number".into())),
    };
    let mut rd = PgmHeaderReader { bytes, pos: 2 };
    let width = rd.next_uint("width")?;
    let height = rd.next_uint("height")?;
    let maxval = rd.next_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    if maxval != 255 {
        return Err(Error::UnsupportedBitDepth(format!("PGM maxval {maxval}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedPgm("dimensions overflow".into()))?;

    let data = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = rd.pos + 1;
        match bytes.get(start..start + count) {
            Some(raster) if bytes.get(rd.pos).is_some_and(u8::is_ascii_whitespace) => {
                raster.to_vec()
            }
            _ => return Err(Error::MalformedPgm("truncated raster".into())),
        }
    } else {
        let mut data = Vec::with_capacity(count);
        for _ in 0..count {
            let v = rd.next_uint("pixel value")?;
            if v > maxval {
                return Err(Error::MalformedPgm(format!(
                    "pixel value {v} exceeds maxval"
                )));
            }
            data.push(v as u8);
        }
        data
    };
    GrayImage::from_vec(width, height, data)
}

pub fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info()?;
    let (width, height) = {
        let info = reader.info();
        if info.bit_depth == png::BitDepth::Sixteen {
            return Err(Error::UnsupportedBitDepth("16-bit PNG".into()));
        }
        (info.width as usize, info.height as usize)
    };
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension);
    }
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedBitDepth(format!(
            "PNG output depth {depth:?}"
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedBitDepth("PNG too large".into()))?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf)?;

    let channels = color.samples();
    let mut data = Vec::with_capacity(width * height);
    for line in buf.chunks_exact(frame.line_size).take(height) {
        for px in line[..width * channels].chunks_exact(channels) {
            data.push(match color {
                png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => px[0],
                png::ColorType::Rgb | png::ColorType::Rgba => luma(px[0], px[1], px[2]),
                png::ColorType::Indexed => {
                    return Err(Error::UnsupportedBitDepth("unexpanded palette".into()))
                }
            });
        }
    }
    GrayImage::from_vec(width, height, data)
}

/// Integer-rounded Rec.601 luma.
#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    ((y + 500) / 1000) as u8
}

pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(img.as_slice())?;
        writer.finish()?;
    }
    Ok(out)
}
