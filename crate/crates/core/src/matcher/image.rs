use crate::error::{Result, StereoError};
use std::io::Write;
use std::path::Path;

/// 8-bit grayscale image, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self { width, height, pixels: vec![value; width * height] }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(StereoError::invalid(format!(
                "pixel buffer has {} bytes, expected {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u8 {
        self.pixels[v * self.width + u]
    }

    pub fn set(&mut self, u: usize, v: usize, value: u8) {
        self.pixels[v * self.width + u] = value;
    }

    pub fn row(&self, v: usize) -> &[u8] {
        &self.pixels[v * self.width..(v + 1) * self.width]
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_pgm())?;
        Ok(())
    }

    /// Parses a binary PGM with maxval 255. Comments in the header are skipped.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let magic = next_token(bytes, &mut pos)?;
        if magic != b"P5" {
            return Err(StereoError::Pgm("expected magic number P5".into()));
        }
        let width = parse_usize(next_token(bytes, &mut pos)?)?;
        let height = parse_usize(next_token(bytes, &mut pos)?)?;
        let maxval = parse_usize(next_token(bytes, &mut pos)?)?;
        if maxval != 255 {
            return Err(StereoError::Pgm(format!("only maxval 255 is supported (got {maxval})")));
        }
        // exactly one whitespace byte separates the header from the raster
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(StereoError::Pgm("missing whitespace after header".into()));
        }
        pos += 1;
        let raster = &bytes[pos..];
        if raster.len() != width * height {
            return Err(StereoError::Pgm(format!("raster has {} bytes, expected {}", raster.len(), width * height)));
        }
        Ok(Self { width, height, pixels: raster.to_vec() })
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_pgm(&std::fs::read(path)?)
    }
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(StereoError::Pgm("truncated header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn parse_usize(tok: &[u8]) -> Result<usize> {
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| StereoError::Pgm(format!("bad header field {:?}", String::from_utf8_lossy(tok))))
}
