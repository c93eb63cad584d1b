//! Image file I/O: binary PGM (P5) and 8-bit grayscale PNG.
//!
//! PGM files are written with the canonical header `P5\n<width> <height>\n255\n`
//! followed by row-major pixel bytes. Reading accepts any standard P5 header
//! (arbitrary whitespace and `#` comments) but requires `maxval == 255`.
//! PNG support is deliberately narrow: 8-bit single-channel grayscale only;
//! color or 16-bit inputs are rejected rather than converted.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::GrayImage;

/// Errors raised while loading, saving, or constructing images.
#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image header: {0}")]
    MalformedHeader(String),
    #[error("unsupported PGM maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),
    #[error("invalid image dimensions {width}x{height} for {pixels} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        pixels: usize,
    },
}

/// Loads a grayscale image, detecting the format from the file contents
/// (PGM `P5` magic or PNG signature).
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage, ImageError> {
    let path = path.as_ref();
    let mut file = open(path)?;
    let mut data = Vec::new();
    file.read_to_end(&mut data)
        .map_err(|source| ImageError::Io {
            path: path.to_path_buf(),
            source,
        })?;

    if data.starts_with(b"P5") {
        decode_pgm(&data)
    } else if data.starts_with(&[0x89, b'P', b'N', b'G']) {
        decode_png(&data)
    } else {
        Err(ImageError::UnsupportedFormat(format!(
            "{}: not a binary PGM or PNG file",
            path.display()
        )))
    }
}

/// Saves a grayscale image; the format is chosen by file extension
/// (`.png` writes PNG, anything else writes binary PGM).
pub fn save_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let file = File::create(path).map_err(|source| ImageError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    let result = if is_png {
        encode_png(img, &mut w)
    } else {
        encode_pgm(img, &mut w)
    };
    result.and_then(|()| w.flush().map_err(io::Error::from)).map_err(|source| ImageError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Encodes `img` as a binary PGM into an in-memory buffer.
#[must_use]
pub fn encode_pgm_bytes(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.pixel_count() + 32);
    encode_pgm(img, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// Decodes a binary PGM from an in-memory buffer.
pub fn decode_pgm_bytes(data: &[u8]) -> Result<GrayImage, ImageError> {
    decode_pgm(data)
}

fn open(path: &Path) -> Result<BufReader<File>, ImageError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            Err(ImageError::FileNotFound(path.to_path_buf()))
        }
        Err(source) => Err(ImageError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

fn encode_pgm(img: &GrayImage, w: &mut impl Write) -> io::Result<()> {
    write!(w, "P5\n{} {}\n255\n", img.width(), img.height())?;
    w.write_all(img.pixels())
}

/// Cursor over a PNM header that skips whitespace and `#` comments.
struct PnmCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> PnmCursor<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<&'a [u8], ImageError> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            Err(ImageError::MalformedHeader(
                "unexpected end of PGM header".into(),
            ))
        } else {
            Ok(&self.data[start..self.pos])
        }
    }

    fn next_number(&mut self, what: &str) -> Result<u64, ImageError> {
        let tok = self.next_token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| ImageError::MalformedHeader(format!("invalid {what} field")))
    }
}

fn decode_pgm(data: &[u8]) -> Result<GrayImage, ImageError> {
    let mut cur = PnmCursor::new(data);
    let magic = cur.next_token()?;
    if magic != b"P5" {
        return Err(ImageError::UnsupportedFormat(
            "only binary PGM (P5) is supported".into(),
        ));
    }
    let width = cur.next_number("width")? as usize;
    let height = cur.next_number("height")? as usize;
    let maxval = cur.next_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(ImageError::UnsupportedMaxval(maxval.min(u32::MAX as u64) as u32));
    }
    // Exactly one whitespace byte separates the maxval from the raster.
    if cur.pos >= data.len() || !data[cur.pos].is_ascii_whitespace() {
        return Err(ImageError::MalformedHeader(
            "missing separator before raster data".into(),
        ));
    }
    cur.pos += 1;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImageError::MalformedHeader("dimension overflow".into()))?;
    let raster = &data[cur.pos..];
    if raster.len() < expected {
        return Err(ImageError::MalformedHeader(format!(
            "raster truncated: expected {expected} bytes, found {}",
            raster.len()
        )));
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

fn decode_png(data: &[u8]) -> Result<GrayImage, ImageError> {
    let decoder = png::Decoder::new(io::Cursor::new(data));
    let mut reader = decoder
        .read_info()
        .map_err(|e| ImageError::MalformedHeader(format!("png: {e}")))?;
    let info = reader.info();
    if info.color_type != png::ColorType::Grayscale {
        return Err(ImageError::UnsupportedFormat(format!(
            "png color type {:?} is not supported; expected 8-bit grayscale",
            info.color_type
        )));
    }
    if info.bit_depth != png::BitDepth::Eight {
        return Err(ImageError::UnsupportedFormat(format!(
            "png bit depth {:?} is not supported; expected 8-bit grayscale",
            info.bit_depth
        )));
    }
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or(0)];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| ImageError::MalformedHeader(format!("png: {e}")))?;
    let width = frame.width as usize;
    let height = frame.height as usize;
    buf.truncate(frame.buffer_size());
    GrayImage::new(width, height, buf)
}

fn encode_png(img: &GrayImage, w: &mut impl Write) -> io::Result<()> {
    let mut encoder = png::Encoder::new(w, img.width() as u32, img.height() as u32);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| io::Error::other(format!("png: {e}")))?;
    writer
        .write_image_data(img.pixels())
        .map_err(|e| io::Error::other(format!("png: {e}")))?;
    writer
        .finish()
        .map_err(|e| io::Error::other(format!("png: {e}")))
}
