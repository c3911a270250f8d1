//! Image file I/O: 8-bit PNG plus binary PGM (P5) and PPM (P6).
//!
//! The format is chosen from the file extension. Color images are stored
//! as RGB on disk; BGR/HSV/YCrCb buffers are converted before writing.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::buffer::{ColorSpace, ImageBuffer};
use super::color::convert_color;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    Pgm,
    Ppm,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        match ext.as_str() {
            "png" => Ok(ImageFormat::Png),
            "pgm" => Ok(ImageFormat::Pgm),
            "ppm" => Ok(ImageFormat::Ppm),
            "pnm" => Ok(ImageFormat::Ppm),
            _ => Err(Error::UnsupportedFormat(format!(
                "cannot infer format from `{}`",
                path.display()
            ))),
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let format = ImageFormat::from_path(path)?;
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let mut reader = BufReader::new(file);
    match format {
        ImageFormat::Png => decode_png(reader),
        ImageFormat::Pgm | ImageFormat::Ppm => {
            let mut bytes = Vec::new();
            reader.read_to_end(&mut bytes)?;
            decode_pnm(&bytes)
        }
    }
}

pub fn save_image(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = ImageFormat::from_path(path)?;
    let stored = storage_form(img)?;
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        ImageFormat::Png => encode_png(&stored, &mut out)?,
        ImageFormat::Pgm | ImageFormat::Ppm => {
            if (format == ImageFormat::Pgm) != (stored.channels() == 1) {
                return Err(Error::UnsupportedFormat(format!(
                    "{} image cannot be written as {:?}",
                    img.space(),
                    format
                )));
            }
            out.write_all(&encode_pnm(&stored))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Gray for single-channel buffers, RGB otherwise.
fn storage_form(img: &ImageBuffer) -> Result<ImageBuffer> {
    match img.space() {
        ColorSpace::Gray | ColorSpace::Rgb => Ok(img.clone()),
        ColorSpace::Binary => img.clone().with_space(ColorSpace::Gray),
        ColorSpace::Bgr => convert_color(img, ColorSpace::Rgb),
        ColorSpace::Hsv | ColorSpace::YCrCb => {
            convert_color(&convert_color(img, ColorSpace::Bgr)?, ColorSpace::Rgb)
        }
    }
}

fn decode_png<R: Read + std::io::BufRead + std::io::Seek>(reader: R) -> Result<ImageBuffer> {
    let mut decoder = png::Decoder::new(reader);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| Error::Png(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Png("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Png(e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedFormat(format!(
            "{:?}-bit PNG samples",
            info.bit_depth
        )));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    buf.truncate(info.line_size * h);
    let rows = buf.chunks_exact(info.line_size);
    let (space, data): (ColorSpace, Vec<u8>) = match info.color_type {
        png::ColorType::Grayscale => (ColorSpace::Gray, rows.flat_map(|r| &r[..w]).copied().collect()),
        png::ColorType::GrayscaleAlpha => (
            ColorSpace::Gray,
            rows.flat_map(|r| r[..2 * w].chunks_exact(2).map(|p| p[0])).collect(),
        ),
        png::ColorType::Rgb => (ColorSpace::Rgb, rows.flat_map(|r| &r[..3 * w]).copied().collect()),
        png::ColorType::Rgba => (
            ColorSpace::Rgb,
            rows.flat_map(|r| r[..4 * w].chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]))
                .collect(),
        ),
        other => {
            return Err(Error::UnsupportedFormat(format!("PNG color type {other:?}")));
        }
    };
    ImageBuffer::new(w, h, space, data)
}

fn encode_png<W: Write>(img: &ImageBuffer, out: W) -> Result<()> {
    let mut encoder = png::Encoder::new(out, img.width() as u32, img.height() as u32);
    encoder.set_color(if img.channels() == 1 {
        png::ColorType::Grayscale
    } else {
        png::ColorType::Rgb
    });
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| Error::Png(e.to_string()))?;
    writer
        .write_image_data(img.data())
        .map_err(|e| Error::Png(e.to_string()))?;
    writer.finish().map_err(|e| Error::Png(e.to_string()))
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("expected {what}")))
    }
}

pub(crate) fn decode_pnm(bytes: &[u8]) -> Result<ImageBuffer> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::MalformedHeader("missing P5/P6 magic".into()));
    }
    let space = match bytes[1] {
        b'5' => ColorSpace::Gray,
        b'6' => ColorSpace::Rgb,
        b'1'..=b'4' | b'7' => {
            return Err(Error::UnsupportedFormat(format!(
                "PNM variant P{}",
                bytes[1] as char
            )))
        }
        _ => return Err(Error::MalformedHeader("missing P5/P6 magic".into())),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedFormat(format!("16-bit PNM (maxval {maxval})")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::MalformedHeader("no separator before raster".into())),
    }
    let len = width * height * space.channels();
    let raster = bytes
        .get(cur.pos..cur.pos + len)
        .ok_or_else(|| Error::MalformedHeader(format!("raster shorter than {len} bytes")))?;
    let data = if maxval == 255 {
        raster.to_vec()
    } else {
        raster
            .iter()
            .map(|&v| super::buffer::saturate(v.min(maxval as u8) as f64 * 255.0 / maxval as f64))
            .collect()
    };
    ImageBuffer::new(width, height, space, data)
        .map_err(|e| Error::MalformedHeader(e.to_string()))
}

pub(crate) fn encode_pnm(img: &ImageBuffer) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray3x3() -> ImageBuffer {
        ImageBuffer::from_fn(3, 3, ColorSpace::Gray, |x, y| (x * 40 + y * 90) as u8)
    }

    #[test]
    fn png_and_pgm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let img = gray3x3();
        for name in ["a.png", "a.pgm"] {
            let p = dir.path().join(name);
            save_image(&img, &p).unwrap();
            assert_eq!(load_image(&p).unwrap(), img);
        }
    }

    #[test]
    fn color_round_trip_and_bgr_storage() {
        let dir = tempfile::tempdir().unwrap();
        let rgb = ImageBuffer::from_fn3(4, 2, ColorSpace::Rgb, |x, y| [x as u8 * 60, y as u8 * 9, 200]);
        for name in ["c.png", "c.ppm"] {
            let p = dir.path().join(name);
            save_image(&rgb, &p).unwrap();
            assert_eq!(load_image(&p).unwrap(), rgb);
            save_image(&convert_color(&rgb, ColorSpace::Bgr).unwrap(), &p).unwrap();
            assert_eq!(load_image(&p).unwrap(), rgb);
        }
    }

    #[test]
    fn missing_file_is_distinct() {
        let err = load_image("/definitely/not/here.png").unwrap_err();
        assert!(matches!(err, Error::MissingFile(_)));
    }

    #[test]
    fn unknown_extension() {
        assert!(matches!(
            load_image("image.jpg"),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn hand_built_pgm() {
        let mut bytes = b"P5\n# comment line\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 17, 128, 255]);
        let img = decode_pnm(&bytes).unwrap();
        assert_eq!(img.dims(), (2, 2));
        assert_eq!(img.space(), ColorSpace::Gray);
        assert_eq!(img.data(), &[0, 17, 128, 255]);
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(decode_pnm(b"P5\n2 x\n255\n"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pnm(b"P5\n2 2\n255\n\x00"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pnm(b"XX"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pnm(b"P5 1 1 65535\n\0\0"), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(decode_pnm(b"P2 1 1 255\n0"), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn pgm_writer_rejects_color() {
        let dir = tempfile::tempdir().unwrap();
        let rgb = ImageBuffer::filled(2, 2, ColorSpace::Rgb, 3);
        assert!(save_image(&rgb, dir.path().join("x.pgm")).is_err());
    }
}
