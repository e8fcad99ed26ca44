//! 8-bit PNG input and output.
//!
//! Only 8-bit grayscale and 8-bit RGB files are accepted; anything else is
//! reported as an unsupported format. Saving clamps to `[0, 1]` and rounds
//! half away from zero, so a save→load round trip is exact after the first
//! quantization.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

pub fn load_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Read {
        path: path.into(),
        source: e,
    })?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| Error::PngDecode {
        path: path.into(),
        source: e,
    })?;

    let info = reader.info();
    let (color, depth) = (info.color_type, info.bit_depth);
    let channels = match (color, depth) {
        (png::ColorType::Grayscale, png::BitDepth::Eight) => 1usize,
        (png::ColorType::Rgb, png::BitDepth::Eight) => 3usize,
        _ => {
            return Err(Error::UnsupportedPng {
                path: path.into(),
                detail: format!("color type {color:?}, bit depth {depth:?}"),
            })
        }
    };

    let buf_size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedPng {
            path: path.into(),
            detail: "image dimensions overflow".into(),
        })?;
    let mut buf = vec![0u8; buf_size];
    let frame = reader.next_frame(&mut buf).map_err(|e| Error::PngDecode {
        path: path.into(),
        source: e,
    })?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let bytes = &buf[..frame.buffer_size()];

    // Interleaved bytes -> planar f64, sample = byte / 255.
    let mut img = Image::zeros(h, w, channels);
    for y in 0..h {
        for x in 0..w {
            for c in 0..channels {
                let b = bytes[(y * w + x) * channels + c];
                img.set(c, y, x, b as f64 / 255.0);
            }
        }
    }
    Ok(img)
}

pub fn save_png(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let color = match img.channels() {
        1 => png::ColorType::Grayscale,
        3 => png::ColorType::Rgb,
        c => {
            return Err(Error::InvalidParam(format!(
                "PNG output needs 1 or 3 channels, image has {c}"
            )))
        }
    };

    let mut bytes = Vec::with_capacity(img.data().len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            for c in 0..img.channels() {
                bytes.push(quantize(img.get(c, y, x)));
            }
        }
    }

    let file = File::create(path).map_err(|e| Error::Write {
        path: path.into(),
        source: e,
    })?;
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        img.width() as u32,
        img.height() as u32,
    );
    encoder.set_color(color);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(|e| Error::PngEncode {
        path: path.into(),
        source: e,
    })?;
    writer
        .write_image_data(&bytes)
        .map_err(|e| Error::PngEncode {
            path: path.into(),
            source: e,
        })?;
    Ok(())
}

/// Clamp to `[0, 1]`, scale by 255, round half away from zero.
#[inline]
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}
