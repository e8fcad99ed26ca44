//! Transform-domain JPEG compression round-trip.
//!
//! Encode → quantize → decode with no entropy coding: the pipeline only
//! needs the lossy effect. The path is pinned for reproducibility:
//! edge-replicated padding to multiples of 16, full-range BT.601 YCbCr,
//! 2x2 mean chroma subsampling (4:2:0), orthonormal 8x8 DCT-II per block,
//! quantization against quality-scaled Annex-K tables with round half away
//! from zero, bilinear chroma upsampling, and a final clamp to `[0, 1]`.
//! No attempt is made to match any external codec bit-exactly.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::ops::{resize, ResizeMode};

/// Standard base luminance quantization table (quality 50), row-major.
const BASE_LUMA: [u32; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Standard base chrominance quantization table (quality 50), row-major.
const BASE_CHROMA: [u32; 64] = [
    17, 18, 24, 47, 99, 99, 99, 99, //
    18, 21, 26, 66, 99, 99, 99, 99, //
    24, 26, 56, 99, 99, 99, 99, 99, //
    47, 66, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99,
];

/// Quality-scaled quantization tables. All entries lie in `[1, 255]`;
/// quality 100 drives them all to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantTables {
    pub luma: [u32; 64],
    pub chroma: [u32; 64],
    pub quality: u32,
}

impl QuantTables {
    pub fn for_quality(quality: u32) -> Result<Self> {
        if !(1..=100).contains(&quality) {
            return Err(Error::InvalidParam(format!(
                "JPEG quality must lie in [1, 100], got {quality}"
            )));
        }
        let s = if quality < 50 {
            5000.0 / quality as f64
        } else {
            (200 - 2 * quality) as f64
        };
        let scale = |base: &[u32; 64]| -> [u32; 64] {
            let mut out = [0u32; 64];
            for (o, b) in out.iter_mut().zip(base) {
                *o = (((*b as f64 * s + 50.0) / 100.0).floor() as i64).clamp(1, 255) as u32;
            }
            out
        };
        Ok(Self {
            luma: scale(&BASE_LUMA),
            chroma: scale(&BASE_CHROMA),
            quality,
        })
    }
}

// ---------------------------------------------------------------------------
// 8x8 DCT
// ---------------------------------------------------------------------------

fn dct_basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for (u, row) in b.iter_mut().enumerate() {
            let alpha = if u == 0 {
                (1.0f64 / 8.0).sqrt()
            } else {
                (2.0f64 / 8.0).sqrt()
            };
            for (x, v) in row.iter_mut().enumerate() {
                *v = alpha
                    * ((2.0 * x as f64 + 1.0) * u as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        b
    })
}

/// Orthonormal 2-D DCT-II of an 8x8 block.
pub fn dct8(block: &[[f64; 8]; 8]) -> [[f64; 8]; 8] {
    let b = dct_basis();
    // rows: tmp = block * B^T
    let mut tmp = [[0.0; 8]; 8];
    for y in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                acc += block[y][x] * b[u][x];
            }
            tmp[y][u] = acc;
        }
    }
    // cols: out = B * tmp
    let mut out = [[0.0; 8]; 8];
    for v in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                acc += b[v][y] * tmp[y][u];
            }
            out[v][u] = acc;
        }
    }
    out
}

/// Exact inverse of [`dct8`].
pub fn idct8(coeffs: &[[f64; 8]; 8]) -> [[f64; 8]; 8] {
    let b = dct_basis();
    // rows: tmp = coeffs * B
    let mut tmp = [[0.0; 8]; 8];
    for v in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                acc += coeffs[v][u] * b[u][x];
            }
            tmp[v][x] = acc;
        }
    }
    // cols: out = B^T * tmp
    let mut out = [[0.0; 8]; 8];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                acc += b[v][y] * tmp[v][x];
            }
            out[y][x] = acc;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Plane helpers
// ---------------------------------------------------------------------------

struct Plane {
    h: usize,
    w: usize,
    data: Vec<f64>,
}

impl Plane {
    #[inline]
    fn at(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.w + x]
    }
}

/// Quantize/dequantize every 8x8 block of a plane in place. When `census` is
/// given, also push each block's rounded coefficients.
fn quantize_plane(plane: &mut Plane, table: &[u32; 64], mut census: Option<&mut Vec<[i32; 64]>>) {
    debug_assert!(plane.h % 8 == 0 && plane.w % 8 == 0);
    for by in (0..plane.h).step_by(8) {
        for bx in (0..plane.w).step_by(8) {
            let mut block = [[0.0; 8]; 8];
            for y in 0..8 {
                for x in 0..8 {
                    // Work on the 0..255 level scale, shifted by -128.
                    block[y][x] = plane.at(by + y, bx + x) * 255.0 - 128.0;
                }
            }
            let mut coeffs = dct8(&block);
            let mut quantized = [0i32; 64];
            for y in 0..8 {
                for x in 0..8 {
                    let q = table[y * 8 + x] as f64;
                    let level = (coeffs[y][x] / q).round();
                    quantized[y * 8 + x] = level as i32;
                    coeffs[y][x] = level * q;
                }
            }
            if let Some(ref mut sink) = census {
                sink.push(quantized);
            }
            let back = idct8(&coeffs);
            for y in 0..8 {
                for x in 0..8 {
                    plane.data[(by + y) * plane.w + bx + x] = (back[y][x] + 128.0) / 255.0;
                }
            }
        }
    }
}

/// Pad a plane to multiples of 16 by edge replication.
fn pad_plane(img: &Image, c: usize) -> Plane {
    let (h, w) = (img.height(), img.width());
    let ph = h.div_ceil(16) * 16;
    let pw = w.div_ceil(16) * 16;
    let mut data = vec![0.0; ph * pw];
    for y in 0..ph {
        let sy = y.min(h - 1);
        for x in 0..pw {
            data[y * pw + x] = img.get(c, sy, x.min(w - 1));
        }
    }
    Plane { h: ph, w: pw, data }
}

/// 2x2 mean subsampling.
fn subsample(p: &Plane) -> Plane {
    let (h, w) = (p.h / 2, p.w / 2);
    let mut data = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            data[y * w + x] = 0.25
                * (p.at(2 * y, 2 * x)
                    + p.at(2 * y, 2 * x + 1)
                    + p.at(2 * y + 1, 2 * x)
                    + p.at(2 * y + 1, 2 * x + 1));
        }
    }
    Plane { h, w, data }
}

/// Bilinear upsampling back to the padded size.
fn upsample(p: &Plane, h: usize, w: usize) -> Plane {
    let img = Image::new(p.h, p.w, 1, p.data.clone()).expect("plane shape");
    let up = resize(&img, h, w, ResizeMode::Bilinear).expect("upsample");
    Plane {
        h,
        w,
        data: up.data().to_vec(),
    }
}

/// Chroma planes are centered on level 128 like the integer JPEG pipeline,
/// so neutral grays quantize without a systematic half-level chroma error.
const CHROMA_CENTER: f64 = 128.0 / 255.0;

fn rgb_to_ycbcr(img: &Image) -> (Plane, Plane, Plane) {
    let mut y = pad_plane(img, 0);
    let mut cb = pad_plane(img, 1);
    let mut cr = pad_plane(img, 2);
    for i in 0..y.data.len() {
        let (r, g, b) = (y.data[i], cb.data[i], cr.data[i]);
        y.data[i] = 0.299 * r + 0.587 * g + 0.114 * b;
        cb.data[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + CHROMA_CENTER;
        cr.data[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + CHROMA_CENTER;
    }
    (y, cb, cr)
}

fn run(img: &Image, quality: u32, mut census: Option<&mut Vec<[i32; 64]>>) -> Result<Image> {
    if img.channels() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "JPEG round trip needs 3 channels, image has {} (promote first)",
            img.channels()
        )));
    }
    let tables = QuantTables::for_quality(quality)?;
    let (mut y, cb_full, cr_full) = rgb_to_ycbcr(img);
    let mut cb = subsample(&cb_full);
    let mut cr = subsample(&cr_full);

    quantize_plane(&mut y, &tables.luma, census.as_deref_mut());
    quantize_plane(&mut cb, &tables.chroma, census.as_deref_mut());
    quantize_plane(&mut cr, &tables.chroma, census.as_deref_mut());

    let cb = upsample(&cb, y.h, y.w);
    let cr = upsample(&cr, y.h, y.w);

    let (h, w) = (img.height(), img.width());
    let mut out = Image::zeros(h, w, 3);
    for yy in 0..h {
        for xx in 0..w {
            let i = yy * y.w + xx;
            let (l, b, r) = (
                y.data[i],
                cb.data[i] - CHROMA_CENTER,
                cr.data[i] - CHROMA_CENTER,
            );
            out.set(0, yy, xx, l + 1.402 * r);
            out.set(1, yy, xx, l - 0.344136 * b - 0.714136 * r);
            out.set(2, yy, xx, l + 1.772 * b);
        }
    }
    Ok(out.clamp_finalize())
}

/// Lossy JPEG simulation at the given quality factor.
pub fn jpeg_roundtrip(img: &Image, quality: u32) -> Result<Image> {
    run(img, quality, None)
}

/// Post-quantization integer coefficients of every 8x8 block (luma then both
/// chroma planes). Diagnostic companion to [`jpeg_roundtrip`].
pub fn quantized_blocks(img: &Image, quality: u32) -> Result<Vec<[i32; 64]>> {
    let mut census = Vec::new();
    run(img, quality, Some(&mut census))?;
    Ok(census)
}
