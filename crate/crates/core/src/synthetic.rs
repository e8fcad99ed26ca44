//! Deterministic synthetic imagery for tests, demos, and benchmarks.
//!
//! [`natural_image`] composes smooth color fields, mid-frequency texture,
//! oriented gratings, and a few hard-edged shapes into something with a
//! natural-looking spectrum: enough low-frequency energy for compression
//! tests, enough sharp structure for ringing and sharpening tests.

use std::f64::consts::PI;

use crate::image::Image;
use crate::ops::{resize, ResizeMode};
use crate::rng::RandomSource;

/// Deterministic 3-channel test image with values in `[0, 1]`.
///
/// Sharp structure (shapes, gratings, texture) lives mostly in luminance;
/// chroma varies smoothly, as it does in photographs.
pub fn natural_image(height: usize, width: usize, seed: u64) -> Image {
    let mut rng = RandomSource::new(seed).child(0xA11CE);
    let n = height * width;

    // Smooth shared luminance plus gentle per-channel tint fields.
    let luma = upsampled_grid(height, width, 4, 1, &mut rng, 0.25, 0.75);
    let tint = upsampled_grid(height, width, 4, 3, &mut rng, -0.08, 0.08);
    let mut img = Image::from_fn(height, width, 3, |c, y, x| {
        luma.get(0, y, x) + tint.get(c, y, x)
    });

    // Mid-frequency luminance texture.
    let texture = upsampled_grid(height, width, 16, 1, &mut rng, -1.0, 1.0);
    let gain = rng.range(0.08, 0.16);
    for c in 0..3 {
        for i in 0..n {
            img.data_mut()[c * n + i] += gain * texture.data()[i];
        }
    }

    // Two oriented luminance gratings.
    for _ in 0..2 {
        let angle = rng.range(0.0, PI);
        let freq = rng.range(0.05, 0.45) * PI;
        let phase = rng.range(0.0, 2.0 * PI);
        let amp = rng.range(0.03, 0.08);
        let (s, c0) = angle.sin_cos();
        for y in 0..height {
            for x in 0..width {
                let u = c0 * x as f64 + s * y as f64;
                let v = amp * (freq * u + phase).sin();
                for c in 0..3 {
                    img.data_mut()[c * n + y * width + x] += v;
                }
            }
        }
    }

    // Hard-edged shapes: brightness steps with a faint tint, so the edges
    // are sharp in luminance but mild in chroma.
    let mut paint = |img: &mut Image, y: usize, x: usize, factors: &[f64; 3]| {
        for c in 0..3 {
            let v = img.get(c, y, x);
            img.set(c, y, x, v * factors[c]);
        }
    };
    for _ in 0..2 {
        let y0 = rng.index(height.max(2) - 1);
        let x0 = rng.index(width.max(2) - 1);
        let hh = 1 + rng.index((height / 4).max(1));
        let ww = 1 + rng.index((width / 4).max(1));
        let level = rng.range(0.5, 1.6);
        let factors = [
            level * rng.range(0.95, 1.05),
            level * rng.range(0.95, 1.05),
            level * rng.range(0.95, 1.05),
        ];
        for y in y0..(y0 + hh).min(height) {
            for x in x0..(x0 + ww).min(width) {
                paint(&mut img, y, x, &factors);
            }
        }
    }
    {
        let cy = rng.index(height) as f64;
        let cx = rng.index(width) as f64;
        let r = 2.0 + rng.range(0.0, height.min(width) as f64 / 6.0);
        let level = rng.range(0.5, 1.6);
        let factors = [
            level * rng.range(0.95, 1.05),
            level * rng.range(0.95, 1.05),
            level * rng.range(0.95, 1.05),
        ];
        for y in 0..height {
            for x in 0..width {
                let dy = y as f64 - cy;
                let dx = x as f64 - cx;
                if dy * dy + dx * dx <= r * r {
                    paint(&mut img, y, x, &factors);
                }
            }
        }
    }

    // Fine luminance grain with a whisper of chroma grain.
    for i in 0..n {
        let g = rng.range(-0.012, 0.012);
        for c in 0..3 {
            img.data_mut()[c * n + i] += g + rng.range(-0.002, 0.002);
        }
    }

    img.clamp_finalize()
}

/// Single-channel field of i.i.d. standard normal samples.
pub fn gaussian_field(height: usize, width: usize, seed: u64) -> Image {
    let mut rng = RandomSource::new(seed).child(0xF1E1D);
    Image::from_fn(height, width, 1, |_, _, _| rng.normal(0.0, 1.0))
}

fn upsampled_grid(
    height: usize,
    width: usize,
    cells: usize,
    channels: usize,
    rng: &mut RandomSource,
    lo: f64,
    hi: f64,
) -> Image {
    let coarse = Image::from_fn(cells, cells, channels, |_, _, _| rng.range(lo, hi));
    resize(&coarse, height, width, ResizeMode::Bilinear).expect("valid resize")
}
