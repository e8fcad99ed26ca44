//! Planar floating-point raster.
//!
//! Samples are `f64` in a nominal `[0, 1]` range, stored channel-planar:
//! `data[c * h * w + y * w + x]`. Intermediate pipeline stages may carry
//! values outside `[0, 1]`; only I/O boundaries and [`Image::clamp_finalize`]
//! clamp.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::InvalidParam(format!(
                "image dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(Error::ShapeMismatch(format!(
                "expected {} samples for {height}x{width}x{channels}, got {}",
                height * width * channels,
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self {
            height,
            width,
            channels,
            data: vec![0.0; height * width * channels],
        }
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(height * width * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    data.push(f(c, y, x));
                }
            }
        }
        Self {
            height,
            width,
            channels,
            data,
        }
    }

    /// Constant-valued image.
    pub fn splat(height: usize, width: usize, channels: usize, value: f64) -> Self {
        Self {
            height,
            width,
            channels,
            data: vec![value; height * width * channels],
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    /// One channel plane, row-major.
    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.height * self.width;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }

    /// Clamp every sample into `[0, 1]`. Applied at pipeline exit and before
    /// quantizing for storage.
    pub fn clamp_finalize(mut self) -> Image {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    /// Promote a single-channel image to three identical channels; returns a
    /// clone if already three-channel.
    pub fn to_rgb(&self) -> Result<Image> {
        match self.channels {
            3 => Ok(self.clone()),
            1 => {
                let mut data = Vec::with_capacity(self.data.len() * 3);
                for _ in 0..3 {
                    data.extend_from_slice(&self.data);
                }
                Ok(Image {
                    height: self.height,
                    width: self.width,
                    channels: 3,
                    data,
                })
            }
            c => Err(Error::ShapeMismatch(format!(
                "cannot promote {c}-channel image to RGB"
            ))),
        }
    }
}

/// Space-to-depth rearrangement: the output is `(h/s, w/s)` with `c*s*s`
/// channels, where output channel `c*s*s + dy*s + dx` at `(i, j)` holds input
/// channel `c` at `(i*s + dy, j*s + dx)`. A pure permutation of the samples.
pub fn pixel_unshuffle(img: &Image, s: usize) -> Result<Image> {
    if s == 0 {
        return Err(Error::InvalidParam("scale factor must be >= 1".into()));
    }
    if s == 1 {
        return Ok(img.clone());
    }
    if img.height() % s != 0 || img.width() % s != 0 {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} not divisible by {s}",
            img.height(),
            img.width()
        )));
    }
    let (oh, ow) = (img.height() / s, img.width() / s);
    let mut out = Image::zeros(oh, ow, img.channels() * s * s);
    for c in 0..img.channels() {
        for dy in 0..s {
            for dx in 0..s {
                let oc = c * s * s + dy * s + dx;
                for i in 0..oh {
                    for j in 0..ow {
                        out.set(oc, i, j, img.get(c, i * s + dy, j * s + dx));
                    }
                }
            }
        }
    }
    Ok(out)
}
