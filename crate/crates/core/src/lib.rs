//! Deterministic degradation engine for synthesizing low-resolution /
//! ground-truth image training pairs.
//!
//! The crate models a classical degradation chain (blur, resize, noise,
//! JPEG-style quantization) and a higher-order composition of it, with
//! every stochastic choice drawn from a seeded, splittable random source
//! and recorded for bit-exact replay.
//!
//! Module map:
//! - [`image`] — planar `f64` raster plus pixel-unshuffle
//! - [`rng`] — seeded ChaCha8 random source with independent child streams
//! - [`io`] — 8-bit PNG load/save
//! - [`analysis`] — PSNR, power spectra, plane statistics
//! - [`kernels`] — Gaussian / generalized-Gaussian / plateau / sinc blur
//!   kernels and the stochastic kernel sampler
//! - [`ops`] — convolution, resize, noise injection, unsharp masking
//! - [`jpeg`] — transform-domain JPEG compression round-trip
//! - [`pipeline`] — stochastic degradation schedule, provenance records,
//!   replay
//! - [`pool`] — bounded training-pair pool
//! - [`synthetic`] — deterministic test imagery

pub mod analysis;
pub mod error;
pub mod image;
pub mod io;
pub mod jpeg;
pub mod kernels;
pub mod ops;
pub mod pipeline;
pub mod pool;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
pub use image::Image;
pub use rng::RandomSource;
