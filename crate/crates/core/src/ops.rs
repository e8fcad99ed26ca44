//! Atomic image degradations: convolution, resize, noise injection, and
//! unsharp-mask sharpening.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::kernels::{make_gaussian, Kernel};
use crate::rng::RandomSource;

/// Resize interpolation. Nearest-neighbor is deliberately absent: it shifts
/// content by half a pixel relative to the half-pixel-center mapping used
/// here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResizeMode {
    Area,
    Bilinear,
    Bicubic,
}

/// Noise model. `sigma` is in unit-range sample units; `scale` is the
/// dimensionless strength of shot noise with `lambda` photons per unit
/// intensity. `gray` draws one noise plane and adds it to every channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Gaussian {
        sigma: f64,
        gray: bool,
    },
    Poisson {
        scale: f64,
        #[serde(default = "default_lambda")]
        lambda: f64,
        gray: bool,
    },
}

pub(crate) fn default_lambda() -> f64 {
    256.0
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

/// Mirror-reflection index without edge duplication: ..2,1,0 | 0,1,2.. maps
/// -1 -> 1 and n -> n-2. Valid for |overhang| <= n - 1.
#[inline]
fn reflect(i: isize, n: isize) -> usize {
    let j = if i < 0 {
        -i
    } else if i >= n {
        2 * n - 2 - i
    } else {
        i
    };
    j as usize
}

/// Same-size filtering of each channel with mirror-reflected boundaries.
///
/// The kernel is applied by correlation; every kernel produced by this crate
/// is centrosymmetric, so this coincides with convolution.
pub fn convolve(img: &Image, kernel: &Kernel) -> Result<Image> {
    let (h, w) = (img.height(), img.width());
    let k = kernel.size();
    if k >= h || k >= w {
        return Err(Error::KernelTooLarge {
            size: k,
            height: h,
            width: w,
        });
    }
    let t = (k / 2) as isize;
    let weights = kernel.weights();
    let mut out = Image::zeros(h, w, img.channels());
    for c in 0..img.channels() {
        let plane = img.plane(c);
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for dy in -t..=t {
                    let sy = reflect(y as isize + dy, h as isize);
                    let row = &plane[sy * w..(sy + 1) * w];
                    let wrow = &weights[((dy + t) as usize) * k..((dy + t) as usize + 1) * k];
                    for dx in -t..=t {
                        let sx = reflect(x as isize + dx, w as isize);
                        acc += wrow[(dx + t) as usize] * row[sx];
                    }
                }
                out.set(c, y, x, acc);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Resize
// ---------------------------------------------------------------------------

/// Resample to `(target_h, target_w)`.
///
/// Source coordinates follow the half-pixel-center mapping
/// `src = (dst + 0.5) * (in / out) - 0.5` with edge clamping. Area mode is an
/// exact box average of the source footprint and falls back to bilinear when
/// either axis upscales.
pub fn resize(img: &Image, target_h: usize, target_w: usize, mode: ResizeMode) -> Result<Image> {
    if target_h == 0 || target_w == 0 {
        return Err(Error::InvalidParam("target dimensions must be >= 1".into()));
    }
    match mode {
        ResizeMode::Area => {
            if target_h <= img.height() && target_w <= img.width() {
                Ok(resize_area(img, target_h, target_w))
            } else {
                Ok(resize_separable(img, target_h, target_w, 1, bilinear_weights))
            }
        }
        ResizeMode::Bilinear => Ok(resize_separable(img, target_h, target_w, 1, bilinear_weights)),
        ResizeMode::Bicubic => Ok(resize_separable(img, target_h, target_w, 2, bicubic_weights)),
    }
}

/// Tent weights over the two taps at `floor(src)` and `floor(src) + 1`.
fn bilinear_weights(frac: f64, w: &mut [f64]) {
    w[0] = 1.0 - frac;
    w[1] = frac;
}

/// Keys cubic-convolution weights (a = -0.75) over four taps at
/// `floor(src) - 1 ..= floor(src) + 2`.
fn bicubic_weights(frac: f64, w: &mut [f64]) {
    const A: f64 = -0.75;
    let kernel = |x: f64| -> f64 {
        let x = x.abs();
        if x <= 1.0 {
            ((A + 2.0) * x - (A + 3.0)) * x * x + 1.0
        } else if x < 2.0 {
            A * (((x - 5.0) * x + 8.0) * x - 4.0)
        } else {
            0.0
        }
    };
    w[0] = kernel(1.0 + frac);
    w[1] = kernel(frac);
    w[2] = kernel(1.0 - frac);
    w[3] = kernel(2.0 - frac);
}

struct TapPlan {
    /// Clamped source indices, `taps` per output coordinate.
    idx: Vec<usize>,
    wgt: Vec<f64>,
    taps: usize,
}

fn plan_axis(
    n_in: usize,
    n_out: usize,
    radius: usize,
    weights: fn(f64, &mut [f64]),
) -> TapPlan {
    let taps = 2 * radius;
    let scale = n_in as f64 / n_out as f64;
    let mut idx = Vec::with_capacity(n_out * taps);
    let mut wgt = vec![0.0; n_out * taps];
    for d in 0..n_out {
        let src = (d as f64 + 0.5) * scale - 0.5;
        let base = src.floor();
        weights(src - base, &mut wgt[d * taps..(d + 1) * taps]);
        for t in 0..taps {
            let i = base as isize + t as isize - (radius as isize - 1);
            idx.push(i.clamp(0, n_in as isize - 1) as usize);
        }
    }
    TapPlan { idx, wgt, taps }
}

fn resize_separable(
    img: &Image,
    target_h: usize,
    target_w: usize,
    radius: usize,
    weights: fn(f64, &mut [f64]),
) -> Image {
    let (h, w) = (img.height(), img.width());
    let rows = plan_axis(h, target_h, radius, weights);
    let cols = plan_axis(w, target_w, radius, weights);
    let taps = rows.taps;
    let mut out = Image::zeros(target_h, target_w, img.channels());
    for c in 0..img.channels() {
        let plane = img.plane(c);
        // Horizontal pass.
        let mut tmp = vec![0.0; h * target_w];
        for y in 0..h {
            let row = &plane[y * w..(y + 1) * w];
            for x in 0..target_w {
                let mut acc = 0.0;
                for t in 0..taps {
                    acc += cols.wgt[x * taps + t] * row[cols.idx[x * taps + t]];
                }
                tmp[y * target_w + x] = acc;
            }
        }
        // Vertical pass.
        for y in 0..target_h {
            for x in 0..target_w {
                let mut acc = 0.0;
                for t in 0..taps {
                    acc += rows.wgt[y * taps + t] * tmp[rows.idx[y * taps + t] * target_w + x];
                }
                out.set(c, y, x, acc);
            }
        }
    }
    out
}

/// Exact box average of the source footprint of each output pixel
/// (downscale only).
fn resize_area(img: &Image, target_h: usize, target_w: usize) -> Image {
    let (h, w) = (img.height(), img.width());
    let sy = h as f64 / target_h as f64;
    let sx = w as f64 / target_w as f64;
    let mut out = Image::zeros(target_h, target_w, img.channels());
    for c in 0..img.channels() {
        let plane = img.plane(c);
        for oy in 0..target_h {
            let y0 = oy as f64 * sy;
            let y1 = (oy + 1) as f64 * sy;
            let r0 = y0.floor() as usize;
            let r1 = (y1.ceil() as usize).min(h);
            for ox in 0..target_w {
                let x0 = ox as f64 * sx;
                let x1 = (ox + 1) as f64 * sx;
                let c0 = x0.floor() as usize;
                let c1 = (x1.ceil() as usize).min(w);
                let mut acc = 0.0;
                for r in r0..r1 {
                    let wy = (y1.min((r + 1) as f64) - y0.max(r as f64)).max(0.0);
                    if wy == 0.0 {
                        continue;
                    }
                    let row = &plane[r * w..(r + 1) * w];
                    for col in c0..c1 {
                        let wx = (x1.min((col + 1) as f64) - x0.max(col as f64)).max(0.0);
                        acc += wy * wx * row[col];
                    }
                }
                out.set(c, oy, ox, acc / (sy * sx));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// Add noise per the spec. Draw order is fixed: pixels row-major, channels
/// in storage order; gray noise draws a single plane.
///
/// Shot noise perturbs each value `v` by `(pois(p * lambda) / lambda - p) *
/// scale` with `p = clamp(v, 0, 1)`, so its variance grows linearly with
/// intensity (`scale^2 * p / lambda` for in-range constants). Gray shot
/// noise derives its rate from BT.601 luminance and adds the same plane to
/// every channel.
pub fn add_noise(img: &Image, spec: &NoiseSpec, rng: &mut RandomSource) -> Result<Image> {
    match *spec {
        NoiseSpec::Gaussian { sigma, gray } => {
            if sigma < 0.0 {
                return Err(Error::InvalidParam(format!("negative noise sigma {sigma}")));
            }
            if sigma == 0.0 {
                return Ok(img.clone());
            }
            let mut out = img.clone();
            let n = img.height() * img.width();
            if gray {
                let plane: Vec<f64> = (0..n).map(|_| rng.normal(0.0, sigma)).collect();
                for c in 0..img.channels() {
                    let dst = &mut out.data_mut()[c * n..(c + 1) * n];
                    for (d, noise) in dst.iter_mut().zip(&plane) {
                        *d += noise;
                    }
                }
            } else {
                for v in out.data_mut() {
                    *v += rng.normal(0.0, sigma);
                }
            }
            Ok(out)
        }
        NoiseSpec::Poisson { scale, lambda, gray } => {
            if scale < 0.0 {
                return Err(Error::InvalidParam(format!("negative noise scale {scale}")));
            }
            if !(lambda > 0.0) {
                return Err(Error::InvalidParam(format!(
                    "photon count must be positive, got {lambda}"
                )));
            }
            if scale == 0.0 {
                return Ok(img.clone());
            }
            let mut out = img.clone();
            let n = img.height() * img.width();
            if gray && img.channels() == 3 {
                let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
                let plane: Vec<f64> = (0..n)
                    .map(|i| {
                        let lum = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
                        let p = lum.clamp(0.0, 1.0);
                        (rng.poisson(p * lambda) / lambda - p) * scale
                    })
                    .collect();
                for c in 0..3 {
                    let dst = &mut out.data_mut()[c * n..(c + 1) * n];
                    for (d, noise) in dst.iter_mut().zip(&plane) {
                        *d += noise;
                    }
                }
            } else {
                for v in out.data_mut() {
                    let p = v.clamp(0.0, 1.0);
                    *v += (rng.poisson(p * lambda) / lambda - p) * scale;
                }
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// Unsharp masking
// ---------------------------------------------------------------------------

/// Thresholded unsharp masking.
///
/// `residual = img - gaussian_blur(img)`; pixels whose residual magnitude
/// (max over channels) exceeds `threshold` form a binary mask, the mask is
/// softened by the same blur, and `weight * mask * residual` is added back.
/// The result is clamped to `[0, 1]`. The blur kernel spans
/// `2 * (ceil(3 * sigma) + 1) + 1` taps.
pub fn usm_sharpen(img: &Image, sigma: f64, weight: f64, threshold: f64) -> Result<Image> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParam(format!(
            "blur sigma must be positive, got {sigma}"
        )));
    }
    if weight < 0.0 {
        return Err(Error::InvalidParam(format!(
            "sharpen weight must be >= 0, got {weight}"
        )));
    }
    let radius = (3.0 * sigma).ceil() as u32 + 1;
    let size = 2 * radius + 1;
    let kernel = make_gaussian(sigma, sigma, 0.0, size)?;
    let blurred = convolve(img, &kernel)?;

    let n = img.height() * img.width();
    let channels = img.channels();
    let residual: Vec<f64> = img
        .data()
        .iter()
        .zip(blurred.data())
        .map(|(a, b)| a - b)
        .collect();

    let mut mask = Image::zeros(img.height(), img.width(), 1);
    for i in 0..n {
        let mut m = 0.0f64;
        for c in 0..channels {
            m = m.max(residual[c * n + i].abs());
        }
        mask.data_mut()[i] = if m > threshold { 1.0 } else { 0.0 };
    }
    let soft = convolve(&mask, &kernel)?;

    let mut out = img.clone();
    for c in 0..channels {
        for i in 0..n {
            out.data_mut()[c * n + i] += weight * soft.data()[i] * residual[c * n + i];
        }
    }
    Ok(out.clamp_finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::psnr;
    use crate::kernels::{make_sinc, KernelShape, KernelSpec};
    use crate::synthetic::natural_image;

    fn hash_image(h: usize, w: usize, c: usize, salt: u64) -> Image {
        let mut state = salt;
        Image::from_fn(h, w, c, |_, _, _| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    /// Unit-mass kernel with all weight at the center.
    fn delta_kernel(size: u32) -> Kernel {
        // A Gaussian with vanishing sigma is numerically a delta.
        make_gaussian(1e-6, 1e-6, 0.0, size).unwrap()
    }

    fn random_kernel(size: u32, salt: u64) -> Kernel {
        // Arbitrary positive weights via a generalized Gaussian draw.
        let mut rng = RandomSource::new(salt);
        make_generalized_gaussian(
            rng.range(0.3, 2.5),
            rng.range(0.3, 2.5),
            rng.range(-1.5, 1.5),
            rng.range(0.5, 3.0),
            size,
        )
        .unwrap()
    }

    use crate::kernels::make_generalized_gaussian;

    #[test]
    fn delta_kernel_is_identity() {
        let img = hash_image(12, 10, 3, 5);
        let out = convolve(&img, &delta_kernel(5)).unwrap();
        for (a, b) in img.data().iter().zip(out.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_sum_kernel_preserves_constants() {
        let img = Image::splat(16, 16, 1, 0.42);
        for k in [random_kernel(7, 1), random_kernel(11, 2), make_sinc(1.2, 9).unwrap()] {
            let out = convolve(&img, &k).unwrap();
            for v in out.data() {
                assert!((v - 0.42).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolve_matches_five_loop_oracle() {
        let img = hash_image(16, 16, 1, 77);
        let k = random_kernel(7, 78);
        let out = convolve(&img, &k).unwrap();
        // Brute-force oracle with its own reflection arithmetic.
        let t = 3isize;
        for y in 0..16isize {
            for x in 0..16isize {
                let mut acc = 0.0;
                for dy in -t..=t {
                    for dx in -t..=t {
                        let mut sy = y + dy;
                        if sy < 0 {
                            sy = -sy;
                        }
                        if sy > 15 {
                            sy = 30 - sy;
                        }
                        let mut sx = x + dx;
                        if sx < 0 {
                            sx = -sx;
                        }
                        if sx > 15 {
                            sx = 30 - sx;
                        }
                        acc += k.at(dy, dx) * img.get(0, sy as usize, sx as usize);
                    }
                }
                assert!((acc - out.get(0, y as usize, x as usize)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolve_is_linear() {
        let x = hash_image(10, 10, 1, 3);
        let y = hash_image(10, 10, 1, 4);
        let k = random_kernel(5, 5);
        let (a, b) = (1.7, -0.4);
        let mixed = Image::from_fn(10, 10, 1, |c, i, j| a * x.get(c, i, j) + b * y.get(c, i, j));
        let lhs = convolve(&mixed, &k).unwrap();
        let cx = convolve(&x, &k).unwrap();
        let cy = convolve(&y, &k).unwrap();
        for ((l, vx), vy) in lhs.data().iter().zip(cx.data()).zip(cy.data()) {
            assert!((l - (a * vx + b * vy)).abs() < 1e-12);
        }
    }

    #[test]
    fn oversized_kernel_is_rejected() {
        let img = Image::zeros(8, 20, 1);
        let k = random_kernel(9, 6);
        assert!(matches!(
            convolve(&img, &k),
            Err(Error::KernelTooLarge { .. })
        ));
    }

    #[test]
    fn resize_identity_at_same_dims() {
        let img = hash_image(9, 13, 3, 8);
        for mode in [ResizeMode::Bilinear, ResizeMode::Bicubic, ResizeMode::Area] {
            let out = resize(&img, 9, 13, mode).unwrap();
            for (a, b) in img.data().iter().zip(out.data()) {
                assert!((a - b).abs() < 1e-12, "{mode:?} not identity");
            }
        }
    }

    #[test]
    fn area_halving_is_exact_block_mean() {
        let img = Image::new(
            4,
            4,
            1,
            vec![
                0.0, 0.1, 0.2, 0.3, //
                0.4, 0.5, 0.6, 0.7, //
                0.8, 0.9, 1.0, 1.1, //
                1.2, 1.3, 1.4, 1.5,
            ],
        )
        .unwrap();
        let out = resize(&img, 2, 2, ResizeMode::Area).unwrap();
        let expect = [
            (0.0 + 0.1 + 0.4 + 0.5) / 4.0,
            (0.2 + 0.3 + 0.6 + 0.7) / 4.0,
            (0.8 + 0.9 + 1.2 + 1.3) / 4.0,
            (1.0 + 1.1 + 1.4 + 1.5) / 4.0,
        ];
        for (a, e) in out.data().iter().zip(&expect) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn resize_constant_stays_constant_in_every_mode() {
        let img = Image::splat(11, 7, 3, 0.61);
        for mode in [ResizeMode::Area, ResizeMode::Bilinear, ResizeMode::Bicubic] {
            for (th, tw) in [(5, 3), (22, 14), (11, 7), (4, 13)] {
                let out = resize(&img, th, tw, mode).unwrap();
                for v in out.data() {
                    assert!((v - 0.61).abs() < 1e-12, "{mode:?} {th}x{tw}");
                }
            }
        }
    }

    #[test]
    fn zero_target_dimension_is_rejected() {
        let img = Image::zeros(4, 4, 1);
        assert!(resize(&img, 0, 4, ResizeMode::Bilinear).is_err());
    }

    #[test]
    fn bicubic_round_trip_degrades_and_differs_from_area_bilinear() {
        // Down then up by 4x loses detail; different mode pairs disagree.
        let img = natural_image(128, 128, 31);
        let down_bc = resize(&img, 32, 32, ResizeMode::Bicubic).unwrap();
        let up_bc = resize(&down_bc, 128, 128, ResizeMode::Bicubic).unwrap();
        let down_area = resize(&img, 32, 32, ResizeMode::Area).unwrap();
        let up_bl = resize(&down_area, 128, 128, ResizeMode::Bilinear).unwrap();

        let p_bc = psnr(&img, &up_bc).unwrap();
        assert!(p_bc.is_finite() && p_bc < 60.0, "round trip is lossy");
        let diff = psnr(&up_bc, &up_bl).unwrap();
        assert!(diff.is_finite(), "mode combinations must differ");
    }

    #[test]
    fn zero_strength_noise_is_identity() {
        let img = hash_image(6, 6, 3, 9);
        let mut rng = RandomSource::new(0);
        let g = add_noise(&img, &NoiseSpec::Gaussian { sigma: 0.0, gray: false }, &mut rng).unwrap();
        assert_eq!(g, img);
        let p = add_noise(
            &img,
            &NoiseSpec::Poisson { scale: 0.0, lambda: 256.0, gray: true },
            &mut rng,
        )
        .unwrap();
        assert_eq!(p, img);
    }

    #[test]
    fn gray_noise_preserves_channel_differences() {
        // One shared plane is added to every channel, so channel differences
        // survive up to the single rounding each addition performs (one ulp
        // of unit-scale values per operand).
        let img = hash_image(8, 8, 3, 10);
        let mut rng = RandomSource::new(42);
        for spec in [
            NoiseSpec::Gaussian { sigma: 0.1, gray: true },
            NoiseSpec::Poisson { scale: 1.0, lambda: 256.0, gray: true },
        ] {
            let out = add_noise(&img, &spec, &mut rng).unwrap();
            let n = 64;
            for i in 0..n {
                for c in 1..3 {
                    let din = img.data()[i] - img.data()[c * n + i];
                    let dout = out.data()[i] - out.data()[c * n + i];
                    assert!((din - dout).abs() <= 1e-15, "difference drift {din} vs {dout}");
                }
            }
        }
    }

    #[test]
    fn gaussian_noise_statistics_sane() {
        let img = Image::splat(100, 100, 1, 0.5);
        let mut rng = RandomSource::new(77);
        let sigma = 0.05;
        let out = add_noise(&img, &NoiseSpec::Gaussian { sigma, gray: false }, &mut rng).unwrap();
        let (mean, var) = crate::analysis::plane_stats(&out, 0);
        assert!((mean - 0.5).abs() < 4.0 * sigma / 100.0);
        assert!((var.sqrt() - sigma).abs() / sigma < 0.05);
    }

    #[test]
    fn noise_draws_are_deterministic() {
        let img = hash_image(8, 8, 3, 11);
        let spec = NoiseSpec::Poisson { scale: 1.5, lambda: 256.0, gray: false };
        let a = add_noise(&img, &spec, &mut RandomSource::new(5)).unwrap();
        let b = add_noise(&img, &spec, &mut RandomSource::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn usm_constant_image_unchanged() {
        let img = Image::splat(64, 64, 3, 0.37);
        let out = usm_sharpen(&img, 8.0, 0.5, 10.0 / 255.0).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn usm_zero_weight_is_identity() {
        let img = hash_image(64, 64, 3, 12);
        let out = usm_sharpen(&img, 8.0, 0.0, 10.0 / 255.0).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn usm_overshoots_a_step_edge() {
        // Vertical step from 0.25 to 0.75 inside headroom so the overshoot
        // survives the final clamp.
        let img = Image::from_fn(64, 64, 1, |_, _, x| if x < 32 { 0.25 } else { 0.75 });
        let out = usm_sharpen(&img, 2.0, 1.0, 2.0 / 255.0).unwrap();
        let max_out = out.data().iter().cloned().fold(f64::MIN, f64::max);
        let min_out = out.data().iter().cloned().fold(f64::MAX, f64::min);
        assert!(max_out > 0.75, "no overshoot above the step: {max_out}");
        assert!(min_out < 0.25, "no undershoot below the step: {min_out}");
    }

    #[test]
    fn usm_commutes_with_channel_permutation() {
        let img = hash_image(48, 48, 3, 13);
        let permuted = Image::from_fn(48, 48, 3, |c, y, x| img.get((c + 1) % 3, y, x));
        let a = usm_sharpen(&img, 3.0, 0.5, 10.0 / 255.0).unwrap();
        let b = usm_sharpen(&permuted, 3.0, 0.5, 10.0 / 255.0).unwrap();
        for c in 0..3 {
            assert_eq!(a.plane((c + 1) % 3), b.plane(c));
        }
    }

    #[test]
    fn usm_changes_confined_to_edge_neighborhood() {
        // Pixels with zero residual and zero softened mask must be untouched.
        let img = Image::from_fn(96, 96, 1, |_, _, x| if x < 48 { 0.3 } else { 0.7 });
        let sigma = 2.0;
        let out = usm_sharpen(&img, sigma, 0.5, 10.0 / 255.0).unwrap();
        // Blur radius from the kernel policy.
        let radius = (3.0f64 * sigma).ceil() as usize + 1;
        // Residual support: +-radius of the edge. Mask support adds another
        // +-radius. Beyond 2 * radius + 1 of the edge nothing may change.
        let safe = 2 * radius + 1;
        for y in 0..96 {
            for x in 0..96 {
                let dist = (x as isize - 48).unsigned_abs().min((x as isize - 47).unsigned_abs());
                if dist > safe {
                    assert_eq!(out.get(0, y, x), img.get(0, y, x), "pixel ({y},{x}) moved");
                }
            }
        }
        // And the edge itself did change.
        assert!(out.get(0, 48, 48) != img.get(0, 48, 48) || out.get(0, 48, 47) != img.get(0, 48, 47));
    }

    #[test]
    fn kernel_spec_round_trips_through_materialization() {
        let spec = KernelSpec {
            size: 9,
            shape: KernelShape::Sinc { cutoff: 1.9 },
        };
        let k = Kernel::from_spec(&spec).unwrap();
        assert_eq!(k.spec(), &spec);
    }
}
