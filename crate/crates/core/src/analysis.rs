//! Reference measurements: PSNR, discrete power spectra, plane statistics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::image::Image;

/// Mean squared error over all samples.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.height(),
            a.width(),
            a.channels(),
            b.height(),
            b.width(),
            b.channels()
        )));
    }
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB for unit-range samples:
/// `10 * log10(1 / mse)`. Identical images (MSE = 0) return `f64::INFINITY`.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (1.0 / m).log10())
    }
}

/// Full 2-D DFT power `|F(v, u)|^2` of a single-channel image, row-major
/// `[v * width + u]`, with the unnormalized transform
/// `F(v,u) = sum_{y,x} f(y,x) exp(-2*pi*i*(u*x/W + v*y/H))`.
///
/// Row-column evaluation; intended for analysis-scale inputs, not bulk
/// processing.
pub fn power_spectrum(img: &Image) -> Result<Vec<f64>> {
    if img.channels() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "power spectrum needs a single channel, image has {}",
            img.channels()
        )));
    }
    let (h, w) = (img.height(), img.width());
    let plane = img.plane(0);

    // Twiddle tables indexed by (k * n) mod N.
    let tw_w: Vec<(f64, f64)> = (0..w)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / w as f64;
            (a.cos(), -a.sin())
        })
        .collect();
    let tw_h: Vec<(f64, f64)> = (0..h)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / h as f64;
            (a.cos(), -a.sin())
        })
        .collect();

    // Rows: G(y, u).
    let mut g_re = vec![0.0; h * w];
    let mut g_im = vec![0.0; h * w];
    for y in 0..h {
        for u in 0..w {
            let mut re = 0.0;
            let mut im = 0.0;
            for x in 0..w {
                let v = plane[y * w + x];
                let (c, s) = tw_w[(u * x) % w];
                re += v * c;
                im += v * s;
            }
            g_re[y * w + u] = re;
            g_im[y * w + u] = im;
        }
    }

    // Columns: F(v, u).
    let mut power = vec![0.0; h * w];
    for u in 0..w {
        for v in 0..h {
            let mut re = 0.0;
            let mut im = 0.0;
            for y in 0..h {
                let (c, s) = tw_h[(v * y) % h];
                let (gr, gi) = (g_re[y * w + u], g_im[y * w + u]);
                re += gr * c - gi * s;
                im += gr * s + gi * c;
            }
            power[v * w + u] = re * re + im * im;
        }
    }
    Ok(power)
}

/// Radial frequency of DFT bin `(v, u)` in radians/sample:
/// `2*pi*sqrt((u'/W)^2 + (v'/H)^2)` with `u', v'` the signed aliases.
/// Ranges over `[0, pi*sqrt(2)]`; the corners of the frequency plane exceed
/// `pi`.
pub fn radial_frequency(v: usize, u: usize, height: usize, width: usize) -> f64 {
    let su = if 2 * u <= width {
        u as f64
    } else {
        u as f64 - width as f64
    };
    let sv = if 2 * v <= height {
        v as f64
    } else {
        v as f64 - height as f64
    };
    let fu = su / width as f64;
    let fv = sv / height as f64;
    2.0 * PI * (fu * fu + fv * fv).sqrt()
}

/// Mean DFT power per radial-frequency annulus.
///
/// Returns `bins` pairs `(bin center frequency, mean power)` for equal-width
/// bins over `[0, pi]`. Frequencies above `pi` (the corner bins of the
/// rectangular spectrum) accumulate into the last bin so no power is dropped.
/// Empty bins report zero mean power.
pub fn radial_power_spectrum(img: &Image, bins: usize) -> Result<Vec<(f64, f64)>> {
    if bins == 0 {
        return Err(Error::InvalidParam("bins must be >= 1".into()));
    }
    let power = power_spectrum(img)?;
    let (h, w) = (img.height(), img.width());
    let mut sums = vec![0.0f64; bins];
    let mut counts = vec![0usize; bins];
    for v in 0..h {
        for u in 0..w {
            let omega = radial_frequency(v, u, h, w);
            let b = ((omega / PI * bins as f64) as usize).min(bins - 1);
            sums[b] += power[v * w + u];
            counts[b] += 1;
        }
    }
    Ok((0..bins)
        .map(|b| {
            let center = (b as f64 + 0.5) * PI / bins as f64;
            let mean = if counts[b] == 0 {
                0.0
            } else {
                sums[b] / counts[b] as f64
            };
            (center, mean)
        })
        .collect())
}

/// Mean and (population) variance of one channel plane.
pub fn plane_stats(img: &Image, channel: usize) -> (f64, f64) {
    let plane = img.plane(channel);
    let n = plane.len() as f64;
    let mean = plane.iter().sum::<f64>() / n;
    let var = plane.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hash_image(h: usize, w: usize, c: usize, salt: u64) -> Image {
        let mut state = salt;
        Image::from_fn(h, w, c, |_, _, _| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        })
    }

    #[test]
    fn psnr_identity_hits_sentinel() {
        let img = hash_image(8, 8, 3, 1);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_unit_error_is_zero_db() {
        let a = Image::splat(4, 4, 1, 0.0);
        let b = Image::splat(4, 4, 1, 1.0);
        assert!((psnr(&a, &b).unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn psnr_matches_scalar_loop_oracle() {
        let a = hash_image(9, 7, 3, 2);
        let b = hash_image(9, 7, 3, 3);
        // Independent oracle: explicit per-sample loop.
        let mut acc = 0.0;
        let mut n = 0usize;
        for c in 0..3 {
            for y in 0..9 {
                for x in 0..7 {
                    let d = a.get(c, y, x) - b.get(c, y, x);
                    acc += d * d;
                    n += 1;
                }
            }
        }
        let expect = 10.0 * (n as f64 / acc).log10();
        assert!((psnr(&a, &b).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn psnr_rejects_shape_mismatch() {
        let a = Image::zeros(4, 4, 1);
        let b = Image::zeros(4, 5, 1);
        assert!(matches!(psnr(&a, &b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn constant_image_power_in_dc_bin() {
        let img = Image::splat(16, 16, 1, 0.7);
        let spec = radial_power_spectrum(&img, 8).unwrap();
        assert!(spec[0].1 > 0.0);
        for (_, p) in &spec[1..] {
            assert!(p.abs() < 1e-12, "non-DC bin carries power {p}");
        }
    }

    #[test]
    fn on_grid_cosine_lands_in_expected_bin() {
        // cos(omega0 * x) with omega0 = 2*pi*k/W concentrates at u = +-k.
        let (h, w, k) = (16usize, 32usize, 5usize);
        let omega0 = 2.0 * PI * k as f64 / w as f64;
        let img = Image::from_fn(h, w, 1, |_, _, x| (omega0 * x as f64).cos());
        let bins = 16;
        let spec = radial_power_spectrum(&img, bins).unwrap();
        let expect_bin = ((omega0 / PI * bins as f64) as usize).min(bins - 1);
        // Closed form: F(0, +-k) = H*W/2, everything else zero.
        let expect_peak = (h * w) as f64 / 2.0;
        let expect_mean = 2.0 * expect_peak * expect_peak; // two bins in the annulus...
        for (b, (_, p)) in spec.iter().enumerate() {
            if b == expect_bin {
                assert!(*p > 0.0);
            } else {
                assert!(
                    *p < expect_mean * 1e-18 + 1e-9,
                    "bin {b} carries stray power {p}"
                );
            }
        }
        // Total power equals the closed-form value.
        let power = power_spectrum(&img).unwrap();
        let total: f64 = power.iter().sum();
        let expect_total = 2.0 * expect_peak * expect_peak;
        assert!((total - expect_total).abs() / expect_total < 1e-9);
    }

    #[test]
    fn parseval_holds_to_1e9() {
        let img = hash_image(32, 32, 1, 9);
        let bins = 24;
        let spec = radial_power_spectrum(&img, bins).unwrap();
        // Recompute annulus populations independently.
        let mut counts = vec![0usize; bins];
        for v in 0..32 {
            for u in 0..32 {
                let omega = radial_frequency(v, u, 32, 32);
                counts[((omega / PI * bins as f64) as usize).min(bins - 1)] += 1;
            }
        }
        let total: f64 = spec
            .iter()
            .zip(&counts)
            .map(|((_, mean), &c)| mean * c as f64)
            .sum();
        let expect: f64 = img.data().iter().map(|v| v * v).sum::<f64>() * (32.0 * 32.0);
        assert!(
            (total - expect).abs() / expect < 1e-9,
            "parseval mismatch: {total} vs {expect}"
        );
    }

    #[test]
    fn spectrum_requires_single_channel() {
        let img = Image::zeros(8, 8, 3);
        assert!(matches!(
            radial_power_spectrum(&img, 4),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
