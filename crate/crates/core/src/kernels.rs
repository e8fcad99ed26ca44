//! Blur-kernel synthesis.
//!
//! Four kernel families drive the degradation pipeline: anisotropic
//! Gaussian, generalized Gaussian (`exp(-0.5 * q^beta)`), plateau-shaped
//! (`1 / (1 + q^beta)`), and a circular-lowpass sinc filter used to create
//! ringing and overshoot. `q` is the quadratic form `C' * inv(Sigma) * C`
//! over centered integer coordinates, with `Sigma` built from per-axis
//! standard deviations and a rotation angle.
//!
//! All kernels are normalized to unit sum, so filtering preserves mean
//! brightness. [`sample_kernel`] draws a kernel from the configured family
//! mix and parameter ranges, returning both weights and the exact
//! [`KernelSpec`] that produced them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// The resolved parameters of one kernel: shape family plus side length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    /// Odd side length `2t + 1`.
    pub size: u32,
    pub shape: KernelShape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelShape {
    Gaussian {
        sigma1: f64,
        sigma2: f64,
        theta: f64,
    },
    GeneralizedGaussian {
        sigma1: f64,
        sigma2: f64,
        theta: f64,
        beta: f64,
    },
    Plateau {
        sigma1: f64,
        sigma2: f64,
        theta: f64,
        beta: f64,
    },
    Sinc {
        /// Cutoff frequency in radians/sample, in `(0, pi]`.
        cutoff: f64,
    },
}

/// A materialized filter: `size x size` weights summing to 1, plus the spec
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
    spec: KernelSpec,
}

impl Kernel {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Weight at centered offsets `(di, dj)` with `di, dj` in `[-t, t]`.
    #[inline]
    pub fn at(&self, di: isize, dj: isize) -> f64 {
        let t = (self.size / 2) as isize;
        self.weights[((di + t) * self.size as isize + (dj + t)) as usize]
    }

    /// Materialize the kernel described by a spec.
    pub fn from_spec(spec: &KernelSpec) -> Result<Kernel> {
        match spec.shape {
            KernelShape::Gaussian {
                sigma1,
                sigma2,
                theta,
            } => make_gaussian(sigma1, sigma2, theta, spec.size),
            KernelShape::GeneralizedGaussian {
                sigma1,
                sigma2,
                theta,
                beta,
            } => make_generalized_gaussian(sigma1, sigma2, theta, beta, spec.size),
            KernelShape::Plateau {
                sigma1,
                sigma2,
                theta,
                beta,
            } => make_plateau(sigma1, sigma2, theta, beta, spec.size),
            KernelShape::Sinc { cutoff } => make_sinc(cutoff, spec.size),
        }
    }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

fn check_size(size: u32) -> Result<usize> {
    if size < 3 || size % 2 == 0 {
        return Err(Error::InvalidParam(format!(
            "kernel size must be odd and >= 3, got {size}"
        )));
    }
    Ok(size as usize)
}

fn check_sigmas(sigma1: f64, sigma2: f64) -> Result<()> {
    if !(sigma1 > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::InvalidParam(format!(
            "standard deviations must be positive, got ({sigma1}, {sigma2})"
        )));
    }
    Ok(())
}

/// Coefficients `(a, b, c)` of the quadratic form
/// `q(i, j) = a*i^2 + 2*b*i*j + c*j^2 = C' * inv(Sigma) * C`
/// for `Sigma = R(theta) * diag(sigma1^2, sigma2^2) * R(theta)'`.
fn inverse_covariance(sigma1: f64, sigma2: f64, theta: f64) -> (f64, f64, f64) {
    let d1 = 1.0 / (sigma1 * sigma1);
    let d2 = 1.0 / (sigma2 * sigma2);
    let (sin, cos) = theta.sin_cos();
    let a = cos * cos * d1 + sin * sin * d2;
    let b = cos * sin * (d1 - d2);
    let c = sin * sin * d1 + cos * cos * d2;
    (a, b, c)
}

fn build(size: usize, spec: KernelSpec, mut f: impl FnMut(f64, f64) -> f64) -> Kernel {
    let t = (size / 2) as isize;
    let mut weights = Vec::with_capacity(size * size);
    for di in -t..=t {
        for dj in -t..=t {
            weights.push(f(di as f64, dj as f64));
        }
    }
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Kernel {
        size,
        weights,
        spec,
    }
}

/// Anisotropic Gaussian kernel: weights proportional to `exp(-q/2)`.
pub fn make_gaussian(sigma1: f64, sigma2: f64, theta: f64, size: u32) -> Result<Kernel> {
    let n = check_size(size)?;
    check_sigmas(sigma1, sigma2)?;
    let (a, b, c) = inverse_covariance(sigma1, sigma2, theta);
    let spec = KernelSpec {
        size,
        shape: KernelShape::Gaussian {
            sigma1,
            sigma2,
            theta,
        },
    };
    Ok(build(n, spec, |i, j| {
        (-0.5 * (a * i * i + 2.0 * b * i * j + c * j * j)).exp()
    }))
}

/// Generalized Gaussian kernel: weights proportional to `exp(-0.5 * q^beta)`.
/// `beta = 1` reduces to the plain Gaussian.
pub fn make_generalized_gaussian(
    sigma1: f64,
    sigma2: f64,
    theta: f64,
    beta: f64,
    size: u32,
) -> Result<Kernel> {
    let n = check_size(size)?;
    check_sigmas(sigma1, sigma2)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidParam(format!(
            "shape parameter must be positive, got {beta}"
        )));
    }
    let (a, b, c) = inverse_covariance(sigma1, sigma2, theta);
    let spec = KernelSpec {
        size,
        shape: KernelShape::GeneralizedGaussian {
            sigma1,
            sigma2,
            theta,
            beta,
        },
    };
    Ok(build(n, spec, |i, j| {
        let q = a * i * i + 2.0 * b * i * j + c * j * j;
        (-0.5 * q.powf(beta)).exp()
    }))
}

/// Plateau-shaped kernel: weights proportional to `1 / (1 + q^beta)`.
/// Flat top with heavier shoulders than a Gaussian.
pub fn make_plateau(sigma1: f64, sigma2: f64, theta: f64, beta: f64, size: u32) -> Result<Kernel> {
    let n = check_size(size)?;
    check_sigmas(sigma1, sigma2)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidParam(format!(
            "shape parameter must be positive, got {beta}"
        )));
    }
    let (a, b, c) = inverse_covariance(sigma1, sigma2, theta);
    let spec = KernelSpec {
        size,
        shape: KernelShape::Plateau {
            sigma1,
            sigma2,
            theta,
            beta,
        },
    };
    Ok(build(n, spec, |i, j| {
        let q = a * i * i + 2.0 * b * i * j + c * j * j;
        1.0 / (1.0 + q.powf(beta))
    }))
}

/// Raw (pre-normalization) circular-lowpass tap at the given radius:
/// `cutoff/(2*pi*r) * J1(cutoff*r)`, with the `r -> 0` limit
/// `cutoff^2/(4*pi)` at the center.
pub fn sinc_tap(cutoff: f64, radius: f64) -> f64 {
    if radius == 0.0 {
        cutoff * cutoff / (4.0 * PI)
    } else {
        cutoff / (2.0 * PI * radius) * bessel_j1(cutoff * radius)
    }
}

/// Circular-lowpass ("sinc") kernel with cutoff in `(0, pi]`, normalized to
/// unit sum. Unlike the blur families its taps may be negative, which is what
/// produces ringing and overshoot around edges.
pub fn make_sinc(cutoff: f64, size: u32) -> Result<Kernel> {
    let n = check_size(size)?;
    if !(cutoff > 0.0) || cutoff > PI {
        return Err(Error::InvalidParam(format!(
            "cutoff frequency must lie in (0, pi], got {cutoff}"
        )));
    }
    let spec = KernelSpec {
        size,
        shape: KernelShape::Sinc { cutoff },
    };
    Ok(build(n, spec, |i, j| {
        sinc_tap(cutoff, (i * i + j * j).sqrt())
    }))
}

// ---------------------------------------------------------------------------
// Bessel J1
// ---------------------------------------------------------------------------

/// Bessel function of the first kind, order one.
///
/// Power series for `|x| < 12`, Hankel asymptotic expansion beyond; both
/// branches are accurate to better than 1e-10 absolute over the argument
/// range reachable from kernel synthesis (`|x| <= pi * size`).
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax < 12.0 {
        j1_series(ax)
    } else {
        j1_asymptotic(ax)
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

fn j1_series(x: f64) -> f64 {
    // J1(x) = sum_k (-1)^k / (k! (k+1)!) * (x/2)^(2k+1)
    let half = x / 2.0;
    let msq = -(half * half);
    let mut term = half;
    let mut sum = term;
    for k in 1..=45 {
        let k = k as f64;
        term *= msq / (k * (k + 1.0));
        sum += term;
    }
    sum
}

fn j1_asymptotic(x: f64) -> f64 {
    // J1(x) = sqrt(2/(pi x)) * (P(x) cos chi - Q(x) sin chi), chi = x - 3pi/4,
    // with P, Q the Hankel series for order one, truncated after a_15. The
    // omitted terms are below 4e-11 for x >= 12.
    const MU: f64 = 4.0; // 4 * nu^2 for nu = 1
    let mut a = [0.0f64; 16];
    a[0] = 1.0;
    for k in 1..16 {
        let m = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (MU - m * m) / (8.0 * k as f64);
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut sign = 1.0;
    let mut x_pow_even = 1.0; // x^(-2k)
    for k in 0..8 {
        p += sign * a[2 * k] * x_pow_even;
        q += sign * a[2 * k + 1] * x_pow_even * inv;
        sign = -sign;
        x_pow_even *= inv2;
    }
    let chi = x - 3.0 * PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

// ---------------------------------------------------------------------------
// Stochastic sampler
// ---------------------------------------------------------------------------

/// Cutoff-frequency sampling rule for sinc kernels: small kernels draw from
/// a higher band so the ringing stays visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffRule {
    pub size_threshold: u32,
    /// `(lo, hi)` cutoff range for sizes below the threshold.
    pub below: (f64, f64),
    /// `(lo, hi)` cutoff range for sizes at or above the threshold.
    pub at_or_above: (f64, f64),
}

impl Default for CutoffRule {
    fn default() -> Self {
        Self {
            size_threshold: 13,
            below: (PI / 3.0, PI),
            at_or_above: (PI / 5.0, PI),
        }
    }
}

impl CutoffRule {
    pub fn range_for(&self, size: u32) -> (f64, f64) {
        if size < self.size_threshold {
            self.below
        } else {
            self.at_or_above
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.below, self.at_or_above] {
            if !(lo > 0.0) || lo > hi || hi > PI {
                return Err(Error::InvalidParam(format!(
                    "cutoff range ({lo}, {hi}) must satisfy 0 < lo <= hi <= pi"
                )));
            }
        }
        Ok(())
    }
}

/// Parameter ranges and family mix for stochastic kernel sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    /// Probability of emitting a sinc kernel instead of a blur family.
    pub sinc_prob: f64,
    /// Family mix, conditioned on not drawing a sinc; must sum to 1.
    pub gaussian_prob: f64,
    pub generalized_prob: f64,
    pub plateau_prob: f64,
    /// Candidate side lengths, each odd and >= 3.
    pub sizes: Vec<u32>,
    pub sigma_range: (f64, f64),
    pub beta_generalized_range: (f64, f64),
    pub beta_plateau_range: (f64, f64),
    /// Probability of an isotropic draw (`sigma2 = sigma1`, `theta = 0`).
    pub isotropic_prob: f64,
    /// Rotation range for anisotropic draws.
    pub theta_range: (f64, f64),
    pub cutoff: CutoffRule,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            sinc_prob: 0.1,
            gaussian_prob: 0.7,
            generalized_prob: 0.15,
            plateau_prob: 0.15,
            sizes: (7..=21).step_by(2).collect(),
            sigma_range: (0.2, 3.0),
            beta_generalized_range: (0.5, 4.0),
            beta_plateau_range: (1.0, 2.0),
            isotropic_prob: 0.5,
            theta_range: (-PI, PI),
            cutoff: CutoffRule::default(),
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("sinc_prob", self.sinc_prob),
            ("gaussian_prob", self.gaussian_prob),
            ("generalized_prob", self.generalized_prob),
            ("plateau_prob", self.plateau_prob),
            ("isotropic_prob", self.isotropic_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParam(format!("{name} = {p} outside [0, 1]")));
            }
        }
        let family_sum = self.gaussian_prob + self.generalized_prob + self.plateau_prob;
        if (family_sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!(
                "family probabilities sum to {family_sum}, expected 1"
            )));
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidParam("no kernel sizes configured".into()));
        }
        for &s in &self.sizes {
            check_size(s)?;
        }
        let (lo, hi) = self.sigma_range;
        if !(lo > 0.0) || lo > hi {
            return Err(Error::InvalidParam(format!(
                "sigma range ({lo}, {hi}) must satisfy 0 < lo <= hi"
            )));
        }
        for (name, (lo, hi)) in [
            ("beta_generalized_range", self.beta_generalized_range),
            ("beta_plateau_range", self.beta_plateau_range),
        ] {
            if !(lo > 0.0) || lo > hi {
                return Err(Error::InvalidParam(format!(
                    "{name} ({lo}, {hi}) must satisfy 0 < lo <= hi"
                )));
            }
        }
        let (tl, th) = self.theta_range;
        if tl > th {
            return Err(Error::InvalidParam(format!(
                "theta range ({tl}, {th}) is empty"
            )));
        }
        self.cutoff.validate()
    }
}

/// Draw a kernel spec from the configured mix.
///
/// Draw order (fixed for reproducibility): size, sinc gate, then either the
/// cutoff frequency, or the family choice, sigma1, isotropy gate, optional
/// (sigma2, theta), and the family's shape parameter.
pub fn sample_spec(cfg: &KernelConfig, rng: &mut RandomSource) -> Result<KernelSpec> {
    cfg.validate()?;
    let size = cfg.sizes[rng.index(cfg.sizes.len())];
    if rng.coin(cfg.sinc_prob) {
        let (lo, hi) = cfg.cutoff.range_for(size);
        return Ok(KernelSpec {
            size,
            shape: KernelShape::Sinc {
                cutoff: rng.range(lo, hi),
            },
        });
    }
    let family = rng.weighted(&[
        cfg.gaussian_prob,
        cfg.generalized_prob,
        cfg.plateau_prob,
    ]);
    let sigma1 = rng.range(cfg.sigma_range.0, cfg.sigma_range.1);
    let (sigma2, theta) = if rng.coin(cfg.isotropic_prob) {
        (sigma1, 0.0)
    } else {
        (
            rng.range(cfg.sigma_range.0, cfg.sigma_range.1),
            rng.range(cfg.theta_range.0, cfg.theta_range.1),
        )
    };
    let shape = match family {
        0 => KernelShape::Gaussian {
            sigma1,
            sigma2,
            theta,
        },
        1 => KernelShape::GeneralizedGaussian {
            sigma1,
            sigma2,
            theta,
            beta: rng.range(cfg.beta_generalized_range.0, cfg.beta_generalized_range.1),
        },
        _ => KernelShape::Plateau {
            sigma1,
            sigma2,
            theta,
            beta: rng.range(cfg.beta_plateau_range.0, cfg.beta_plateau_range.1),
        },
    };
    Ok(KernelSpec { size, shape })
}

/// Draw and materialize a kernel; the returned kernel carries its spec.
pub fn sample_kernel(cfg: &KernelConfig, rng: &mut RandomSource) -> Result<Kernel> {
    Kernel::from_spec(&sample_spec(cfg, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_gaussian_is_symmetric() {
        let k = make_gaussian(1.3, 1.3, 0.7, 9).unwrap();
        for di in -4..=4isize {
            for dj in -4..=4isize {
                assert!((k.at(di, dj) - k.at(dj, di)).abs() < 1e-15);
                assert!((k.at(di, dj) - k.at(-di, -dj)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn quarter_turn_swaps_axes() {
        let a = make_gaussian(2.0, 0.5, PI / 2.0, 11).unwrap();
        let b = make_gaussian(0.5, 2.0, 0.0, 11).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn huge_sigma_flattens_to_uniform() {
        let k = make_gaussian(1e6, 1e6, 0.0, 3).unwrap();
        for w in k.weights() {
            assert!((w - 1.0 / 9.0).abs() < 1e-6);
        }
    }

    #[test]
    fn generalized_beta_one_matches_gaussian() {
        let g = make_gaussian(1.7, 0.6, 0.3, 13).unwrap();
        let gg = make_generalized_gaussian(1.7, 0.6, 0.3, 1.0, 13).unwrap();
        for (x, y) in g.weights().iter().zip(gg.weights()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn generalized_tail_mass_shrinks_with_beta() {
        // Weight outside radius 2*sigma: beta = 4 concentrates harder than
        // beta = 0.5.
        let sigma = 1.5;
        let tail = |beta: f64| {
            let k = make_generalized_gaussian(sigma, sigma, 0.0, beta, 21).unwrap();
            let mut mass = 0.0;
            for di in -10..=10isize {
                for dj in -10..=10isize {
                    let r = ((di * di + dj * dj) as f64).sqrt();
                    if r > 2.0 * sigma {
                        mass += k.at(di, dj);
                    }
                }
            }
            mass
        };
        assert!(tail(4.0) < tail(0.5));
    }

    #[test]
    fn families_match_naive_pdf_oracle() {
        // Independent route: build Sigma explicitly, invert by adjugate, and
        // evaluate the pdf cell by cell.
        let oracle = |sigma1: f64, sigma2: f64, theta: f64, size: usize, pdf: &dyn Fn(f64) -> f64| {
            let (s, c) = theta.sin_cos();
            let (v1, v2) = (sigma1 * sigma1, sigma2 * sigma2);
            // Sigma = R diag(v1, v2) R^T
            let m00 = c * c * v1 + s * s * v2;
            let m01 = s * c * (v1 - v2);
            let m11 = s * s * v1 + c * c * v2;
            let det = m00 * m11 - m01 * m01;
            let (i00, i01, i11) = (m11 / det, -m01 / det, m00 / det);
            let t = (size / 2) as isize;
            let mut vals = Vec::new();
            for di in -t..=t {
                for dj in -t..=t {
                    let (i, j) = (di as f64, dj as f64);
                    let q = i00 * i * i + 2.0 * i01 * i * j + i11 * j * j;
                    vals.push(pdf(q));
                }
            }
            let sum: f64 = vals.iter().sum();
            vals.into_iter().map(|v| v / sum).collect::<Vec<_>>()
        };

        let cases = [(2.3, 0.7, 0.9), (0.5, 0.5, 0.0), (1.1, 2.9, -1.4)];
        for (s1, s2, th) in cases {
            let g = make_gaussian(s1, s2, th, 15).unwrap();
            let expect = oracle(s1, s2, th, 15, &|q| (-0.5 * q).exp());
            for (a, b) in g.weights().iter().zip(&expect) {
                assert!((a - b).abs() < 1e-12);
            }
            for beta in [0.5, 2.0, 4.0] {
                let gg = make_generalized_gaussian(s1, s2, th, beta, 15).unwrap();
                let expect = oracle(s1, s2, th, 15, &|q| (-0.5 * q.powf(beta)).exp());
                for (a, b) in gg.weights().iter().zip(&expect) {
                    assert!((a - b).abs() < 1e-12);
                }
                let p = make_plateau(s1, s2, th, beta, 15).unwrap();
                let expect = oracle(s1, s2, th, 15, &|q| 1.0 / (1.0 + q.powf(beta)));
                for (a, b) in p.weights().iter().zip(&expect) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn plateau_center_is_strict_maximum() {
        for (s1, s2, th, beta) in [(0.4, 0.4, 0.0, 1.0), (2.0, 0.9, 1.1, 2.0)] {
            let k = make_plateau(s1, s2, th, beta, 9).unwrap();
            let center = k.at(0, 0);
            for di in -4..=4isize {
                for dj in -4..=4isize {
                    if (di, dj) != (0, 0) {
                        assert!(k.at(di, dj) < center);
                    }
                }
            }
        }
    }

    #[test]
    fn isotropic_plateau_is_radially_symmetric() {
        let k = make_plateau(1.2, 1.2, 0.0, 1.5, 11).unwrap();
        for di in -5..=5isize {
            for dj in -5..=5isize {
                assert!((k.at(di, dj) - k.at(dj, di)).abs() < 1e-12);
                assert!((k.at(di, dj) - k.at(-di, dj)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn all_kernels_sum_to_one_and_families_are_nonnegative() {
        let kernels = [
            make_gaussian(0.2, 3.0, 1.0, 7).unwrap(),
            make_generalized_gaussian(1.0, 0.3, -0.5, 3.0, 17).unwrap(),
            make_plateau(2.5, 2.5, 0.0, 1.0, 21).unwrap(),
            make_sinc(PI / 2.0, 21).unwrap(),
        ];
        for k in &kernels {
            let sum: f64 = k.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        for k in &kernels[..3] {
            assert!(k.weights().iter().all(|w| *w >= 0.0));
        }
        // Sinc taps go negative; that is the point.
        assert!(kernels[3].weights().iter().any(|w| *w < 0.0));
    }

    #[test]
    fn sinc_is_radially_symmetric() {
        let k = make_sinc(2.0, 13).unwrap();
        for di in -6..=6isize {
            for dj in -6..=6isize {
                assert!((k.at(di, dj) - k.at(dj, di)).abs() < 1e-12);
                assert!((k.at(di, dj) - k.at(-di, dj)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sinc_center_tap_matches_limit() {
        for cutoff in [0.7, PI / 3.0, 2.0, PI] {
            assert!((sinc_tap(cutoff, 0.0) - cutoff * cutoff / (4.0 * PI)).abs() < 1e-12);
            // The center value is the r -> 0 limit of the off-center formula.
            let r = 1e-4;
            let near = cutoff / (2.0 * PI * r) * bessel_j1(cutoff * r);
            assert!((sinc_tap(cutoff, 0.0) - near).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(make_gaussian(1.0, 1.0, 0.0, 8).is_err());
        assert!(make_gaussian(0.0, 1.0, 0.0, 9).is_err());
        assert!(make_generalized_gaussian(1.0, 1.0, 0.0, 0.0, 9).is_err());
        assert!(make_sinc(0.0, 9).is_err());
        assert!(make_sinc(PI + 0.1, 9).is_err());
    }

    #[test]
    fn sampler_respects_certain_family() {
        let cfg = KernelConfig {
            sinc_prob: 0.0,
            gaussian_prob: 1.0,
            generalized_prob: 0.0,
            plateau_prob: 0.0,
            ..KernelConfig::default()
        };
        let mut rng = RandomSource::new(99);
        for _ in 0..10_000 {
            let spec = sample_spec(&cfg, &mut rng).unwrap();
            assert!(matches!(spec.shape, KernelShape::Gaussian { .. }));
            assert!(cfg.sizes.contains(&spec.size));
        }
    }

    #[test]
    fn sampler_family_frequencies_match_config() {
        let cfg = KernelConfig::default();
        let mut rng = RandomSource::new(2024);
        let (mut g, mut gg, mut p, mut sinc) = (0u32, 0u32, 0u32, 0u32);
        const N: u32 = 100_000;
        for _ in 0..N {
            match sample_spec(&cfg, &mut rng).unwrap().shape {
                KernelShape::Gaussian { .. } => g += 1,
                KernelShape::GeneralizedGaussian { .. } => gg += 1,
                KernelShape::Plateau { .. } => p += 1,
                KernelShape::Sinc { .. } => sinc += 1,
            }
        }
        let non_sinc = (N - sinc) as f64;
        assert!((g as f64 / non_sinc - 0.70).abs() < 0.02);
        assert!((gg as f64 / non_sinc - 0.15).abs() < 0.02);
        assert!((p as f64 / non_sinc - 0.15).abs() < 0.02);
        assert!((sinc as f64 / N as f64 - 0.10).abs() < 0.02);
    }

    #[test]
    fn sampler_is_deterministic() {
        let cfg = KernelConfig::default();
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        for _ in 0..1000 {
            assert_eq!(
                sample_spec(&cfg, &mut a).unwrap(),
                sample_spec(&cfg, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn sampler_rejects_malformed_probabilities() {
        let cfg = KernelConfig {
            gaussian_prob: 0.5,
            generalized_prob: 0.2,
            plateau_prob: 0.2,
            ..KernelConfig::default()
        };
        let mut rng = RandomSource::new(1);
        assert!(matches!(
            sample_spec(&cfg, &mut rng),
            Err(Error::InvalidParam(_))
        ));
    }
}
