//! Stochastic degradation pipeline.
//!
//! A first-order stage chains blur → random resize → noise → JPEG; the
//! high-order model runs `order` such stages, except that the last stage's
//! JPEG takes part in a final randomized step: with probability one half the
//! order is [resize-to-target + optional sinc, then JPEG], otherwise [JPEG,
//! then resize-to-target + optional sinc].
//!
//! Sampling and application are strictly separated: [`sample_record`] turns
//! a config plus a random source into a [`DegradationRecord`] holding every
//! resolved parameter (noise realizations are pinned by recording their own
//! `(seed, stream)` pair), and [`apply_record`] deterministically applies a
//! record to an image. `degrade = apply(sample)`, so replaying a record is
//! bit-exact by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::jpeg::jpeg_roundtrip;
use crate::kernels::{sample_spec, CutoffRule, Kernel, KernelConfig, KernelShape, KernelSpec};
use crate::ops::{add_noise, convolve, default_lambda, resize, usm_sharpen, NoiseSpec, ResizeMode};
use crate::rng::RandomSource;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Resize-step configuration: mode mix over [area, bilinear, bicubic] and
/// the uniform scale range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResizeConfig {
    pub mode_probs: [f64; 3],
    pub scale_range: (f64, f64),
}

impl Default for ResizeConfig {
    fn default() -> Self {
        Self {
            mode_probs: [1.0 / 3.0; 3],
            scale_range: (0.15, 1.5),
        }
    }
}

/// Noise-step configuration. Gaussian sigma and the sharpening threshold are
/// configured in 8-bit levels and divided by 255 internally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Probability of Gaussian noise; otherwise shot noise.
    pub gaussian_prob: f64,
    /// Sigma range in 8-bit levels.
    pub gaussian_sigma_range: (f64, f64),
    pub poisson_scale_range: (f64, f64),
    /// Photons per unit intensity for shot noise.
    pub poisson_lambda: f64,
    /// Probability of a single shared noise plane instead of per-channel
    /// noise.
    pub gray_prob: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            gaussian_prob: 0.5,
            gaussian_sigma_range: (1.0, 30.0),
            poisson_scale_range: (0.05, 3.0),
            poisson_lambda: default_lambda(),
            gray_prob: 0.4,
        }
    }
}

/// One classical degradation stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StageConfig {
    /// Probability of skipping the blur step entirely.
    pub blur_skip_prob: f64,
    pub kernel: KernelConfig,
    pub resize: ResizeConfig,
    pub noise: NoiseConfig,
    /// Inclusive JPEG quality range.
    pub jpeg_quality_range: (u32, u32),
}

impl Default for StageConfig {
    fn default() -> Self {
        Self {
            blur_skip_prob: 0.0,
            kernel: KernelConfig::default(),
            resize: ResizeConfig::default(),
            noise: NoiseConfig::default(),
            jpeg_quality_range: (30, 95),
        }
    }
}

impl StageConfig {
    /// Default second-stage settings: milder blur and noise, narrower resize
    /// range, and a 20% chance of skipping the blur.
    pub fn second_stage_default() -> Self {
        Self {
            blur_skip_prob: 0.2,
            kernel: KernelConfig {
                sigma_range: (0.2, 1.5),
                ..KernelConfig::default()
            },
            resize: ResizeConfig {
                scale_range: (0.3, 1.2),
                ..ResizeConfig::default()
            },
            noise: NoiseConfig {
                gaussian_sigma_range: (1.0, 25.0),
                poisson_scale_range: (0.05, 2.5),
                ..NoiseConfig::default()
            },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("blur_skip_prob", self.blur_skip_prob),
            ("noise.gaussian_prob", self.noise.gaussian_prob),
            ("noise.gray_prob", self.noise.gray_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParam(format!("{name} = {p} outside [0, 1]")));
            }
        }
        self.kernel.validate()?;
        if self.resize.mode_probs.iter().any(|p| *p < 0.0)
            || self.resize.mode_probs.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::InvalidParam(
                "resize mode probabilities must be nonnegative and not all zero".into(),
            ));
        }
        let (lo, hi) = self.resize.scale_range;
        if !(lo > 0.0) || lo > hi {
            return Err(Error::InvalidParam(format!(
                "resize scale range ({lo}, {hi}) must satisfy 0 < lo <= hi"
            )));
        }
        for (name, (lo, hi)) in [
            ("gaussian_sigma_range", self.noise.gaussian_sigma_range),
            ("poisson_scale_range", self.noise.poisson_scale_range),
        ] {
            if lo < 0.0 || lo > hi {
                return Err(Error::InvalidParam(format!(
                    "{name} ({lo}, {hi}) must satisfy 0 <= lo <= hi"
                )));
            }
        }
        if !(self.noise.poisson_lambda > 0.0) {
            return Err(Error::InvalidParam("poisson_lambda must be positive".into()));
        }
        let (qlo, qhi) = self.jpeg_quality_range;
        if qlo < 1 || qhi > 100 || qlo > qhi {
            return Err(Error::InvalidParam(format!(
                "jpeg quality range ({qlo}, {qhi}) must lie in [1, 100]"
            )));
        }
        Ok(())
    }
}

/// Ground-truth sharpening parameters (threshold in 8-bit levels).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SharpenConfig {
    pub sigma: f64,
    pub weight: f64,
    pub threshold: f64,
}

impl Default for SharpenConfig {
    fn default() -> Self {
        Self {
            sigma: 8.0,
            weight: 0.5,
            threshold: 10.0,
        }
    }
}

/// Full pipeline configuration.
///
/// `order` is the number of chained classical stages (2 by default). Stage 1
/// uses `stage1`; stages 2..order all use `stage2`. The first stage resizes
/// relative to the source dimensions; later stages resize relative to the
/// target `(h/scale, w/scale)` so resolution stays in a sane range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegradationConfig {
    pub order: u32,
    /// Output scale factor: LR dims are HR dims / scale. One of {1, 2, 4}.
    pub scale: u32,
    pub stage1: StageConfig,
    pub stage2: StageConfig,
    /// Probability of applying a sinc filter in the final step.
    pub final_sinc_prob: f64,
    /// Candidate sizes for the final sinc kernel.
    pub final_sinc_sizes: Vec<u32>,
    pub final_sinc_cutoff: CutoffRule,
    /// Mode mix for the final resize-to-target.
    pub final_resize_mode_probs: [f64; 3],
    /// Ground-truth sharpening; absent means the ground truth is the source.
    pub gt_sharpen: Option<SharpenConfig>,
}

impl Default for DegradationConfig {
    fn default() -> Self {
        Self {
            order: 2,
            scale: 4,
            stage1: StageConfig::default(),
            stage2: StageConfig::second_stage_default(),
            final_sinc_prob: 0.8,
            final_sinc_sizes: (7..=21).step_by(2).collect(),
            final_sinc_cutoff: CutoffRule::default(),
            final_resize_mode_probs: [1.0 / 3.0; 3],
            gt_sharpen: None,
        }
    }
}

impl DegradationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::InvalidParam("order must be >= 1".into()));
        }
        if ![1, 2, 4].contains(&self.scale) {
            return Err(Error::InvalidParam(format!(
                "scale must be 1, 2, or 4, got {}",
                self.scale
            )));
        }
        self.stage1.validate()?;
        self.stage2.validate()?;
        if !(0.0..=1.0).contains(&self.final_sinc_prob) {
            return Err(Error::InvalidParam(format!(
                "final_sinc_prob = {} outside [0, 1]",
                self.final_sinc_prob
            )));
        }
        if self.final_sinc_sizes.is_empty() {
            return Err(Error::InvalidParam("no final sinc sizes configured".into()));
        }
        for &s in &self.final_sinc_sizes {
            if s < 3 || s % 2 == 0 {
                return Err(Error::InvalidParam(format!(
                    "final sinc size {s} must be odd and >= 3"
                )));
            }
        }
        self.final_sinc_cutoff.validate()?;
        if self.final_resize_mode_probs.iter().any(|p| *p < 0.0)
            || self.final_resize_mode_probs.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::InvalidParam(
                "final resize mode probabilities must be nonnegative and not all zero".into(),
            ));
        }
        if let Some(s) = &self.gt_sharpen {
            if !(s.sigma > 0.0) || s.weight < 0.0 || s.threshold < 0.0 {
                return Err(Error::InvalidParam(
                    "gt_sharpen needs sigma > 0, weight >= 0, threshold >= 0".into(),
                ));
            }
        }
        Ok(())
    }

    fn stage(&self, index: u32) -> &StageConfig {
        if index == 0 {
            &self.stage1
        } else {
            &self.stage2
        }
    }
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// A resolved resize step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResizePlan {
    pub mode: ResizeMode,
    pub height: usize,
    pub width: usize,
    /// The sampled scale that produced the dimensions (ratio to the target
    /// dims for the final resize).
    pub scale: f64,
}

/// A resolved noise step. The `(seed, stream)` pair pins the exact noise
/// realization for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisePlan {
    pub spec: NoiseSpec,
    pub rng_seed: u64,
    pub rng_stream: u64,
}

/// One applied stage. The JPEG quality is absent on the last stage, whose
/// compression is recorded in [`FinalStep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub blur: Option<KernelSpec>,
    pub resize: ResizePlan,
    pub noise: NoisePlan,
    pub jpeg_quality: Option<u32>,
}

/// The randomized tail of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalStep {
    /// When true the order is [JPEG, resize-to-target + sinc]; otherwise
    /// [resize-to-target + sinc, JPEG].
    pub jpeg_first: bool,
    pub jpeg_quality: u32,
    pub resize: ResizePlan,
    pub sinc: Option<KernelSpec>,
}

/// Every sampled parameter of one synthesized pair, sufficient for bit-exact
/// replay against the same source image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradationRecord {
    /// Identity of the random source the parameters were drawn from.
    pub seed: u64,
    pub stream: u64,
    pub source_height: usize,
    pub source_width: usize,
    pub scale: u32,
    pub gt_sharpen: Option<SharpenConfig>,
    pub stages: Vec<StageRecord>,
    pub final_step: FinalStep,
}

impl DegradationRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParam(format!("cannot parse record: {e}")))
    }
}

/// A synthesized training pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    pub gt: Image,
    pub lr: Image,
    pub record: DegradationRecord,
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

const RESIZE_MODES: [ResizeMode; 3] = [ResizeMode::Area, ResizeMode::Bilinear, ResizeMode::Bicubic];

fn sample_resize_plan(
    base_h: usize,
    base_w: usize,
    mode_probs: &[f64; 3],
    scale_range: (f64, f64),
    rng: &mut RandomSource,
) -> ResizePlan {
    let mode = RESIZE_MODES[rng.weighted(mode_probs)];
    let scale = rng.range(scale_range.0, scale_range.1);
    ResizePlan {
        mode,
        height: ((base_h as f64 * scale).round() as usize).max(1),
        width: ((base_w as f64 * scale).round() as usize).max(1),
        scale,
    }
}

fn sample_noise_plan(cfg: &NoiseConfig, rng: &mut RandomSource, stream_index: u64) -> NoisePlan {
    let gaussian = rng.coin(cfg.gaussian_prob);
    let gray = rng.coin(cfg.gray_prob);
    let spec = if gaussian {
        NoiseSpec::Gaussian {
            sigma: rng.range(cfg.gaussian_sigma_range.0, cfg.gaussian_sigma_range.1) / 255.0,
            gray,
        }
    } else {
        NoiseSpec::Poisson {
            scale: rng.range(cfg.poisson_scale_range.0, cfg.poisson_scale_range.1),
            lambda: cfg.poisson_lambda,
            gray,
        }
    };
    let noise_rng = rng.child(stream_index);
    NoisePlan {
        spec,
        rng_seed: noise_rng.seed(),
        rng_stream: noise_rng.stream(),
    }
}

fn sample_stage(
    cfg: &StageConfig,
    base_h: usize,
    base_w: usize,
    last: bool,
    rng: &mut RandomSource,
    stage_index: u64,
) -> Result<StageRecord> {
    let blur = if rng.coin(cfg.blur_skip_prob) {
        None
    } else {
        Some(sample_spec(&cfg.kernel, rng)?)
    };
    let resize = sample_resize_plan(
        base_h,
        base_w,
        &cfg.resize.mode_probs,
        cfg.resize.scale_range,
        rng,
    );
    let noise = sample_noise_plan(&cfg.noise, rng, stage_index);
    let jpeg_quality = if last {
        None
    } else {
        Some(rng.range_u32(cfg.jpeg_quality_range.0, cfg.jpeg_quality_range.1))
    };
    Ok(StageRecord {
        blur,
        resize,
        noise,
        jpeg_quality,
    })
}

/// Draw every stochastic parameter for one pair.
///
/// Draw order is fixed: for each stage in turn, the blur-skip gate, kernel
/// parameters, resize mode and scale, noise gates and strength, and (except
/// on the last stage) the JPEG quality; then the final JPEG quality, the
/// order gate, the final resize mode, the sinc gate, and the sinc parameters.
pub fn sample_record(
    height: usize,
    width: usize,
    cfg: &DegradationConfig,
    rng: &mut RandomSource,
) -> Result<DegradationRecord> {
    cfg.validate()?;
    let scale = cfg.scale as usize;
    if height % scale != 0 || width % scale != 0 {
        return Err(Error::ShapeMismatch(format!(
            "{height}x{width} not divisible by scale {scale}"
        )));
    }
    let (target_h, target_w) = (height / scale, width / scale);

    let mut stages = Vec::with_capacity(cfg.order as usize);
    for i in 0..cfg.order {
        let last = i + 1 == cfg.order;
        // Later stages resize relative to the target resolution.
        let (bh, bw) = if i == 0 {
            (height, width)
        } else {
            (target_h, target_w)
        };
        stages.push(sample_stage(cfg.stage(i), bh, bw, last, rng, i as u64)?);
    }

    let last_cfg = cfg.stage(cfg.order - 1);
    let jpeg_quality = rng.range_u32(last_cfg.jpeg_quality_range.0, last_cfg.jpeg_quality_range.1);
    let jpeg_first = rng.coin(0.5);
    let final_mode = RESIZE_MODES[rng.weighted(&cfg.final_resize_mode_probs)];
    let last_resize = &stages.last().expect("order >= 1").resize;
    let final_resize = ResizePlan {
        mode: final_mode,
        height: target_h,
        width: target_w,
        scale: target_h as f64 / last_resize.height as f64,
    };
    let sinc = if rng.coin(cfg.final_sinc_prob) {
        let size = cfg.final_sinc_sizes[rng.index(cfg.final_sinc_sizes.len())];
        let (lo, hi) = cfg.final_sinc_cutoff.range_for(size);
        Some(KernelSpec {
            size,
            shape: KernelShape::Sinc {
                cutoff: rng.range(lo, hi),
            },
        })
    } else {
        None
    };

    Ok(DegradationRecord {
        seed: rng.seed(),
        stream: rng.stream(),
        source_height: height,
        source_width: width,
        scale: cfg.scale,
        gt_sharpen: cfg.gt_sharpen.clone(),
        stages,
        final_step: FinalStep {
            jpeg_first,
            jpeg_quality,
            resize: final_resize,
            sinc,
        },
    })
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

fn apply_blur(img: Image, spec: &KernelSpec) -> Result<Image> {
    convolve(&img, &Kernel::from_spec(spec)?)
}

fn apply_resize_plan(img: Image, plan: &ResizePlan) -> Result<Image> {
    resize(&img, plan.height, plan.width, plan.mode)
}

fn apply_noise_plan(img: Image, plan: &NoisePlan) -> Result<Image> {
    let mut rng = RandomSource::from_parts(plan.rng_seed, plan.rng_stream);
    add_noise(&img, &plan.spec, &mut rng)
}

fn apply_stage(mut img: Image, stage: &StageRecord) -> Result<Image> {
    if let Some(spec) = &stage.blur {
        img = apply_blur(img, spec)?;
    }
    img = apply_resize_plan(img, &stage.resize)?;
    img = apply_noise_plan(img, &stage.noise)?;
    if let Some(q) = stage.jpeg_quality {
        img = jpeg_roundtrip(&img, q)?;
    }
    Ok(img)
}

/// Deterministically apply a record to the source image it was sampled for.
/// Single-channel sources are promoted to three channels first.
pub fn apply_record(hr: &Image, record: &DegradationRecord) -> Result<Image> {
    if hr.height() != record.source_height || hr.width() != record.source_width {
        return Err(Error::ShapeMismatch(format!(
            "record was sampled for {}x{}, image is {}x{}",
            record.source_height,
            record.source_width,
            hr.height(),
            hr.width()
        )));
    }
    let mut img = hr.to_rgb()?;
    for stage in &record.stages {
        img = apply_stage(img, stage)?;
    }
    let f = &record.final_step;
    if f.jpeg_first {
        img = jpeg_roundtrip(&img, f.jpeg_quality)?;
        img = apply_resize_plan(img, &f.resize)?;
        if let Some(spec) = &f.sinc {
            img = apply_blur(img, spec)?;
        }
    } else {
        img = apply_resize_plan(img, &f.resize)?;
        if let Some(spec) = &f.sinc {
            img = apply_blur(img, spec)?;
        }
        img = jpeg_roundtrip(&img, f.jpeg_quality)?;
    }
    Ok(img.clamp_finalize())
}

/// Bit-exact replay of a recorded degradation.
pub fn replay(hr: &Image, record: &DegradationRecord) -> Result<Image> {
    apply_record(hr, record)
}

/// One classical stage applied standalone: blur → resize → noise → JPEG,
/// resizing relative to the input dimensions.
pub fn degrade_first_order(
    img: &Image,
    cfg: &StageConfig,
    rng: &mut RandomSource,
) -> Result<(Image, StageRecord)> {
    cfg.validate()?;
    let src = img.to_rgb()?;
    let stage = sample_stage(cfg, src.height(), src.width(), false, rng, 0)?;
    let out = apply_stage(src, &stage)?;
    Ok((out, stage))
}

/// The full high-order degradation: sample a record, then apply it.
pub fn degrade_high_order(
    hr: &Image,
    cfg: &DegradationConfig,
    rng: &mut RandomSource,
) -> Result<(Image, DegradationRecord)> {
    let record = sample_record(hr.height(), hr.width(), cfg, rng)?;
    let lr = apply_record(hr, &record)?;
    Ok((lr, record))
}

/// Synthesize a (ground truth, low resolution, record) triple.
///
/// The ground truth is the (optionally sharpened) source; degradation always
/// starts from the unsharpened source.
pub fn synth_pair(
    hr: &Image,
    cfg: &DegradationConfig,
    rng: &mut RandomSource,
) -> Result<TrainingPair> {
    let src = hr.to_rgb()?;
    let gt = match &cfg.gt_sharpen {
        Some(s) => usm_sharpen(&src, s.sigma, s.weight, s.threshold / 255.0)?,
        None => src.clone(),
    };
    let (lr, record) = degrade_high_order(&src, cfg, rng)?;
    Ok(TrainingPair { gt, lr, record })
}
