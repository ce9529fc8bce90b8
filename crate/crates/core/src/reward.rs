//! Length-compliance rewards: the interval reward with dynamic lower-bound
//! relaxation, its static-interval variant, the autonomous compression
//! reward, and the weighted composite with a quality term.

use crate::diagnostics::syllable_ratio;
use crate::lang::LanguageCode;
use crate::scalar::Scalar;
use crate::syllable::SyllableCount;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RewardError {
    #[error("ratio bounds must satisfy 0 < lower <= upper, got [{lower}, {upper}]")]
    InvalidBounds { lower: f64, upper: f64 },
    #[error("dynamic bounds config invalid: {0}")]
    InvalidDynamicConfig(String),
    #[error("decay steepness k must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("incentive scale theta must be positive, got {0}")]
    NonPositiveTheta(f64),
    #[error("reward weights must be non-negative, got ({0}, {1})")]
    NegativeWeights(f64, f64),
    #[error("mode is `dynamic` but no dynamic bounds config was provided")]
    MissingDynamicConfig,
    #[error("quality reward must be finite, got {0}")]
    NonFiniteQuality(f64),
}

/// Acceptance interval [L0, R0] for the syllable ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds<F> {
    pub lower: F,
    pub upper: F,
}

impl<F: Scalar> RatioBounds<F> {
    pub fn new(lower: F, upper: F) -> Result<Self, RewardError> {
        let b = RatioBounds { lower, upper };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), RewardError> {
        if self.lower > F::zero() && self.lower <= self.upper {
            Ok(())
        } else {
            Err(RewardError::InvalidBounds {
                lower: self.lower.to_f64().unwrap_or(f64::NAN),
                upper: self.upper.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// Closed-interval membership: both endpoints accept.
    pub fn contains(&self, rho: F) -> bool {
        rho >= self.lower && rho <= self.upper
    }

    /// Calibrated per-language default: en [0.8, 0.9], de [0.9, 1.0],
    /// es [1.0, 1.1]. Mandarin is source-only and has no target interval.
    pub fn default_for(lang: LanguageCode) -> Option<Self> {
        let (l, r) = match lang {
            LanguageCode::En => (0.8, 0.9),
            LanguageCode::De => (0.9, 1.0),
            LanguageCode::Es => (1.0, 1.1),
            LanguageCode::Zh => return None,
        };
        Some(RatioBounds {
            lower: F::from_f64_lossy(l),
            upper: F::from_f64_lossy(r),
        })
    }
}

/// Parameters of the lower-bound relaxation γ(x) = α1 + α2·√(σ(x)/μ),
/// applied when the source length is below the corpus mean μ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicBoundsConfig<F> {
    pub alpha1: F,
    pub alpha2: F,
    pub corpus_mean_syllables: F,
}

impl<F: Scalar> DynamicBoundsConfig<F> {
    pub const DEFAULT_ALPHA1: f64 = 0.4;
    pub const DEFAULT_ALPHA2: f64 = 0.5;

    pub fn new(alpha1: F, alpha2: F, corpus_mean_syllables: F) -> Result<Self, RewardError> {
        let cfg = DynamicBoundsConfig {
            alpha1,
            alpha2,
            corpus_mean_syllables,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default α1 = 0.4, α2 = 0.5 with the given corpus mean.
    pub fn with_corpus_mean(mu: F) -> Result<Self, RewardError> {
        Self::new(
            F::from_f64_lossy(Self::DEFAULT_ALPHA1),
            F::from_f64_lossy(Self::DEFAULT_ALPHA2),
            mu,
        )
    }

    pub fn validate(&self) -> Result<(), RewardError> {
        let err = |msg: String| Err(RewardError::InvalidDynamicConfig(msg));
        if self.alpha1 < F::zero() || self.alpha2 < F::zero() {
            return err("alpha1 and alpha2 must be non-negative".into());
        }
        if self.alpha1 + self.alpha2 > F::one() {
            return err("alpha1 + alpha2 must not exceed 1".into());
        }
        if self.corpus_mean_syllables <= F::zero() {
            return err("corpus mean must be positive".into());
        }
        Ok(())
    }
}

/// Which bound distance defines the out-of-interval deviation δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    /// δ = max(|ρ−L|, |ρ−R|): distance to the far bound (the default).
    #[default]
    FarBound,
    /// δ = min(|ρ−L|, |ρ−R|): distance to the near bound, behind this
    /// compatibility flag only.
    NearBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthRewardMode {
    Dynamic,
    Static,
    Autonomous,
}

/// Full length-reward configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthRewardConfig<F> {
    pub mode: LengthRewardMode,
    /// Decay steepness of the out-of-interval penalty.
    pub k: F,
    /// Incentive scale of the autonomous compression reward.
    pub theta: F,
    pub bounds: RatioBounds<F>,
    #[serde(default = "none_dynamic", skip_serializing_if = "Option::is_none")]
    pub dynamic: Option<DynamicBoundsConfig<F>>,
    #[serde(default)]
    pub delta_rule: DeltaRule,
}

fn none_dynamic<F>() -> Option<DynamicBoundsConfig<F>> {
    None
}

impl<F: Scalar> LengthRewardConfig<F> {
    pub const DEFAULT_K: f64 = 300.0;

    fn base(mode: LengthRewardMode, bounds: RatioBounds<F>) -> Self {
        LengthRewardConfig {
            mode,
            k: F::from_f64_lossy(Self::DEFAULT_K),
            theta: F::from_f64_lossy(std::f64::consts::PI),
            bounds,
            dynamic: None,
            delta_rule: DeltaRule::FarBound,
        }
    }

    pub fn static_bounds(bounds: RatioBounds<F>) -> Self {
        Self::base(LengthRewardMode::Static, bounds)
    }

    pub fn dynamic(bounds: RatioBounds<F>, dynamic: DynamicBoundsConfig<F>) -> Self {
        let mut cfg = Self::base(LengthRewardMode::Dynamic, bounds);
        cfg.dynamic = Some(dynamic);
        cfg
    }

    /// Autonomous compression: min(cos(θ·ρ), 0). The bounds are still
    /// recorded in breakdowns for reporting.
    pub fn autonomous(bounds: RatioBounds<F>, theta: F) -> Self {
        let mut cfg = Self::base(LengthRewardMode::Autonomous, bounds);
        cfg.theta = theta;
        cfg
    }

    pub fn validate(&self) -> Result<(), RewardError> {
        self.bounds.validate()?;
        if self.k <= F::zero() {
            return Err(RewardError::NonPositiveK(self.k.to_f64().unwrap_or(f64::NAN)));
        }
        if self.theta <= F::zero() {
            return Err(RewardError::NonPositiveTheta(
                self.theta.to_f64().unwrap_or(f64::NAN),
            ));
        }
        if let Some(d) = &self.dynamic {
            d.validate()?;
        }
        if self.mode == LengthRewardMode::Dynamic && self.dynamic.is_none() {
            return Err(RewardError::MissingDynamicConfig);
        }
        Ok(())
    }
}

/// Trade-off weights of the composite reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights<F> {
    pub lambda_len: F,
    pub lambda_qual: F,
}

impl<F: Scalar> Default for RewardWeights<F> {
    fn default() -> Self {
        RewardWeights {
            lambda_len: F::from_f64_lossy(0.5),
            lambda_qual: F::from_f64_lossy(0.5),
        }
    }
}

impl<F: Scalar> RewardWeights<F> {
    pub fn new(lambda_len: F, lambda_qual: F) -> Result<Self, RewardError> {
        if lambda_len < F::zero() || lambda_qual < F::zero() {
            return Err(RewardError::NegativeWeights(
                lambda_len.to_f64().unwrap_or(f64::NAN),
                lambda_qual.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(RewardWeights {
            lambda_len,
            lambda_qual,
        })
    }
}

/// Per-sample reward decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown<F> {
    pub rho: F,
    /// Interval actually applied (post-relaxation in dynamic mode).
    pub bounds_used: RatioBounds<F>,
    pub length_reward: F,
    pub quality_reward: F,
    pub composite: F,
    pub mode: LengthRewardMode,
}

/// Relaxation factor γ(x) = α1 + α2·√(σ(x)/μ) for sources below the corpus
/// mean; 1 at or above it.
pub fn gamma_factor<F: Scalar>(src_syllables: SyllableCount, cfg: &DynamicBoundsConfig<F>) -> F {
    let sigma = F::from_u32(src_syllables.value()).unwrap();
    if sigma >= cfg.corpus_mean_syllables {
        return F::one();
    }
    cfg.alpha1 + cfg.alpha2 * (sigma / cfg.corpus_mean_syllables).sqrt()
}

/// Relaxed interval [L0·γ(x), R0].
pub fn dynamic_bounds<F: Scalar>(
    src_syllables: SyllableCount,
    base: RatioBounds<F>,
    cfg: &DynamicBoundsConfig<F>,
) -> RatioBounds<F> {
    RatioBounds {
        lower: base.lower * gamma_factor(src_syllables, cfg),
        upper: base.upper,
    }
}

/// Interval compliance reward: exactly 1 inside the closed interval,
/// exp(−k·δ²) outside, with δ the distance to the far bound.
pub fn length_reward_interval<F: Scalar>(rho: F, bounds: &RatioBounds<F>, k: F) -> F {
    length_reward_interval_with(rho, bounds, k, DeltaRule::FarBound)
}

/// [`length_reward_interval`] with an explicit δ convention.
pub fn length_reward_interval_with<F: Scalar>(
    rho: F,
    bounds: &RatioBounds<F>,
    k: F,
    rule: DeltaRule,
) -> F {
    if bounds.contains(rho) {
        return F::one();
    }
    let dl = (rho - bounds.lower).abs();
    let dr = (rho - bounds.upper).abs();
    let delta = match rule {
        DeltaRule::FarBound => dl.max(dr),
        DeltaRule::NearBound => dl.min(dr),
    };
    (-k * delta * delta).exp()
}

/// Autonomous compression reward min(cos(θ·ρ), 0): zero while cos(θ·ρ) is
/// non-negative, down to −1 as ρ grows into the penalized region.
pub fn length_reward_auto<F: Scalar>(rho: F, theta: F) -> F {
    (theta * rho).cos().min(F::zero())
}

fn length_reward<F: Scalar>(
    rho: F,
    src_syllables: SyllableCount,
    cfg: &LengthRewardConfig<F>,
) -> Result<(F, RatioBounds<F>), RewardError> {
    match cfg.mode {
        LengthRewardMode::Static => Ok((
            length_reward_interval_with(rho, &cfg.bounds, cfg.k, cfg.delta_rule),
            cfg.bounds,
        )),
        LengthRewardMode::Dynamic => {
            let dyn_cfg = cfg.dynamic.as_ref().ok_or(RewardError::MissingDynamicConfig)?;
            let used = dynamic_bounds(src_syllables, cfg.bounds, dyn_cfg);
            Ok((
                length_reward_interval_with(rho, &used, cfg.k, cfg.delta_rule),
                used,
            ))
        }
        LengthRewardMode::Autonomous => {
            Ok((length_reward_auto(rho, cfg.theta), cfg.bounds))
        }
    }
}

/// Composite reward over raw syllable counts:
/// λ_len·R_len + λ_qual·R_qual.
pub fn composite_reward<F: Scalar>(
    src_syllables: SyllableCount,
    tgt_syllables: SyllableCount,
    quality: F,
    weights: &RewardWeights<F>,
    cfg: &LengthRewardConfig<F>,
) -> Result<RewardBreakdown<F>, RewardError> {
    let rho = syllable_ratio(src_syllables, tgt_syllables);
    composite_reward_from_rho(rho, src_syllables, quality, weights, cfg)
}

/// Composite reward when ρ is already known (e.g. precomputed candidate
/// features). The source length still drives dynamic relaxation.
pub fn composite_reward_from_rho<F: Scalar>(
    rho: F,
    src_syllables: SyllableCount,
    quality: F,
    weights: &RewardWeights<F>,
    cfg: &LengthRewardConfig<F>,
) -> Result<RewardBreakdown<F>, RewardError> {
    if !quality.is_finite() {
        return Err(RewardError::NonFiniteQuality(
            quality.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let (len_reward, bounds_used) = length_reward(rho, src_syllables, cfg)?;
    let composite = weights.lambda_len * len_reward + weights.lambda_qual * quality;
    Ok(RewardBreakdown {
        rho,
        bounds_used,
        length_reward: len_reward,
        quality_reward: quality,
        composite,
        mode: cfg.mode,
    })
}
