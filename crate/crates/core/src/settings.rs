//! Reward-engine configuration resolution.
//!
//! Precedence: environment variables > config file > built-in defaults
//! (en [0.8, 0.9] / de [0.9, 1.0] / es [1.0, 1.1] bounds, k = 300,
//! α1 = 0.4, α2 = 0.5, λ_len = λ_qual = 0.5, θ = π, far-bound δ).
//!
//! Recognized environment variables:
//! `HOMURA_MODE`, `HOMURA_K`, `HOMURA_THETA`, `HOMURA_ALPHA1`,
//! `HOMURA_ALPHA2`, `HOMURA_CORPUS_MEAN`, `HOMURA_LAMBDA_LEN`,
//! `HOMURA_LAMBDA_QUAL`, `HOMURA_DELTA_RULE`, and `HOMURA_BOUNDS_<LANG>`
//! with a `lower,upper` value (e.g. `HOMURA_BOUNDS_EN=0.75,0.9`).

use crate::lang::LanguageCode;
use crate::reward::{
    DeltaRule, DynamicBoundsConfig, LengthRewardConfig, LengthRewardMode, RatioBounds,
    RewardError, RewardWeights,
};
use crate::Real;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum SettingsError {
    #[error("failed to read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error("no ratio bounds configured for target language {0}")]
    MissingBounds(LanguageCode),
    #[error("mode is `dynamic` but no corpus_mean is configured")]
    MissingCorpusMean,
}

/// On-disk reward configuration. Every field is optional; omitted fields
/// fall back to the built-in defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardSettingsFile {
    pub mode: Option<LengthRewardMode>,
    pub k: Option<Real>,
    pub theta: Option<Real>,
    pub alpha1: Option<Real>,
    pub alpha2: Option<Real>,
    pub corpus_mean: Option<Real>,
    pub lambda_len: Option<Real>,
    pub lambda_qual: Option<Real>,
    pub delta_rule: Option<DeltaRule>,
    /// Per-target-language `[lower, upper]` bounds.
    #[serde(default)]
    pub bounds: BTreeMap<LanguageCode, [Real; 2]>,
}

/// Fully resolved reward settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardSettings {
    pub mode: LengthRewardMode,
    pub k: Real,
    pub theta: Real,
    pub alpha1: Real,
    pub alpha2: Real,
    pub corpus_mean: Option<Real>,
    pub weights: RewardWeights<Real>,
    pub delta_rule: DeltaRule,
    pub bounds: BTreeMap<LanguageCode, RatioBounds<Real>>,
}

impl Default for RewardSettings {
    fn default() -> Self {
        let mut bounds = BTreeMap::new();
        for lang in LanguageCode::ALL {
            if let Some(b) = RatioBounds::default_for(lang) {
                bounds.insert(lang, b);
            }
        }
        RewardSettings {
            mode: LengthRewardMode::Static,
            k: LengthRewardConfig::<Real>::DEFAULT_K,
            theta: std::f64::consts::PI,
            alpha1: DynamicBoundsConfig::<Real>::DEFAULT_ALPHA1,
            alpha2: DynamicBoundsConfig::<Real>::DEFAULT_ALPHA2,
            corpus_mean: None,
            weights: RewardWeights::default(),
            delta_rule: DeltaRule::FarBound,
            bounds,
        }
    }
}

impl RewardSettings {
    /// Loads settings from an optional JSON file plus the process
    /// environment.
    pub fn load(path: Option<&Path>) -> Result<Self, SettingsError> {
        let file = match path {
            Some(p) => Some(serde_json::from_str(&std::fs::read_to_string(p)?)?),
            None => None,
        };
        let env: BTreeMap<String, String> = std::env::vars().collect();
        Self::resolve(file, &env)
    }

    /// Pure resolution from parsed file contents and an environment map.
    pub fn resolve(
        file: Option<RewardSettingsFile>,
        env: &BTreeMap<String, String>,
    ) -> Result<Self, SettingsError> {
        let mut s = RewardSettings::default();
        if let Some(f) = file {
            if let Some(v) = f.mode {
                s.mode = v;
            }
            if let Some(v) = f.k {
                s.k = v;
            }
            if let Some(v) = f.theta {
                s.theta = v;
            }
            if let Some(v) = f.alpha1 {
                s.alpha1 = v;
            }
            if let Some(v) = f.alpha2 {
                s.alpha2 = v;
            }
            if let Some(v) = f.corpus_mean {
                s.corpus_mean = Some(v);
            }
            if let Some(v) = f.lambda_len {
                s.weights.lambda_len = v;
            }
            if let Some(v) = f.lambda_qual {
                s.weights.lambda_qual = v;
            }
            if let Some(v) = f.delta_rule {
                s.delta_rule = v;
            }
            for (lang, [lo, hi]) in f.bounds {
                s.bounds.insert(lang, RatioBounds::new(lo, hi)?);
            }
        }

        let parse_f64 = |key: &str, value: &str| -> Result<Real, SettingsError> {
            value.trim().parse().map_err(|_| SettingsError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })
        };
        if let Some(v) = env.get("HOMURA_MODE") {
            s.mode = match v.trim().to_ascii_lowercase().as_str() {
                "dynamic" => LengthRewardMode::Dynamic,
                "static" => LengthRewardMode::Static,
                "autonomous" => LengthRewardMode::Autonomous,
                _ => {
                    return Err(SettingsError::BadValue {
                        key: "HOMURA_MODE".into(),
                        value: v.clone(),
                    })
                }
            };
        }
        if let Some(v) = env.get("HOMURA_K") {
            s.k = parse_f64("HOMURA_K", v)?;
        }
        if let Some(v) = env.get("HOMURA_THETA") {
            s.theta = parse_f64("HOMURA_THETA", v)?;
        }
        if let Some(v) = env.get("HOMURA_ALPHA1") {
            s.alpha1 = parse_f64("HOMURA_ALPHA1", v)?;
        }
        if let Some(v) = env.get("HOMURA_ALPHA2") {
            s.alpha2 = parse_f64("HOMURA_ALPHA2", v)?;
        }
        if let Some(v) = env.get("HOMURA_CORPUS_MEAN") {
            s.corpus_mean = Some(parse_f64("HOMURA_CORPUS_MEAN", v)?);
        }
        if let Some(v) = env.get("HOMURA_LAMBDA_LEN") {
            s.weights.lambda_len = parse_f64("HOMURA_LAMBDA_LEN", v)?;
        }
        if let Some(v) = env.get("HOMURA_LAMBDA_QUAL") {
            s.weights.lambda_qual = parse_f64("HOMURA_LAMBDA_QUAL", v)?;
        }
        if let Some(v) = env.get("HOMURA_DELTA_RULE") {
            s.delta_rule = match v.trim().to_ascii_lowercase().as_str() {
                "far" | "far_bound" => DeltaRule::FarBound,
                "near" | "near_bound" => DeltaRule::NearBound,
                _ => {
                    return Err(SettingsError::BadValue {
                        key: "HOMURA_DELTA_RULE".into(),
                        value: v.clone(),
                    })
                }
            };
        }
        for lang in LanguageCode::ALL {
            let key = format!("HOMURA_BOUNDS_{}", lang.as_str().to_ascii_uppercase());
            if let Some(v) = env.get(&key) {
                let parts: Vec<&str> = v.split(',').collect();
                if parts.len() != 2 {
                    return Err(SettingsError::BadValue {
                        key,
                        value: v.clone(),
                    });
                }
                let lo = parse_f64(&key, parts[0])?;
                let hi = parse_f64(&key, parts[1])?;
                s.bounds.insert(lang, RatioBounds::new(lo, hi)?);
            }
        }

        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SettingsError> {
        for b in self.bounds.values() {
            b.validate()?;
        }
        RewardWeights::new(self.weights.lambda_len, self.weights.lambda_qual)?;
        // Reuse the reward-config validation for k/theta/alpha constraints.
        self.length_config_unchecked(RatioBounds::new(1.0, 1.0)?)?
            .validate()
            .map_err(SettingsError::from)
    }

    fn length_config_unchecked(
        &self,
        bounds: RatioBounds<Real>,
    ) -> Result<LengthRewardConfig<Real>, SettingsError> {
        let dynamic = match (self.mode, self.corpus_mean) {
            (LengthRewardMode::Dynamic, Some(mu)) => {
                Some(DynamicBoundsConfig::new(self.alpha1, self.alpha2, mu)?)
            }
            (LengthRewardMode::Dynamic, None) => return Err(SettingsError::MissingCorpusMean),
            // α/μ settings are carried but inert outside dynamic mode
            (_, Some(mu)) => DynamicBoundsConfig::new(self.alpha1, self.alpha2, mu).ok(),
            (_, None) => None,
        };
        Ok(LengthRewardConfig {
            mode: self.mode,
            k: self.k,
            theta: self.theta,
            bounds,
            dynamic,
            delta_rule: self.delta_rule,
        })
    }

    /// Length-reward configuration for a target language.
    pub fn length_config_for(
        &self,
        target: LanguageCode,
    ) -> Result<LengthRewardConfig<Real>, SettingsError> {
        let bounds = *self
            .bounds
            .get(&target)
            .ok_or(SettingsError::MissingBounds(target))?;
        let cfg = self.length_config_unchecked(bounds)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
