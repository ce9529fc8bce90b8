//! Core numerics for time-budgeted translation: multilingual syllable
//! counting, expansion-ratio diagnostics, length-compliance rewards, and a
//! desk-scale GRPO simulator.
//!
//! The scalar math (rewards, advantages, ratios) is generic over the
//! floating-point type via [`Scalar`]; the crate root pins concrete `f64`
//! aliases that the rest of the workspace uses.

pub mod diagnostics;
pub mod grpo;
pub mod lang;
pub mod reward;
pub mod scalar;
pub mod settings;
pub mod syllable;

pub use lang::{LanguageCode, LanguageProfile, UnsupportedLanguage};
pub use scalar::Scalar;
pub use syllable::{count_syllables, count_word_syllables, tokenize, SyllableCount};

/// Workspace-wide scalar type. All wire formats and reports use `f64`.
pub type Real = f64;

pub type RatioBounds = reward::RatioBounds<Real>;
pub type DynamicBoundsConfig = reward::DynamicBoundsConfig<Real>;
pub type LengthRewardConfig = reward::LengthRewardConfig<Real>;
pub type RewardWeights = reward::RewardWeights<Real>;
pub type RewardBreakdown = reward::RewardBreakdown<Real>;
pub type AdvantageBatch = grpo::AdvantageBatch<Real>;
