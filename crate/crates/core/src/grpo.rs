//! Desk-scale GRPO over discrete candidate pools.
//!
//! Each prompt owns a softmax policy over a fixed set of candidates whose
//! (ρ, quality) features are precomputed. One simulator step samples a
//! group per prompt, scores it with the composite reward, normalizes
//! advantages within the group, and applies a clipped policy-gradient
//! update to the logits (plus an optional KL pull toward the frozen
//! initial policy). Runs are bit-reproducible for a given seed.

use crate::reward::{composite_reward_from_rho, LengthRewardConfig, RewardError, RewardWeights};
use crate::scalar::Scalar;
use crate::syllable::SyllableCount;
use crate::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrpoError {
    #[error("candidate pool list is empty")]
    EmptyPools,
    #[error("pool {prompt_id:?} needs at least 2 candidates")]
    TooFewCandidates { prompt_id: String },
    #[error("pool {prompt_id:?} candidate {index}: {reason}")]
    InvalidCandidate {
        prompt_id: String,
        index: usize,
        reason: String,
    },
    #[error("advantage normalization needs at least 2 rewards, got {0}")]
    GroupTooSmall(usize),
    #[error("policies have different candidate support ({0} vs {1})")]
    SupportMismatch(usize, usize),
    #[error("invalid GRPO config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Reward(#[from] RewardError),
}

/// One candidate output's precomputed features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub rho: Real,
    pub quality: Real,
}

/// The discrete stand-in for sampled generations of one prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePool {
    pub prompt_id: String,
    /// Source length, used by the dynamic bound relaxation.
    pub src_syllables: SyllableCount,
    pub candidates: Vec<Candidate>,
}

impl CandidatePool {
    pub fn validate(&self) -> Result<(), GrpoError> {
        if self.candidates.len() < 2 {
            return Err(GrpoError::TooFewCandidates {
                prompt_id: self.prompt_id.clone(),
            });
        }
        for (i, c) in self.candidates.iter().enumerate() {
            if !(c.rho >= 0.0 && c.rho.is_finite()) {
                return Err(GrpoError::InvalidCandidate {
                    prompt_id: self.prompt_id.clone(),
                    index: i,
                    reason: format!("rho must be finite and >= 0, got {}", c.rho),
                });
            }
            if !(0.0..=1.0).contains(&c.quality) {
                return Err(GrpoError::InvalidCandidate {
                    prompt_id: self.prompt_id.clone(),
                    index: i,
                    reason: format!("quality must lie in [0, 1], got {}", c.quality),
                });
            }
        }
        Ok(())
    }
}

/// Per-prompt softmax policy over candidate indices, temperature 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxPolicy {
    logits: Vec<Vec<Real>>,
}

impl SoftmaxPolicy {
    /// Uniform policy over every pool's candidates.
    pub fn uniform(pools: &[CandidatePool]) -> Self {
        SoftmaxPolicy {
            logits: pools.iter().map(|p| vec![0.0; p.candidates.len()]).collect(),
        }
    }

    pub fn num_prompts(&self) -> usize {
        self.logits.len()
    }

    pub fn logits(&self, prompt: usize) -> &[Real] {
        &self.logits[prompt]
    }

    /// Selection probabilities for one prompt; sums to 1.
    pub fn probabilities(&self, prompt: usize) -> Vec<Real> {
        softmax(&self.logits[prompt])
    }

    /// Shannon entropy of one prompt's selection distribution.
    pub fn entropy(&self, prompt: usize) -> Real {
        let p = self.probabilities(prompt);
        -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<Real>()
    }

    /// Total-variation distance to another policy on one prompt.
    pub fn total_variation(&self, other: &SoftmaxPolicy, prompt: usize) -> Result<Real, GrpoError> {
        let p = self.probabilities(prompt);
        let q = other.probabilities(prompt);
        if p.len() != q.len() {
            return Err(GrpoError::SupportMismatch(p.len(), q.len()));
        }
        Ok(0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<Real>())
    }
}

fn softmax(logits: &[Real]) -> Vec<Real> {
    let max = logits.iter().copied().fold(Real::NEG_INFINITY, Real::max);
    let exps: Vec<Real> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: Real = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// KL(π ‖ P0) over one prompt's discrete candidate distribution.
pub fn kl_term(
    policy: &SoftmaxPolicy,
    reference: &SoftmaxPolicy,
    prompt: usize,
) -> Result<Real, GrpoError> {
    let p = policy.probabilities(prompt);
    let q = reference.probabilities(prompt);
    if p.len() != q.len() {
        return Err(GrpoError::SupportMismatch(p.len(), q.len()));
    }
    Ok(p.iter()
        .zip(&q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi).ln())
        .sum())
}

/// Simulator hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrpoConfig {
    /// Candidates sampled per prompt per step (G).
    pub group_size: usize,
    pub clip_epsilon: Real,
    /// Weight of the KL pull toward the reference policy; 0 removes it.
    pub kl_beta: Real,
    pub learning_rate: Real,
    pub steps: usize,
    pub seed: u64,
}

impl Default for GrpoConfig {
    fn default() -> Self {
        GrpoConfig {
            group_size: 16,
            clip_epsilon: 0.2,
            kl_beta: 0.0,
            learning_rate: 0.1,
            steps: 500,
            seed: 0,
        }
    }
}

impl GrpoConfig {
    pub fn validate(&self) -> Result<(), GrpoError> {
        if self.group_size < 2 {
            return Err(GrpoError::InvalidConfig("group_size must be >= 2".into()));
        }
        if !(self.clip_epsilon > 0.0 && self.clip_epsilon < 1.0) {
            return Err(GrpoError::InvalidConfig(
                "clip_epsilon must lie in (0, 1)".into(),
            ));
        }
        if self.kl_beta < 0.0 {
            return Err(GrpoError::InvalidConfig("kl_beta must be >= 0".into()));
        }
        if self.learning_rate <= 0.0 {
            return Err(GrpoError::InvalidConfig("learning_rate must be > 0".into()));
        }
        Ok(())
    }
}

/// Rewards of one sampled group together with their normalized advantages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageBatch<F> {
    pub rewards: Vec<F>,
    pub advantages: Vec<F>,
    pub group_mean: F,
    pub group_std: F,
}

/// Â_i = (R_i − μ_group) / ς_group with the population standard deviation.
/// Zero-variance groups yield all-zero advantages instead of dividing.
pub fn normalize_advantages<F: Scalar>(rewards: &[F]) -> Result<AdvantageBatch<F>, GrpoError> {
    if rewards.len() < 2 {
        return Err(GrpoError::GroupTooSmall(rewards.len()));
    }
    let n = F::from_usize(rewards.len()).unwrap();
    let mean = rewards.iter().fold(F::zero(), |a, &b| a + b) / n;
    // Exact-equality check so that identical rewards normalize to zero even
    // when accumulation rounding leaves a microscopic variance.
    let all_equal = rewards.windows(2).all(|w| w[0] == w[1]);
    let var = rewards
        .iter()
        .fold(F::zero(), |a, &b| a + (b - mean) * (b - mean))
        / n;
    let std = if all_equal { F::zero() } else { var.sqrt() };
    let advantages = if std > F::zero() {
        rewards.iter().map(|&r| (r - mean) / std).collect()
    } else {
        vec![F::zero(); rewards.len()]
    };
    Ok(AdvantageBatch {
        rewards: rewards.to_vec(),
        advantages,
        group_mean: mean,
        group_std: std,
    })
}

/// The clipped surrogate term min(r·Â, clip(r, 1−ε, 1+ε)·Â).
pub fn clipped_term<F: Scalar>(prob_ratio: F, advantage: F, epsilon: F) -> F {
    let clipped = prob_ratio
        .max(F::one() - epsilon)
        .min(F::one() + epsilon);
    (prob_ratio * advantage).min(clipped * advantage)
}

/// Per-step summary of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub step: usize,
    /// Mean ρ over every candidate sampled at this step.
    pub mean_rho: Real,
    /// Mean composite reward over the same samples.
    pub mean_reward: Real,
    /// Mean policy entropy across prompts (sampling distribution).
    pub entropy: Real,
    /// L2 norm of the full logit gradient (before the learning rate).
    pub grad_norm: Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub trajectory: Vec<TrajectoryStep>,
    /// Final policy after the last update.
    pub policy: SoftmaxPolicy,
    /// Frozen initial policy P0.
    pub reference: SoftmaxPolicy,
}

/// Runs the seeded simulator. Fully deterministic: identical pools,
/// configs, and seed produce a bit-identical trajectory.
pub fn simulate_training(
    pools: &[CandidatePool],
    reward_cfg: &LengthRewardConfig<Real>,
    weights: &RewardWeights<Real>,
    grpo: &GrpoConfig,
) -> Result<SimulationResult, GrpoError> {
    if pools.is_empty() {
        return Err(GrpoError::EmptyPools);
    }
    for p in pools {
        p.validate()?;
    }
    grpo.validate()?;
    reward_cfg.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(grpo.seed);
    let mut policy = SoftmaxPolicy::uniform(pools);
    let reference = policy.clone();
    let ref_probs: Vec<Vec<Real>> = (0..pools.len())
        .map(|i| reference.probabilities(i))
        .collect();
    let g = grpo.group_size;
    let mut trajectory = Vec::with_capacity(grpo.steps);

    for step in 0..grpo.steps {
        let mut rho_sum = 0.0;
        let mut reward_sum = 0.0;
        let mut entropy_sum = 0.0;
        let mut grad_sq = 0.0;
        let mut grads: Vec<Vec<Real>> = Vec::with_capacity(pools.len());

        for (pi, pool) in pools.iter().enumerate() {
            // π_old refreshes every step, so the sampling distribution is
            // the current policy and the importance ratio starts at 1.
            let probs = policy.probabilities(pi);
            entropy_sum += policy.entropy(pi);

            let mut chosen = Vec::with_capacity(g);
            let mut rewards = Vec::with_capacity(g);
            for _ in 0..g {
                let idx = sample_index(&probs, rng.random::<Real>());
                let cand = pool.candidates[idx];
                let breakdown = composite_reward_from_rho(
                    cand.rho,
                    pool.src_syllables,
                    cand.quality,
                    weights,
                    reward_cfg,
                )?;
                rho_sum += cand.rho;
                reward_sum += breakdown.composite;
                chosen.push(idx);
                rewards.push(breakdown.composite);
            }

            let batch = normalize_advantages(&rewards)?;
            let mut grad = vec![0.0; probs.len()];
            let inv_g = 1.0 / g as Real;
            for (&idx, &adv) in chosen.iter().zip(&batch.advantages) {
                if adv == 0.0 {
                    continue;
                }
                let ratio = 1.0; // on-policy refresh
                let clip_active = (adv > 0.0 && ratio > 1.0 + grpo.clip_epsilon)
                    || (adv < 0.0 && ratio < 1.0 - grpo.clip_epsilon);
                if clip_active {
                    continue;
                }
                // d ratio / d z_j = ratio · (1[j = idx] − π_j)
                for (j, gj) in grad.iter_mut().enumerate() {
                    let indicator = if j == idx { 1.0 } else { 0.0 };
                    *gj += inv_g * adv * ratio * (indicator - probs[j]);
                }
            }

            if grpo.kl_beta > 0.0 {
                let kl = kl_term(&policy, &reference, pi)?;
                for (j, gj) in grad.iter_mut().enumerate() {
                    let p = probs[j];
                    if p > 0.0 {
                        *gj -= grpo.kl_beta * p * ((p / ref_probs[pi][j]).ln() - kl);
                    }
                }
            }

            grad_sq += grad.iter().map(|x| x * x).sum::<Real>();
            grads.push(grad);
        }

        for (pi, grad) in grads.into_iter().enumerate() {
            for (z, gj) in policy.logits[pi].iter_mut().zip(grad) {
                *z += grpo.learning_rate * gj;
            }
        }

        let samples = (pools.len() * g) as Real;
        trajectory.push(TrajectoryStep {
            step,
            mean_rho: rho_sum / samples,
            mean_reward: reward_sum / samples,
            entropy: entropy_sum / pools.len() as Real,
            grad_norm: grad_sq.sqrt(),
        });
    }

    Ok(SimulationResult {
        trajectory,
        policy,
        reference,
    })
}

fn sample_index(probs: &[Real], u: Real) -> usize {
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// First step whose mean sampled ρ lies inside the closed interval.
pub fn steps_to_first_entry(
    trajectory: &[TrajectoryStep],
    lower: Real,
    upper: Real,
) -> Option<usize> {
    trajectory
        .iter()
        .position(|t| t.mean_rho >= lower && t.mean_rho <= upper)
}

/// Population variance of mean ρ from a step onward.
pub fn mean_rho_variance_after(trajectory: &[TrajectoryStep], from_step: usize) -> Real {
    let tail: Vec<Real> = trajectory
        .iter()
        .filter(|t| t.step >= from_step)
        .map(|t| t.mean_rho)
        .collect();
    if tail.is_empty() {
        return 0.0;
    }
    let n = tail.len() as Real;
    let mean = tail.iter().sum::<Real>() / n;
    tail.iter().map(|v| (v - mean).powi(2)).sum::<Real>() / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LanguageCode;
    use crate::reward::RatioBounds;

    fn simple_pool(id: &str, candidates: &[(Real, Real)]) -> CandidatePool {
        CandidatePool {
            prompt_id: id.to_string(),
            src_syllables: SyllableCount(20),
            candidates: candidates
                .iter()
                .map(|&(rho, quality)| Candidate { rho, quality })
                .collect(),
        }
    }

    fn static_cfg() -> LengthRewardConfig<Real> {
        LengthRewardConfig::static_bounds(RatioBounds::default_for(LanguageCode::En).unwrap())
    }

    #[test]
    fn advantages_reference_values() {
        let b = normalize_advantages(&[0.0, 1.0]).unwrap();
        assert_eq!(b.advantages, vec![-1.0, 1.0]);
        assert_eq!(b.group_mean, 0.5);
        assert_eq!(b.group_std, 0.5);

        let b = normalize_advantages(&[0.7, 0.7, 0.7, 0.7]).unwrap();
        assert_eq!(b.advantages, vec![0.0; 4]);
        assert_eq!(b.group_std, 0.0);

        let b = normalize_advantages(&[1.0, 2.0, 3.0]).unwrap();
        let unit = (1.5f64).sqrt(); // 1 / population std, with std = sqrt(2/3)
        for (got, want) in b.advantages.iter().zip([-unit, 0.0, unit]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(matches!(
            normalize_advantages(&[1.0]),
            Err(GrpoError::GroupTooSmall(1))
        ));
    }

    #[test]
    fn clipped_term_reference_values() {
        assert_eq!(clipped_term(1.5, 1.0, 0.2), 1.2);
        assert_eq!(clipped_term(0.5, -1.0, 0.2), -0.8);
        for a in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            assert_eq!(clipped_term(1.0, a, 0.2), a);
        }
    }

    #[test]
    fn kl_reference_values() {
        let pools = vec![simple_pool("p", &[(0.85, 0.9), (1.2, 0.8)])];
        let reference = SoftmaxPolicy::uniform(&pools);
        let mut moved = reference.clone();
        // logits ln(0.9)/ln(0.1) give probabilities (0.9, 0.1)
        moved.logits[0] = vec![(0.9f64).ln(), (0.1f64).ln()];
        let kl = kl_term(&moved, &reference, 0).unwrap();
        let want = 0.9 * (1.8f64).ln() + 0.1 * (0.2f64).ln();
        assert!((kl - want).abs() < 1e-12);
        assert_eq!(kl_term(&reference, &reference, 0).unwrap(), 0.0);
    }

    #[test]
    fn support_mismatch_is_typed() {
        let a = SoftmaxPolicy { logits: vec![vec![0.0, 0.0]] };
        let b = SoftmaxPolicy { logits: vec![vec![0.0, 0.0, 0.0]] };
        assert!(matches!(
            kl_term(&a, &b, 0),
            Err(GrpoError::SupportMismatch(2, 3))
        ));
    }

    #[test]
    fn identical_rewards_leave_logits_unchanged() {
        // same (rho, quality) for every candidate -> zero advantages
        let pools = vec![simple_pool("p", &[(0.85, 0.7), (0.85, 0.7), (0.85, 0.7)])];
        let grpo = GrpoConfig {
            steps: 50,
            seed: 7,
            ..GrpoConfig::default()
        };
        let out =
            simulate_training(&pools, &static_cfg(), &RewardWeights::default(), &grpo).unwrap();
        assert_eq!(out.policy.logits(0), &[0.0, 0.0, 0.0]);
        assert!(out.trajectory.iter().all(|t| t.grad_norm == 0.0));
    }

    #[test]
    fn simulation_is_bit_deterministic() {
        let pools = vec![
            simple_pool("a", &[(0.6, 0.5), (0.85, 0.9), (1.3, 0.7)]),
            simple_pool("b", &[(0.82, 0.8), (1.0, 0.6), (1.5, 0.4)]),
        ];
        let grpo = GrpoConfig {
            steps: 100,
            seed: 42,
            ..GrpoConfig::default()
        };
        let a =
            simulate_training(&pools, &static_cfg(), &RewardWeights::default(), &grpo).unwrap();
        let b =
            simulate_training(&pools, &static_cfg(), &RewardWeights::default(), &grpo).unwrap();
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.policy, b.policy);
    }

    #[test]
    fn strong_beta_anchors_to_reference() {
        let pools = vec![simple_pool("p", &[(0.85, 1.0), (1.4, 0.0)])];
        let grpo = GrpoConfig {
            kl_beta: 10.0,
            steps: 300,
            seed: 11,
            ..GrpoConfig::default()
        };
        let out =
            simulate_training(&pools, &static_cfg(), &RewardWeights::default(), &grpo).unwrap();
        let tv = out.policy.total_variation(&out.reference, 0).unwrap();
        assert!(tv < 0.05, "total variation {tv} too large under beta=10");
    }

    #[test]
    fn rewarded_candidate_dominates() {
        let pools = vec![simple_pool("p", &[(0.85, 0.9), (1.6, 0.2)])];
        let grpo = GrpoConfig {
            steps: 300,
            seed: 5,
            ..GrpoConfig::default()
        };
        let out =
            simulate_training(&pools, &static_cfg(), &RewardWeights::default(), &grpo).unwrap();
        let probs = out.policy.probabilities(0);
        assert!(probs[0] > 0.95, "in-bounds candidate should dominate: {probs:?}");
    }

    #[test]
    fn pool_validation() {
        let p = simple_pool("x", &[(0.8, 0.5)]);
        assert!(matches!(p.validate(), Err(GrpoError::TooFewCandidates { .. })));
        let p = simple_pool("x", &[(0.8, 0.5), (-0.1, 0.5)]);
        assert!(matches!(p.validate(), Err(GrpoError::InvalidCandidate { .. })));
        let p = simple_pool("x", &[(0.8, 0.5), (0.9, 1.5)]);
        assert!(matches!(p.validate(), Err(GrpoError::InvalidCandidate { .. })));
        assert!(matches!(
            simulate_training(
                &[],
                &static_cfg(),
                &RewardWeights::default(),
                &GrpoConfig::default()
            ),
            Err(GrpoError::EmptyPools)
        ));
    }
}
