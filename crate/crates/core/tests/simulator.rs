//! Simulator behavior on the frozen candidate-pool fixtures: convergence,
//! golden-trajectory reproducibility, the dynamic-vs-static ablation, and
//! KL-anchoring monotonicity.

use homura_core::grpo::{
    kl_term, mean_rho_variance_after, simulate_training, steps_to_first_entry, CandidatePool,
    GrpoConfig, TrajectoryStep,
};
use homura_core::lang::LanguageCode;
use homura_core::reward::{DynamicBoundsConfig, LengthRewardConfig, RatioBounds, RewardWeights};
use std::path::PathBuf;

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(file)
}

fn load_pools(file: &str) -> Vec<CandidatePool> {
    serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap()
}

fn en_bounds() -> RatioBounds<f64> {
    RatioBounds::default_for(LanguageCode::En).unwrap()
}

fn dynamic_cfg() -> LengthRewardConfig<f64> {
    LengthRewardConfig::dynamic(en_bounds(), DynamicBoundsConfig::with_corpus_mean(20.0).unwrap())
}

fn static_cfg() -> LengthRewardConfig<f64> {
    LengthRewardConfig::static_bounds(en_bounds())
}

#[test]
fn seed_42_converges_into_the_target_interval() {
    let pools = load_pools("pools_convergence.json");
    let grpo = GrpoConfig { seed: 42, steps: 500, ..GrpoConfig::default() };
    let out = simulate_training(&pools, &dynamic_cfg(), &RewardWeights::default(), &grpo).unwrap();
    let tail: Vec<f64> = out.trajectory[400..].iter().map(|t| t.mean_rho).collect();
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    assert!(
        (0.8..=0.9).contains(&mean),
        "final-100 mean rho {mean} outside [0.8, 0.9]"
    );
}

#[test]
fn trajectory_matches_golden_file() {
    let pools = load_pools("pools_convergence.json");
    let grpo = GrpoConfig { seed: 42, steps: 500, ..GrpoConfig::default() };
    let out = simulate_training(&pools, &dynamic_cfg(), &RewardWeights::default(), &grpo).unwrap();
    let golden: Vec<TrajectoryStep> = std::fs::read_to_string(data("golden_trajectory.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(out.trajectory.len(), golden.len());
    for (got, want) in out.trajectory.iter().zip(&golden) {
        assert_eq!(got, want, "divergence at step {}", want.step);
    }
}

#[test]
fn dynamic_bounds_enter_sooner_and_wobble_no_more_than_static() {
    let pools = load_pools("pools_ablation.json");
    let weights = RewardWeights::default();
    let steps = 500usize;
    let mut dyn_entries = Vec::new();
    let mut sta_entries = Vec::new();
    let mut dyn_vars = Vec::new();
    let mut sta_vars = Vec::new();
    for seed in 0..20u64 {
        let grpo = GrpoConfig { seed, steps, ..GrpoConfig::default() };
        for (cfg, entries, vars) in [
            (dynamic_cfg(), &mut dyn_entries, &mut dyn_vars),
            (static_cfg(), &mut sta_entries, &mut sta_vars),
        ] {
            let out = simulate_training(&pools, &cfg, &weights, &grpo).unwrap();
            let entry = steps_to_first_entry(&out.trajectory, 0.8, 0.9);
            entries.push(entry.unwrap_or(steps));
            if let Some(e) = entry {
                vars.push(mean_rho_variance_after(&out.trajectory, e));
            }
        }
    }
    let mean_usize = |v: &[usize]| v.iter().sum::<usize>() as f64 / v.len() as f64;
    let mean_f = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (d_entry, s_entry) = (mean_usize(&dyn_entries), mean_usize(&sta_entries));
    assert!(
        d_entry < s_entry,
        "dynamic mean entry {d_entry} should be strictly below static {s_entry}"
    );
    assert_eq!(dyn_vars.len(), 20, "dynamic runs should always enter");
    let (d_var, s_var) = (mean_f(&dyn_vars), mean_f(&sta_vars));
    assert!(
        d_var <= s_var,
        "dynamic post-entry variance {d_var} should not exceed static {s_var}"
    );
}

#[test]
fn final_kl_is_non_increasing_in_beta() {
    let pools = load_pools("pools_convergence.json");
    let weights = RewardWeights::default();
    let mut means = Vec::new();
    for beta in [0.0, 0.01, 0.05, 1.0, 10.0] {
        let mut total = 0.0;
        for seed in 100..110u64 {
            let grpo = GrpoConfig { seed, steps: 500, kl_beta: beta, ..GrpoConfig::default() };
            let out = simulate_training(&pools, &static_cfg(), &weights, &grpo).unwrap();
            let kl: f64 = (0..pools.len())
                .map(|i| kl_term(&out.policy, &out.reference, i).unwrap())
                .sum::<f64>()
                / pools.len() as f64;
            total += kl;
        }
        means.push(total / 10.0);
    }
    for pair in means.windows(2) {
        assert!(
            pair[1] <= pair[0],
            "mean final KL must be non-increasing in beta: {means:?}"
        );
    }
}
