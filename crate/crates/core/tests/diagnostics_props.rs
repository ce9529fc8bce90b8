//! Property tests for the expansion-ratio algebra.

use homura_core::diagnostics::{
    backward_ratio, corpus_report, forward_ratio, roundtrip_ratio, RatioSample,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn roundtrip_factorizes_when_target_nonzero(
        src in 0u32..500,
        tgt in 1u32..500,
        bt in 0u32..500,
    ) {
        let s = RatioSample::new(src, tgt, Some(bt));
        let fwd: f64 = forward_ratio(&s);
        let bwd: f64 = backward_ratio(&s).unwrap();
        let rtp: f64 = roundtrip_ratio(&s).unwrap();
        let rel = if rtp == 0.0 { (fwd * bwd).abs() } else { ((fwd * bwd) - rtp).abs() / rtp };
        prop_assert!(rel < 1e-12, "fwd*bwd {} vs rtp {}", fwd * bwd, rtp);
    }

    #[test]
    fn ratios_are_scale_invariant(
        src in 1u32..200,
        tgt in 1u32..200,
        bt in 1u32..200,
        k in 2u32..5,
    ) {
        let a = RatioSample::new(src, tgt, Some(bt));
        let b = RatioSample::new(src * k, tgt * k, Some(bt * k));
        let (fa, fb): (f64, f64) = (forward_ratio(&a), forward_ratio(&b));
        prop_assert!((fa - fb).abs() < 1e-12);
        let (ra, rb) = (
            roundtrip_ratio::<f64>(&a).unwrap(),
            roundtrip_ratio::<f64>(&b).unwrap(),
        );
        prop_assert!((ra - rb).abs() < 1e-12);
        let (ba, bb) = (
            backward_ratio::<f64>(&a).unwrap(),
            backward_ratio::<f64>(&b).unwrap(),
        );
        prop_assert!((ba - bb).abs() < 1e-12);
    }

    #[test]
    fn report_fraction_is_exact(
        samples in proptest::collection::vec((0u32..60, 0u32..60, proptest::option::of(0u32..60)), 1..50)
    ) {
        let samples: Vec<RatioSample> =
            samples.into_iter().map(|(s, t, b)| RatioSample::new(s, t, b)).collect();
        let report = corpus_report(&samples).unwrap();
        let eligible: Vec<&RatioSample> =
            samples.iter().filter(|s| s.bt_syllables.is_some()).collect();
        prop_assert_eq!(report.n_rtp, eligible.len());
        let gt: usize = eligible
            .iter()
            .filter(|s| roundtrip_ratio::<f64>(s).unwrap() > 1.0)
            .count();
        let want = if eligible.is_empty() { 0.0 } else { gt as f64 / eligible.len() as f64 };
        prop_assert_eq!(report.frac_rtp_gt_one, want);
    }
}
