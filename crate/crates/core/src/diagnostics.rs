//! Per-sample and corpus-level expansion ratios: forward, backward, and
//! roundtrip, plus the verbosity-bias report.
//!
//! The roundtrip ratio compares the back-translation's syllable count to the
//! original source within the same language, so values above 1.0 indicate
//! model-induced inflation independent of linguistic density.

use crate::scalar::Scalar;
use crate::syllable::SyllableCount;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("sample has no back-translation syllable count")]
    MissingBackTranslation,
    #[error("corpus report requires at least one sample")]
    EmptyCorpus,
}

/// Syllable counts for one (source, translation, optional back-translation)
/// triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioSample {
    pub src_syllables: SyllableCount,
    pub tgt_syllables: SyllableCount,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bt_syllables: Option<SyllableCount>,
}

impl RatioSample {
    pub fn new(src: u32, tgt: u32, bt: Option<u32>) -> Self {
        RatioSample {
            src_syllables: SyllableCount(src),
            tgt_syllables: SyllableCount(tgt),
            bt_syllables: bt.map(SyllableCount),
        }
    }
}

/// ρ(x, y) = σ(y) / max(σ(x), 1).
pub fn syllable_ratio<F: Scalar>(src: SyllableCount, tgt: SyllableCount) -> F {
    let denom = src.value().max(1);
    F::from_u32(tgt.value()).unwrap() / F::from_u32(denom).unwrap()
}

/// Forward expansion ratio σ(y)/max(σ(x), 1).
pub fn forward_ratio<F: Scalar>(sample: &RatioSample) -> F {
    syllable_ratio(sample.src_syllables, sample.tgt_syllables)
}

/// Backward expansion ratio σ(x̂)/max(σ(y), 1).
pub fn backward_ratio<F: Scalar>(sample: &RatioSample) -> Result<F, DiagnosticsError> {
    let bt = sample
        .bt_syllables
        .ok_or(DiagnosticsError::MissingBackTranslation)?;
    Ok(syllable_ratio(sample.tgt_syllables, bt))
}

/// Roundtrip expansion ratio σ(x̂)/max(σ(x), 1), computed directly rather
/// than as the product of the two factors so that σ(y) = 0 is harmless.
pub fn roundtrip_ratio<F: Scalar>(sample: &RatioSample) -> Result<F, DiagnosticsError> {
    let bt = sample
        .bt_syllables
        .ok_or(DiagnosticsError::MissingBackTranslation)?;
    Ok(syllable_ratio(sample.src_syllables, bt))
}

/// Mean, population standard deviation, and median of one ratio metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct MetricStats {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

fn metric_stats(values: &[f64]) -> MetricStats {
    if values.is_empty() {
        return MetricStats::default();
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    MetricStats {
        mean,
        std: var.sqrt(),
        median,
    }
}

/// Corpus-level expansion report. Backward and roundtrip statistics cover
/// only the samples that carry a back-translation count (`n_rtp` of them).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub fwd: MetricStats,
    pub bwd: MetricStats,
    pub rtp: MetricStats,
    /// Fraction of roundtrip-eligible samples with ρ_rtp > 1.
    pub frac_rtp_gt_one: f64,
    /// Total number of samples.
    pub n: usize,
    /// Samples with a back-translation count.
    pub n_rtp: usize,
}

/// Aggregates expansion statistics over a non-empty sample set.
pub fn corpus_report(samples: &[RatioSample]) -> Result<CorpusReport, DiagnosticsError> {
    if samples.is_empty() {
        return Err(DiagnosticsError::EmptyCorpus);
    }
    let fwd: Vec<f64> = samples.iter().map(forward_ratio).collect();
    let mut bwd = Vec::new();
    let mut rtp = Vec::new();
    for s in samples {
        if s.bt_syllables.is_some() {
            bwd.push(backward_ratio(s).unwrap());
            rtp.push(roundtrip_ratio(s).unwrap());
        }
    }
    let gt_one = rtp.iter().filter(|&&r| r > 1.0).count();
    let frac = if rtp.is_empty() {
        0.0
    } else {
        gt_one as f64 / rtp.len() as f64
    };
    Ok(CorpusReport {
        fwd: metric_stats(&fwd),
        bwd: metric_stats(&bwd),
        rtp: metric_stats(&rtp),
        frac_rtp_gt_one: frac,
        n: samples.len(),
        n_rtp: rtp.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_floors_denominator() {
        assert_eq!(syllable_ratio::<f64>(SyllableCount(0), SyllableCount(5)), 5.0);
        assert_eq!(syllable_ratio::<f64>(SyllableCount(12), SyllableCount(12)), 1.0);
        let r: f64 = syllable_ratio(SyllableCount(12), SyllableCount(10));
        assert!((r - 10.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_examples() {
        let perfect = RatioSample::new(12, 20, Some(12));
        assert_eq!(roundtrip_ratio::<f64>(&perfect).unwrap(), 1.0);
        let up = RatioSample::new(10, 15, Some(13));
        assert!((roundtrip_ratio::<f64>(&up).unwrap() - 1.3).abs() < 1e-12);
        let down = RatioSample::new(10, 15, Some(8));
        assert!((roundtrip_ratio::<f64>(&down).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn missing_back_translation_is_typed() {
        let s = RatioSample::new(10, 15, None);
        assert_eq!(
            roundtrip_ratio::<f64>(&s).unwrap_err(),
            DiagnosticsError::MissingBackTranslation
        );
        assert_eq!(
            backward_ratio::<f64>(&s).unwrap_err(),
            DiagnosticsError::MissingBackTranslation
        );
    }

    #[test]
    fn report_identity_roundtrips() {
        let samples: Vec<RatioSample> =
            (1..=8).map(|i| RatioSample::new(10 + i, 12, Some(10 + i))).collect();
        let rep = corpus_report(&samples).unwrap();
        assert_eq!(rep.rtp.mean, 1.0);
        assert_eq!(rep.frac_rtp_gt_one, 0.0);
        assert_eq!(rep.n, 8);
        assert_eq!(rep.n_rtp, 8);
    }

    #[test]
    fn report_mixed_and_degenerate() {
        let samples = vec![
            RatioSample::new(10, 12, Some(12)), // rtp 1.2
            RatioSample::new(10, 9, Some(8)),   // rtp 0.8
        ];
        let rep = corpus_report(&samples).unwrap();
        assert!((rep.rtp.mean - 1.0).abs() < 1e-12);
        assert_eq!(rep.frac_rtp_gt_one, 0.5);

        let single = corpus_report(&[RatioSample::new(10, 12, Some(11))]).unwrap();
        assert_eq!(single.rtp.std, 0.0);

        assert_eq!(corpus_report(&[]).unwrap_err(), DiagnosticsError::EmptyCorpus);
    }

    #[test]
    fn bt_less_samples_only_feed_forward_stats() {
        let samples = vec![
            RatioSample::new(10, 12, Some(11)),
            RatioSample::new(10, 14, None),
        ];
        let rep = corpus_report(&samples).unwrap();
        assert_eq!(rep.n, 2);
        assert_eq!(rep.n_rtp, 1);
        assert!((rep.fwd.mean - (1.2 + 1.4) / 2.0).abs() < 1e-12);
        assert!((rep.rtp.mean - 1.1).abs() < 1e-12);
    }
}
