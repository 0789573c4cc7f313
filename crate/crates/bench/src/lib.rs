//! Deterministic synthetic inputs shared by the criterion benches.
//!
//! Benchmarks need inputs that are cheap to regenerate, stable across runs,
//! and shaped like the archives the pipeline targets: a few hundred labeled
//! records, each a sinusoid family plus noise, at dyadic-ish lengths.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use wavefeat_core::TimeSeriesDataset;

/// A single noisy sinusoid of length `n`, reproducible from `seed`.
pub fn synthetic_signal(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: f64 = rng.random_range(0.5..3.0);
    (0..n)
        .map(|t| {
            let phase = t as f64 / n as f64 * std::f64::consts::TAU;
            (base * phase).sin() + rng.random_range(-0.25..0.25)
        })
        .collect()
}

/// A labeled dataset of `classes` sinusoid families, `per_class` records
/// each, all of length `n`. Class c oscillates at frequency c + 1 so the
/// classes are separable but not trivially so once noise is added.
pub fn synthetic_dataset(per_class: usize, classes: usize, n: usize, seed: u64) -> TimeSeriesDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(per_class * classes);
    for c in 0..classes {
        let freq = (c + 1) as f64;
        for _ in 0..per_class {
            let jitter: f64 = rng.random_range(-0.1..0.1);
            let series: Vec<f64> = (0..n)
                .map(|t| {
                    let phase = t as f64 / n as f64 * std::f64::consts::TAU;
                    ((freq + jitter) * phase).sin() + rng.random_range(-0.3..0.3)
                })
                .collect();
            rows.push((format!("c{c}"), series));
        }
    }
    TimeSeriesDataset::from_rows(rows).expect("synthetic rows are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_is_deterministic_and_sized() {
        let a = synthetic_signal(256, 7);
        let b = synthetic_signal(256, 7);
        assert_eq!(a.len(), 256);
        assert_eq!(a, b);
        assert_ne!(a, synthetic_signal(256, 8));
    }

    #[test]
    fn dataset_has_expected_shape() {
        let d = synthetic_dataset(10, 3, 128, 1);
        assert_eq!(d.k(), 30);
        assert_eq!(d.n(), 128);
        assert_eq!(d.class_domain().len(), 3);
    }
}
