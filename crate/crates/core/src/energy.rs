//! Normalized partial energy sequences (NPES) and energy-concentration
//! ranking of candidate wavelet filters.
//!
//! The NPES of a vector reports, for each `M`, the fraction of total squared
//! magnitude carried by its `M` largest-magnitude entries. A transform that
//! concentrates a signal class's energy into few coefficients reaches any
//! energy threshold at a smaller `M`; filters are ranked by the mean `M` at
//! which sampled class exemplars reach the threshold (`M95` at the default
//! 0.95).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ingest::TimeSeriesDataset;
use crate::wavelet::{dwt, filter_bank, WaveletFilter};

/// Dedicated RNG stream for exemplar sampling, so the same base seed can be
/// shared with the split and forest machinery without sequence overlap.
const EXEMPLAR_STREAM: u64 = 1;

/// Cumulative energy fractions of a vector's magnitude-sorted entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NpesCurve {
    values: Vec<f64>,
    source: String,
    class_label: Option<String>,
}

impl NpesCurve {
    /// `values()[m-1]` is the energy fraction in the `m` largest terms;
    /// monotone non-decreasing with final value exactly 1.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// What the curve describes: `raw` or `filter@level`.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn class_label(&self) -> Option<&str> {
        self.class_label.as_deref()
    }

    pub fn with_class_label(mut self, label: impl Into<String>) -> Self {
        self.class_label = Some(label.into());
        self
    }

    /// Smallest `M` whose cumulative fraction reaches `threshold`
    /// (`M95` when `threshold` is 0.95). Always in `1..=n` for thresholds
    /// up to 1.
    pub fn m_at(&self, threshold: f64) -> usize {
        self.values
            .iter()
            .position(|&c| c >= threshold)
            .map(|i| i + 1)
            .unwrap_or(self.values.len())
    }

    /// CSV form `M,C` for external plotting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "M,C")?;
        for (i, c) in self.values.iter().enumerate() {
            writeln!(w, "{},{c}", i + 1)?;
        }
        Ok(())
    }
}

/// NPES of a raw vector.
///
/// # Errors
/// `ZeroEnergy` if every entry is zero (the fractions would be undefined).
pub fn npes(x: &[f64]) -> Result<NpesCurve> {
    npes_with_source(x, "raw".to_string())
}

fn npes_with_source(x: &[f64], source: String) -> Result<NpesCurve> {
    let mut squares: Vec<f64> = x.iter().map(|v| v * v).collect();
    squares.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut prefix = Vec::with_capacity(squares.len());
    let mut acc = 0.0;
    for s in &squares {
        acc += s;
        prefix.push(acc);
    }
    let total = acc;
    if total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    // Dividing by the identically-accumulated total makes the final value
    // exactly 1.0 and keeps the sequence monotone.
    let values = prefix.into_iter().map(|p| p / total).collect();
    Ok(NpesCurve {
        values,
        source,
        class_label: None,
    })
}

/// NPES of the full wavelet transform of `x` (details, smooth, and extras
/// together — the extras carry real signal energy).
pub fn npes_of_transform(
    x: &[f64],
    f: &WaveletFilter,
    j0: usize,
) -> Result<NpesCurve> {
    let d = dwt(x, f, j0)?;
    npes_with_source(
        &d.all_coefficients(),
        format!("{}@{}", f.name(), j0),
    )
}

/// One ranked candidate: mean `M` at the threshold (lower is better) plus
/// the per-exemplar values grouped by class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub filter: String,
    pub score: f64,
    pub per_class_m95: Vec<ClassM95>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassM95 {
    pub class: String,
    pub m95: Vec<usize>,
}

/// Candidates ordered best (lowest score) first; ties keep candidate-list
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterRanking {
    pub entries: Vec<RankEntry>,
    pub criterion: String,
}

/// Draw up to `per_class` record indices from every class with the seeded
/// generator (its own substream). Sorted within each class; deterministic,
/// and shared by [`rank_filters`], so curve exports and rankings made with
/// the same seed look at the same signals.
///
/// # Errors
/// `InvalidParameter` for `per_class = 0`, `EmptyClass` when a class has no
/// records.
pub fn sample_exemplars(
    d: &TimeSeriesDataset,
    per_class: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if per_class == 0 {
        return Err(Error::InvalidParameter(
            "exemplars_per_class must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EXEMPLAR_STREAM);
    let mut out = Vec::with_capacity(d.class_domain().len());
    for (class, mut indices) in d.class_indices().into_iter().enumerate() {
        if indices.is_empty() {
            return Err(Error::EmptyClass {
                label: d.class_domain()[class].clone(),
            });
        }
        indices.shuffle(&mut rng);
        indices.truncate(per_class);
        indices.sort_unstable();
        out.push(indices);
    }
    Ok(out)
}

/// Rank candidate filters by how few transform coefficients class exemplars
/// need to reach `threshold` of their energy.
///
/// For every class, `exemplars_per_class` records (fewer if the class is
/// smaller) are drawn with the seeded generator; the same exemplars are used
/// for every candidate. Score = mean `M` across all exemplars.
pub fn rank_filters(
    d: &TimeSeriesDataset,
    candidates: &[String],
    j0: usize,
    exemplars_per_class: usize,
    threshold: f64,
    seed: u64,
) -> Result<FilterRanking> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )));
    }
    if exemplars_per_class == 0 {
        return Err(Error::InvalidParameter(
            "exemplars_per_class must be at least 1".into(),
        ));
    }
    let filters: Vec<WaveletFilter> = candidates
        .iter()
        .map(|name| filter_bank(name))
        .collect::<Result<_>>()?;

    let mut exemplars: Vec<(usize, usize)> = Vec::new(); // (class, record)
    for (class, indices) in sample_exemplars(d, exemplars_per_class, seed)?
        .into_iter()
        .enumerate()
    {
        exemplars.extend(indices.into_iter().map(|i| (class, i)));
    }

    let mut entries = Vec::with_capacity(filters.len());
    for f in &filters {
        let m_values: Vec<usize> = exemplars
            .par_iter()
            .map(|&(_, rec)| {
                npes_of_transform(d.records()[rec].values(), f, j0)
                    .map(|curve| curve.m_at(threshold))
            })
            .collect::<Result<_>>()?;
        let score =
            m_values.iter().sum::<usize>() as f64 / m_values.len() as f64;
        let per_class_m95 = d
            .class_domain()
            .iter()
            .enumerate()
            .map(|(class, name)| ClassM95 {
                class: name.clone(),
                m95: exemplars
                    .iter()
                    .zip(&m_values)
                    .filter(|((c, _), _)| *c == class)
                    .map(|(_, &m)| m)
                    .collect(),
            })
            .collect();
        entries.push(RankEntry {
            filter: f.name().to_string(),
            score,
            per_class_m95,
        });
    }
    // Stable sort: equal scores keep candidate-list order.
    entries.sort_by(|a, b| a.score.total_cmp(&b.score));
    Ok(FilterRanking {
        entries,
        criterion: format!(
            "mean-m@{threshold};j0={j0};exemplars={exemplars_per_class};seed={seed}"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::TimeSeriesDataset;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_energy_in_one_term() {
        let c = npes(&[3.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.values(), [1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn equal_magnitudes_give_linear_curve() {
        let c = npes(&[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(c.values(), [0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn two_term_example() {
        let c = npes(&[2.0, 1.0]).unwrap();
        assert_eq!(c.values(), [0.8, 1.0]);
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(npes(&[0.0, 0.0]), Err(Error::ZeroEnergy)));
    }

    #[test]
    fn curve_is_monotone_with_terminal_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x: Vec<f64> =
                (0..37).map(|_| rng.random_range(-5.0..5.0)).collect();
            let c = npes(&x).unwrap();
            let v = c.values();
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(*v.last().unwrap(), 1.0);
            let max_sq = x.iter().map(|t| t * t).fold(0.0f64, f64::max);
            let total: f64 = x.iter().map(|t| t * t).sum();
            assert!((v[0] - max_sq / total).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_invariant_exactly_scale_invariant_closely() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut shuffled = x.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(npes(&x).unwrap().values(), npes(&shuffled).unwrap().values());

        let scaled: Vec<f64> = x.iter().map(|v| v * -17.25).collect();
        for (a, b) in npes(&x)
            .unwrap()
            .values()
            .iter()
            .zip(npes(&scaled).unwrap().values())
        {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_signal_transform_curve() {
        let f = filter_bank("haar").unwrap();
        let c = npes_of_transform(&[1.0, 1.0, 1.0, 1.0], &f, 1).unwrap();
        let v = c.values();
        assert!((v[0] - 0.5).abs() < 1e-12);
        for &t in &v[1..] {
            assert!((t - 1.0).abs() < 1e-12);
        }
        assert_eq!(c.source(), "haar@1");
    }

    #[test]
    fn m_at_threshold() {
        let c = npes(&[2.0, 1.0]).unwrap(); // curve (0.8, 1.0)
        assert_eq!(c.m_at(0.75), 1);
        assert_eq!(c.m_at(0.85), 2);
        assert_eq!(c.m_at(0.95), 2);
    }

    #[test]
    fn transform_concentrates_smooth_signal_energy() {
        let x: Vec<f64> = (0..64)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 / 64.0).sin())
            .collect();
        let f = filter_bank("la16").unwrap();
        let raw = npes(&x).unwrap();
        let transformed = npes_of_transform(&x, &f, 2).unwrap();
        for (t, r) in transformed.values().iter().zip(raw.values()) {
            assert!(t >= r, "transform curve must dominate: {t} < {r}");
        }
        assert!(transformed.m_at(0.95) < raw.m_at(0.95));
    }

    fn sine_dataset() -> TimeSeriesDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<(String, Vec<f64>)> = (0..20)
            .map(|i| {
                let freq = if i % 2 == 0 { 1.0 } else { 3.0 };
                let phase: f64 = rng.random_range(0.0..1.0);
                let values = (0..64)
                    .map(|t| {
                        (2.0 * std::f64::consts::PI
                            * (freq * t as f64 / 64.0 + phase))
                            .sin()
                    })
                    .collect();
                (format!("f{freq}"), values)
            })
            .collect();
        TimeSeriesDataset::from_rows(rows).unwrap()
    }

    #[test]
    fn single_candidate_ranking() {
        let d = sine_dataset();
        let r = rank_filters(&d, &["haar".into()], 1, 3, 0.95, 9).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].filter, "haar");
        assert_eq!(r.entries[0].per_class_m95.len(), 2);
    }

    #[test]
    fn exact_ties_keep_candidate_order() {
        // Constant signals: every orthonormal filter sends all energy to the
        // smooth block in equal-magnitude coefficients, so the scores tie
        // exactly and the candidate order must survive.
        let rows: Vec<(String, Vec<f64>)> = (0..6)
            .map(|i| (format!("c{}", i % 2), vec![1.0 + i as f64; 32]))
            .collect();
        let d = TimeSeriesDataset::from_rows(rows).unwrap();
        let candidates: Vec<String> =
            ["la8", "d4", "haar"].iter().map(|s| s.to_string()).collect();
        let r = rank_filters(&d, &candidates, 1, 2, 0.95, 1).unwrap();
        let order: Vec<&str> =
            r.entries.iter().map(|e| e.filter.as_str()).collect();
        assert_eq!(order, ["la8", "d4", "haar"]);
        assert_eq!(r.entries[0].score, r.entries[2].score);
    }

    #[test]
    fn ranking_is_seed_deterministic() {
        let d = sine_dataset();
        let candidates: Vec<String> =
            ["d4", "la16"].iter().map(|s| s.to_string()).collect();
        let a = rank_filters(&d, &candidates, 2, 4, 0.95, 7).unwrap();
        let b = rank_filters(&d, &candidates, 2, 4, 0.95, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn curve_csv_has_one_row_per_coefficient() {
        let c = npes(&[2.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "M,C\n1,0.8\n2,1\n");
    }
}
