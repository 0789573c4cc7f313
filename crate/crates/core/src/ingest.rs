//! Reading labeled time-series files, combining datasets, descriptive
//! statistics, and the train/test split protocols used by the evaluator.
//!
//! Expected file shape: one record per line, class label first, then `n`
//! numeric samples, tab- or comma-separated (whitespace accepted as a
//! fallback for older archive exports). Labels are opaque tokens; they are
//! interned against a lexicographically sorted class domain so that every
//! downstream tie-break has a single canonical class order.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index into a dataset's sorted class domain. Ordering of ids follows the
/// lexicographic order of the label strings, which is the canonical class
/// order used by classifier tie-breaks.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct LabelId(pub usize);

/// One labeled series.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    label: LabelId,
    values: Vec<f64>,
}

impl Record {
    pub fn label(&self) -> LabelId {
        self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Field separator for [`TimeSeriesDataset::parse_ucr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Detect from the first data line: tab if present, else comma, else
    /// any whitespace.
    #[default]
    Auto,
    Tab,
    Comma,
    Whitespace,
}

impl Delimiter {
    fn resolve(self, first_line: &str) -> Delimiter {
        match self {
            Delimiter::Auto => {
                if first_line.contains('\t') {
                    Delimiter::Tab
                } else if first_line.contains(',') {
                    Delimiter::Comma
                } else {
                    Delimiter::Whitespace
                }
            }
            other => other,
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Delimiter::Tab => line.split('\t').collect(),
            Delimiter::Comma => line.split(',').collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Auto => unreachable!("resolved before splitting"),
        }
    }
}

impl fmt::Display for Delimiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Delimiter::Auto => "auto",
            Delimiter::Tab => "tab",
            Delimiter::Comma => "comma",
            Delimiter::Whitespace => "whitespace",
        };
        f.write_str(s)
    }
}

/// A set of labeled fixed-length series with a canonical class domain.
///
/// Invariants: every record has exactly `n` finite values; `class_domain` is
/// the sorted set of labels present (parsing guarantees at least one record;
/// an empty dataset can only be built explicitly via [`Self::from_rows`],
/// which exists so that merging with an empty set is an identity).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesDataset {
    records: Vec<Record>,
    n: usize,
    class_domain: Vec<String>,
}

impl TimeSeriesDataset {
    /// Build a dataset from `(label, values)` rows, validating uniform
    /// length and finiteness. Record order is preserved.
    pub fn from_rows<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        let rows: Vec<(String, Vec<f64>)> = rows.into_iter().collect();
        let n = rows.first().map_or(0, |(_, v)| v.len());
        for (i, (_, values)) in rows.iter().enumerate() {
            if values.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: values.len(),
                });
            }
            if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "record {i}: value {bad} is not finite"
                )));
            }
        }
        let class_domain: Vec<String> = rows
            .iter()
            .map(|(l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let records = rows
            .into_iter()
            .map(|(label, values)| Record {
                label: LabelId(
                    class_domain
                        .binary_search(&label)
                        .expect("domain built from these labels"),
                ),
                values,
            })
            .collect();
        Ok(TimeSeriesDataset {
            records,
            n,
            class_domain,
        })
    }

    /// Parse a label-first text file. A leading header line written by
    /// [`Self::write_csv`] (first field literally `label`) is skipped, so
    /// parse → serialize → parse round-trips.
    pub fn parse_ucr(path: &Path, delimiter: Delimiter) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let reader = BufReader::new(file);
        let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
        let mut resolved: Option<Delimiter> = None;
        let mut n: Option<usize> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let delim = *resolved.get_or_insert_with(|| delimiter.resolve(line));
            let fields = delim.split(line);
            if rows.is_empty() && n.is_none() && fields[0] == "label" {
                continue; // canonical CSV header
            }
            if fields.len() < 2 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: format!(
                        "expected a label and at least one value, found {} field(s)",
                        fields.len()
                    ),
                });
            }
            let label = fields[0].to_string();
            let mut values = Vec::with_capacity(fields.len() - 1);
            for (j, tok) in fields[1..].iter().enumerate() {
                let v: f64 = tok.parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: format!("field {} ({tok:?}) is not numeric", j + 2),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: lineno,
                        message: format!("field {} ({tok:?}) is not finite", j + 2),
                    });
                }
                values.push(v);
            }
            match n {
                None => n = Some(values.len()),
                Some(expect) if expect != values.len() => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: lineno,
                        message: format!(
                            "row has {} values but earlier rows have {expect}",
                            values.len()
                        ),
                    });
                }
                Some(_) => {}
            }
            rows.push((label, values));
        }
        if rows.is_empty() {
            return Err(Error::EmptyFile {
                path: path.to_path_buf(),
            });
        }
        Self::from_rows(rows)
    }

    /// Concatenate two datasets of equal series length: records of `self`
    /// first, then `other`, with the class domains unioned. Merging with an
    /// empty dataset returns the other side unchanged.
    pub fn merge(&self, other: &TimeSeriesDataset) -> Result<TimeSeriesDataset> {
        if other.k() == 0 {
            return Ok(self.clone());
        }
        if self.k() == 0 {
            return Ok(other.clone());
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let rows = self.iter_rows().chain(other.iter_rows());
        Self::from_rows(rows.collect::<Vec<_>>())
    }

    fn iter_rows(&self) -> impl Iterator<Item = (String, Vec<f64>)> + '_ {
        self.records.iter().map(|r| {
            (
                self.class_domain[r.label.0].clone(),
                r.values.clone(),
            )
        })
    }

    /// Series length `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Record count `K`.
    pub fn k(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Sorted distinct labels; [`LabelId`] indexes into this.
    pub fn class_domain(&self) -> &[String] {
        &self.class_domain
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.class_domain[id.0]
    }

    /// Record counts per class, aligned with the class domain.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_domain.len()];
        for r in &self.records {
            counts[r.label.0] += 1;
        }
        counts
    }

    /// Record indices grouped by class, canonical class order, ascending
    /// within each class.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.class_domain.len()];
        for (i, r) in self.records.iter().enumerate() {
            groups[r.label.0].push(i);
        }
        groups
    }

    /// New dataset containing the given records (by index, in the given
    /// order), keeping the full class domain so label ids stay comparable
    /// across subsets.
    pub fn subset(&self, indices: &[usize]) -> TimeSeriesDataset {
        TimeSeriesDataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            n: self.n,
            class_domain: self.class_domain.clone(),
        }
    }

    /// Mean smoothness statistic per class (canonical order).
    pub fn per_class_smoothness(&self) -> Result<Vec<(String, f64)>> {
        let mut sums = vec![0.0f64; self.class_domain.len()];
        let counts = self.class_counts();
        for r in &self.records {
            sums[r.label.0] += smoothness(&r.values)?;
        }
        Ok(self
            .class_domain
            .iter()
            .zip(sums.iter().zip(&counts))
            .map(|(name, (&s, &c))| (name.clone(), if c == 0 { 0.0 } else { s / c as f64 }))
            .collect())
    }

    /// Write the canonical CSV form: header `label,v0,...,v{n-1}` then one
    /// row per record. Float formatting is shortest-round-trip, so parsing
    /// the output reproduces the dataset exactly.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "label")?;
        for i in 0..self.n {
            write!(w, ",v{i}")?;
        }
        writeln!(w)?;
        for r in &self.records {
            write!(w, "{}", self.class_domain[r.label.0])?;
            for v in &r.values {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Smoothness statistic of a series: sample standard deviation (denominator
/// `n-2`, as there are `n-1` first differences) of the differences
/// `x[i] - x[i+1]`. Lower values mean smoother series.
///
/// # Errors
/// `SeriesTooShort` when `x` has fewer than 3 samples.
pub fn smoothness(x: &[f64]) -> Result<f64> {
    if x.len() < 3 {
        return Err(Error::SeriesTooShort {
            n: x.len(),
            min: 3,
        });
    }
    let diffs: Vec<f64> = x.windows(2).map(|w| w[0] - w[1]).collect();
    let m = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / m;
    let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
    Ok((ss / (m - 1.0)).sqrt())
}

/// Train/test protocol.
#[derive(Debug, Clone)]
pub enum SplitSpec {
    /// Seeded k-fold cross-validation, stratified by default.
    KFold {
        k: usize,
        seed: u64,
        stratified: bool,
    },
    /// One seeded train/test split with the given train fraction.
    Percentage {
        train_fraction: f64,
        seed: u64,
        stratified: bool,
    },
    /// Externally provided train and test sets, passed through unchanged.
    Fixed {
        train: TimeSeriesDataset,
        test: TimeSeriesDataset,
    },
}

impl SplitSpec {
    /// Stable one-line description for reports and config hashing.
    pub fn descriptor(&self) -> String {
        match self {
            SplitSpec::KFold {
                k,
                seed,
                stratified,
            } => format!("cv:{k};seed={seed};stratified={stratified}"),
            SplitSpec::Percentage {
                train_fraction,
                seed,
                stratified,
            } => format!("split:{train_fraction};seed={seed};stratified={stratified}"),
            SplitSpec::Fixed { .. } => "fixed".to_string(),
        }
    }
}

/// Materialize a split protocol into (train, test) dataset pairs: `k` pairs
/// for k-fold, one pair otherwise. Splits are deterministic functions of the
/// seed; subsets keep the parent's record order and class domain.
pub fn make_splits(
    d: &TimeSeriesDataset,
    spec: &SplitSpec,
) -> Result<Vec<(TimeSeriesDataset, TimeSeriesDataset)>> {
    match spec {
        SplitSpec::KFold {
            k,
            seed,
            stratified,
        } => {
            let k = *k;
            if k < 2 {
                return Err(Error::InvalidSplit(format!(
                    "k-fold requires k >= 2, got {k}"
                )));
            }
            if d.k() < k {
                return Err(Error::InvalidSplit(format!(
                    "cannot make {k} folds from {} records",
                    d.k()
                )));
            }
            let folds = if *stratified {
                if let Some((label, count)) = d
                    .class_domain()
                    .iter()
                    .zip(d.class_counts())
                    .find(|(_, c)| *c < k)
                {
                    return Err(Error::ClassTooSmall {
                        label: label.clone(),
                        count,
                        k,
                    });
                }
                deal_into_folds(d.class_indices(), k, *seed)
            } else {
                deal_into_folds(vec![(0..d.k()).collect()], k, *seed)
            };
            Ok(folds
                .iter()
                .map(|test_idx| {
                    let train_idx: Vec<usize> = (0..d.k())
                        .filter(|i| !test_idx.contains(i))
                        .collect();
                    (d.subset(&train_idx), d.subset(test_idx))
                })
                .collect())
        }
        SplitSpec::Percentage {
            train_fraction,
            seed,
            stratified,
        } => {
            let f = *train_fraction;
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidSplit(format!(
                    "train fraction must lie in (0, 1), got {f}"
                )));
            }
            let groups = if *stratified {
                d.class_indices()
            } else {
                vec![(0..d.k()).collect()]
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut train_idx = Vec::new();
            let mut test_idx = Vec::new();
            for mut group in groups {
                group.shuffle(&mut rng);
                let t = (f * group.len() as f64).round() as usize;
                train_idx.extend_from_slice(&group[..t]);
                test_idx.extend_from_slice(&group[t..]);
            }
            train_idx.sort_unstable();
            test_idx.sort_unstable();
            Ok(vec![(d.subset(&train_idx), d.subset(&test_idx))])
        }
        SplitSpec::Fixed { train, test } => {
            if train.n() != test.n() {
                return Err(Error::LengthMismatch {
                    left: train.n(),
                    right: test.n(),
                });
            }
            // Align label ids across the pair by re-interning against the
            // union domain; the records themselves are untouched.
            let merged_domain: Vec<String> = train
                .class_domain()
                .iter()
                .chain(test.class_domain())
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let reintern = |src: &TimeSeriesDataset| TimeSeriesDataset {
                records: src
                    .records
                    .iter()
                    .map(|r| Record {
                        label: LabelId(
                            merged_domain
                                .binary_search(&src.class_domain[r.label.0])
                                .expect("union contains both domains"),
                        ),
                        values: r.values.clone(),
                    })
                    .collect(),
                n: src.n,
                class_domain: merged_domain.clone(),
            };
            Ok(vec![(reintern(train), reintern(test))])
        }
    }
}

/// Shuffle each group with the shared seeded generator, then deal records
/// into `k` folds with a cursor that continues across groups, so fold sizes
/// differ by at most one overall and per group.
fn deal_into_folds(groups: Vec<Vec<usize>>, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut cursor = 0usize;
    for mut group in groups {
        group.shuffle(&mut rng);
        for idx in group {
            folds[cursor].push(idx);
            cursor = (cursor + 1) % k;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    folds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(class_sizes: &[usize], n: usize) -> TimeSeriesDataset {
        let mut rows = Vec::new();
        for (c, &size) in class_sizes.iter().enumerate() {
            for i in 0..size {
                let values: Vec<f64> =
                    (0..n).map(|t| (c * 1000 + i * n + t) as f64 * 0.01).collect();
                rows.push((format!("c{c}"), values));
            }
        }
        TimeSeriesDataset::from_rows(rows).unwrap()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_comma_separated_lines() {
        let f = write_temp("1,0.5,0.25\n2,1.0,0.75\n");
        let d = TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto).unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.n(), 2);
        assert_eq!(d.class_domain(), ["1", "2"]);
        assert_eq!(d.records()[0].values(), [0.5, 0.25]);
    }

    #[test]
    fn auto_detects_tabs_and_whitespace() {
        let tabs = write_temp("1\t0.5\t0.25\n2\t1.0\t0.75\n");
        let d = TimeSeriesDataset::parse_ucr(tabs.path(), Delimiter::Auto).unwrap();
        assert_eq!(d.n(), 2);
        let spaces = write_temp("1  0.5 0.25\n2 1.0  0.75\n");
        let d = TimeSeriesDataset::parse_ucr(spaces.path(), Delimiter::Auto).unwrap();
        assert_eq!(d.n(), 2);
    }

    #[test]
    fn ragged_row_errors_with_line_number() {
        let f = write_temp("1,0.5,0.25\n2,1.0\n");
        let err =
            TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_errors_with_position() {
        let f = write_temp("1,0.5,oops\n");
        let err =
            TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("field 3"), "{msg}");
        assert!(msg.contains("oops"), "{msg}");
    }

    #[test]
    fn rejects_non_finite_values_and_empty_files() {
        let f = write_temp("1,0.5,NaN\n");
        assert!(TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto).is_err());
        let f = write_temp("\n\n");
        assert!(matches!(
            TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto),
            Err(Error::EmptyFile { .. })
        ));
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let d = synthetic(&[3, 2], 5);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let f = write_temp(std::str::from_utf8(&buf).unwrap());
        let back = TimeSeriesDataset::parse_ucr(f.path(), Delimiter::Auto).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn merge_concatenates_in_order() {
        let a = synthetic(&[35], 251);
        let b = synthetic(&[176], 251);
        let m = a.merge(&b).unwrap();
        assert_eq!(m.k(), 211);
        assert_eq!(m.records()[0].values(), a.records()[0].values());
        assert_eq!(m.records()[35].values(), b.records()[0].values());
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let d = synthetic(&[4], 6);
        let empty = TimeSeriesDataset::from_rows(Vec::new()).unwrap();
        assert_eq!(d.merge(&empty).unwrap(), d);
        assert_eq!(empty.merge(&d).unwrap(), d);
    }

    #[test]
    fn merge_rejects_length_mismatch() {
        let a = synthetic(&[2], 5);
        let b = synthetic(&[2], 6);
        assert!(matches!(
            a.merge(&b),
            Err(Error::LengthMismatch { left: 5, right: 6 })
        ));
    }

    #[test]
    fn smoothness_known_values() {
        assert_eq!(smoothness(&[2.0, 2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert_eq!(smoothness(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 0.0);
        let s = smoothness(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!((s - 2.0 / 3.0f64.sqrt()).abs() < 1e-12, "{s}");
        assert!(matches!(
            smoothness(&[1.0, 2.0]),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn ten_fold_on_211_records_gives_folds_of_21_or_22() {
        let d = synthetic(&[70, 70, 71], 4);
        assert_eq!(d.k(), 211);
        let spec = SplitSpec::KFold {
            k: 10,
            seed: 42,
            stratified: true,
        };
        let splits = make_splits(&d, &spec).unwrap();
        assert_eq!(splits.len(), 10);
        let mut seen = vec![0usize; d.k()];
        for (train, test) in &splits {
            assert!(test.k() == 21 || test.k() == 22, "fold size {}", test.k());
            assert_eq!(train.k() + test.k(), d.k());
            // class proportions within one record of 70/70/71 over 10 folds
            for (c, count) in test.class_counts().iter().enumerate() {
                assert!((6..=8).contains(count), "class {c}: {count}");
            }
            for r in test.records() {
                let pos = d
                    .records()
                    .iter()
                    .position(|p| p == r)
                    .expect("fold records come from the dataset");
                seen[pos] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1), "folds must partition records");
    }

    #[test]
    fn splits_are_seed_deterministic() {
        let d = synthetic(&[30, 30], 4);
        let spec = |seed| SplitSpec::KFold {
            k: 5,
            seed,
            stratified: true,
        };
        let a = make_splits(&d, &spec(7)).unwrap();
        let b = make_splits(&d, &spec(7)).unwrap();
        assert_eq!(a, b);
        let c = make_splits(&d, &spec(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stratified_fold_rejects_tiny_class() {
        let d = synthetic(&[3, 30], 4);
        let spec = SplitSpec::KFold {
            k: 10,
            seed: 1,
            stratified: true,
        };
        match make_splits(&d, &spec) {
            Err(Error::ClassTooSmall { label, count, k }) => {
                assert_eq!(label, "c0");
                assert_eq!(count, 3);
                assert_eq!(k, 10);
            }
            other => panic!("unexpected {other:?}"),
        }
        let spec = SplitSpec::KFold {
            k: 10,
            seed: 1,
            stratified: false,
        };
        assert_eq!(make_splits(&d, &spec).unwrap().len(), 10);
    }

    #[test]
    fn percentage_split_matches_rounded_per_class_counts() {
        let d = synthetic(&[300; 8], 8);
        let spec = SplitSpec::Percentage {
            train_fraction: 0.20,
            seed: 3,
            stratified: true,
        };
        let splits = make_splits(&d, &spec).unwrap();
        assert_eq!(splits.len(), 1);
        let (train, test) = &splits[0];
        assert_eq!(train.k(), 480);
        assert_eq!(test.k(), 1920);
        assert!(train.class_counts().iter().all(|&c| c == 60));
    }

    #[test]
    fn fixed_split_passes_through_and_aligns_domains() {
        let train = synthetic(&[5, 5], 4);
        let test = synthetic(&[2, 2], 4);
        let spec = SplitSpec::Fixed {
            train: train.clone(),
            test: test.clone(),
        };
        let splits = make_splits(&train, &spec).unwrap();
        assert_eq!(splits.len(), 1);
        assert_eq!(splits[0].0.k(), 10);
        assert_eq!(splits[0].1.k(), 4);
        assert_eq!(splits[0].0.class_domain(), splits[0].1.class_domain());
    }

    #[test]
    fn per_class_smoothness_reports_every_class() {
        let d = synthetic(&[3, 4], 10);
        let stats = d.per_class_smoothness().unwrap();
        assert_eq!(stats.len(), 2);
        assert_eq!(stats[0].0, "c0");
        // synthetic rows are arithmetic progressions: perfectly smooth
        assert!(stats.iter().all(|(_, s)| *s < 1e-12));
    }
}
