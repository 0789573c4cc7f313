//! Building compressed feature matrices: per record, concatenate the smooth
//! (and optionally extra, and optionally detail) coefficients from several
//! wavelet decompositions into one row.
//!
//! With `N` filters at level `J0` on dyadic series of length `n`, the row
//! width is `N * n / 2^J0` — the transform halves per level and only the
//! smooth block is kept — so the matrix is a compressed view of the input.
//! Odd lengths shed one untransformed sample per odd level; those extras are
//! appended after the owning filter's smooth block when enabled.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ingest::{LabelId, TimeSeriesDataset};
use crate::wavelet::{dwt, filter_bank, plan_levels, WaveletFilter};

/// Which coefficients of which filters make up a feature row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdwtConfig {
    /// Filter names, applied in order; each contributes one column block.
    pub filters: Vec<String>,
    /// Decomposition level shared by all filters.
    pub j0: usize,
    /// Append each filter's untransformed odd-length leftovers.
    pub include_extras: bool,
    /// Keep the detail blocks too (full-transform baseline; off for the
    /// compressed representation).
    pub include_details: bool,
}

impl MdwtConfig {
    /// Smooth-plus-extras configuration, the usual compressed form.
    pub fn smooth(filters: Vec<String>, j0: usize, include_extras: bool) -> Self {
        MdwtConfig {
            filters,
            j0,
            include_extras,
            include_details: false,
        }
    }

    /// Stable one-line description for reports and config hashing.
    pub fn descriptor(&self) -> String {
        format!(
            "mdwt:{};j0={};extras={};details={}",
            self.filters.join("+"),
            self.j0,
            self.include_extras,
            self.include_details
        )
    }
}

/// Feature rows plus everything needed to interpret them: labels, the class
/// domain they index, per-column provenance, and the generating config.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Vec<f64>, // row-major, k * width
    width: usize,
    labels: Vec<LabelId>,
    class_domain: Vec<String>,
    column_provenance: Vec<String>,
    config_descriptor: String,
}

impl FeatureMatrix {
    /// Assemble a matrix directly from rows (synthetic data, tests).
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labels: Vec<LabelId>,
        class_domain: Vec<String>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let width = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != width {
                return Err(Error::LengthMismatch {
                    left: width,
                    right: r.len(),
                });
            }
        }
        let column_provenance = (0..width).map(|i| format!("x.{i}")).collect();
        Ok(FeatureMatrix {
            data: rows.into_iter().flatten().collect(),
            width,
            labels,
            class_domain,
            column_provenance,
            config_descriptor: "rows".to_string(),
        })
    }

    /// Number of rows `K`.
    pub fn k(&self) -> usize {
        self.labels.len()
    }

    /// Row width `A`.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn label(&self, i: usize) -> LabelId {
        self.labels[i]
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn class_domain(&self) -> &[String] {
        &self.class_domain
    }

    /// Per-column origin tags (`la16.s2.0`, `la16.extra.L1`, `raw.17`, …),
    /// identical for every row.
    pub fn column_provenance(&self) -> &[String] {
        &self.column_provenance
    }

    pub fn config_descriptor(&self) -> &str {
        &self.config_descriptor
    }

    /// CSV form: provenance header plus a trailing `label` column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{},label", self.column_provenance.join(","))?;
        for i in 0..self.k() {
            for v in self.row(i) {
                write!(w, "{v},")?;
            }
            writeln!(w, "{}", self.class_domain[self.labels[i].0])?;
        }
        Ok(())
    }
}

/// Columns contributed by one filter under `cfg`, as provenance tags.
fn filter_block_provenance(
    f: &WaveletFilter,
    n: usize,
    cfg: &MdwtConfig,
) -> Result<Vec<String>> {
    let steps = plan_levels(n, cfg.j0, f)?;
    let name = f.name();
    let mut cols = Vec::new();
    if cfg.include_details {
        for step in &steps {
            for k in 0..step.half {
                cols.push(format!("{name}.w{}.{k}", step.level));
            }
        }
    }
    let smooth_len = steps.last().expect("j0 >= 1").half;
    for k in 0..smooth_len {
        cols.push(format!("{name}.s{}.{k}", cfg.j0));
    }
    if cfg.include_extras {
        for step in steps.iter().filter(|s| s.extra) {
            cols.push(format!("{name}.extra.L{}", step.level));
        }
    }
    Ok(cols)
}

/// Row width produced by `cfg` on series of length `n`, without transforming
/// anything — pure size arithmetic, shared with the actual builder.
pub fn feature_width(n: usize, cfg: &MdwtConfig) -> Result<usize> {
    if cfg.filters.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut width = 0;
    for name in &cfg.filters {
        let f = filter_bank(name)?;
        width += filter_block_provenance(&f, n, cfg)?.len();
    }
    Ok(width)
}

/// Transform every record per `cfg` and assemble the feature matrix. Rows
/// are computed independently (and in parallel); row order always matches
/// record order.
pub fn build_features(
    d: &TimeSeriesDataset,
    cfg: &MdwtConfig,
) -> Result<FeatureMatrix> {
    if cfg.filters.is_empty() {
        return Err(Error::NoCandidates);
    }
    let filters: Vec<WaveletFilter> = cfg
        .filters
        .iter()
        .map(|name| filter_bank(name))
        .collect::<Result<_>>()?;
    let mut column_provenance = Vec::new();
    for f in &filters {
        column_provenance.extend(filter_block_provenance(f, d.n(), cfg)?);
    }
    let width = column_provenance.len();

    let rows: Vec<Vec<f64>> = d
        .records()
        .par_iter()
        .map(|rec| {
            let mut row = Vec::with_capacity(width);
            for f in &filters {
                let dec = dwt(rec.values(), f, cfg.j0)?;
                if cfg.include_details {
                    for w in dec.details() {
                        row.extend_from_slice(w);
                    }
                }
                row.extend_from_slice(dec.smooth());
                if cfg.include_extras {
                    row.extend(dec.extras().iter().map(|&(_, v)| v));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for row in &rows {
        assert_eq!(
            row.len(),
            width,
            "feature rows must all match the planned width"
        );
    }

    Ok(FeatureMatrix {
        data: rows.into_iter().flatten().collect(),
        width,
        labels: d.records().iter().map(|r| r.label()).collect(),
        class_domain: d.class_domain().to_vec(),
        column_provenance,
        config_descriptor: cfg.descriptor(),
    })
}

/// Identity embedding: the raw samples as features (baseline).
pub fn raw_features(d: &TimeSeriesDataset) -> FeatureMatrix {
    let width = d.n();
    FeatureMatrix {
        data: d
            .records()
            .iter()
            .flat_map(|r| r.values().iter().copied())
            .collect(),
        width,
        labels: d.records().iter().map(|r| r.label()).collect(),
        class_domain: d.class_domain().to_vec(),
        column_provenance: (0..width).map(|i| format!("raw.{i}")).collect(),
        config_descriptor: "raw".to_string(),
    }
}

/// Full-transform baseline: every detail and smooth coefficient of a single
/// filter (extras excluded), so the width is `n` minus the number of extras.
pub fn full_transform_features(
    d: &TimeSeriesDataset,
    filter: &str,
    j0: usize,
) -> Result<FeatureMatrix> {
    let cfg = MdwtConfig {
        filters: vec![filter.to_string()],
        j0,
        include_extras: false,
        include_details: true,
    };
    build_features(d, &cfg)
}
