//! Orthonormal discrete wavelet transform: pyramid analysis, synthesis, and
//! multiresolution decomposition, with periodic (circular) boundary handling
//! and support for arbitrary (non-dyadic) lengths via "extra" coefficients.
//!
//! The transform convolves against the time-reversed filter and keeps the
//! odd-indexed outputs: `V[t] = Σ_l g[l] x[(2t+1-l) mod m]`, likewise `W[t]`
//! with the wavelet filter. Synthesis is the exact transpose, so analysis
//! followed by synthesis reconstructs the input to rounding error. When the
//! vector to be halved has odd length, its final sample is set aside
//! untransformed — an *extra* coefficient — and restored during synthesis.
//! Because the periodized filter bank stays orthonormal for every even
//! length (the wrapped taps inherit the even-shift orthogonality of the
//! filter), levels may proceed until the smooth vector is exhausted, even
//! once it is shorter than the filter.

pub mod filters;

pub use filters::{filter_bank, WaveletFilter, SUPPORTED_FILTERS};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One level of the pyramid: detail/smooth coefficients per level, the final
/// smooth vector, and any extra (untransformed) samples detached on the way
/// down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    filter: String,
    j0: usize,
    details: Vec<Vec<f64>>,
    smooth: Vec<f64>,
    extras: Vec<(usize, f64)>,
    original_n: usize,
}

impl Decomposition {
    pub fn filter(&self) -> &str {
        &self.filter
    }

    /// Decomposition depth `J0`.
    pub fn j0(&self) -> usize {
        self.j0
    }

    /// Detail vectors `W_1..W_J0`, finest scale first.
    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Final smooth vector `V_J0`.
    pub fn smooth(&self) -> &[f64] {
        &self.smooth
    }

    /// Untransformed samples as `(level, value)`, in detachment order.
    pub fn extras(&self) -> &[(usize, f64)] {
        &self.extras
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    /// Total number of stored coefficients; always equals `original_n`.
    pub fn coefficient_count(&self) -> usize {
        self.details.iter().map(Vec::len).sum::<usize>()
            + self.smooth.len()
            + self.extras.len()
    }

    /// All coefficients in canonical order: `W_1..W_J0`, then `V_J0`, then
    /// extras by level.
    pub fn all_coefficients(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.original_n);
        for w in &self.details {
            out.extend_from_slice(w);
        }
        out.extend_from_slice(&self.smooth);
        out.extend(self.extras.iter().map(|&(_, v)| v));
        out
    }

    /// Sum of squared coefficients (equals the input energy to rounding).
    pub fn energy(&self) -> f64 {
        self.all_coefficients().iter().map(|c| c * c).sum()
    }
}

/// Size bookkeeping for one pyramid level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LevelStep {
    /// Level number, 1-based.
    pub level: usize,
    /// Whether an odd-length smooth vector sheds its final sample here.
    pub extra: bool,
    /// Length of the detail and smooth vectors this level produces.
    pub half: usize,
}

/// Deepest level reachable from length `n`: halving (after detaching a
/// trailing sample when odd) must leave at least one coefficient per branch.
pub fn max_feasible_level(n: usize) -> usize {
    let mut m = n;
    let mut level = 0;
    loop {
        let even = m - m % 2;
        if even < 2 {
            return level;
        }
        level += 1;
        m = even / 2;
    }
}

/// Per-level sizes for decomposing length `n` down to level `j0`.
pub(crate) fn plan_levels(
    n: usize,
    j0: usize,
    filter: &WaveletFilter,
) -> Result<Vec<LevelStep>> {
    if j0 == 0 {
        return Err(Error::InvalidParameter(
            "decomposition level must be at least 1".into(),
        ));
    }
    let max = max_feasible_level(n);
    if j0 > max {
        return Err(Error::LevelTooDeep {
            filter: filter.name().to_string(),
            l: filter.len(),
            n,
            requested: j0,
            max,
        });
    }
    let mut steps = Vec::with_capacity(j0);
    let mut m = n;
    for level in 1..=j0 {
        let extra = m % 2 == 1;
        let even = m - m % 2;
        steps.push(LevelStep {
            level,
            extra,
            half: even / 2,
        });
        m = even / 2;
    }
    Ok(steps)
}

/// Filter-and-downsample one even-length vector into (smooth, detail).
fn analyze_level(x: &[f64], f: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let m = x.len() as isize;
    debug_assert!(m >= 2 && m % 2 == 0);
    let g = f.scaling();
    let h = f.wavelet();
    let half = (m / 2) as usize;
    let mut v = vec![0.0; half];
    let mut w = vec![0.0; half];
    for t in 0..half {
        let base = 2 * t as isize + 1;
        let (mut sv, mut sw) = (0.0, 0.0);
        for (l, (&gl, &hl)) in g.iter().zip(&h).enumerate() {
            let idx = (base - l as isize).rem_euclid(m) as usize;
            sv += gl * x[idx];
            sw += hl * x[idx];
        }
        v[t] = sv;
        w[t] = sw;
    }
    (v, w)
}

/// Exact transpose of [`analyze_level`]: merge (smooth, detail) back into the
/// even-length vector they came from.
fn synthesize_level(v: &[f64], w: &[f64], f: &WaveletFilter) -> Vec<f64> {
    let half = v.len();
    let m = 2 * half as isize;
    let g = f.scaling();
    let h = f.wavelet();
    let mut out = vec![0.0; m as usize];
    for t in 0..half {
        let base = 2 * t as isize + 1;
        for (l, (&gl, &hl)) in g.iter().zip(&h).enumerate() {
            let idx = (base - l as isize).rem_euclid(m) as usize;
            out[idx] += gl * v[t] + hl * w[t];
        }
    }
    out
}

/// Pyramid analysis of `x` down to level `j0`.
///
/// # Errors
/// `LevelTooDeep` when `j0` exceeds [`max_feasible_level`] for `x.len()`.
pub fn dwt(x: &[f64], f: &WaveletFilter, j0: usize) -> Result<Decomposition> {
    let steps = plan_levels(x.len(), j0, f)?;
    let mut current = x.to_vec();
    let mut details = Vec::with_capacity(j0);
    let mut extras = Vec::new();
    for step in &steps {
        if step.extra {
            let value = current.pop().expect("odd vector is non-empty");
            extras.push((step.level, value));
        }
        let (v, w) = analyze_level(&current, f);
        details.push(w);
        current = v;
    }
    Ok(Decomposition {
        filter: f.name().to_string(),
        j0,
        details,
        smooth: current,
        extras,
        original_n: x.len(),
    })
}

/// Synthesis (inverse transform): reconstructs the original vector, restoring
/// extras at the positions they were detached from.
///
/// # Errors
/// `InconsistentDecomposition` if level sizes, the smooth length, or the
/// extras do not describe a decomposition this module could have produced.
pub fn idwt(d: &Decomposition) -> Result<Vec<f64>> {
    let f = filter_bank(&d.filter)?;
    let steps = plan_levels(d.original_n, d.j0, &f).map_err(|_| {
        Error::InconsistentDecomposition(format!(
            "level {} is infeasible for n={}",
            d.j0, d.original_n
        ))
    })?;
    if d.details.len() != d.j0 {
        return Err(Error::InconsistentDecomposition(format!(
            "expected {} detail vectors, found {}",
            d.j0,
            d.details.len()
        )));
    }
    for step in &steps {
        if d.details[step.level - 1].len() != step.half {
            return Err(Error::InconsistentDecomposition(format!(
                "detail vector at level {} has length {}, expected {}",
                step.level,
                d.details[step.level - 1].len(),
                step.half
            )));
        }
    }
    let expected_smooth = steps.last().expect("j0 >= 1").half;
    if d.smooth.len() != expected_smooth {
        return Err(Error::InconsistentDecomposition(format!(
            "smooth vector has length {}, expected {}",
            d.smooth.len(),
            expected_smooth
        )));
    }
    let expected_extras: Vec<usize> = steps
        .iter()
        .filter(|s| s.extra)
        .map(|s| s.level)
        .collect();
    let found_extras: Vec<usize> = d.extras.iter().map(|&(l, _)| l).collect();
    if expected_extras != found_extras {
        return Err(Error::InconsistentDecomposition(format!(
            "extras at levels {found_extras:?}, expected {expected_extras:?}"
        )));
    }

    let mut current = d.smooth.clone();
    for step in steps.iter().rev() {
        current = synthesize_level(&current, &d.details[step.level - 1], &f);
        if step.extra {
            let &(_, value) = d
                .extras
                .iter()
                .find(|&&(l, _)| l == step.level)
                .expect("extra levels verified above");
            current.push(value);
        }
    }
    Ok(current)
}

/// Multiresolution analysis: length-`n` series `D_1..D_J0` and `S_J0` that
/// sum to the original signal. Detail series `D_j` is the synthesis of the
/// level-`j` detail coefficients alone; everything else — smooth vector and
/// extras included — belongs to the smooth series `S_J0`.
pub fn mra(d: &Decomposition) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(d.j0 + 1);
    for j in 1..=d.j0 {
        let mut part = d.clone();
        for (level, w) in part.details.iter_mut().enumerate() {
            if level + 1 != j {
                w.iter_mut().for_each(|c| *c = 0.0);
            }
        }
        part.smooth.iter_mut().for_each(|c| *c = 0.0);
        part.extras.iter_mut().for_each(|e| e.1 = 0.0);
        out.push(idwt(&part)?);
    }
    let mut smooth_part = d.clone();
    for w in smooth_part.details.iter_mut() {
        w.iter_mut().for_each(|c| *c = 0.0);
    }
    out.push(idwt(&smooth_part)?);
    Ok(out)
}
