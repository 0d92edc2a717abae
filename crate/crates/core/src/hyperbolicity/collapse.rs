//! Finite-size collapse: shift each profile down by `c1·ln(n/n_ref)` and
//! left by `c2·ln(n/n_ref)` and pick the grid point where the curves agree
//! best on their common support.

use super::profile::{CurvatureProfile, SideMode};
use crate::error::{Error, Result};

pub const COLLAPSE_GRID_STEP: f64 = 0.01;
pub const COLLAPSE_GRID_MAX: f64 = 3.0;
/// Bins with fewer triangles are too noisy to anchor the fit.
pub const COLLAPSE_MIN_COUNT: u64 = 50;
/// A pair of curves must share at least this many points.
const MIN_OVERLAP: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    pub c1: f64,
    pub c2: f64,
    /// Sum over curve pairs of the mean squared vertical gap on the overlap.
    pub residual: f64,
    /// The same quantity with no shift applied.
    pub unshifted_residual: f64,
    pub n_ref: usize,
    /// `(n, [(l_shifted, delta_shifted)])` per input curve.
    pub curves: Vec<(usize, Vec<(f64, f64)>)>,
}

/// Fits the two shift constants over raw `(n, [(l, mean)])` curves, each
/// sorted by `l`.
pub fn fit_collapse(curves: &[(usize, Vec<(f64, f64)>)]) -> Result<CollapseResult> {
    if curves.len() < 2 {
        return Err(Error::InsufficientProfiles(curves.len()));
    }
    if curves.iter().any(|(n, c)| *n == 0 || c.is_empty()) {
        return Err(Error::InvalidParams("collapse needs nonempty curves with n > 0".into()));
    }
    let n_ref = curves.iter().map(|c| c.0).min().unwrap();
    let logs: Vec<f64> = curves
        .iter()
        .map(|(n, _)| (*n as f64 / n_ref as f64).ln())
        .collect();
    let steps = (COLLAPSE_GRID_MAX / COLLAPSE_GRID_STEP).round() as usize;
    let grid = |k: usize| k as f64 * COLLAPSE_GRID_STEP;

    let unshifted_residual = residual(curves, &logs, 0.0, 0.0);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut shifted: Vec<Vec<(f64, f64)>> = curves.iter().map(|c| c.1.clone()).collect();
    for i in 0..=steps {
        let c1 = grid(i);
        for j in 0..=steps {
            let c2 = grid(j);
            for (k, (_, curve)) in curves.iter().enumerate() {
                for (dst, &(x, y)) in shifted[k].iter_mut().zip(curve) {
                    *dst = (x - c2 * logs[k], y - c1 * logs[k]);
                }
            }
            let r = pairwise_residual(&shifted);
            if r < best.0 {
                best = (r, c1, c2);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::InvalidParams("curves never overlap on the collapse grid".into()));
    }
    let (res, c1, c2) = best;
    Ok(CollapseResult {
        c1,
        c2,
        residual: res,
        unshifted_residual,
        n_ref,
        curves: curves
            .iter()
            .zip(&logs)
            .map(|((n, c), lg)| (*n, c.iter().map(|&(x, y)| (x - c2 * lg, y - c1 * lg)).collect()))
            .collect(),
    })
}

fn residual(curves: &[(usize, Vec<(f64, f64)>)], logs: &[f64], c1: f64, c2: f64) -> f64 {
    let shifted: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .zip(logs)
        .map(|((_, c), lg)| c.iter().map(|&(x, y)| (x - c2 * lg, y - c1 * lg)).collect())
        .collect();
    pairwise_residual(&shifted)
}

fn pairwise_residual(curves: &[Vec<(f64, f64)>]) -> f64 {
    let mut total = 0.0;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let (mut sum, mut count) = (0.0, 0usize);
            for (p, q) in [(i, j), (j, i)] {
                for &(x, y) in &curves[q] {
                    if let Some(v) = interpolate(&curves[p], x) {
                        sum += (y - v).powi(2);
                        count += 1;
                    }
                }
            }
            if count < MIN_OVERLAP {
                return f64::INFINITY;
            }
            total += sum / count as f64;
        }
    }
    total
}

/// Piecewise-linear value at `x`, `None` outside the curve's range.
fn interpolate(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (curve.first()?, curve.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let k = curve.partition_point(|p| p.0 < x);
    if k < curve.len() && curve[k].0 == x {
        return Some(curve[k].1);
    }
    let (a, b) = (curve[k - 1], curve[k]);
    Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
}

/// Collapses shortest-side profiles of one degree across sizes.
pub fn rescale_collapse(profiles: &[CurvatureProfile]) -> Result<CollapseResult> {
    if profiles.len() < 2 {
        return Err(Error::InsufficientProfiles(profiles.len()));
    }
    let d = profiles[0].d;
    if profiles.iter().any(|p| p.d != d || p.mode != SideMode::Shortest) {
        return Err(Error::MixedSpecs);
    }
    let curves: Vec<(usize, Vec<(f64, f64)>)> = profiles
        .iter()
        .map(|p| {
            let pts = p
                .bins
                .iter()
                .filter(|(_, b)| b.count >= COLLAPSE_MIN_COUNT)
                .map(|(&l, b)| (l as f64, b.mean()))
                .collect();
            (p.n, pts)
        })
        .collect();
    fit_collapse(&curves)
}
