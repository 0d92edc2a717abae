use rayon::prelude::*;

use super::laplacian::{build_laplacian, eigenvalues};
use super::tree::truncated_tree_measure;
use crate::error::{Error, Result};
use crate::generators::{Family, GenSpec};
use crate::graph::{giant_component, Graph};

pub const DEFAULT_BINS: usize = 100;
pub const SPECTRUM_LO: f64 = 0.0;
pub const SPECTRUM_HI: f64 = 2.0;

/// Discrete probability measure on Laplacian eigenvalues.
///
/// Atoms are kept sorted by `(value, weight)`, which makes the representation
/// independent of the order realizations were merged in.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
    realization_count: usize,
}

impl SpectralMeasure {
    /// Uniform weights `1/len`; empty input gives the empty measure.
    pub fn from_eigenvalues(values: Vec<f64>) -> Self {
        let w = if values.is_empty() { 0.0 } else { 1.0 / values.len() as f64 };
        let weights = vec![w; values.len()];
        Self::from_weighted(values, weights, 1)
    }

    pub fn from_weighted(values: Vec<f64>, weights: Vec<f64>, realization_count: usize) -> Self {
        assert_eq!(values.len(), weights.len());
        let mut atoms: Vec<(f64, f64)> = values.into_iter().zip(weights).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (eigenvalues, weights) = atoms.into_iter().unzip();
        SpectralMeasure {
            eigenvalues,
            weights,
            realization_count,
        }
    }

    /// Equal-weight mixture of `parts`.
    pub fn mixture(parts: &[SpectralMeasure]) -> Self {
        let r = parts.len() as f64;
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for part in parts {
            values.extend_from_slice(&part.eigenvalues);
            weights.extend(part.weights.iter().map(|w| w / r));
        }
        let count = parts.iter().map(|p| p.realization_count).sum();
        Self::from_weighted(values, weights, count)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn realization_count(&self) -> usize {
        self.realization_count
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Mass at or below `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.eigenvalues.partition_point(|&v| v <= x);
        self.weights[..k].iter().sum()
    }

    /// Mass strictly below `x`.
    pub fn cdf_below(&self, x: f64) -> f64 {
        let k = self.eigenvalues.partition_point(|&v| v < x);
        self.weights[..k].iter().sum()
    }

    pub fn histogram(&self, bins: usize) -> Histogram {
        let mut h = Histogram::new(bins);
        for (&v, &w) in self.eigenvalues.iter().zip(&self.weights) {
            let i = h.bin_of(v);
            h.masses[i] += w;
        }
        h
    }
}

/// Uniform bins over `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub masses: Vec<f64>,
}

impl Histogram {
    pub fn new(bins: usize) -> Self {
        assert!(bins > 0, "histogram needs at least one bin");
        Histogram {
            masses: vec![0.0; bins],
        }
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn width(&self) -> f64 {
        (SPECTRUM_HI - SPECTRUM_LO) / self.bins() as f64
    }

    pub fn left(&self, i: usize) -> f64 {
        SPECTRUM_LO + i as f64 * self.width()
    }

    pub fn right(&self, i: usize) -> f64 {
        SPECTRUM_LO + (i + 1) as f64 * self.width()
    }

    /// Bin index for `x`. Values within 1e-9 bin widths below an edge snap
    /// onto it, so eigenvalues like `1 - 1e-15` land in the bin starting at
    /// 1. Out-of-range values are clamped into the end bins.
    pub fn bin_of(&self, x: f64) -> usize {
        let pos = (x - SPECTRUM_LO) / self.width() + 1e-9;
        if pos <= 0.0 {
            0
        } else {
            (pos.floor() as usize).min(self.bins() - 1)
        }
    }

    pub fn density(&self, i: usize) -> f64 {
        self.masses[i] / self.width()
    }

    /// Density of the bin containing `x` (zero outside `[0, 2]`).
    pub fn density_at(&self, x: f64) -> f64 {
        if !(SPECTRUM_LO..=SPECTRUM_HI).contains(&x) {
            return 0.0;
        }
        self.density(self.bin_of(x))
    }

    pub fn l1_distance(&self, other: &Histogram) -> f64 {
        assert_eq!(self.bins(), other.bins());
        self.masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

pub fn spectral_measure(g: &Graph, dense_cap: usize) -> Result<SpectralMeasure> {
    Ok(SpectralMeasure::from_eigenvalues(eigenvalues(
        &build_laplacian(g),
        dense_cap,
    )?))
}

/// Graph whose spectrum represents one realization: the giant component for
/// `G(n, p)`, the whole graph otherwise.
pub fn spectral_domain(spec: &GenSpec) -> Result<Graph> {
    let g = spec.realize()?;
    Ok(match spec.family {
        Family::Gnp { .. } => giant_component(&g).graph,
        _ => g,
    })
}

/// Spectrum of one realization. Truncated regular trees use their exact
/// radial decomposition and are not subject to the dense cap.
pub fn realization_measure(spec: &GenSpec, dense_cap: usize) -> Result<SpectralMeasure> {
    if let Family::TruncatedTree { d, depth } = spec.family {
        return truncated_tree_measure(d, depth);
    }
    spectral_measure(&spectral_domain(spec)?, dense_cap)
}

/// Average of the per-realization spectral measures, computed in parallel.
pub fn averaged_measure(specs: &[GenSpec], dense_cap: usize) -> Result<SpectralMeasure> {
    let first = specs.first().ok_or(Error::EmptyInput)?;
    if specs.iter().any(|s| s.family != first.family) {
        return Err(Error::MixedSpecs);
    }
    let parts = specs
        .par_iter()
        .map(|s| realization_measure(s, dense_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralMeasure::mixture(&parts))
}

/// Total weight within `[x - tol, x + tol]`.
pub fn atom_mass(measure: &SpectralMeasure, x: f64, tol: f64) -> f64 {
    let lo = measure.eigenvalues.partition_point(|&v| v < x - tol);
    let hi = measure.eigenvalues.partition_point(|&v| v <= x + tol);
    measure.weights[lo..hi].iter().sum()
}
