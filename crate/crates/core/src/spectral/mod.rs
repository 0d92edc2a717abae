//! Normalized Laplacian spectra: construction, dense and Lanczos
//! eigensolvers, empirical spectral measures, and Cheeger constants.

mod cheeger;
mod lanczos;
mod laplacian;
mod measure;
mod tree;

pub use cheeger::{
    cheeger_exact, cheeger_sandwich, cheeger_sandwich_check, cheeger_sweep, CheegerResult,
    SandwichReport, EXACT_CAP,
};
pub use lanczos::{extreme_eigenvalues, lanczos_smallest, LanczosOptions, RitzPairs};
pub use laplacian::{
    build_laplacian, eigen_decomposition, eigenvalues, EigenPairs, NormalizedLaplacian,
    DEFAULT_DENSE_CAP,
};
pub use measure::{
    atom_mass, averaged_measure, realization_measure, spectral_domain, spectral_measure,
    Histogram, SpectralMeasure, DEFAULT_BINS,
};
pub use tree::{expand, truncated_tree_measure, truncated_tree_spectrum};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Second-smallest normalized Laplacian eigenvalue of a connected graph.
/// Dense up to `dense_cap` vertices, Lanczos beyond.
pub fn lambda0(g: &Graph, dense_cap: usize) -> Result<f64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() < 2 {
        return Err(Error::InvalidParams("λ₀ needs at least two vertices".into()));
    }
    let lap = build_laplacian(g);
    if g.n() <= dense_cap {
        Ok(eigenvalues(&lap, dense_cap)?[1])
    } else {
        Ok(extreme_eigenvalues(&lap, 2)?[1])
    }
}
