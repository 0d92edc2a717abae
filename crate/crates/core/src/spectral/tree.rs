//! Exact spectrum of the truncated `d`-regular tree.
//!
//! The tree is spherically symmetric about its root, so the normalized
//! Laplacian splits into tridiagonal blocks indexed by level. Radial
//! functions give the full `(M+1)`-level block. Every vertex at level `j`
//! with `c` children also carries `c - 1` copies of the block on levels
//! `j+1..=M`: functions constant on each child subtree's levels, with child
//! weights summing to zero so they never couple back to level `j`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::measure::SpectralMeasure;
use crate::error::{Error, Result};
use crate::generators::truncated_tree_size;

/// Eigenvalues with multiplicities, ascending by value.
pub fn truncated_tree_spectrum(d: usize, depth: u32) -> Result<Vec<(f64, usize)>> {
    if d < 2 {
        return Err(Error::InvalidDegree(d as f64));
    }
    let m = depth as usize;
    if m == 0 {
        return Ok(vec![(0.0, 1)]);
    }
    let level_size = |j: usize| -> f64 {
        if j == 0 {
            1.0
        } else {
            d as f64 * ((d - 1) as f64).powi(j as i32 - 1)
        }
    };
    let level_degree = |j: usize| -> f64 {
        if j == m {
            1.0
        } else {
            d as f64
        }
    };
    // coupling between levels j and j+1 of the radial block
    let coupling: Vec<f64> = (0..m)
        .map(|j| {
            -(level_size(j + 1) / level_size(j)).sqrt()
                / (level_degree(j) * level_degree(j + 1)).sqrt()
        })
        .collect();
    let block = |start: usize| -> Vec<f64> {
        let size = m + 1 - start;
        let t = DMatrix::from_fn(size, size, |r, c| {
            if r == c {
                1.0
            } else if r + 1 == c {
                coupling[start + r]
            } else if c + 1 == r {
                coupling[start + c]
            } else {
                0.0
            }
        });
        SymmetricEigen::new(t).eigenvalues.iter().copied().collect()
    };

    let mut out: Vec<(f64, usize)> = block(0).into_iter().map(|v| (v, 1)).collect();
    for j in 0..m {
        let vertices = if j == 0 { 1 } else { d * (d - 1).pow(j as u32 - 1) };
        let children = if j == 0 { d } else { d - 1 };
        let copies = vertices * (children - 1);
        if copies > 0 {
            out.extend(block(j + 1).into_iter().map(|v| (v, copies)));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    debug_assert_eq!(
        out.iter().map(|x| x.1).sum::<usize>(),
        truncated_tree_size(d, depth)
    );
    Ok(out)
}

/// The uniform spectral measure of the truncated tree.
pub fn truncated_tree_measure(d: usize, depth: u32) -> Result<SpectralMeasure> {
    let spectrum = truncated_tree_spectrum(d, depth)?;
    let total = truncated_tree_size(d, depth) as f64;
    let (values, weights) = spectrum
        .into_iter()
        .map(|(v, mult)| (v, mult as f64 / total))
        .unzip();
    Ok(SpectralMeasure::from_weighted(values, weights, 1))
}

/// Expands multiplicities into a plain ascending eigenvalue list.
pub fn expand(spectrum: &[(f64, usize)]) -> Vec<f64> {
    spectrum
        .iter()
        .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
        .collect()
}
