//! Lanczos iteration with full reorthogonalization for the low end of the
//! normalized Laplacian spectrum, for graphs past the dense cap.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng as _;

use super::laplacian::NormalizedLaplacian;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov dimension limit; `0` means the matrix dimension.
    pub max_iterations: usize,
    /// Accept a Ritz pair once `|β_m s_m| <=` this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_iterations: 0,
            tolerance: 1e-10,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RitzPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Residual bound `|β_m s_{m,i}|` for each pair.
    pub bounds: Vec<f64>,
    pub iterations: usize,
}

/// The `k` smallest eigenvalues.
pub fn extreme_eigenvalues(lap: &NormalizedLaplacian, k: usize) -> Result<Vec<f64>> {
    Ok(lanczos_smallest(lap, k, LanczosOptions::default())?.values)
}

pub fn lanczos_smallest(
    lap: &NormalizedLaplacian,
    k: usize,
    opts: LanczosOptions,
) -> Result<RitzPairs> {
    let n = lap.dimension();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "requested {k} eigenvalues of a {n}-dimensional operator"
        )));
    }
    let max_m = match opts.max_iterations {
        0 => n,
        m => m.min(n),
    };
    let mut rng = rng_from_seed(opts.seed);
    let mut random_unit = |basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..8 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            orthogonalize(&mut v, basis);
            orthogonalize(&mut v, basis);
            let norm = norm(&v);
            if norm > 1e-8 {
                v.iter_mut().for_each(|x| *x /= norm);
                return Some(v);
            }
        }
        None
    };

    let mut basis: Vec<Vec<f64>> = vec![random_unit(&[]).expect("n >= 1")];
    let mut alpha: Vec<f64> = Vec::new();
    // beta[j] couples basis vectors j and j+1; zero marks a restart.
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut next_check = (2 * k + 10).min(max_m);
    let mut last = None;

    loop {
        let j = alpha.len();
        lap.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for (wi, qi) in w.iter_mut().zip(&basis[j]) {
            *wi -= a * qi;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, qi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * qi;
            }
        }
        orthogonalize(&mut w, &basis);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let m = alpha.len();

        let exhausted = m == max_m;
        let breakdown = b < 1e-10;
        if m >= next_check || exhausted || (breakdown && m >= k) {
            let ritz = ritz_pairs(&alpha, &beta, if breakdown { 0.0 } else { b }, k);
            let converged = ritz.1.iter().all(|&r| r <= opts.tolerance);
            if converged && (m >= k) {
                return Ok(assemble(ritz, &basis, m));
            }
            if exhausted {
                last = Some(ritz);
                break;
            }
            next_check = (m + m / 4 + 1).min(max_m);
        }
        if exhausted {
            break;
        }
        if breakdown {
            // Invariant subspace found; continue in a fresh direction.
            match random_unit(&basis) {
                Some(v) => {
                    beta.push(0.0);
                    basis.push(v);
                }
                None => break,
            }
        } else {
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
    }
    let (values, bounds, _) = last.unwrap_or_else(|| ritz_pairs(&alpha, &beta, 0.0, k));
    Err(Error::ConvergenceFailure {
        iterations: alpha.len(),
        estimates: values,
        bounds,
    })
}

type Ritz = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Smallest `k` eigenpairs of the tridiagonal `T_m` and their residual
/// bounds `|β_m · s_{m-1,i}|`.
fn ritz_pairs(alpha: &[f64], beta: &[f64], beta_m: f64, k: usize) -> Ritz {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let take = k.min(m);
    let values = order[..take].iter().map(|&i| eig.eigenvalues[i]).collect();
    let bounds = order[..take]
        .iter()
        .map(|&i| (beta_m * eig.eigenvectors[(m - 1, i)]).abs())
        .collect();
    let coeffs = order[..take]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, bounds, coeffs)
}

fn assemble((values, bounds, coeffs): Ritz, basis: &[Vec<f64>], m: usize) -> RitzPairs {
    let n = basis[0].len();
    let vectors = coeffs
        .iter()
        .map(|s: &Vec<f64>| {
            let mut v = vec![0.0; n];
            for (q, c) in basis.iter().zip(s) {
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi += c * qi;
                }
            }
            v
        })
        .collect();
    RitzPairs {
        values,
        vectors,
        bounds,
        iterations: m,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// One classical Gram–Schmidt pass against `basis`.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(q, v);
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= c * qi;
        }
    }
}
