use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest dimension handed to the dense eigensolver by default.
pub const DEFAULT_DENSE_CAP: usize = 3000;

/// Normalized Laplacian in sparse row form.
///
/// `L(v,v) = 1` when `d_v > 0` and `0` for isolated vertices;
/// `L(u,v) = -1/sqrt(d_u d_v)` across edges. Rows follow the source graph's
/// vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedLaplacian {
    diag: Vec<f64>,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

pub fn build_laplacian(g: &Graph) -> NormalizedLaplacian {
    let n = g.n();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(2 * g.edge_count());
    let mut vals = Vec::with_capacity(2 * g.edge_count());
    offsets.push(0);
    for u in 0..n {
        for &v in g.neighbors(u) {
            cols.push(v);
            vals.push(-inv_sqrt[u] * inv_sqrt[v]);
        }
        offsets.push(cols.len());
    }
    NormalizedLaplacian {
        diag: (0..n)
            .map(|v| if g.degree(v) > 0 { 1.0 } else { 0.0 })
            .collect(),
        offsets,
        cols,
        vals,
    }
}

impl NormalizedLaplacian {
    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return self.diag[u];
        }
        let row = self.offsets[u]..self.offsets[u + 1];
        match self.cols[row.clone()].binary_search(&v) {
            Ok(i) => self.vals[row.start + i],
            Err(_) => 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            let mut acc = self.diag[u] * x[u];
            for i in self.offsets[u]..self.offsets[u + 1] {
                acc += self.vals[i] * x[self.cols[i]];
            }
            *yu = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut m = DMatrix::zeros(n, n);
        for u in 0..n {
            m[(u, u)] = self.diag[u];
            for i in self.offsets[u]..self.offsets[u + 1] {
                m[(u, self.cols[i])] = self.vals[i];
            }
        }
        m
    }

    /// `‖L v − λ v‖₂`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let mut y = vec![0.0; v.len()];
        self.apply(v, &mut y);
        y.iter()
            .zip(v)
            .map(|(yi, vi)| (yi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Eigenpairs sorted by ascending eigenvalue; column `i` of `vectors` belongs
/// to `values[i]`.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenPairs {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }
}

fn check_cap(lap: &NormalizedLaplacian, cap: usize) -> Result<()> {
    if lap.dimension() > cap {
        return Err(Error::DimensionTooLarge {
            dim: lap.dimension(),
            cap,
        });
    }
    Ok(())
}

/// All eigenvalues, ascending, from a dense symmetric solve. Raw values: no
/// clamping into `[0, 2]`.
pub fn eigenvalues(lap: &NormalizedLaplacian, cap: usize) -> Result<Vec<f64>> {
    check_cap(lap, cap)?;
    if lap.dimension() == 0 {
        return Ok(Vec::new());
    }
    let mut values: Vec<f64> = lap.to_dense().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Full decomposition. Every returned pair satisfies
/// `‖L v − λ v‖₂ <= 1e-9 · dimension`.
pub fn eigen_decomposition(lap: &NormalizedLaplacian, cap: usize) -> Result<EigenPairs> {
    check_cap(lap, cap)?;
    let n = lap.dimension();
    if n == 0 {
        return Ok(EigenPairs {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(lap.to_dense());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let pairs = EigenPairs { values, vectors };
    let limit = 1e-9 * n as f64;
    for i in 0..n {
        let r = lap.residual(pairs.values[i], &pairs.vector(i));
        if r > limit {
            return Err(Error::InvalidParams(format!(
                "eigenpair {i} residual {r:e} exceeds {limit:e}"
            )));
        }
    }
    Ok(pairs)
}
