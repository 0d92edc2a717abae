//! Cheeger constants under the finite-graph convention: minimize
//! `|∂S| / vol(S)` over nonempty `S` with `vol(S) <= vol(G) / 2`.

use super::lanczos::{lanczos_smallest, LanczosOptions};
use super::laplacian::{build_laplacian, eigen_decomposition};
use super::lambda0;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by the exhaustive subset scan.
pub const EXACT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CheegerResult {
    pub value: f64,
    /// Optimal (exact) or best-found (sweep) subset, ascending.
    pub certificate: Vec<usize>,
    pub exact: bool,
    pub boundary_size: usize,
    pub volume: usize,
}

/// Tracks the minimum ratio exactly via cross-multiplication.
#[derive(Clone, Copy)]
struct Best {
    boundary: usize,
    volume: usize,
}

impl Best {
    fn improves_on(self, other: Option<Best>) -> bool {
        match other {
            None => true,
            Some(o) => (self.boundary as u128) * (o.volume as u128) < (o.boundary as u128) * (self.volume as u128),
        }
    }
}

/// Exhaustive scan over all `2^n` subsets, visited in Gray-code order so
/// each step updates boundary and volume from one flipped vertex.
pub fn cheeger_exact(g: &Graph) -> Result<CheegerResult> {
    let n = g.n();
    if n > EXACT_CAP {
        return Err(Error::TooLargeForExact { n, cap: EXACT_CAP });
    }
    let total = g.total_volume();
    if total == 0 {
        return Err(Error::InvalidParams("Cheeger constant of an edgeless graph".into()));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut set = 0u32;
    let (mut boundary, mut volume) = (0usize, 0usize);
    let mut best: Option<Best> = None;
    let mut best_set = 0u32;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let inside = (masks[v] & set).count_ones() as usize;
        let deg = g.degree(v);
        if set & (1 << v) == 0 {
            set |= 1 << v;
            boundary = boundary + deg - 2 * inside;
            volume += deg;
        } else {
            set &= !(1 << v);
            boundary = boundary + 2 * inside - deg;
            volume -= deg;
        }
        if volume == 0 || 2 * volume > total {
            continue;
        }
        let cand = Best { boundary, volume };
        if cand.improves_on(best) {
            best = Some(cand);
            best_set = set;
        }
    }
    let best = best.expect("a graph with an edge has a valid subset");
    Ok(CheegerResult {
        value: best.boundary as f64 / best.volume as f64,
        certificate: (0..n).filter(|&v| best_set & (1 << v) != 0).collect(),
        exact: true,
        boundary_size: best.boundary,
        volume: best.volume,
    })
}

/// Sweep cut along `D^{-1/2} v` where `v` is the eigenvector of the second
/// eigenvalue. Upper-bounds the true constant.
pub fn cheeger_sweep(g: &Graph, dense_cap: usize) -> Result<CheegerResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParams("sweep needs at least two vertices".into()));
    }
    let lap = build_laplacian(g);
    let fiedler = if n <= dense_cap {
        eigen_decomposition(&lap, dense_cap)?.vector(1)
    } else {
        lanczos_smallest(&lap, 2, LanczosOptions::default())?
            .vectors
            .swap_remove(1)
    };
    let score: Vec<f64> = (0..n)
        .map(|v| fiedler[v] / (g.degree(v) as f64).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));

    let total = g.total_volume();
    let mut in_prefix = vec![false; n];
    let (mut boundary, mut volume) = (0usize, 0usize);
    let mut best: Option<Best> = None;
    let mut best_len = 0;
    for (len, &v) in order.iter().enumerate().take(n - 1) {
        let inside = g.neighbors(v).iter().filter(|&&u| in_prefix[u]).count();
        in_prefix[v] = true;
        boundary = boundary + g.degree(v) - 2 * inside;
        volume += g.degree(v);
        let small = volume.min(total - volume);
        let cand = Best {
            boundary,
            volume: small,
        };
        if cand.improves_on(best) {
            best = Some(cand);
            best_len = len + 1;
        }
    }
    let best = best.expect("n >= 2");
    let prefix_volume: usize = order[..best_len].iter().map(|&v| g.degree(v)).sum();
    let mut certificate: Vec<usize> = if 2 * prefix_volume <= total {
        order[..best_len].to_vec()
    } else {
        order[best_len..].to_vec()
    };
    certificate.sort_unstable();
    Ok(CheegerResult {
        value: best.boundary as f64 / best.volume as f64,
        certificate,
        exact: false,
        boundary_size: best.boundary,
        volume: best.volume,
    })
}

/// Both sides of `2h >= λ₀ >= 1 - sqrt(1 - h²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub cheeger: CheegerResult,
    pub lambda0: f64,
    /// `2h`
    pub left_bound: f64,
    /// `1 - sqrt(1 - h²)`
    pub right_bound: f64,
    pub left_holds: bool,
    /// Only meaningful with an exact `h`; `None` for sweep estimates.
    pub right_holds: Option<bool>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.left_holds && self.right_holds.unwrap_or(true)
    }
}

const SANDWICH_SLACK: f64 = 1e-9;

/// Evaluates the Cheeger inequality on a connected graph, exact `h` up to
/// [`EXACT_CAP`] vertices and sweep `h` beyond.
pub fn cheeger_sandwich(g: &Graph, dense_cap: usize) -> Result<SandwichReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let cheeger = if g.n() <= EXACT_CAP {
        cheeger_exact(g)?
    } else {
        cheeger_sweep(g, dense_cap)?
    };
    let lambda0 = lambda0(g, dense_cap)?;
    let h = cheeger.value;
    let left_bound = 2.0 * h;
    let right_bound = 1.0 - (1.0 - h * h).max(0.0).sqrt();
    let left_holds = left_bound >= lambda0 - SANDWICH_SLACK;
    let right_holds = cheeger
        .exact
        .then_some(lambda0 >= right_bound - SANDWICH_SLACK);
    Ok(SandwichReport {
        cheeger,
        lambda0,
        left_bound,
        right_bound,
        left_holds,
        right_holds,
    })
}

/// Like [`cheeger_sandwich`] but a violated inequality is an error.
pub fn cheeger_sandwich_check(g: &Graph, dense_cap: usize) -> Result<SandwichReport> {
    let report = cheeger_sandwich(g, dense_cap)?;
    if !report.holds() {
        return Err(Error::SandwichViolation(format!(
            "h={} (exact={}), lambda0={}, 2h={}, 1-sqrt(1-h^2)={}",
            report.cheeger.value,
            report.cheeger.exact,
            report.lambda0,
            report.left_bound,
            report.right_bound
        )));
    }
    Ok(report)
}
