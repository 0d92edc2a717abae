//! Closed-form quantities for spectral gaps of trees and for the
//! probability of a long, singly attached loop in `G(n, d/n)`.
//!
//! The loop event for a fixed vertex set `S` of size `Δ`: the pairs inside
//! `S` form exactly one `Δ`-cycle and exactly one edge joins `S` to the
//! other `n - Δ` vertices. Its probability is
//! `q = (Δ!/2)(n-Δ) p^{Δ+1} (1-p)^E` with `E` the number of absent pairs
//! touching `S`. Everything is evaluated in log space.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::OffspringLaw;
use crate::seed::stream;

/// `1 - 2√(k-1)/k`, the bottom of the spectrum of the `k`-regular tree.
pub fn regular_tree_gap(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidDegree(k as f64));
    }
    Ok(1.0 - 2.0 * ((k - 1) as f64).sqrt() / k as f64)
}

/// Gap of a Galton–Watson tree, set by the smallest possible offspring
/// count `k`: `0` when `k = 0`, else `1 - 2√k/(k+1)`.
pub fn branching_gap(law: &OffspringLaw) -> f64 {
    match law.min_support() {
        0 => 0.0,
        k => 1.0 - 2.0 * (k as f64).sqrt() / (k + 1) as f64,
    }
}

/// Positive root of `γ = 1 - e^{-dγ}`, to absolute tolerance 1e-12.
pub fn giant_fraction(d: f64) -> Result<f64> {
    if !d.is_finite() || d <= 1.0 {
        return Err(Error::SubcriticalDegree(d));
    }
    // f < 0 strictly between 0 and the root, f(1) = e^{-d} > 0
    let f = |g: f64| g + (-d * g).exp_m1();
    let mut lo = (d - 1.0) / (d * d);
    while f(lo) >= 0.0 {
        lo *= 0.5;
    }
    let mut hi = 1.0;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopParams {
    pub n: u64,
    pub d: f64,
    /// Loop length `Δ`.
    pub delta_len: u32,
}

impl LoopParams {
    pub fn new(n: u64, d: f64, delta_len: u32) -> Result<Self> {
        let p = LoopParams { n, d, delta_len };
        p.validate()?;
        Ok(p)
    }

    /// Loop length for a fatness target: `max(ceil(6δ), 3)`.
    pub fn loop_length(delta: f64) -> Result<u32> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidParams(format!("fatness target {delta}")));
        }
        Ok(((6.0 * delta).ceil() as u32).max(3))
    }

    pub fn p(&self) -> f64 {
        self.d / self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta_len < 3 || self.n <= self.delta_len as u64 {
            return Err(Error::InvalidParams(format!(
                "need n > Δ >= 3, got n={}, Δ={}",
                self.n, self.delta_len
            )));
        }
        if !(self.d > 0.0) || !self.d.is_finite() || self.p() >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "need 0 < d/n < 1, got d={}, n={}",
                self.d, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopProbability {
    pub ln_q: f64,
    /// `n(n-1)/2 - (n-Δ)(n-Δ-1)/2 - (Δ+1)`
    pub exponent: i128,
    /// `(Δ(2n-3) - (Δ²+2)) / 2`, checked equal to `exponent`.
    pub exponent_simplified: i128,
}

impl LoopProbability {
    pub fn q(&self) -> f64 {
        self.ln_q.exp()
    }

    pub fn log10_q(&self) -> f64 {
        self.ln_q / std::f64::consts::LN_10
    }
}

/// Absent-pair exponent as the direct count and as twice the simplified
/// form `Δ(2n-3) - (Δ²+2)`, both in exact integer arithmetic.
pub fn loop_exponents(n: u64, delta_len: u32) -> (i128, i128) {
    let (n, k) = (n as i128, delta_len as i128);
    let direct = n * (n - 1) / 2 - (n - k) * (n - k - 1) / 2 - (k + 1);
    (direct, k * (2 * n - 3) - (k * k + 2))
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

pub fn loop_probability(params: &LoopParams) -> Result<LoopProbability> {
    params.validate()?;
    let (exponent, twice_simplified) = loop_exponents(params.n, params.delta_len);
    if 2 * exponent != twice_simplified {
        return Err(Error::InvalidParams(format!(
            "exponent forms disagree: {exponent} vs {twice_simplified}/2"
        )));
    }
    let exponent_simplified = twice_simplified / 2;
    let k = params.delta_len as u64;
    let p = params.p();
    let ln_q = ln_factorial(k) - std::f64::consts::LN_2
        + ((params.n - k) as f64).ln()
        + (k + 1) as f64 * p.ln()
        + exponent as f64 * (-p).ln_1p();
    Ok(LoopProbability {
        ln_q,
        exponent,
        exponent_simplified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopBounds {
    pub params: LoopParams,
    pub q: LoopProbability,
    /// `C(n, Δ) q`
    pub rho: f64,
    pub rho_lower: f64,
    pub rho_upper: f64,
    /// `d^{Δ+1} e^{-dΔ}`
    pub rho_limit: f64,
    /// The actual `n → ∞` limit of `rho`, half of `rho_limit`.
    pub rho_exact_limit: f64,
    /// `rho - rho²`
    pub p4_lower: f64,
    /// `C(n-Δ, Δ)`, in log space.
    pub ln_m: f64,
    /// `q - M q²`
    pub p2_lower: f64,
    /// `M q²`
    pub p3_upper: f64,
    /// Whether `n > d (1 - 2^{-2/((Δ+1)(Δ+2))})^{-1}`.
    pub threshold_ok: bool,
}

impl LoopBounds {
    pub fn sandwich_holds(&self) -> bool {
        self.rho_lower <= self.rho && self.rho <= self.rho_upper
    }
}

pub fn rho_limit(d: f64, delta_len: f64) -> f64 {
    ((delta_len + 1.0) * d.ln() - d * delta_len).exp()
}

pub fn size_threshold(d: f64, delta_len: u32) -> f64 {
    let k = delta_len as f64;
    d / (1.0 - 2f64.powf(-2.0 / ((k + 1.0) * (k + 2.0))))
}

pub fn rho_and_bounds(params: &LoopParams) -> Result<LoopBounds> {
    let q = loop_probability(params)?;
    let (n, d, k) = (params.n as f64, params.d, params.delta_len as f64);
    let ln_rho = ln_binomial(params.n, params.delta_len as u64) + q.ln_q;
    // shared factor (1-d/n)^{Δn} (1-d/n)^{-(Δ+1)(Δ+2)/2} d^{Δ+1}
    let ln_common = (k * n - (k + 1.0) * (k + 2.0) / 2.0) * (-d / n).ln_1p() + (k + 1.0) * d.ln();
    let ln_upper = ((n - k) / (2.0 * n)).ln() + ln_common;
    let ln_lower = (k + 1.0) * ((n - k) / n).ln() - std::f64::consts::LN_2 + ln_common;
    let rho = ln_rho.exp();
    let limit = rho_limit(d, k);
    let ln_m = ln_binomial(params.n - params.delta_len as u64, params.delta_len as u64);
    let p3_upper = (ln_m + 2.0 * q.ln_q).exp();
    Ok(LoopBounds {
        params: *params,
        q,
        rho,
        rho_lower: ln_lower.exp(),
        rho_upper: ln_upper.exp(),
        rho_limit: limit,
        rho_exact_limit: 0.5 * limit,
        p4_lower: rho - rho * rho,
        ln_m,
        p2_lower: q.q() - p3_upper,
        p3_upper,
        threshold_ok: n > size_threshold(d, params.delta_len),
    })
}

/// `ρ_lim - ρ_lim²` with `Δ = max(ceil(6δ), 3)`.
pub fn fat_triangle_lower_bound(d: f64, delta: f64) -> Result<f64> {
    if !d.is_finite() || d <= 1.0 {
        return Err(Error::InvalidParams(format!("mean degree {d} must exceed 1")));
    }
    let k = LoopParams::loop_length(delta)?;
    let rho = rho_limit(d, k as f64);
    let bound = rho - rho * rho;
    if !(bound > 0.0) {
        return Err(Error::InvalidParams(format!(
            "lower bound {bound} is not positive at d={d}, Δ={k}"
        )));
    }
    Ok(bound)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BelowOneCheck {
    /// `2 e^{-dΔ} d^{Δ+1}`
    pub value: f64,
    pub below_one: bool,
    /// `1 - value`
    pub margin: f64,
}

pub fn rho_below_one_check(d: f64, delta_len: f64) -> Result<BelowOneCheck> {
    if !(d > 1.0 && delta_len > 1.0) || !d.is_finite() || !delta_len.is_finite() {
        return Err(Error::InvalidParams(format!("need d, Δ > 1, got d={d}, Δ={delta_len}")));
    }
    let value = 2.0 * rho_limit(d, delta_len);
    Ok(BelowOneCheck {
        value,
        below_one: value < 1.0,
        margin: 1.0 - value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub hits: u64,
    pub samples: u64,
    pub estimate: f64,
    pub std_error: f64,
}

const MC_BLOCK: u64 = 1 << 16;

/// Frequency of the loop event on the fixed set `{0, ..., Δ-1}`, sampling
/// only the pairs that touch it. Blocks run in parallel on derived streams.
pub fn monte_carlo_loop_probability(
    params: &LoopParams,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    params.validate()?;
    let k = params.delta_len as usize;
    if k > 64 {
        return Err(Error::InvalidParams(format!("loop length {k} above 64")));
    }
    if samples == 0 {
        return Err(Error::InvalidParams("no samples".into()));
    }
    let p = params.p();
    // P(u < cut) = p for u uniform on u64
    let cut = (p * 2f64.powi(64)) as u64;
    let cross = k as u64 * (params.n - k as u64);
    let blocks = samples.div_ceil(MC_BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = MC_BLOCK.min(samples - b * MC_BLOCK);
            let mut rng = stream(seed, b);
            let mut hits = 0u64;
            for _ in 0..len {
                if loop_event(&mut rng, k, cross, cut) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let est = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        hits,
        samples,
        estimate: est,
        std_error: (est * (1.0 - est) / samples as f64).sqrt(),
    })
}

fn loop_event<R: Rng>(rng: &mut R, k: usize, cross: u64, cut: u64) -> bool {
    let mut adj = [0u64; 64];
    let mut edges = 0;
    for u in 0..k {
        for v in u + 1..k {
            if rng.random::<u64>() < cut {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
                edges += 1;
            }
        }
    }
    // draws are always consumed in full so every sample uses the same count
    let mut links = 0;
    for _ in 0..cross {
        if rng.random::<u64>() < cut {
            links += 1;
        }
    }
    if edges != k || links != 1 || adj[..k].iter().any(|m| m.count_ones() != 2) {
        return false;
    }
    // all degrees 2: a single cycle exactly when connected
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == full
}
