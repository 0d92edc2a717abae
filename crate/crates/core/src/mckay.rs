//! Spectral density of the infinite `d`-regular tree under the normalized
//! Laplacian, and distances from empirical spectra to it.
//!
//! With `a = 2√(d-1)/d` the density is supported on `[1-a, 1+a]` and equals
//! `√(4(d-1) - d²(1-x)²) / (2π(1 - (1-x)²))` there. Integrals are taken in
//! the variable `x = 1 + a sin θ`, which removes the square-root endpoint
//! behaviour and leaves the smooth integrand
//! `d a² cos²θ / (2π(1 - a² sin²θ))` on `[-π/2, π/2]`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::spectral::{Histogram, SpectralMeasure, DEFAULT_BINS};

/// Per-piece tolerance for CDF integrals.
const CDF_TOL: f64 = 1e-12;
const L1_TOL: f64 = 1e-10;
pub const DEFAULT_BULK_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McKayDensity {
    pub d: usize,
    pub support_lo: f64,
    pub support_hi: f64,
}

impl McKayDensity {
    pub fn new(d: usize) -> Result<Self> {
        let (support_lo, support_hi) = mckay_support(d)?;
        Ok(McKayDensity {
            d,
            support_lo,
            support_hi,
        })
    }

    /// Half-width `2√(d-1)/d` of the support.
    pub fn radius(&self) -> f64 {
        half_width(self.d)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let d = self.d as f64;
        let t = 1.0 - x;
        let disc = 4.0 * (d - 1.0) - d * d * t * t;
        if x <= self.support_lo || x >= self.support_hi || disc <= 0.0 {
            return 0.0;
        }
        disc.sqrt() / (2.0 * PI * (1.0 - t * t))
    }

    fn theta_integrand(&self, theta: f64) -> f64 {
        let a = self.radius();
        let (s, c) = theta.sin_cos();
        self.d as f64 * a * a * c * c / (2.0 * PI * (1.0 - a * a * s * s))
    }

    fn theta_of(&self, x: f64) -> f64 {
        ((x - 1.0) / self.radius()).clamp(-1.0, 1.0).asin()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.support_lo {
            return 0.0;
        }
        let hi = self.theta_of(x.min(self.support_hi));
        adaptive_simpson(|t| self.theta_integrand(t), -FRAC_PI_2, hi, CDF_TOL).clamp(0.0, 1.0)
    }

    /// CDF at every point of `xs`, integrating once across the sorted points.
    pub fn cdf_many(&self, xs: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
        let mut out = vec![0.0; xs.len()];
        let mut theta = -FRAC_PI_2;
        let mut acc = 0.0;
        for i in order {
            let x = xs[i];
            if x <= self.support_lo {
                continue;
            }
            let next = self.theta_of(x.min(self.support_hi));
            if next > theta {
                acc += adaptive_simpson(|t| self.theta_integrand(t), theta, next, CDF_TOL);
                theta = next;
            }
            out[i] = acc.clamp(0.0, 1.0);
        }
        out
    }
}

fn half_width(d: usize) -> f64 {
    2.0 * ((d - 1) as f64).sqrt() / d as f64
}

fn check_degree(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidDegree(d as f64));
    }
    Ok(())
}

pub fn mckay_support(d: usize) -> Result<(f64, f64)> {
    check_degree(d)?;
    let a = half_width(d);
    Ok((1.0 - a, 1.0 + a))
}

pub fn mckay_pdf(d: usize, x: f64) -> Result<f64> {
    Ok(McKayDensity::new(d)?.pdf(x))
}

pub fn mckay_cdf(d: usize, x: f64) -> Result<f64> {
    Ok(McKayDensity::new(d)?.cdf(x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceMode {
    /// Largest CDF gap over the support.
    Ks,
    /// `∫ |histogram density - pdf|` over the support shrunk by `margin`.
    L1Bulk { bins: usize, margin: f64 },
}

impl DistanceMode {
    pub fn l1_default() -> Self {
        DistanceMode::L1Bulk {
            bins: DEFAULT_BINS,
            margin: DEFAULT_BULK_MARGIN,
        }
    }
}

pub fn bulk_distance(empirical: &SpectralMeasure, d: usize, mode: DistanceMode) -> Result<f64> {
    let mk = McKayDensity::new(d)?;
    if empirical.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    Ok(match mode {
        DistanceMode::Ks => ks_distance(empirical, &mk),
        DistanceMode::L1Bulk { bins, margin } => {
            if bins == 0 || !(margin >= 0.0) {
                return Err(Error::InvalidParams(format!(
                    "bins={bins}, margin={margin}"
                )));
            }
            l1_bulk(&empirical.histogram(bins), &mk, margin)
        }
    })
}

/// Checks both one-sided limits of the empirical CDF at each eigenvalue in
/// the support, plus the two support endpoints.
fn ks_distance(empirical: &SpectralMeasure, mk: &McKayDensity) -> f64 {
    let mut points: Vec<f64> = empirical
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&v| v >= mk.support_lo && v <= mk.support_hi)
        .collect();
    points.push(mk.support_lo);
    points.push(mk.support_hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let reference = mk.cdf_many(&points);
    points
        .iter()
        .zip(reference)
        .map(|(&x, f)| {
            let above = (empirical.cdf(x) - f).abs();
            let below = (empirical.cdf_below(x) - f).abs();
            above.max(below)
        })
        .fold(0.0, f64::max)
}

fn l1_bulk(hist: &Histogram, mk: &McKayDensity, margin: f64) -> f64 {
    let lo = mk.support_lo + margin;
    let hi = mk.support_hi - margin;
    if lo >= hi {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..hist.bins() {
        let a = hist.left(i).max(lo);
        let b = hist.right(i).min(hi);
        if a >= b {
            continue;
        }
        let h = hist.density(i);
        total += adaptive_simpson(|x| (h - mk.pdf(x)).abs(), a, b, L1_TOL);
    }
    total
}

/// Rows `(x, pdf, cdf)` on `points` evenly spaced values across `[0, 2]`.
pub fn mckay_table(d: usize, points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let mk = McKayDensity::new(d)?;
    if points < 2 {
        return Err(Error::InvalidParams(format!("grid needs at least 2 points, got {points}")));
    }
    let xs: Vec<f64> = (0..points)
        .map(|i| 2.0 * i as f64 / (points - 1) as f64)
        .collect();
    let cdf = mk.cdf_many(&xs);
    Ok(xs
        .iter()
        .zip(cdf)
        .map(|(&x, c)| (x, mk.pdf(x), c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand::Rng;

    /// Antiderivative of the θ-integrand, `b = √(1-a²) = (d-2)/d`.
    fn closed_form_cdf(d: usize, x: f64) -> f64 {
        let (lo, hi) = mckay_support(d).unwrap();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let a = half_width(d);
        let b = (d as f64 - 2.0) / d as f64;
        let theta = ((x - 1.0) / a).asin();
        d as f64 / (2.0 * PI) * ((theta + FRAC_PI_2) - b * ((b * theta.tan()).atan() + FRAC_PI_2))
    }

    #[test]
    fn support_examples() {
        let (lo, hi) = mckay_support(3).unwrap();
        assert!((lo - 0.057191).abs() < 1e-6 && (hi - 1.942809).abs() < 1e-6);
        let (lo, hi) = mckay_support(5).unwrap();
        assert!((lo - 0.2).abs() < 1e-15 && (hi - 1.8).abs() < 1e-15);
        for d in 3..=50 {
            let (lo, hi) = mckay_support(d).unwrap();
            assert!((lo + hi - 2.0).abs() < 1e-14);
            assert!(lo >= 0.0);
            if d > 3 {
                // the half-width shrinks, so the lower edge climbs toward 1
                assert!(lo > mckay_support(d - 1).unwrap().0);
            }
        }
        assert!(mckay_support(50).unwrap().0 > 0.7);
        assert_eq!(mckay_support(2), Err(Error::InvalidDegree(2.0)));
    }

    #[test]
    fn pdf_values() {
        assert!((mckay_pdf(3, 1.0).unwrap() - 2.0 * 2f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert!((mckay_pdf(3, 1.0).unwrap() - 0.450158).abs() < 1e-6);
        assert_eq!(mckay_pdf(3, 0.0).unwrap(), 0.0);
        assert_eq!(mckay_pdf(5, 1.8).unwrap(), 0.0);
        assert!(mckay_pdf(1, 1.0).is_err());
        for d in [3, 5, 7] {
            for k in 1..50 {
                let t = k as f64 * 0.02;
                let l = mckay_pdf(d, 1.0 - t).unwrap();
                let r = mckay_pdf(d, 1.0 + t).unwrap();
                assert!((l - r).abs() < 1e-12 * l.max(1.0));
            }
        }
    }

    #[test]
    fn integrates_to_one_in_x() {
        // plain-x quadrature, split at the endpoints and pushed just inside
        for d in 3..=12 {
            let mk = McKayDensity::new(d).unwrap();
            let (lo, hi) = (mk.support_lo, mk.support_hi);
            let eps = 1e-14;
            let mass = adaptive_simpson(|x| mk.pdf(x), lo + eps, 1.0, 1e-11)
                + adaptive_simpson(|x| mk.pdf(x), 1.0, hi - eps, 1e-11);
            assert!((mass - 1.0).abs() < 1e-6, "d={d}: {mass}");
            assert!((mk.cdf(hi) - 1.0).abs() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn cdf_agrees_with_closed_form() {
        for d in [3, 4, 5, 7, 12] {
            let (lo, _) = mckay_support(d).unwrap();
            assert_eq!(mckay_cdf(d, lo).unwrap(), 0.0);
            assert!((mckay_cdf(d, 1.0).unwrap() - 0.5).abs() < 1e-10);
            let xs: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.002).collect();
            let many = McKayDensity::new(d).unwrap().cdf_many(&xs);
            for (i, &x) in xs.iter().enumerate() {
                let want = closed_form_cdf(d, x);
                assert!((mckay_cdf(d, x).unwrap() - want).abs() < 1e-9, "d={d} x={x}");
                assert!((many[i] - want).abs() < 1e-9, "d={d} x={x}");
            }
            assert!(many.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn second_moment_about_one() {
        for d in 3..=9 {
            let mk = McKayDensity::new(d).unwrap();
            let a = mk.radius();
            let m2 = adaptive_simpson(
                |t| (a * t.sin()).powi(2) * mk.theta_integrand(t),
                -FRAC_PI_2,
                FRAC_PI_2,
                1e-13,
            );
            assert!((m2 - 1.0 / d as f64).abs() < 1e-10, "d={d}");
        }
    }

    fn inverse_cdf_sample(d: usize, u: f64) -> f64 {
        let (mut lo, mut hi) = mckay_support(d).unwrap();
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if closed_form_cdf(d, mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn ks_against_samples() {
        let mut rng = rng_from_seed(2024);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| inverse_cdf_sample(3, rng.random::<f64>()))
            .collect();
        let m = SpectralMeasure::from_eigenvalues(samples);
        let ks = bulk_distance(&m, 3, DistanceMode::Ks).unwrap();
        assert!(ks < 0.01, "{ks}");
        let l1 = bulk_distance(&m, 3, DistanceMode::l1_default()).unwrap();
        assert!(l1 < 0.05, "{l1}");
        // a point mass at 1 sits half the mass away
        let atom = SpectralMeasure::from_eigenvalues(vec![1.0; 10]);
        let ks = bulk_distance(&atom, 3, DistanceMode::Ks).unwrap();
        assert!((ks - 0.5).abs() < 1e-9);
    }

    #[test]
    fn empty_measure_rejected() {
        let empty = SpectralMeasure::from_eigenvalues(vec![]);
        assert_eq!(bulk_distance(&empty, 3, DistanceMode::Ks), Err(Error::EmptyMeasure));
    }

    #[test]
    fn table_shape() {
        let t = mckay_table(3, 201).unwrap();
        assert_eq!(t.len(), 201);
        assert_eq!(t[0], (0.0, 0.0, 0.0));
        assert!((t[100].2 - 0.5).abs() < 1e-10);
        assert!((t[200].2 - 1.0).abs() < 1e-10);
    }
}
