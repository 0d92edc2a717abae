//! Order statistics and a percentile bootstrap.

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::stream;

/// Linearly interpolated quantile of `xs`, `q` in `[0, 1]`.
pub fn quantile(xs: &[f64], q: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, q))
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

pub fn quartiles(xs: &[f64]) -> Result<Quartiles> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Quartiles {
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
    })
}

pub fn median(xs: &[f64]) -> Result<f64> {
    quantile(xs, 0.5)
}

/// `statistic` evaluated on `resamples` draws of `count` indices taken with
/// replacement from `0..count`.
pub fn bootstrap<F>(count: usize, resamples: usize, seed: u64, mut statistic: F) -> Result<Vec<f64>>
where
    F: FnMut(&[usize]) -> f64,
{
    if count == 0 || resamples == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = stream(seed, 0);
    let mut idx = vec![0; count];
    Ok((0..resamples)
        .map(|_| {
            idx.iter_mut().for_each(|i| *i = rng.random_range(0..count));
            statistic(&idx)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_statistics() {
        let xs = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(median(&xs).unwrap(), 3.0);
        let q = quartiles(&xs).unwrap();
        assert_eq!((q.q1, q.median, q.q3), (2.0, 3.0, 4.0));
        assert_eq!(median(&[1.0, 2.0]).unwrap(), 1.5);
        assert_eq!(quantile(&[7.0], 0.9).unwrap(), 7.0);
        assert_eq!(median(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn bootstrap_of_constant_data() {
        let xs = [2.0; 10];
        let stats = bootstrap(10, 50, 1, |idx| idx.iter().map(|&i| xs[i]).sum::<f64>() / 10.0).unwrap();
        assert!(stats.iter().all(|&s| s == 2.0));
        let again = bootstrap(10, 50, 1, |idx| idx[0] as f64).unwrap();
        assert_eq!(again, bootstrap(10, 50, 1, |idx| idx[0] as f64).unwrap());
    }
}
