//! Mean `δ_Δ` binned by exact side length.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::sampling::TriangleSample;
use super::DeltaStat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideMode {
    Shortest,
    Longest,
}

impl SideMode {
    pub fn key(self, sides: [u32; 3]) -> u32 {
        match self {
            SideMode::Shortest => *sides.iter().min().unwrap(),
            SideMode::Longest => *sides.iter().max().unwrap(),
        }
    }
}

impl fmt::Display for SideMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SideMode::Shortest => "shortest",
            SideMode::Longest => "longest",
        })
    }
}

impl FromStr for SideMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shortest" | "shortest_side" => Ok(SideMode::Shortest),
            "longest" | "longest_side" => Ok(SideMode::Longest),
            other => Err(Error::InvalidParams(format!("unknown side mode {other:?}"))),
        }
    }
}

/// Integer running sums, so merging is exact and order-independent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BinStats {
    pub count: u64,
    pub sum: u64,
    pub sum_sq: u64,
}

impl BinStats {
    pub fn push(&mut self, x: u32) {
        self.count += 1;
        self.sum += x as u64;
        self.sum_sq += (x as u64) * (x as u64);
    }

    pub fn add(&mut self, other: &BinStats) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.count as f64
    }

    /// Sample standard deviation over `√count`; zero for a single entry.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let c = self.count as f64;
        // exact integer numerator of the corrected sum of squares
        let num = self.count as i128 * self.sum_sq as i128 - (self.sum as i128) * (self.sum as i128);
        let var = num as f64 / (c * (c - 1.0));
        (var.max(0.0) / c).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub bins: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub mode: SideMode,
    pub n: usize,
    pub d: f64,
    pub realization_count: usize,
    pub bins: BTreeMap<u32, BinStats>,
    /// Degenerate triples seen but left out of the bins.
    pub discarded: u64,
    /// Diameter of each contributing realization.
    pub diameters: Vec<u32>,
    /// `(c1, c2)` once the profile has been through a collapse fit.
    pub shift: Option<(f64, f64)>,
}

impl CurvatureProfile {
    pub fn from_samples(samples: &[TriangleSample], mode: SideMode) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut bins: BTreeMap<u32, BinStats> = BTreeMap::new();
        let mut discarded = 0;
        for s in samples {
            if s.degenerate {
                discarded += 1;
                continue;
            }
            bins.entry(mode.key(s.sides)).or_default().push(s.delta_minmax);
        }
        Ok(CurvatureProfile {
            mode,
            n: 0,
            d: 0.0,
            realization_count: 1,
            bins,
            discarded,
            diameters: Vec::new(),
            shift: None,
        })
    }

    pub fn with_meta(mut self, n: usize, d: f64, diameter: u32) -> Self {
        self.n = n;
        self.d = d;
        self.diameters = vec![diameter];
        self
    }

    /// Pools another realization into this profile.
    pub fn merge(&mut self, other: &CurvatureProfile) -> Result<()> {
        if other.mode != self.mode || other.n != self.n || other.d != self.d {
            return Err(Error::MixedSpecs);
        }
        for (&l, b) in &other.bins {
            self.bins.entry(l).or_default().add(b);
        }
        self.realization_count += other.realization_count;
        self.discarded += other.discarded;
        self.diameters.extend_from_slice(&other.diameters);
        Ok(())
    }

    pub fn pooled(parts: &[CurvatureProfile]) -> Result<CurvatureProfile> {
        let (first, rest) = parts.split_first().ok_or(Error::EmptyInput)?;
        let mut out = first.clone();
        for p in rest {
            out.merge(p)?;
        }
        Ok(out)
    }

    pub fn bin(&self, l: u32) -> Option<&BinStats> {
        self.bins.get(&l)
    }

    pub fn mean(&self, l: u32) -> Option<f64> {
        self.bin(l).map(BinStats::mean)
    }

    /// `(l, mean, std_error, count)` per populated bin, ascending in `l`.
    pub fn rows(&self) -> Vec<(u32, f64, f64, u64)> {
        self.bins
            .iter()
            .map(|(&l, b)| (l, b.mean(), b.std_error(), b.count))
            .collect()
    }

    /// All triangles whose key falls in `ls`, pooled into one bin.
    pub fn pooled_bins(&self, ls: &[u32]) -> BinStats {
        let mut acc = BinStats::default();
        for l in ls {
            if let Some(b) = self.bins.get(l) {
                acc.add(b);
            }
        }
        acc
    }

    pub fn mean_diameter(&self) -> f64 {
        if self.diameters.is_empty() {
            return 0.0;
        }
        self.diameters.iter().map(|&d| d as f64).sum::<f64>() / self.diameters.len() as f64
    }

    /// Mean of the three most populated bins with `l` above half the mean
    /// realization diameter. Ties in population go to the smaller `l`.
    pub fn plateau(&self) -> Option<PlateauEstimate> {
        let half = self.mean_diameter() / 2.0;
        let mut candidates: Vec<(u32, &BinStats)> = self
            .bins
            .iter()
            .filter(|(&l, _)| l as f64 > half)
            .map(|(&l, b)| (l, b))
            .collect();
        candidates.sort_by(|a, b| b.1.count.cmp(&a.1.count).then(a.0.cmp(&b.0)));
        candidates.truncate(3);
        if candidates.is_empty() {
            return None;
        }
        let k = candidates.len() as f64;
        let mean = candidates.iter().map(|(_, b)| b.mean()).sum::<f64>() / k;
        let var: f64 = candidates.iter().map(|(_, b)| b.std_error().powi(2)).sum();
        let mut bins: Vec<u32> = candidates.iter().map(|(l, _)| *l).collect();
        bins.sort_unstable();
        Some(PlateauEstimate {
            mean,
            std_error: var.sqrt() / k,
            bins,
        })
    }
}

pub fn curvature_profile(stats: &[DeltaStat], mode: SideMode) -> Result<CurvatureProfile> {
    let samples: Vec<TriangleSample> = stats.iter().map(TriangleSample::from).collect();
    CurvatureProfile::from_samples(&samples, mode)
}
