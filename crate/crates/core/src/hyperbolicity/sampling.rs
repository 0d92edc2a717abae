//! Uniform i.i.d. vertex triples, split into fixed-size blocks that each
//! draw from their own derived stream.

use rand::Rng;
use rayon::prelude::*;

use super::evaluator::TriangleEvaluator;
use super::DeltaStat;
use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph};
use crate::seed::stream;

pub const SAMPLE_BLOCK: usize = 1024;

/// Compact per-triangle record used by the profile pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleSample {
    pub sides: [u32; 3],
    pub delta_minmax: u32,
    pub delta_thin: u32,
    pub degenerate: bool,
}

impl From<&DeltaStat> for TriangleSample {
    fn from(s: &DeltaStat) -> Self {
        TriangleSample {
            sides: s.triangle.sides,
            delta_minmax: s.delta_minmax,
            delta_thin: s.delta_thin,
            degenerate: s.triangle.is_degenerate(),
        }
    }
}

fn check(g: &Graph, count: usize) -> Result<()> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if count == 0 {
        return Err(Error::InvalidParams("triangle count must be at least 1".into()));
    }
    Ok(())
}

fn run_blocks<T: Send>(
    g: &Graph,
    dm: &DistanceMatrix,
    count: usize,
    seed: u64,
    map: impl Fn(DeltaStat) -> T + Sync,
) -> Vec<T> {
    let n = g.n();
    let blocks = count.div_ceil(SAMPLE_BLOCK);
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let len = SAMPLE_BLOCK.min(count - block * SAMPLE_BLOCK);
            let mut rng = stream(seed, block as u64);
            let mut ev = TriangleEvaluator::new(g, dm);
            (0..len)
                .map(|_| {
                    let a = rng.random_range(0..n);
                    let b = rng.random_range(0..n);
                    let c = rng.random_range(0..n);
                    map(ev.evaluate(a, b, c))
                })
                .collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// `count` triangles on a connected graph, with full geodesics.
pub fn sample_triangles(g: &Graph, count: usize, seed: u64) -> Result<Vec<DeltaStat>> {
    check(g, count)?;
    let dm = DistanceMatrix::new(g)?;
    Ok(run_blocks(g, &dm, count, seed, |s| s))
}

/// Same triples as [`sample_triangles`], keeping only sides and deltas.
/// Takes a prebuilt distance matrix so callers can also read the diameter.
pub fn sample_triangle_summaries(
    g: &Graph,
    dm: &DistanceMatrix,
    count: usize,
    seed: u64,
) -> Result<Vec<TriangleSample>> {
    check(g, count)?;
    Ok(run_blocks(g, dm, count, seed, |s| TriangleSample::from(&s)))
}
