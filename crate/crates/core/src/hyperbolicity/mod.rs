//! Geodesic triangles and their thinness: the min-max insize `δ_Δ`, the
//! neighbourhood-thin `δ`, triangle sampling, binned curvature profiles and
//! finite-size collapse of those profiles.

mod collapse;
mod evaluator;
mod profile;
mod sampling;

pub use collapse::{
    fit_collapse, rescale_collapse, CollapseResult, COLLAPSE_GRID_MAX, COLLAPSE_GRID_STEP,
    COLLAPSE_MIN_COUNT,
};
pub use evaluator::TriangleEvaluator;
pub use profile::{curvature_profile, BinStats, CurvatureProfile, PlateauEstimate, SideMode};
pub use sampling::{sample_triangle_summaries, sample_triangles, TriangleSample, SAMPLE_BLOCK};

use crate::error::Result;
use crate::graph::{geodesic, multi_source_distances, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrianglePath {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Geodesics `a→b`, `b→c`, `c→a`.
    pub paths: [Vec<usize>; 3],
    pub sides: [u32; 3],
}

impl TrianglePath {
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b || self.b == self.c || self.c == self.a
    }

    pub fn shortest_side(&self) -> u32 {
        *self.sides.iter().min().unwrap()
    }

    pub fn longest_side(&self) -> u32 {
        *self.sides.iter().max().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaStat {
    pub triangle: TrianglePath,
    pub delta_minmax: u32,
    pub delta_thin: u32,
    /// Smallest-index vertex attaining `delta_minmax`.
    pub witness: usize,
}

/// Canonical geodesics between the three corners.
pub fn triangle_paths(g: &Graph, a: usize, b: usize, c: usize) -> Result<TrianglePath> {
    let paths = [geodesic(g, a, b)?, geodesic(g, b, c)?, geodesic(g, c, a)?];
    let sides = [0, 1, 2].map(|i| (paths[i].len() - 1) as u32);
    Ok(TrianglePath { a, b, c, paths, sides })
}

/// Distances from every vertex to each side. Vertices outside the
/// triangle's component stay `None`.
fn side_distances(g: &Graph, t: &TrianglePath) -> Result<[Vec<Option<u32>>; 3]> {
    Ok([
        multi_source_distances(g, &t.paths[0])?,
        multi_source_distances(g, &t.paths[1])?,
        multi_source_distances(g, &t.paths[2])?,
    ])
}

fn minmax_from(dist: &[Vec<Option<u32>>; 3]) -> (u32, usize) {
    let mut best = (u32::MAX, usize::MAX);
    for v in 0..dist[0].len() {
        if let (Some(x), Some(y), Some(z)) = (dist[0][v], dist[1][v], dist[2][v]) {
            let m = x.max(y).max(z);
            if m < best.0 {
                best = (m, v);
            }
        }
    }
    best
}

fn thin_from(t: &TrianglePath, dist: &[Vec<Option<u32>>; 3]) -> u32 {
    let mut worst = 0;
    for side in 0..3 {
        let (o1, o2) = ((side + 1) % 3, (side + 2) % 3);
        for &u in &t.paths[side] {
            let d = dist[o1][u].unwrap().min(dist[o2][u].unwrap());
            worst = worst.max(d);
        }
    }
    worst
}

/// `min over D of max(d(D, ab), d(D, bc), d(D, ca))` and its witness, by
/// three multi-source BFS passes.
pub fn delta_minmax(g: &Graph, t: &TrianglePath) -> Result<(u32, usize)> {
    Ok(minmax_from(&side_distances(g, t)?))
}

/// Smallest `δ` such that every side lies in the `δ`-neighbourhood of the
/// union of the other two.
pub fn delta_thin_min(g: &Graph, t: &TrianglePath) -> Result<u32> {
    Ok(thin_from(t, &side_distances(g, t)?))
}

pub fn delta_stat(g: &Graph, t: TrianglePath) -> Result<DeltaStat> {
    let dist = side_distances(g, &t)?;
    let (delta_minmax, witness) = minmax_from(&dist);
    let delta_thin = thin_from(&t, &dist);
    Ok(DeltaStat {
        triangle: t,
        delta_minmax,
        delta_thin,
        witness,
    })
}
