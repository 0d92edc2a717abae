//! Shared inputs for the criterion benches.

use ergeom::generators::gen_gnp;
use ergeom::graph::giant_component;
use ergeom::Graph;

/// Giant component of `G(n, d/n)` for a fixed seed.
pub fn gnp_giant(n: usize, d: f64, seed: u64) -> Graph {
    giant_component(&gen_gnp(n, d / n as f64, seed).expect("valid probability")).graph
}
