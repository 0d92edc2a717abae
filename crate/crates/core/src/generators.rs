//! Random and deterministic graph families.
//!
//! Every generator emits a canonical [`Graph`] on dense vertex labels. Random
//! families are pure functions of their parameters and a 64-bit seed.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::{derive_seed, rng_from_seed, Rng};

/// Below this edge probability `gen_gnp` skips over absent pairs with
/// geometric jumps instead of flipping a coin per pair.
pub const SKIP_SAMPLING_THRESHOLD: f64 = 0.1;

/// Default node cap for Galton–Watson growth.
pub const DEFAULT_MAX_NODES: usize = 1_000_000;

const LAW_SUM_TOLERANCE: f64 = 1e-12;
const POISSON_TAIL_MASS: f64 = 1e-12;

/// Offspring distribution `p_0, p_1, ..., p_K` of a branching process.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringLaw {
    probs: Vec<f64>,
    mean: f64,
}

impl OffspringLaw {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidLaw("no probabilities".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidLaw(format!("probability {p} is negative or not finite")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > LAW_SUM_TOLERANCE {
            return Err(Error::InvalidLaw(format!("probabilities sum to {sum}")));
        }
        let mean = probs.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
        Ok(OffspringLaw { probs, mean })
    }

    /// Poisson(`d`) offspring, with the tail cut once the cumulative mass
    /// passes `1 - 1e-12` and the remainder renormalized.
    pub fn poisson(d: f64) -> Result<Self> {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidLaw(format!("Poisson mean {d}")));
        }
        if d == 0.0 {
            return Self::new(vec![1.0]);
        }
        let ln_d = d.ln();
        let mut probs = Vec::new();
        let mut ln_fact = 0.0;
        let mut cumulative = 0.0;
        for i in 0usize.. {
            if i > 0 {
                ln_fact += (i as f64).ln();
            }
            let p = (-d + i as f64 * ln_d - ln_fact).exp();
            probs.push(p);
            cumulative += p;
            if cumulative > 1.0 - POISSON_TAIL_MASS {
                break;
            }
            // Rounding can leave the running sum a hair short of the cut.
            if i as f64 > d && p < f64::EPSILON * cumulative {
                break;
            }
        }
        for p in &mut probs {
            *p /= cumulative;
        }
        Self::new(probs)
    }

    /// All mass on exactly `k` children.
    pub fn deterministic(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self::new(probs).expect("point mass is a valid law")
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Smallest child count with positive probability.
    pub fn min_support(&self) -> usize {
        self.probs
            .iter()
            .position(|&p| p > 0.0)
            .expect("a valid law has positive mass somewhere")
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.probs).expect("validated law")
    }
}

/// Each of the `n(n-1)/2` pairs is an edge independently with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = rng_from_seed(seed);
    let edges = if p == 0.0 || n < 2 {
        Vec::new()
    } else if p < SKIP_SAMPLING_THRESHOLD {
        skip_sampled_pairs(n, p, &mut rng)
    } else {
        let mut edges = Vec::new();
        for v in 1..n {
            for u in 0..v {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        edges
    };
    Graph::from_edges(n, &edges)
}

/// Walks the pairs `(w, v)`, `w < v`, in the order (0,1), (0,2), (1,2),
/// (0,3), ... jumping over `floor(ln(1-r) / ln(1-p))` absent pairs at a time.
/// The jump is geometric with success probability `p`, which is exactly the
/// gap distribution of independent per-pair coin flips.
fn skip_sampled_pairs(n: usize, p: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let expected = p * (n as f64) * (n as f64 - 1.0) / 2.0;
    let mut edges = Vec::with_capacity((expected * 1.1) as usize + 16);
    let log_q = (-p).ln_1p();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let jump = ((-r).ln_1p() / log_q).floor();
        // A jump past every remaining pair ends the walk.
        if jump >= (n * n) as f64 {
            break;
        }
        w += 1 + jump as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges
}

/// A Galton–Watson tree grown breadth-first from the root (vertex 0).
#[derive(Debug, Clone)]
pub struct GaltonWatsonTree {
    pub graph: Graph,
    /// Generation of each vertex.
    pub depth: Vec<u32>,
    /// Drawn child count, `None` for vertices that never reproduced (at the
    /// depth limit, or left over when the node cap stopped growth).
    pub children: Vec<Option<usize>>,
    /// Growth stopped because the node cap would have been exceeded.
    pub truncated: bool,
}

impl GaltonWatsonTree {
    /// Depth of the deepest vertex.
    pub fn height(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}

pub fn gen_galton_watson(
    law: &OffspringLaw,
    max_depth: u32,
    max_nodes: usize,
    seed: u64,
) -> Result<GaltonWatsonTree> {
    if max_nodes == 0 {
        return Err(Error::InvalidParams("max_nodes must be at least 1".into()));
    }
    let sampler = law.sampler();
    let mut rng = rng_from_seed(seed);
    let mut depth = vec![0u32];
    let mut children = Vec::new();
    let mut edges = Vec::new();
    let mut truncated = false;
    // Vertices are created in BFS order, so the queue is just an index.
    let mut next = 0;
    while next < depth.len() {
        let v = next;
        next += 1;
        if truncated || depth[v] >= max_depth {
            children.push(None);
            continue;
        }
        let k = sampler.sample(&mut rng);
        if depth.len() + k > max_nodes {
            truncated = true;
            children.push(None);
            continue;
        }
        children.push(Some(k));
        for _ in 0..k {
            edges.push((v, depth.len()));
            depth.push(depth[v] + 1);
        }
    }
    Ok(GaltonWatsonTree {
        graph: Graph::from_edges(depth.len(), &edges)?,
        depth,
        children,
        truncated,
    })
}

/// Vertex count of the radius-`depth` ball in the `d`-regular tree.
pub fn truncated_tree_size(d: usize, depth: u32) -> usize {
    if d == 2 {
        return 2 * depth as usize + 1;
    }
    // 1 + d * ((d-1)^M - 1) / (d-2)
    1 + d * ((d - 1).pow(depth) - 1) / (d - 2)
}

/// Ball of radius `depth` around a vertex of the infinite `d`-regular tree:
/// the root has `d` children, every other internal vertex `d - 1`.
pub fn gen_truncated_tree(d: usize, depth: u32) -> Result<Graph> {
    if d < 2 {
        return Err(Error::InvalidDegree(d as f64));
    }
    let size = truncated_tree_size(d, depth);
    let mut edges = Vec::with_capacity(size.saturating_sub(1));
    let mut level = vec![0usize];
    let mut count = 1;
    for gen in 0..depth {
        let fanout = if gen == 0 { d } else { d - 1 };
        let mut next = Vec::with_capacity(level.len() * fanout);
        for &v in &level {
            for _ in 0..fanout {
                edges.push((v, count));
                next.push(count);
                count += 1;
            }
        }
        level = next;
    }
    debug_assert_eq!(count, size);
    Graph::from_edges(count, &edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Path(usize),
    Cycle(usize),
    Grid(usize, usize),
    /// `K_{1,k}` with the center at vertex 0.
    Star(usize),
    Complete(usize),
}

pub fn gen_fixture(kind: Fixture) -> Result<Graph> {
    let bad = |msg: String| Err(Error::InvalidDimension(msg));
    let (n, edges): (usize, Vec<(usize, usize)>) = match kind {
        Fixture::Path(n) => {
            if n == 0 {
                return bad("path needs at least one vertex".into());
            }
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        Fixture::Cycle(n) => {
            if n < 3 {
                return bad(format!("cycle needs at least 3 vertices, got {n}"));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        Fixture::Grid(rows, cols) => {
            if rows == 0 || cols == 0 {
                return bad(format!("grid {rows}x{cols}"));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut e = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        e.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        e.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            (rows * cols, e)
        }
        Fixture::Star(k) => {
            if k == 0 {
                return bad("star needs at least one leaf".into());
            }
            (k + 1, (1..=k).map(|i| (0, i)).collect())
        }
        Fixture::Complete(n) => {
            if n == 0 {
                return bad("complete graph needs at least one vertex".into());
            }
            let mut e = Vec::new();
            for v in 1..n {
                for u in 0..v {
                    e.push((u, v));
                }
            }
            (n, e)
        }
    };
    Graph::from_edges(n, &edges)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gnp { n: usize, p: f64 },
    GaltonWatson {
        law: OffspringLaw,
        max_depth: u32,
        max_nodes: usize,
    },
    TruncatedTree { d: usize, depth: u32 },
    Fixture(Fixture),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gnp { .. } => "gnp",
            Family::GaltonWatson { .. } => "galton_watson",
            Family::TruncatedTree { .. } => "truncated_tree",
            Family::Fixture(Fixture::Path(_)) => "path",
            Family::Fixture(Fixture::Cycle(_)) => "cycle",
            Family::Fixture(Fixture::Grid(..)) => "grid",
            Family::Fixture(Fixture::Star(_)) => "star",
            Family::Fixture(Fixture::Complete(_)) => "complete",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::Gnp { .. } | Family::GaltonWatson { .. })
    }
}

/// One realization of a graph family: the family parameters, a master seed
/// and the realization index that selects the derived stream.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
    pub realization_index: u64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64, realization_index: u64) -> Self {
        GenSpec {
            family,
            seed,
            realization_index,
        }
    }

    /// `count` consecutive realizations under one master seed.
    pub fn realizations(family: Family, seed: u64, count: u64) -> Vec<GenSpec> {
        (0..count)
            .map(|i| GenSpec::new(family.clone(), seed, i))
            .collect()
    }

    pub fn derived_seed(&self) -> u64 {
        derive_seed(self.seed, self.realization_index)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::Gnp { p, .. } if !(0.0..=1.0).contains(p) => Err(Error::InvalidProbability(*p)),
            Family::TruncatedTree { d, .. } if *d < 2 => Err(Error::InvalidDegree(*d as f64)),
            Family::GaltonWatson { max_nodes: 0, .. } => {
                Err(Error::InvalidParams("max_nodes must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn realize(&self) -> Result<Graph> {
        self.validate()?;
        match &self.family {
            Family::Gnp { n, p } => gen_gnp(*n, *p, self.derived_seed()),
            Family::GaltonWatson {
                law,
                max_depth,
                max_nodes,
            } => Ok(gen_galton_watson(law, *max_depth, *max_nodes, self.derived_seed())?.graph),
            Family::TruncatedTree { d, depth } => gen_truncated_tree(*d, *depth),
            Family::Fixture(kind) => gen_fixture(*kind),
        }
    }

    /// `key=value` pairs in the CLI config format.
    pub fn to_config_pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![("family".to_string(), self.family.name().to_string())];
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        match &self.family {
            Family::Gnp { n, p } => {
                put("n", n.to_string());
                put("p", p.to_string());
            }
            Family::GaltonWatson {
                law,
                max_depth,
                max_nodes,
            } => {
                let probs: Vec<String> = law.probs().iter().map(|p| p.to_string()).collect();
                put("law", probs.join(","));
                put("depth", max_depth.to_string());
                put("max_nodes", max_nodes.to_string());
            }
            Family::TruncatedTree { d, depth } => {
                put("d", d.to_string());
                put("depth", depth.to_string());
            }
            Family::Fixture(Fixture::Grid(r, c)) => {
                put("rows", r.to_string());
                put("cols", c.to_string());
            }
            Family::Fixture(
                Fixture::Path(n) | Fixture::Cycle(n) | Fixture::Star(n) | Fixture::Complete(n),
            ) => put("n", n.to_string()),
        }
        out.push(("seed".into(), self.seed.to_string()));
        out.push(("realization".into(), self.realization_index.to_string()));
        out
    }

    /// Inverse of [`GenSpec::to_config_pairs`]. Also accepts `d` in place of
    /// `p` for `gnp` (meaning `p = d / n`) and `law=poisson:<d>`.
    pub fn from_config_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let map: std::collections::BTreeMap<&str, &str> = pairs.into_iter().collect();
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::InvalidParams(format!("missing key {k}")))
        };
        fn parse<T: std::str::FromStr>(k: &str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad value for {k}: {v:?}")))
        }
        let num = |k: &str| -> Result<usize> { parse(k, get(k)?) };
        let family = match get("family")? {
            "gnp" => {
                let n = num("n")?;
                let p = match (map.get("p"), map.get("d")) {
                    (Some(p), _) => parse("p", p)?,
                    (None, Some(d)) => parse::<f64>("d", d)? / n as f64,
                    (None, None) => return Err(Error::InvalidParams("missing key p".into())),
                };
                Family::Gnp { n, p }
            }
            "galton_watson" => {
                let law_text = get("law")?;
                let law = match law_text.strip_prefix("poisson:") {
                    Some(d) => OffspringLaw::poisson(parse("law", d)?)?,
                    None => OffspringLaw::new(
                        law_text
                            .split(',')
                            .map(|t| parse("law", t))
                            .collect::<Result<_>>()?,
                    )?,
                };
                Family::GaltonWatson {
                    law,
                    max_depth: parse("depth", get("depth")?)?,
                    max_nodes: match map.get("max_nodes") {
                        Some(v) => parse("max_nodes", v)?,
                        None => DEFAULT_MAX_NODES,
                    },
                }
            }
            "truncated_tree" => Family::TruncatedTree {
                d: num("d")?,
                depth: parse("depth", get("depth")?)?,
            },
            "path" => Family::Fixture(Fixture::Path(num("n")?)),
            "cycle" => Family::Fixture(Fixture::Cycle(num("n")?)),
            "star" => Family::Fixture(Fixture::Star(num("n")?)),
            "complete" => Family::Fixture(Fixture::Complete(num("n")?)),
            "grid" => Family::Fixture(Fixture::Grid(num("rows")?, num("cols")?)),
            other => return Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        };
        let seed = map.get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(0);
        let realization_index = map
            .get("realization")
            .map(|v| parse("realization", v))
            .transpose()?
            .unwrap_or(0);
        let spec = GenSpec::new(family, seed, realization_index);
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .to_config_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        f.write_str(&pairs.join(" "))
    }
}
