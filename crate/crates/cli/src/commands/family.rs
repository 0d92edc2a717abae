//! Graph family selection from config keys.

use ergeom::generators::DEFAULT_MAX_NODES;
use ergeom::{Family, Fixture, OffspringLaw};

use crate::config::{key, ConfigError, KeySpec, Need, Resolved};

pub const FAMILY: KeySpec = key(
    "family",
    Need::Default("gnp"),
    "graph family: gnp, truncated_tree, galton_watson, path, cycle, grid, star, complete",
);
pub const N: KeySpec = key("n", Need::Optional, "vertex count (gnp and fixtures)");
pub const P: KeySpec = key("p", Need::Optional, "edge probability for gnp (alternative to d)");
pub const D: KeySpec = key("d", Need::Optional, "mean degree d for gnp (p = d/n), or tree degree");
pub const DEPTH: KeySpec = key("depth", Need::Optional, "tree depth (truncated_tree, galton_watson)");
pub const LAW: KeySpec = key(
    "law",
    Need::Optional,
    "offspring law: poisson:<mean> or comma-separated p0,p1,... (galton_watson)",
);
pub const MAX_NODES: KeySpec = key("max_nodes", Need::Optional, "node cap for galton_watson");
pub const ROWS: KeySpec = key("rows", Need::Optional, "grid rows");
pub const COLS: KeySpec = key("cols", Need::Optional, "grid columns");

pub fn family_from(cfg: &Resolved, allowed: &[&str]) -> Result<Family, ConfigError> {
    let name = cfg.str("family")?;
    if !allowed.contains(&name) {
        return Err(ConfigError::key(
            "family",
            format!("expected one of {}, got {name:?}", allowed.join(", ")),
        ));
    }
    Ok(match name {
        "gnp" => {
            let n: usize = cfg.get("n")?;
            Family::Gnp {
                n,
                p: gnp_probability(cfg, n)?,
            }
        }
        "truncated_tree" => {
            let d: usize = cfg.get("d")?;
            if d < 2 {
                return Err(ConfigError::key("d", "tree degree must be at least 2"));
            }
            Family::TruncatedTree {
                d,
                depth: cfg.get("depth")?,
            }
        }
        "galton_watson" => Family::GaltonWatson {
            law: parse_law(cfg.str("law")?)?,
            max_depth: cfg.get("depth")?,
            max_nodes: cfg.opt("max_nodes")?.unwrap_or(DEFAULT_MAX_NODES),
        },
        "grid" => Family::Fixture(Fixture::Grid(cfg.get("rows")?, cfg.get("cols")?)),
        "path" => Family::Fixture(Fixture::Path(cfg.get("n")?)),
        "cycle" => Family::Fixture(Fixture::Cycle(cfg.get("n")?)),
        "star" => Family::Fixture(Fixture::Star(cfg.get("n")?)),
        "complete" => Family::Fixture(Fixture::Complete(cfg.get("n")?)),
        other => unreachable!("family {other} passed the allow-list"),
    })
}

/// Edge probability from `p`, or from `d` as `d / n`.
pub fn gnp_probability(cfg: &Resolved, n: usize) -> Result<f64, ConfigError> {
    let p = match (cfg.opt::<f64>("p")?, cfg.opt::<f64>("d")?) {
        (Some(_), Some(_)) => return Err(ConfigError::key("p", "set only one of p and d")),
        (Some(p), None) => p,
        (None, Some(d)) => {
            if n == 0 {
                return Err(ConfigError::key("n", "must be positive when d is given"));
            }
            d / n as f64
        }
        (None, None) => return Err(ConfigError::key("d", "gnp needs d or p")),
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(ConfigError::key(
            if cfg.has("p") { "p" } else { "d" },
            format!("edge probability {p} outside [0, 1]"),
        ));
    }
    Ok(p)
}

pub fn parse_law(text: &str) -> Result<OffspringLaw, ConfigError> {
    let bad = |m: String| ConfigError::key("law", m);
    match text.strip_prefix("poisson:") {
        Some(mean) => {
            let mean: f64 = mean.trim().parse().map_err(|e| bad(format!("{e}")))?;
            OffspringLaw::poisson(mean).map_err(|e| bad(e.to_string()))
        }
        None => {
            let probs = text
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| bad(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            OffspringLaw::new(probs).map_err(|e| bad(e.to_string()))
        }
    }
}

/// `path:4`, `cycle:6`, `star:5`, `complete:4`, `grid:3x4`.
pub fn parse_fixture(key_name: &str, text: &str) -> Result<Fixture, ConfigError> {
    let bad = |m: &str| ConfigError::key(key_name, format!("{m} in {text:?}"));
    let (kind, size) = text.trim().split_once(':').ok_or_else(|| bad("expected kind:size"))?;
    let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("bad size"));
    Ok(match kind.trim() {
        "path" => Fixture::Path(int(size)?),
        "cycle" => Fixture::Cycle(int(size)?),
        "star" => Fixture::Star(int(size)?),
        "complete" => Fixture::Complete(int(size)?),
        "grid" => {
            let (r, c) = size.split_once('x').ok_or_else(|| bad("grid size must be RxC"))?;
            Fixture::Grid(int(r)?, int(c)?)
        }
        _ => return Err(bad("unknown fixture kind")),
    })
}

/// Reference McKay degree for a family, when one is meaningful.
pub fn natural_degree(family: &Family) -> Option<usize> {
    match family {
        Family::Gnp { n, p } => Some((p * *n as f64).round() as usize),
        Family::TruncatedTree { d, .. } => Some(*d),
        Family::GaltonWatson { law, .. } => Some(law.mean().round() as usize + 1),
        Family::Fixture(_) => None,
    }
    .filter(|&d| d >= 3)
}
