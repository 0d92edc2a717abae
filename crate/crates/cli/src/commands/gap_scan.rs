use ergeom::spectral::{lambda0, spectral_domain};
use ergeom::stats::quartiles;
use ergeom::{Family, Fixture, GenSpec};
use rayon::prelude::*;

use super::family::gnp_probability;
use crate::config::{key, ConfigError, KeySpec, Need, Resolved};
use crate::output::{num, Csv, RunContext};
use crate::CliError;

pub const KEYS: &[KeySpec] = &[
    key("family", Need::Default("gnp"), "gnp, path, cycle, star or complete"),
    key("n_list", Need::Required, "ascending comma-separated sizes"),
    key("d", Need::Optional, "mean degree for gnp (p = d/n); defaults to 3"),
    key("p", Need::Optional, "fixed edge probability for gnp instead of d"),
    key("seed", Need::Required, "master seed"),
    key("realizations", Need::Default("20"), "realizations per size"),
    key("dense_cap", Need::Default("3000"), "largest dimension for the dense eigensolver"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Decreasing,
    NotDecreasing,
    /// Fewer than two sizes.
    None,
}

impl Verdict {
    pub fn of(medians: &[f64]) -> Self {
        if medians.len() < 2 {
            Verdict::None
        } else if medians.windows(2).all(|w| w[1] < w[0]) {
            Verdict::Decreasing
        } else {
            Verdict::NotDecreasing
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Decreasing => "decreasing",
            Verdict::NotDecreasing => "not_decreasing",
            Verdict::None => "none",
        }
    }
}

fn family_for(cfg: &Resolved, name: &str, n: usize) -> Result<Family, ConfigError> {
    Ok(match name {
        "gnp" => {
            let p = if cfg.has("d") || cfg.has("p") {
                gnp_probability(cfg, n)?
            } else {
                3.0 / n as f64
            };
            Family::Gnp { n, p }
        }
        "path" => Family::Fixture(Fixture::Path(n)),
        "cycle" => Family::Fixture(Fixture::Cycle(n)),
        "star" => Family::Fixture(Fixture::Star(n)),
        "complete" => Family::Fixture(Fixture::Complete(n)),
        other => {
            return Err(ConfigError::key(
                "family",
                format!("expected gnp, path, cycle, star or complete, got {other:?}"),
            ))
        }
    })
}

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let name = cfg.str("family")?.to_string();
    let sizes: Vec<usize> = cfg.list("n_list")?;
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError::key("n_list", "sizes must be strictly ascending").into());
    }
    let seed: u64 = cfg.get("seed")?;
    let realizations: u64 = cfg.get("realizations")?;
    if realizations == 0 {
        return Err(ConfigError::key("realizations", "must be at least 1").into());
    }
    let dense_cap: usize = cfg.get("dense_cap")?;

    let mut csv = Csv::new(&["n", "realizations", "median", "q1", "q3"]);
    let mut medians = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let fam = family_for(cfg, &name, n)?;
        // one master seed per size so adding sizes leaves the others unchanged
        let size_seed = ergeom::seed::derive_seed(seed, k as u64);
        let count = if fam.is_random() { realizations } else { 1 };
        let specs = GenSpec::realizations(fam, size_seed, count);
        ctx.derived_seeds
            .insert(format!("n={n}"), specs.iter().map(GenSpec::derived_seed).collect());
        let gaps = specs
            .par_iter()
            .map(|s| lambda0(&spectral_domain(s)?, dense_cap))
            .collect::<ergeom::Result<Vec<f64>>>()?;
        let q = quartiles(&gaps)?;
        medians.push(q.median);
        csv.row(vec![
            n.to_string(),
            count.to_string(),
            num(q.median),
            num(q.q1),
            num(q.q3),
        ]);
    }
    let verdict = Verdict::of(&medians);
    csv.trailer(format!("verdict={}", verdict.as_str()));
    ctx.write_csv("gap.csv", &csv)?;
    ctx.result("verdict", verdict.as_str());
    ctx.result("medians", medians);
    Ok(())
}
