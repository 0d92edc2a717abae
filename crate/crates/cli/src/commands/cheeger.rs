use ergeom::graph::giant_component;
use ergeom::spectral::{cheeger_exact, cheeger_sandwich, cheeger_sweep, lambda0, SandwichReport};
use ergeom::{Error, Family, GenSpec, Graph};
use rayon::prelude::*;

use super::family::{gnp_probability, parse_fixture};
use crate::config::{key, ConfigError, KeySpec, Need, Resolved};
use crate::output::{num, Csv, RunContext};
use crate::CliError;

pub const KEYS: &[KeySpec] = &[
    key("family", Need::Default("fixtures"), "fixtures or gnp"),
    key(
        "fixtures",
        Need::Default("path:4,cycle:4,complete:4,star:5"),
        "fixture list: path:N, cycle:N, star:N, complete:N, grid:RxC",
    ),
    key("n", Need::Optional, "vertex count for gnp"),
    key("d", Need::Optional, "mean degree for gnp (p = d/n)"),
    key("p", Need::Optional, "edge probability for gnp instead of d"),
    key("seed", Need::Optional, "master seed (required for gnp)"),
    key("realizations", Need::Default("50"), "gnp realizations"),
    key("method", Need::Default("auto"), "auto (exact up to 20 vertices), exact or sweep"),
    key("dense_cap", Need::Default("3000"), "largest dimension for the dense eigensolver"),
];

#[derive(Clone, Copy)]
enum Method {
    Auto,
    Exact,
    Sweep,
}

fn evaluate(g: &Graph, method: Method, dense_cap: usize) -> ergeom::Result<SandwichReport> {
    let cheeger = match method {
        Method::Auto => return cheeger_sandwich(g, dense_cap),
        Method::Exact => cheeger_exact(g)?,
        Method::Sweep => cheeger_sweep(g, dense_cap)?,
    };
    let l0 = lambda0(g, dense_cap)?;
    let h = cheeger.value;
    let left_bound = 2.0 * h;
    let right_bound = 1.0 - (1.0 - h * h).max(0.0).sqrt();
    let slack = 1e-9;
    Ok(SandwichReport {
        left_holds: l0 <= left_bound + slack,
        right_holds: cheeger.exact.then_some(l0 + slack >= right_bound),
        cheeger,
        lambda0: l0,
        left_bound,
        right_bound,
    })
}

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let method = match cfg.str("method")? {
        "auto" => Method::Auto,
        "exact" => Method::Exact,
        "sweep" => Method::Sweep,
        other => {
            return Err(ConfigError::key("method", format!("expected auto, exact or sweep, got {other:?}")).into())
        }
    };
    let dense_cap: usize = cfg.get("dense_cap")?;
    // (n, seed, graph); fixtures report seed 0
    let graphs: Vec<(u64, Graph)> = match cfg.str("family")? {
        "fixtures" => cfg
            .list::<String>("fixtures")?
            .iter()
            .map(|f| {
                let kind = parse_fixture("fixtures", f)?;
                Ok((0, ergeom::generators::gen_fixture(kind).map_err(|e| ConfigError::key("fixtures", e.to_string()))?))
            })
            .collect::<Result<_, ConfigError>>()?,
        "gnp" => {
            let n: usize = cfg.get("n")?;
            let p = gnp_probability(cfg, n)?;
            let seed: u64 = cfg.get("seed")?;
            let specs = GenSpec::realizations(Family::Gnp { n, p }, seed, cfg.get("realizations")?);
            ctx.derived_seeds
                .insert("realizations".into(), specs.iter().map(GenSpec::derived_seed).collect());
            specs
                .par_iter()
                .map(|s| Ok((s.derived_seed(), giant_component(&s.realize()?).graph)))
                .collect::<ergeom::Result<_>>()?
        }
        other => return Err(ConfigError::key("family", format!("expected fixtures or gnp, got {other:?}")).into()),
    };

    let mut csv = Csv::new(&["n", "seed", "h_value", "exact_flag", "lambda0", "left_bound", "right_bound"]);
    let mut skipped = 0usize;
    let reports = graphs
        .par_iter()
        .map(|(seed, g)| {
            if g.n() < 2 {
                return Ok(None);
            }
            evaluate(g, method, dense_cap).map(|r| Some((*seed, g.n(), r)))
        })
        .collect::<ergeom::Result<Vec<_>>>()?;
    let mut all_hold = true;
    let mut violations = Vec::new();
    for entry in reports {
        let Some((seed, n, r)) = entry else {
            skipped += 1;
            continue;
        };
        if !r.holds() {
            all_hold = false;
            violations.push(format!("n={n} seed={seed} h={} lambda0={}", r.cheeger.value, r.lambda0));
        }
        csv.row(vec![
            n.to_string(),
            seed.to_string(),
            num(r.cheeger.value),
            r.cheeger.exact.to_string(),
            num(r.lambda0),
            num(r.left_bound),
            num(r.right_bound),
        ]);
    }
    if skipped > 0 {
        csv.trailer(format!("skipped_trivial_giants={skipped}"));
    }
    csv.trailer(format!("sandwich_holds={all_hold}"));
    ctx.write_csv("cheeger.csv", &csv)?;
    ctx.result("sandwich_holds", all_hold);
    ctx.result("graphs", csv.len());
    if !violations.is_empty() {
        return Err(Error::SandwichViolation(violations.join("; ")).into());
    }
    Ok(())
}
