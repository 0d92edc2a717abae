use ergeom::asymptotics::{
    fat_triangle_lower_bound, giant_fraction, monte_carlo_loop_probability, regular_tree_gap,
    rho_and_bounds, rho_below_one_check,
};
use ergeom::{Error, LoopParams};

use crate::config::{key, ConfigError, KeySpec, Need, Resolved};
use crate::output::{num, Csv, RunContext};
use crate::CliError;

pub const KEYS: &[KeySpec] = &[
    key("d_list", Need::Default("1.5,2,3,5"), "mean degrees"),
    key("delta_list", Need::Default("3,6,12"), "loop lengths Δ"),
    key("n_list", Need::Default("1000,10000,100000"), "graph sizes"),
    key("mc", Need::Default("false"), "also run the Monte Carlo loop oracle"),
    key("mc_grid", Need::Default("10:2:3"), "Monte Carlo points as n:d:Δ, comma-separated"),
    key("mc_samples", Need::Default("10000000"), "Monte Carlo samples per point"),
    key("seed", Need::Optional, "master seed (required with mc)"),
];

fn parse_mc_point(text: &str) -> Result<(u64, f64, u32), ConfigError> {
    let bad = || ConfigError::key("mc_grid", format!("expected n:d:Δ, got {text:?}"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [n, d, k] = parts[..] else { return Err(bad()) };
    Ok((
        n.parse().map_err(|_| bad())?,
        d.parse().map_err(|_| bad())?,
        k.parse().map_err(|_| bad())?,
    ))
}

/// One theory.csv row plus whether the ρ sandwich held.
fn theory_row(d: f64, k: u32, n: u64) -> ergeom::Result<(Vec<String>, bool)> {
    if !(d > 1.0) {
        return Err(Error::SubcriticalDegree(d));
    }
    let b = rho_and_bounds(&LoopParams::new(n, d, k)?)?;
    let row = vec![
        num(d),
        k.to_string(),
        n.to_string(),
        num(b.q.log10_q()),
        num(b.rho),
        num(b.rho_lower),
        num(b.rho_upper),
        num(b.rho_limit),
        num(b.p4_lower),
        b.threshold_ok.to_string(),
    ];
    Ok((row, b.sandwich_holds()))
}

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let ds: Vec<f64> = cfg.list("d_list")?;
    let deltas: Vec<u32> = cfg.list("delta_list")?;
    let ns: Vec<u64> = cfg.list("n_list")?;

    let mut csv = Csv::new(&[
        "d", "Delta", "n", "q_log10", "rho", "rho_lower", "rho_upper", "rho_limit", "p4_lower",
        "threshold_ok",
    ]);
    let mut errors = 0usize;
    let mut sandwich_rows = 0usize;
    let mut sandwich_ok = 0usize;
    for &d in &ds {
        for &k in &deltas {
            for &n in &ns {
                match theory_row(d, k, n) {
                    Ok((row, holds)) => {
                        sandwich_rows += 1;
                        sandwich_ok += holds as usize;
                        csv.row(row);
                    }
                    Err(e) => {
                        errors += 1;
                        csv.trailer(format!("d={d},Delta={k},n={n}: {e}"));
                    }
                }
            }
        }
    }
    ctx.write_csv("theory.csv", &csv)?;
    ctx.result("rows", csv.len());
    ctx.result("row_errors", errors);
    ctx.result("sandwich_holds", sandwich_ok == sandwich_rows);

    let mut closed = Csv::new(&["quantity", "argument", "value"]);
    for k in 2..=8usize {
        closed.row(vec!["regular_tree_gap".into(), format!("k={k}"), num(regular_tree_gap(k)?)]);
    }
    for &d in &ds {
        match giant_fraction(d) {
            Ok(g) => closed.row(vec!["giant_fraction".into(), format!("d={d}"), num(g)]),
            Err(e) => closed.trailer(format!("giant_fraction d={d}: {e}")),
        };
        for delta in [0.5, 1.0, 2.0] {
            match fat_triangle_lower_bound(d, delta) {
                Ok(v) => closed.row(vec![
                    "fat_triangle_lower_bound".into(),
                    format!("d={d};delta={delta}"),
                    num(v),
                ]),
                Err(e) => closed.trailer(format!("fat_triangle_lower_bound d={d} delta={delta}: {e}")),
            };
        }
        for &k in &deltas {
            match rho_below_one_check(d, k as f64) {
                Ok(c) => closed.row(vec![
                    "two_rho_limit".into(),
                    format!("d={d};Delta={k}"),
                    num(c.value),
                ]),
                Err(e) => closed.trailer(format!("two_rho_limit d={d} Delta={k}: {e}")),
            };
        }
    }
    ctx.write_csv("closed_forms.csv", &closed)?;

    if cfg.flag("mc")? {
        let seed: u64 = cfg.get("seed")?;
        let samples: u64 = cfg.get("mc_samples")?;
        if samples == 0 {
            return Err(ConfigError::key("mc_samples", "must be positive").into());
        }
        let points = cfg
            .list::<String>("mc_grid")?
            .iter()
            .map(|s| parse_mc_point(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut mc = Csv::new(&["n", "d", "Delta", "samples", "hits", "estimate", "std_error", "q", "z"]);
        let mut seeds = Vec::new();
        let mut max_z: f64 = 0.0;
        for (i, &(n, d, k)) in points.iter().enumerate() {
            let point_seed = ergeom::seed::derive_seed(seed, i as u64);
            seeds.push(point_seed);
            let params = LoopParams::new(n, d, k)?;
            let est = monte_carlo_loop_probability(&params, samples, point_seed)?;
            let q = rho_and_bounds(&params)?.q.q();
            let z = if est.std_error > 0.0 {
                (est.estimate - q) / est.std_error
            } else {
                f64::INFINITY
            };
            max_z = max_z.max(z.abs());
            mc.row(vec![
                n.to_string(),
                num(d),
                k.to_string(),
                samples.to_string(),
                est.hits.to_string(),
                num(est.estimate),
                num(est.std_error),
                num(q),
                num(z),
            ]);
        }
        ctx.derived_seeds.insert("mc_points".into(), seeds);
        ctx.write_csv("theory_mc.csv", &mc)?;
        ctx.result("mc_max_abs_z", max_z);
    }
    Ok(())
}
