use ergeom::hyperbolicity::{rescale_collapse, sample_triangle_summaries, CollapseResult};
use ergeom::seed::derive_seed;
use ergeom::spectral::spectral_domain;
use ergeom::{CurvatureProfile, DistanceMatrix, Family, GenSpec, SideMode};
use rayon::prelude::*;
use serde_json::json;

use super::family::{self, parse_law};
use crate::config::{key, ConfigError, KeySpec, Need, Resolved};
use crate::output::{num, Csv, RunContext};
use crate::CliError;

pub const KEYS: &[KeySpec] = &[
    key("family", Need::Default("gnp"), "gnp, truncated_tree or galton_watson"),
    key("n_list", Need::Default("1000,2000,4000"), "ascending sizes for gnp"),
    key("d", Need::Default("2"), "mean degree (gnp, p = d/n) or tree degree"),
    family::DEPTH,
    family::LAW,
    family::MAX_NODES,
    key("seed", Need::Required, "master seed"),
    key("realizations", Need::Default("40"), "realizations per size"),
    key("triangles", Need::Default("100000"), "sampled vertex triples per realization"),
    key("collapse", Need::Default("true"), "fit the rescaling collapse across sizes (gnp)"),
];

/// Per-realization profiles for one size, in realization order.
#[derive(Debug, Clone)]
pub struct SizeRun {
    pub n: usize,
    pub d: f64,
    pub seeds: Vec<u64>,
    pub shortest: Vec<CurvatureProfile>,
    pub longest: Vec<CurvatureProfile>,
}

impl SizeRun {
    pub fn pooled(&self, mode: SideMode) -> ergeom::Result<CurvatureProfile> {
        CurvatureProfile::pooled(match mode {
            SideMode::Shortest => &self.shortest,
            SideMode::Longest => &self.longest,
        })
    }
}

/// Generates each realization, keeps its giant component (whole graph for
/// trees), samples `triangles` uniform vertex triples and bins them by
/// shortest and by longest side.
pub fn size_profiles(
    fam: Family,
    n: usize,
    d: f64,
    seed: u64,
    realizations: u64,
    triangles: usize,
) -> ergeom::Result<SizeRun> {
    let specs = GenSpec::realizations(fam, seed, realizations);
    let parts = specs
        .par_iter()
        .map(|spec| {
            let g = spectral_domain(spec)?;
            let dm = DistanceMatrix::new(&g)?;
            let samples =
                sample_triangle_summaries(&g, &dm, triangles, derive_seed(spec.derived_seed(), 1))?;
            let diameter = dm.diameter();
            let s = CurvatureProfile::from_samples(&samples, SideMode::Shortest)?
                .with_meta(n, d, diameter);
            let l = CurvatureProfile::from_samples(&samples, SideMode::Longest)?
                .with_meta(n, d, diameter);
            Ok((s, l))
        })
        .collect::<ergeom::Result<Vec<_>>>()?;
    let (shortest, longest) = parts.into_iter().unzip();
    Ok(SizeRun {
        n,
        d,
        seeds: specs.iter().map(GenSpec::derived_seed).collect(),
        shortest,
        longest,
    })
}

/// G(n, d/n) runs over ascending sizes; size `k` uses master seed
/// `derive_seed(seed, k)`.
pub fn gnp_runs(
    sizes: &[usize],
    d: f64,
    seed: u64,
    realizations: u64,
    triangles: usize,
) -> ergeom::Result<Vec<SizeRun>> {
    sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let fam = Family::Gnp { n, p: d / n as f64 };
            size_profiles(fam, n, d, derive_seed(seed, k as u64), realizations, triangles)
        })
        .collect()
}

pub fn collapse(runs: &[SizeRun]) -> ergeom::Result<CollapseResult> {
    let pooled = runs
        .iter()
        .map(|r| r.pooled(SideMode::Shortest))
        .collect::<ergeom::Result<Vec<_>>>()?;
    rescale_collapse(&pooled)
}

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let seed: u64 = cfg.get("seed")?;
    let realizations: u64 = cfg.get("realizations")?;
    if realizations == 0 {
        return Err(ConfigError::key("realizations", "must be at least 1").into());
    }
    let triangles: usize = cfg.get("triangles")?;
    if triangles == 0 {
        return Err(ConfigError::key("triangles", "must be at least 1").into());
    }
    let family_name = cfg.str("family")?.to_string();
    let runs = match family_name.as_str() {
        "gnp" => {
            let sizes: Vec<usize> = cfg.list("n_list")?;
            if sizes.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ConfigError::key("n_list", "sizes must be strictly ascending").into());
            }
            let d: f64 = cfg.get("d")?;
            if let Some(&n) = sizes.iter().find(|&&n| d < 0.0 || d > n as f64) {
                return Err(ConfigError::key("d", format!("d/n outside [0, 1] at n={n}")).into());
            }
            gnp_runs(&sizes, d, seed, realizations, triangles)?
        }
        "truncated_tree" => {
            let d: usize = cfg.get("d")?;
            if d < 2 {
                return Err(ConfigError::key("d", "tree degree must be at least 2").into());
            }
            let depth: u32 = cfg.get("depth")?;
            let n = ergeom::generators::truncated_tree_size(d, depth);
            let fam = Family::TruncatedTree { d, depth };
            vec![size_profiles(fam, n, d as f64, seed, realizations, triangles)?]
        }
        "galton_watson" => {
            let law = parse_law(cfg.str("law")?)?;
            let d = law.mean();
            let fam = Family::GaltonWatson {
                law,
                max_depth: cfg.get("depth")?,
                max_nodes: cfg
                    .opt("max_nodes")?
                    .unwrap_or(ergeom::generators::DEFAULT_MAX_NODES),
            };
            // tree sizes vary per realization; 0 marks "not a fixed size"
            vec![size_profiles(fam, 0, d, seed, realizations, triangles)?]
        }
        other => {
            return Err(ConfigError::key(
                "family",
                format!("expected gnp, truncated_tree or galton_watson, got {other:?}"),
            )
            .into())
        }
    };

    let mut csv = Csv::new(&["n", "d", "seed_count", "mode", "l_bin", "mean_delta", "std_error", "count"]);
    let mut per_size = serde_json::Map::new();
    for run in &runs {
        ctx.derived_seeds.insert(format!("n={}", run.n), run.seeds.clone());
        let mut summary = serde_json::Map::new();
        for mode in [SideMode::Shortest, SideMode::Longest] {
            let pooled = run.pooled(mode)?;
            for (l, mean, se, count) in pooled.rows() {
                csv.row(vec![
                    run.n.to_string(),
                    num(run.d),
                    pooled.realization_count.to_string(),
                    mode.to_string(),
                    l.to_string(),
                    num(mean),
                    num(se),
                    count.to_string(),
                ]);
            }
            if mode == SideMode::Shortest {
                summary.insert("discarded_degenerate".into(), json!(pooled.discarded));
                summary.insert("mean_diameter".into(), json!(pooled.mean_diameter()));
            }
            if let Some(p) = pooled.plateau() {
                summary.insert(
                    format!("plateau_{mode}"),
                    json!({"mean": p.mean, "std_error": p.std_error, "bins": p.bins}),
                );
            }
        }
        per_size.insert(run.n.to_string(), serde_json::Value::Object(summary));
    }
    ctx.write_csv("curvature.csv", &csv)?;
    ctx.result("sizes", serde_json::Value::Object(per_size));
    ctx.result("triangle_distribution", "uniform_iid_vertex_triples");

    if family_name == "gnp" && runs.len() >= 2 && cfg.flag("collapse")? {
        let fit = collapse(&runs)?;
        let mut ccsv = Csv::new(&["n", "l_shifted", "delta_shifted"]);
        ccsv.comment(format!(
            "c1={} c2={} residual={} unshifted_residual={} n_ref={}",
            num(fit.c1),
            num(fit.c2),
            num(fit.residual),
            num(fit.unshifted_residual),
            fit.n_ref
        ));
        for (n, points) in &fit.curves {
            for (l, delta) in points {
                ccsv.row(vec![n.to_string(), num(*l), num(*delta)]);
            }
        }
        ctx.write_csv("collapse.csv", &ccsv)?;
        ctx.result(
            "collapse",
            json!({
                "c1": fit.c1,
                "c2": fit.c2,
                "residual": fit.residual,
                "unshifted_residual": fit.unshifted_residual,
                "n_ref": fit.n_ref,
            }),
        );
    }
    Ok(())
}
