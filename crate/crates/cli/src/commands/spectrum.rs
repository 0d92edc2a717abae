use ergeom::mckay::{bulk_distance, mckay_table, DistanceMode};
use ergeom::spectral::{
    atom_mass, build_laplacian, eigenvalues, expand, spectral_domain, truncated_tree_spectrum,
};
use ergeom::{Family, GenSpec, SpectralMeasure};
use rayon::prelude::*;

use super::family::{self, family_from, natural_degree};
use crate::config::{key, ConfigError, KeySpec, Need, Resolved};
use crate::output::{num, Csv, RunContext};
use crate::CliError;

pub const KEYS: &[KeySpec] = &[
    family::FAMILY,
    family::N,
    family::P,
    family::D,
    family::DEPTH,
    family::LAW,
    family::MAX_NODES,
    family::ROWS,
    family::COLS,
    key("seed", Need::Required, "master seed"),
    key("realizations", Need::Default("1"), "number of realizations to average"),
    key("bins", Need::Default("100"), "histogram bins on [0, 2]"),
    key("dense_cap", Need::Default("3000"), "largest dimension for the dense eigensolver"),
    key("mckay_d", Need::Optional, "McKay reference degree (defaults from the family)"),
    key("mckay_points", Need::Default("401"), "grid points in mckay.csv"),
    key("bulk_margin", Need::Default("0.1"), "support margin excluded from the L1 bulk distance"),
];

/// Eigenvalues of one realization, expanded with multiplicity.
fn realization_spectrum(spec: &GenSpec, dense_cap: usize) -> ergeom::Result<Vec<f64>> {
    if let Family::TruncatedTree { d, depth } = spec.family {
        return Ok(expand(&truncated_tree_spectrum(d, depth)?));
    }
    let g = spectral_domain(spec)?;
    eigenvalues(&build_laplacian(&g), dense_cap)
}

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let fam = family_from(
        cfg,
        &["gnp", "truncated_tree", "galton_watson", "path", "cycle", "grid", "star", "complete"],
    )?;
    let seed: u64 = cfg.get("seed")?;
    let realizations: u64 = cfg.get("realizations")?;
    if realizations == 0 {
        return Err(ConfigError::key("realizations", "must be at least 1").into());
    }
    let bins: usize = cfg.get("bins")?;
    if bins == 0 {
        return Err(ConfigError::key("bins", "must be at least 1").into());
    }
    let dense_cap: usize = cfg.get("dense_cap")?;
    let mckay_d = match cfg.opt::<usize>("mckay_d")? {
        Some(d) if d < 3 => return Err(ConfigError::key("mckay_d", "McKay degree must be at least 3").into()),
        Some(d) => Some(d),
        None => natural_degree(&fam),
    };
    let margin: f64 = cfg.get("bulk_margin")?;
    if !(0.0..1.0).contains(&margin) {
        return Err(ConfigError::key("bulk_margin", "must lie in [0, 1)").into());
    }

    let specs = GenSpec::realizations(fam, seed, realizations);
    ctx.derived_seeds
        .insert("realizations".into(), specs.iter().map(GenSpec::derived_seed).collect());
    let spectra = specs
        .par_iter()
        .map(|s| realization_spectrum(s, dense_cap))
        .collect::<ergeom::Result<Vec<_>>>()?;

    let mut eig = Csv::new(&["realization", "index", "eigenvalue"]);
    for (r, values) in spectra.iter().enumerate() {
        for (i, v) in values.iter().enumerate() {
            eig.row(vec![r.to_string(), i.to_string(), num(*v)]);
        }
    }
    ctx.write_csv("eigenvalues.csv", &eig)?;

    let parts: Vec<SpectralMeasure> = spectra
        .into_iter()
        .map(SpectralMeasure::from_eigenvalues)
        .collect();
    let measure = SpectralMeasure::mixture(&parts);
    let hist = measure.histogram(bins);
    let mut hcsv = Csv::new(&["bin_left", "bin_right", "density"]);
    for i in 0..bins {
        hcsv.row(vec![num(hist.left(i)), num(hist.right(i)), num(hist.density(i))]);
    }
    ctx.write_csv("histogram.csv", &hcsv)?;

    ctx.result("realizations", realizations);
    ctx.result("eigenvalue_count", measure.eigenvalues().len());
    ctx.result("atom_mass_at_1", atom_mass(&measure, 1.0, 1e-8));
    if let Some(d) = mckay_d {
        let points: usize = cfg.get("mckay_points")?;
        if points < 2 {
            return Err(ConfigError::key("mckay_points", "need at least 2 points").into());
        }
        let mut mcsv = Csv::new(&["x", "pdf", "cdf"]);
        mcsv.comment(format!("mckay_d={d}"));
        for (x, pdf, cdf) in mckay_table(d, points)? {
            mcsv.row(vec![num(x), num(pdf), num(cdf)]);
        }
        ctx.write_csv("mckay.csv", &mcsv)?;
        ctx.result("mckay_d", d);
        if !measure.is_empty() {
            ctx.result("bulk_ks", bulk_distance(&measure, d, DistanceMode::Ks)?);
            ctx.result(
                "bulk_l1",
                bulk_distance(&measure, d, DistanceMode::L1Bulk { bins, margin })?,
            );
        }
    }
    Ok(())
}
