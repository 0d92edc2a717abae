use ergeom::graph::{giant_component, write_edge_list};
use ergeom::GenSpec;

use super::family::{self, family_from};
use crate::config::{key, KeySpec, Need, Resolved};
use crate::output::RunContext;
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
    key("realization", Need::Default("0"), "realization index under the master seed"),
    key("giant", Need::Default("false"), "keep only the giant component (relabelled)"),
];

pub fn run(cfg: &Resolved, ctx: &mut RunContext) -> Result<(), CliError> {
    let fam = family_from(
        cfg,
        &["gnp", "truncated_tree", "galton_watson", "path", "cycle", "grid", "star", "complete"],
    )?;
    let spec = GenSpec::new(fam, cfg.get("seed")?, cfg.get("realization")?);
    ctx.derived_seeds.insert("realization".into(), vec![spec.derived_seed()]);
    let mut g = spec.realize()?;
    if cfg.flag("giant")? {
        g = giant_component(&g).graph;
    }
    let mut text = Vec::new();
    write_edge_list(&g, &mut text)?;
    ctx.write("graph.edges", &String::from_utf8(text).expect("edge list is ASCII"))?;
    ctx.result("vertices", g.n());
    ctx.result("edges", g.edge_count());
    Ok(())
}
