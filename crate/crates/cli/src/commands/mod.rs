//! Subcommands. Each one declares its config keys and a run function over
//! the resolved config.

pub mod cheeger;
pub mod curvature;
pub mod family;
pub mod gap_scan;
pub mod generate;
pub mod spectrum;
pub mod theory;

use crate::config::{KeySpec, Resolved};
use crate::output::RunContext;
use crate::CliError;

pub type RunFn = fn(&Resolved, &mut RunContext) -> Result<(), CliError>;

pub struct CommandDef {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
    pub run: RunFn,
}

pub const COMMANDS: &[CommandDef] = &[
    CommandDef {
        name: "spectrum",
        about: "Normalized Laplacian spectrum, histogram and McKay comparison",
        keys: spectrum::KEYS,
        run: spectrum::run,
    },
    CommandDef {
        name: "gap-scan",
        about: "Spectral gap quartiles across sizes",
        keys: gap_scan::KEYS,
        run: gap_scan::run,
    },
    CommandDef {
        name: "curvature",
        about: "Sampled triangle thickness profiles and rescaling collapse",
        keys: curvature::KEYS,
        run: curvature::run,
    },
    CommandDef {
        name: "theory",
        about: "Loop probabilities, bounds and closed forms",
        keys: theory::KEYS,
        run: theory::run,
    },
    CommandDef {
        name: "cheeger",
        about: "Cheeger constants against the spectral gap",
        keys: cheeger::KEYS,
        run: cheeger::run,
    },
    CommandDef {
        name: "generate",
        about: "Write one realization as an edge list",
        keys: generate::KEYS,
        run: generate::run,
    },
];

pub fn find(name: &str) -> Option<&'static CommandDef> {
    COMMANDS.iter().find(|c| c.name == name)
}
