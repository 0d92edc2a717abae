//! Argument parsing, config layering, worker pool and manifest writing.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Arg, ArgAction, ArgMatches, Command};

use crate::commands::{self, CommandDef};
use crate::config::{parse_config_text, ConfigError, Need, Resolved};
use crate::output::{RunContext, RunManifest};
use crate::CliError;

pub const WORKERS_ENV: &str = "ERGEOM_WORKERS";
pub const MANIFEST_NAME: &str = "manifest.json";

fn key_help(k: &crate::config::KeySpec) -> String {
    match k.need {
        Need::Required => format!("{} [required]", k.help),
        Need::Default(d) => format!("{} [default: {d}]", k.help),
        Need::Optional => k.help.to_string(),
    }
}

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

pub fn build_cli() -> Command {
    let mut root = Command::new("ergeom")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Spectra and curvature of sparse random graphs")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .value_name("PATH")
                .value_parser(clap::value_parser!(PathBuf))
                .help("key=value config file; flags override it"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .global(true)
                .value_name("U64")
                .help("master seed"),
        )
        .arg(
            Arg::new("workers")
                .long("workers")
                .global(true)
                .value_name("N")
                .env(WORKERS_ENV)
                .value_parser(clap::value_parser!(usize))
                .help("worker threads [default: available cores]"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .global(true)
                .value_name("DIR")
                .value_parser(clap::value_parser!(PathBuf))
                .help("output directory [default: out]"),
        );
    for def in commands::COMMANDS {
        let mut sub = Command::new(def.name).about(def.about);
        for k in def.keys.iter().filter(|k| k.name != "seed") {
            sub = sub.arg(
                Arg::new(k.name)
                    .long(flag_name(k.name))
                    .value_name("VALUE")
                    .action(ArgAction::Set)
                    .help(key_help(k)),
            );
        }
        root = root.subcommand(sub);
    }
    root.subcommand(
        Command::new("rerun")
            .about("Repeat a run from its manifest")
            .arg(
                Arg::new("manifest")
                    .long("manifest")
                    .required(true)
                    .value_name("PATH")
                    .value_parser(clap::value_parser!(PathBuf)),
            ),
    )
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs one subcommand on a pool of `workers` threads and writes the
/// manifest next to its outputs.
pub fn execute(
    def: &CommandDef,
    cfg: &Resolved,
    out: &Path,
    workers: usize,
) -> Result<RunManifest, CliError> {
    if workers == 0 {
        return Err(ConfigError::key("workers", "must be at least 1").into());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(std::io::Error::other)?;
    let start = Instant::now();
    let mut ctx = RunContext::new(out.to_path_buf())?;
    pool.install(|| (def.run)(cfg, &mut ctx))?;
    let manifest = RunManifest {
        subcommand: def.name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.values().clone(),
        workers,
        out: out.to_path_buf(),
        derived_seeds: ctx.derived_seeds,
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs: ctx.outputs,
        results: serde_json::Value::Object(ctx.results),
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    fs::write(out.join(MANIFEST_NAME), text + "\n")?;
    Ok(manifest)
}

/// Repeats the run recorded in `manifest`, optionally elsewhere or with a
/// different worker count.
pub fn rerun(manifest: &Path, out: Option<&Path>, workers: Option<usize>) -> Result<RunManifest, CliError> {
    let m = RunManifest::read(manifest)?;
    let def = commands::find(&m.subcommand)
        .ok_or_else(|| ConfigError::Other(format!("manifest names unknown subcommand {:?}", m.subcommand)))?;
    let pairs: Vec<(String, String)> = m.config.into_iter().collect();
    let cfg = Resolved::resolve(def.keys, &[pairs])?;
    execute(def, &cfg, out.unwrap_or(&m.out), workers.unwrap_or(m.workers))
}

fn dispatch(matches: &ArgMatches) -> Result<RunManifest, CliError> {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let out = sub.get_one::<PathBuf>("out").cloned();
    let workers = sub.get_one::<usize>("workers").copied();
    if name == "rerun" {
        let path = sub.get_one::<PathBuf>("manifest").expect("required");
        return rerun(path, out.as_deref(), workers);
    }
    let def = commands::find(name).expect("subcommands come from the registry");
    let mut layers = Vec::new();
    if let Some(path) = sub.get_one::<PathBuf>("config") {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::Other(format!("cannot read {}: {e}", path.display())))?;
        layers.push(parse_config_text(&text)?);
    }
    let mut flags = Vec::new();
    for k in def.keys {
        if let Some(v) = sub.get_one::<String>(k.name) {
            flags.push((k.name.to_string(), v.clone()));
        }
    }
    layers.push(flags);
    let cfg = Resolved::resolve(def.keys, &layers)?;
    execute(
        def,
        &cfg,
        &out.unwrap_or_else(|| PathBuf::from("out")),
        workers.unwrap_or_else(default_workers),
    )
}

/// Full command line to exit code: 0 success, 1 computation or I/O
/// failure, 2 usage or config error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match build_cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&matches) {
        Ok(m) => {
            for name in m.outputs.keys() {
                println!("{}", m.out.join(name).display());
            }
            println!("{}", m.out.join(MANIFEST_NAME).display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
