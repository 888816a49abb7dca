//! Config files, flag merging and the shared run driver.
//!
//! A config file is a JSON document
//!
//! ```json
//! {"experiment": "cascade", "seed": 7, "threads": 2, "params": {"p": 1}}
//! ```
//!
//! Values are resolved as defaults, then the file, then command-line flags.
//! Unknown keys are rejected at both levels.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::{read_input, Failure, Report};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: String,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    #[serde(default)]
    params: Option<Value>,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Globals {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub dry_run: bool,
}

#[derive(Debug, Serialize)]
pub struct Resolved<'a, P> {
    pub experiment: &'static str,
    pub seed: u64,
    pub threads: usize,
    pub out: Option<&'a Path>,
    pub params: &'a P,
}

#[derive(Serialize)]
struct Header<'a, P> {
    tool: &'static str,
    version: &'static str,
    rng: &'static str,
    config: Resolved<'a, P>,
}

pub trait Experiment: Serialize + DeserializeOwned + Default {
    const NAME: &'static str;
    /// Loaded inputs, ready to run.
    type Prepared;

    /// Validate parameters and load inputs. May fill in derived parameter
    /// values so that the report header shows what actually runs.
    /// Resolve relative input and output paths of a config file against
    /// its directory.
    fn rebase(&mut self, _dir: &Path) {}

    fn prepare(&mut self) -> Result<Self::Prepared, Failure>;

    /// Human-readable steps for `--dry-run`.
    fn plan(&self, prepared: &Self::Prepared) -> Vec<String>;

    fn execute(&self, prepared: Self::Prepared, seed: u64, report: &mut Report) -> Result<(), Failure>;
}

fn load_config(path: &Path) -> Result<ConfigFile, Failure> {
    let text = read_input(path, "config file")?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid("config file well-formed", format!("{}: {e}", path.display())))
}

/// Resolve the configuration, write the header and run (or plan) the
/// experiment. `apply_flags` overrides parameters given on the command line.
pub fn drive<E: Experiment>(globals: &Globals, apply_flags: impl FnOnce(&mut E)) -> Result<(), Failure> {
    let mut params = E::default();
    let mut seed = 0;
    let mut threads = 1;
    let mut out = None;
    if let Some(path) = &globals.config {
        let file = load_config(path)?;
        if file.experiment != E::NAME {
            return Err(Failure::invalid(
                "config experiment matches subcommand",
                format!("config is for '{}', subcommand is '{}'", file.experiment, E::NAME),
            ));
        }
        if let Some(v) = file.params {
            params = serde_json::from_value(v)
                .map_err(|e| Failure::invalid("config params well-formed", format!("{}: {e}", path.display())))?;
            params.rebase(path.parent().unwrap_or(Path::new("")));
        }
        seed = file.seed.unwrap_or(seed);
        threads = file.threads.unwrap_or(threads);
        out = file.out.map(|o| rebased(path.parent().unwrap_or(Path::new("")), &o));
    }
    apply_flags(&mut params);
    seed = globals.seed.unwrap_or(seed);
    threads = globals.threads.unwrap_or(threads);
    if globals.out.is_some() {
        out = globals.out.clone();
    }
    if threads == 0 {
        return Err(Failure::invalid("threads >= 1", "a worker pool needs at least one thread"));
    }
    let prepared = params.prepare()?;

    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Internal(format!("worker pool: {e}")))?;
    let mut report = Report::open(out.as_deref())?;
    let header = Header {
        tool: "jetcascade",
        version: env!("CARGO_PKG_VERSION"),
        rng: jetcascade::sampling::GENERATOR,
        config: Resolved {
            experiment: E::NAME,
            seed,
            threads,
            out: out.as_deref(),
            params: &params,
        },
    };
    report.emit("header", &header)?;
    let result = if globals.dry_run {
        report.emit("plan", &serde_json::json!({ "steps": params.plan(&prepared) }))
    } else {
        params.execute(prepared, seed, &mut report)
    };
    if let Err(e) = &result {
        let messages = e.messages();
        report.emit("error", &serde_json::json!({ "exit_code": e.exit_code(), "messages": messages }))?;
    }
    report.finish()?;
    result
}

pub fn rebased(dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        dir.join(p)
    }
}

pub fn rebase_opt(dir: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        *path = rebased(dir, path);
    }
}
