use std::path::PathBuf;

use clap::Args;
use jetcascade::cascade::{cascade_extend, CascadeOptions, CascadeState};
use jetcascade::jet::JetDiffeo;
use jetcascade::BigRational;
use jetcascade::sampling;
use jetcascade::tolerances::{DEDUP_TOL, DEFAULT_LEVEL_CAP};
use jetcascade::zassenhaus::{
    build_schedule, chain_schedule, check_parameters, parse_rational, verify_cascade_against_schedule,
};
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::inputs::load_jet_set;
use crate::report::{check, Failure, Report, Violation};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZassenhausParams {
    pub p: usize,
    /// Exact rational, e.g. "1/160".
    pub delta: String,
    pub degree: usize,
    pub levels: usize,
    pub dim: usize,
    /// Number of random generators.
    pub generators: usize,
    /// Random generators get `sup_norm_bound(g - Id, 1) = fraction · δ/4`.
    pub bound_fraction: f64,
    /// Use these generators instead of random ones.
    pub generators_file: Option<PathBuf>,
    pub level_cap: usize,
    pub beam_width: Option<usize>,
}

impl Default for ZassenhausParams {
    fn default() -> Self {
        ZassenhausParams {
            p: 1,
            delta: "1/160".into(),
            degree: 6,
            levels: 6,
            dim: 2,
            generators: 2,
            bound_fraction: 0.9,
            generators_file: None,
            level_cap: DEFAULT_LEVEL_CAP,
            beam_width: None,
        }
    }
}

#[derive(Args, Debug)]
pub struct ZassenhausArgs {
    #[arg(long)]
    p: Option<usize>,
    /// Exact rational such as 1/160 or 0.00625.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    generators: Option<usize>,
    #[arg(long)]
    bound_fraction: Option<f64>,
    #[arg(long)]
    generators_file: Option<PathBuf>,
    #[arg(long)]
    beam_width: Option<usize>,
}

impl ZassenhausArgs {
    pub fn apply(self, p: &mut ZassenhausParams) {
        if let Some(v) = self.p {
            p.p = v;
        }
        if let Some(v) = self.delta {
            p.delta = v;
        }
        if let Some(v) = self.degree {
            p.degree = v;
        }
        if let Some(v) = self.levels {
            p.levels = v;
        }
        if let Some(v) = self.dim {
            p.dim = v;
        }
        if let Some(v) = self.generators {
            p.generators = v;
        }
        if let Some(v) = self.bound_fraction {
            p.bound_fraction = v;
        }
        if self.generators_file.is_some() {
            p.generators_file = self.generators_file;
        }
        if self.beam_width.is_some() {
            p.beam_width = self.beam_width;
        }
    }
}

pub struct Prepared {
    delta: BigRational,
    file_generators: Option<Vec<(String, JetDiffeo)>>,
}

const NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

impl Experiment for ZassenhausParams {
    fn rebase(&mut self, dir: &std::path::Path) {
        crate::config::rebase_opt(dir, &mut self.generators_file);
    }

    const NAME: &'static str = "zassenhaus-verify";
    type Prepared = Prepared;

    fn prepare(&mut self) -> Result<Prepared, Failure> {
        let mut v = Vec::new();
        let delta = match parse_rational(&self.delta) {
            Ok(d) => {
                if let Err(jetcascade::Error::Validation { constraint, detail }) = check_parameters(self.p, &d) {
                    v.push(Violation::new(constraint, detail));
                }
                Some(d)
            }
            Err(e) => {
                v.push(Violation::new("delta is a rational number", e.to_string()));
                None
            }
        };
        if self.degree == 0 {
            v.push(Violation::new("degree >= 1", "jets need at least their linear part"));
        }
        if self.generators_file.is_none() {
            if self.dim == 0 {
                v.push(Violation::new("dim >= 1", "got 0"));
            }
            if self.generators == 0 || self.generators > NAMES.len() {
                v.push(Violation::new("1 <= generators <= 26", format!("got {}", self.generators)));
            }
            if !(self.bound_fraction > 0.0) {
                v.push(Violation::new("bound_fraction > 0", format!("got {}", self.bound_fraction)));
            }
        }
        if self.beam_width == Some(0) {
            v.push(Violation::new("beam_width >= 1", "a beam keeps at least one entry"));
        }
        check(v)?;
        let file_generators = match &self.generators_file {
            Some(path) => {
                let gens = load_jet_set(path)?;
                self.degree = gens[0].1.degree();
                self.dim = gens[0].1.dim();
                self.generators = gens.len();
                Some(gens)
            }
            None => None,
        };
        Ok(Prepared {
            delta: delta.expect("checked"),
            file_generators,
        })
    }

    fn plan(&self, prepared: &Prepared) -> Vec<String> {
        let source = if prepared.file_generators.is_some() {
            "from file".to_string()
        } else {
            format!("random with bound {} · δ/4", self.bound_fraction)
        };
        vec![
            format!("closed-form and chained schedules for p = {}, δ = {}, levels 0..={}", self.p, prepared.delta, self.levels),
            format!("{} generators in dim {} at degree {}, {source}", self.generators, self.dim, self.degree),
            format!("cascade through level {} and check every entry against δ/2^(j+2)", self.levels),
        ]
    }

    fn execute(&self, prepared: Prepared, seed: u64, report: &mut Report) -> Result<(), Failure> {
        let schedule = build_schedule(self.p, &prepared.delta, self.levels)?;
        let chained = chain_schedule(self.p, &prepared.delta, self.levels)?;
        for (row, chained_row) in schedule.records().into_iter().zip(&chained.rows) {
            let agrees = schedule.rows[row.level].radius == chained_row.radius
                && schedule.rows[row.level].bound == chained_row.bound;
            report.emit("schedule", &serde_json::json!({ "row": row, "chained_agrees": agrees }))?;
        }
        let gens = match prepared.file_generators {
            Some(g) => g,
            None => {
                let mut rng = sampling::rng(seed);
                let bound = self.bound_fraction * schedule.delta_f64() / 4.0;
                NAMES
                    .chars()
                    .take(self.generators)
                    .map(|n| (n.to_string(), sampling::jet_with_bound(&mut rng, self.dim, self.degree, bound)))
                    .collect()
            }
        };
        let options = CascadeOptions {
            p: self.p,
            dedup_tol: DEDUP_TOL,
            level_cap: self.level_cap,
            beam_width: self.beam_width,
            certificate_radius: 0.5,
        };
        let state = CascadeState::new(gens, options)?;
        let (state, extended) = cascade_extend(state, self.levels, DEDUP_TOL);
        let verification = verify_cascade_against_schedule(&state, &schedule);
        for g in &verification.generator_violations {
            report.emit("generator_violation", g)?;
        }
        for e in &verification.entries {
            report.emit("verdict", e)?;
        }
        report.emit(
            "summary",
            &serde_json::json!({
                "p": verification.p,
                "delta": verification.delta,
                "truncation_degree": verification.truncation_degree,
                "levels_checked": verification.levels_checked,
                "level_sizes": state.levels().iter().map(|l| l.len()).collect::<Vec<_>>(),
                "entries": verification.entries.len(),
                "precondition_ok": verification.precondition_ok,
                "all_pass": verification.all_pass,
            }),
        )?;
        extended?;
        if !verification.precondition_ok {
            return Err(Failure::invalid(
                "sup_norm_bound(g - Id, 1) <= δ/4",
                format!("{} generator(s) or inverses exceed the bound", verification.generator_violations.len()),
            ));
        }
        Ok(())
    }
}
