use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use jetcascade::cascade::{cascade_extend, pseudo_solvable_probe, theoretical_p_thresholds, CascadeOptions, CascadeState, PROBE_TOL};
use jetcascade::jet::format::JetDocument;
use jetcascade::jet::JetDiffeo;
use jetcascade::tolerances::{DEDUP_TOL, DEFAULT_LEVEL_CAP};
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::inputs::{jet_example, load_jet_set};
use crate::report::{check, Failure, Report, Violation};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CascadeParams {
    /// Bundled generator set; used when no generator file is given.
    pub example: Option<String>,
    pub generators: Option<PathBuf>,
    pub p: usize,
    pub max_level: usize,
    /// Jet degree of bundled examples. Generator files carry their own.
    pub degree: usize,
    pub level_cap: usize,
    pub beam_width: Option<usize>,
    pub dedup_tol: f64,
    pub certificate_radius: f64,
    pub probe_tol: f64,
    /// Optional JSON-lines file with the jet of every entry.
    pub jets_out: Option<PathBuf>,
}

impl Default for CascadeParams {
    fn default() -> Self {
        CascadeParams {
            example: None,
            generators: None,
            p: 1,
            max_level: 3,
            degree: 4,
            level_cap: DEFAULT_LEVEL_CAP,
            beam_width: None,
            dedup_tol: DEDUP_TOL,
            certificate_radius: 0.5,
            probe_tol: PROBE_TOL,
            jets_out: None,
        }
    }
}

#[derive(Args, Debug)]
pub struct CascadeArgs {
    /// Bundled generators: heisenberg, free-rotations or monomial-flows.
    #[arg(long)]
    example: Option<String>,
    /// Generator-set file (JSON jet set).
    #[arg(long)]
    generators: Option<PathBuf>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    max_level: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    level_cap: Option<usize>,
    #[arg(long)]
    beam_width: Option<usize>,
    #[arg(long)]
    probe_tol: Option<f64>,
    #[arg(long)]
    jets_out: Option<PathBuf>,
}

impl CascadeArgs {
    pub fn apply(self, p: &mut CascadeParams) {
        if self.example.is_some() {
            p.example = self.example;
        }
        if self.generators.is_some() {
            p.generators = self.generators;
        }
        if let Some(v) = self.p {
            p.p = v;
        }
        if let Some(v) = self.max_level {
            p.max_level = v;
        }
        if let Some(v) = self.degree {
            p.degree = v;
        }
        if let Some(v) = self.level_cap {
            p.level_cap = v;
        }
        if self.beam_width.is_some() {
            p.beam_width = self.beam_width;
        }
        if let Some(v) = self.probe_tol {
            p.probe_tol = v;
        }
        if self.jets_out.is_some() {
            p.jets_out = self.jets_out;
        }
    }
}

#[derive(Serialize)]
struct LevelSummary {
    level: usize,
    size: usize,
    complete: bool,
    trivial: bool,
}

#[derive(Serialize)]
struct JetLine<'a> {
    jet_ref: String,
    word: String,
    jet: &'a JetDocument,
}

impl Experiment for CascadeParams {
    fn rebase(&mut self, dir: &std::path::Path) {
        crate::config::rebase_opt(dir, &mut self.generators);
        crate::config::rebase_opt(dir, &mut self.jets_out);
    }

    const NAME: &'static str = "cascade";
    type Prepared = Vec<(String, JetDiffeo)>;

    fn prepare(&mut self) -> Result<Self::Prepared, Failure> {
        let mut v = Vec::new();
        if self.example.is_some() && self.generators.is_some() {
            v.push(Violation::new("one generator source", "give either example or generators, not both"));
        }
        if self.degree == 0 {
            v.push(Violation::new("degree >= 1", "jets need at least their linear part"));
        }
        if self.level_cap == 0 {
            v.push(Violation::new("level_cap >= 1", "cap must admit an entry"));
        }
        if self.beam_width == Some(0) {
            v.push(Violation::new("beam_width >= 1", "a beam keeps at least one entry"));
        }
        for (name, x) in [
            ("dedup_tol > 0", self.dedup_tol),
            ("certificate_radius > 0", self.certificate_radius),
            ("probe_tol > 0", self.probe_tol),
        ] {
            if !(x > 0.0) {
                v.push(Violation::new(name, format!("got {x}")));
            }
        }
        check(v)?;
        match &self.generators {
            Some(path) => {
                let gens = load_jet_set(path)?;
                if let Some((_, g)) = gens.first() {
                    self.degree = g.degree();
                }
                Ok(gens)
            }
            None => {
                let name = self.example.get_or_insert_with(|| "heisenberg".into()).clone();
                jet_example(&name, self.degree)
            }
        }
    }

    fn plan(&self, gens: &Self::Prepared) -> Vec<String> {
        let names: Vec<&str> = gens.iter().map(|(n, _)| n.as_str()).collect();
        vec![
            format!("generators {} (dim {}, degree {})", names.join(" "), gens[0].1.dim(), self.degree),
            format!("build cascade levels 0..={} with p = {}", self.max_level, self.p),
            format!("probe triviality through level {} at tol {:e}", self.max_level, self.probe_tol),
        ]
    }

    fn execute(&self, gens: Self::Prepared, _seed: u64, report: &mut Report) -> Result<(), Failure> {
        let options = CascadeOptions {
            p: self.p,
            dedup_tol: self.dedup_tol,
            level_cap: self.level_cap,
            beam_width: self.beam_width,
            certificate_radius: self.certificate_radius,
        };
        let dim = gens[0].1.dim();
        let state = CascadeState::new(gens, options)?;
        let (state, extended) = cascade_extend(state, self.max_level, self.dedup_tol);
        for record in state.report_records() {
            report.emit("entry", &record)?;
        }
        for (j, level) in state.levels().iter().enumerate() {
            report.emit(
                "level",
                &LevelSummary {
                    level: j,
                    size: level.len(),
                    complete: level.complete,
                    trivial: level.is_trivial(self.probe_tol),
                },
            )?;
        }
        if let Some(path) = &self.jets_out {
            write_jets(&state, path)?;
        }
        extended?;
        let outcome = pseudo_solvable_probe(&state, self.max_level, self.probe_tol)?;
        report.emit(
            "probe",
            &serde_json::json!({
                "p": self.p,
                "truncation_degree": state.degree(),
                "note": "triviality is decided for degree-d jets only",
                "result": outcome,
            }),
        )?;
        let (first, second) = theoretical_p_thresholds(dim as u32);
        report.emit(
            "thresholds",
            &serde_json::json!({
                "dim": dim,
                "p_sufficient": first.to_string(),
                "p_sufficient_alt": second.to_string(),
                "enforced": false,
            }),
        )
    }
}

fn write_jets(state: &CascadeState, path: &std::path::Path) -> Result<(), Failure> {
    let file = std::fs::File::create(path)
        .map_err(|e| Failure::invalid("jets_out writable", format!("{}: {e}", path.display())))?;
    let mut out = std::io::BufWriter::new(file);
    for (j, level) in state.levels().iter().enumerate() {
        for (i, e) in level.entries.iter().enumerate() {
            let doc = JetDocument::from_diffeo(&e.jet);
            let line = JetLine {
                jet_ref: format!("L{j}/{i}"),
                word: state.alphabet().format(&e.word),
                jet: &doc,
            };
            let text = serde_json::to_string(&line).map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
    }
    out.flush()?;
    Ok(())
}
