use std::path::PathBuf;

use clap::Args;
use jetcascade::cascade::{cascade_extend, CascadeOptions, CascadeState};
use jetcascade::orbit_sim::{
    cascade_words, minimal_set_search, recurrence_scan, stable_manifold_hunt, GridSpec, HuntOptions, PseudogroupSpec,
    ScanOptions, ScanWord,
};
use jetcascade::tolerances::{DEDUP_TOL, DEFAULT_LEVEL_CAP, ESCAPE_TOL, GRID_POINTS};
use jetcascade::C64;
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::inputs::{default_hunt, default_pseudogroup, HuntDocument, PseudogroupDocument};
use crate::report::{check, read_input, Failure, Report, Violation};

const TRUNCATION_NOTE: &str = "maps are the polynomial truncations, evaluated exactly";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanParams {
    /// Pseudogroup file; the bundled pair of flows when absent.
    pub spec: Option<PathBuf>,
    pub grid: usize,
    pub complex: bool,
    pub eta: Option<f64>,
    pub fixpoint_tol: Option<f64>,
    /// Highest cascade level whose words are tried.
    pub budget: usize,
    pub p: usize,
    pub level_cap: usize,
    pub beam_width: Option<usize>,
    /// Explicit words instead of cascade words (reported at level 0).
    pub words: Option<Vec<String>>,
    pub csv: Option<PathBuf>,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            spec: None,
            grid: GRID_POINTS,
            complex: false,
            eta: None,
            fixpoint_tol: None,
            budget: 6,
            p: 1,
            level_cap: DEFAULT_LEVEL_CAP,
            beam_width: None,
            words: None,
            csv: None,
        }
    }
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Pseudogroup file (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Grid real and imaginary parts instead of the real slice.
    #[arg(long)]
    complex: bool,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    fixpoint_tol: Option<f64>,
    /// Highest cascade level used for words.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    beam_width: Option<usize>,
    /// Explicit word; repeat for several. Replaces cascade words.
    #[arg(long = "word")]
    words: Vec<String>,
    /// Also write a CSV of points, witnesses and displacements.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl ScanArgs {
    pub fn apply(self, p: &mut ScanParams) {
        if self.spec.is_some() {
            p.spec = self.spec;
        }
        if let Some(v) = self.grid {
            p.grid = v;
        }
        if self.complex {
            p.complex = true;
        }
        if self.eta.is_some() {
            p.eta = self.eta;
        }
        if self.fixpoint_tol.is_some() {
            p.fixpoint_tol = self.fixpoint_tol;
        }
        if let Some(v) = self.budget {
            p.budget = v;
        }
        if let Some(v) = self.p {
            p.p = v;
        }
        if self.beam_width.is_some() {
            p.beam_width = self.beam_width;
        }
        if !self.words.is_empty() {
            p.words = Some(self.words);
        }
        if self.csv.is_some() {
            p.csv = self.csv;
        }
    }
}

pub struct PreparedScan {
    spec: PseudogroupSpec,
    words: Option<Vec<ScanWord>>,
}

impl Experiment for ScanParams {
    fn rebase(&mut self, dir: &std::path::Path) {
        crate::config::rebase_opt(dir, &mut self.spec);
        crate::config::rebase_opt(dir, &mut self.csv);
    }

    const NAME: &'static str = "orbit-scan";
    type Prepared = PreparedScan;

    fn prepare(&mut self) -> Result<PreparedScan, Failure> {
        let doc: PseudogroupDocument = match &self.spec {
            Some(path) => serde_json::from_str(&read_input(path, "pseudogroup file")?)
                .map_err(|e| Failure::invalid("pseudogroup file well-formed", format!("{}: {e}", path.display())))?,
            None => default_pseudogroup(),
        };
        let spec = doc.to_spec()?;
        let eta = *self.eta.get_or_insert(ScanOptions::for_radius(spec.radius()).eta);
        let fix = *self.fixpoint_tol.get_or_insert(ScanOptions::for_radius(spec.radius()).fixpoint_tol);
        let mut v = Vec::new();
        if self.grid == 0 {
            v.push(Violation::new("grid >= 1", "got 0"));
        }
        if !(fix > 0.0 && fix < eta) {
            v.push(Violation::new("0 < fixpoint_tol < eta", format!("fixpoint_tol = {fix:e}, eta = {eta:e}")));
        }
        if self.beam_width == Some(0) {
            v.push(Violation::new("beam_width >= 1", "a beam keeps at least one entry"));
        }
        let words = match &self.words {
            None => None,
            Some(ws) => {
                let mut parsed = Vec::new();
                for (index, w) in ws.iter().enumerate() {
                    match spec.alphabet().parse(w) {
                        Ok(word) => parsed.push(ScanWord { level: 0, index, word }),
                        Err(e) => v.push(Violation::new("words parse", e.to_string())),
                    }
                }
                Some(parsed)
            }
        };
        check(v)?;
        Ok(PreparedScan { spec, words })
    }

    fn plan(&self, prepared: &PreparedScan) -> Vec<String> {
        let points = if self.complex { self.grid.pow(2 * prepared.spec.dim() as u32) } else { self.grid.pow(prepared.spec.dim() as u32) };
        let words = match &prepared.words {
            Some(w) => format!("{} explicit words", w.len()),
            None => format!("cascade words of levels 0..={} (p = {})", self.budget, self.p),
        };
        vec![
            format!("pseudogroup of {} maps on B_{} (dim {})", prepared.spec.maps().len(), prepared.spec.radius(), prepared.spec.dim()),
            format!("{points} grid points in B_{}", prepared.spec.radius() / 2.0),
            words,
        ]
    }

    fn execute(&self, prepared: PreparedScan, _seed: u64, report: &mut Report) -> Result<(), Failure> {
        let spec = prepared.spec;
        let words = match prepared.words {
            Some(w) => w,
            None => {
                let gens: Vec<_> = spec.alphabet().names().iter().cloned().zip(spec.maps().iter().cloned()).collect();
                let options = CascadeOptions {
                    p: self.p,
                    dedup_tol: DEDUP_TOL,
                    level_cap: self.level_cap,
                    beam_width: self.beam_width,
                    certificate_radius: 0.5,
                };
                let (state, extended) = cascade_extend(CascadeState::new(gens, options)?, self.budget, DEDUP_TOL);
                report.emit(
                    "cascade",
                    &serde_json::json!({ "level_sizes": state.levels().iter().map(|l| l.len()).collect::<Vec<_>>() }),
                )?;
                extended?;
                cascade_words(&state, self.budget)
            }
        };
        let options = ScanOptions {
            grid: GridSpec {
                points_per_axis: self.grid,
                complex: self.complex,
            },
            eta: self.eta.expect("prepared"),
            fixpoint_tol: self.fixpoint_tol.expect("prepared"),
        };
        let scan = recurrence_scan(&spec, &words, &options)?;
        for p in &scan.points {
            report.emit("point", p)?;
        }
        report.emit(
            "summary",
            &serde_json::json!({
                "radius": scan.radius,
                "eta": scan.eta,
                "fixpoint_tol": scan.fixpoint_tol,
                "words_tested": scan.words_tested,
                "points": scan.points.len(),
                "witnessed": scan.witnessed,
                "witnessed_fraction_off_origin": scan.witnessed_fraction_off_origin(),
                "note": TRUNCATION_NOTE,
            }),
        )?;
        if let Some(path) = &self.csv {
            let file = std::fs::File::create(path)
                .map_err(|e| Failure::invalid("csv writable", format!("{}: {e}", path.display())))?;
            scan.write_csv(file)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HuntParams {
    /// Hunt file; the bundled diag(1/2, 2) with a 45 degree rotation when
    /// absent.
    pub spec: Option<PathBuf>,
    pub max_power: usize,
    pub seeds: usize,
    pub max_pullback: usize,
    pub domain_radius: f64,
    pub escape_tol: f64,
    /// Net resolution of the minimal-set search.
    pub resolution: f64,
    pub min_hits: usize,
}

impl Default for HuntParams {
    fn default() -> Self {
        let o = HuntOptions::default();
        HuntParams {
            spec: None,
            max_power: o.max_power,
            seeds: o.seeds,
            max_pullback: o.max_pullback,
            domain_radius: o.domain_radius,
            escape_tol: ESCAPE_TOL,
            resolution: 1e-3,
            min_hits: 3,
        }
    }
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    /// Hunt file (JSON with phi, psi and seed).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Largest forward power of phi.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long)]
    min_hits: Option<usize>,
}

impl HuntArgs {
    pub fn apply(self, p: &mut HuntParams) {
        if self.spec.is_some() {
            p.spec = self.spec;
        }
        if let Some(v) = self.budget {
            p.max_power = v;
        }
        if let Some(v) = self.seeds {
            p.seeds = v;
        }
        if let Some(v) = self.resolution {
            p.resolution = v;
        }
        if let Some(v) = self.min_hits {
            p.min_hits = v;
        }
    }
}

type PreparedHunt = (jetcascade::jet::JetDiffeo, jetcascade::jet::JetDiffeo, Vec<C64>);

impl Experiment for HuntParams {
    fn rebase(&mut self, dir: &std::path::Path) {
        crate::config::rebase_opt(dir, &mut self.spec);
    }

    const NAME: &'static str = "stable-hunt";
    type Prepared = PreparedHunt;

    fn prepare(&mut self) -> Result<PreparedHunt, Failure> {
        let doc: HuntDocument = match &self.spec {
            Some(path) => serde_json::from_str(&read_input(path, "hunt file")?)
                .map_err(|e| Failure::invalid("hunt file well-formed", format!("{}: {e}", path.display())))?,
            None => default_hunt(),
        };
        let mut v = Vec::new();
        if self.max_power == 0 {
            v.push(Violation::new("max_power >= 1", "got 0"));
        }
        if self.seeds == 0 {
            v.push(Violation::new("seeds >= 1", "got 0"));
        }
        for (name, x) in [
            ("domain_radius > 0", self.domain_radius),
            ("escape_tol > 0", self.escape_tol),
            ("resolution > 0", self.resolution),
        ] {
            if !(x > 0.0) {
                v.push(Violation::new(name, format!("got {x}")));
            }
        }
        if self.min_hits == 0 {
            v.push(Violation::new("min_hits >= 1", "got 0"));
        }
        check(v)?;
        doc.maps()
    }

    fn plan(&self, (phi, _, seed): &PreparedHunt) -> Vec<String> {
        vec![
            format!("phi and psi in dim {}, seed of norm {:e}", phi.dim(), jetcascade::jet::euclidean_norm(seed)),
            format!("{} seeds, powers 1..={}, pull-back cap {}", self.seeds, self.max_power, self.max_pullback),
            format!("minimal-set search at resolution {:e} with {} hits", self.resolution, self.min_hits),
        ]
    }

    fn execute(&self, (phi, psi, seed): PreparedHunt, _seed: u64, report: &mut Report) -> Result<(), Failure> {
        let options = HuntOptions {
            max_power: self.max_power,
            seeds: self.seeds,
            max_pullback: self.max_pullback,
            domain_radius: self.domain_radius,
            escape_tol: self.escape_tol,
        };
        let hunt = stable_manifold_hunt(&phi, &psi, &seed, &options)?;
        for r in &hunt.returns {
            report.emit("return", r)?;
        }
        let mut summary = serde_json::to_value(&hunt).map_err(|e| Failure::Internal(e.to_string()))?;
        if let Some(obj) = summary.as_object_mut() {
            obj.remove("returns");
            obj.insert("note".into(), TRUNCATION_NOTE.into());
        }
        report.emit("hunt", &summary)?;
        let minimal = minimal_set_search(&hunt.orbits(), self.resolution, self.min_hits)?;
        report.emit("minimal_set", &minimal)
    }
}
