use std::path::PathBuf;

use clap::{Args, ValueEnum};
use jetcascade::linalg::{self, CMatrix};
use jetcascade::linear_analysis::format::{matrix_to_rows, parse_matrix_set};
use jetcascade::linear_analysis::{
    burnside_irreducibility, derived_series, escape_direction, free_pair_near_identity, invariant_flag,
    is_hyperbolic, kolchin_triangularize, power_recurrence, stable_splitting, trace_bound_check,
    DerivedSeriesOptions, FreePairOptions, MatrixGroupSpec,
};
use jetcascade::tolerances::{ESCAPE_TOL, FLAG_TOL, FP_TOL};
use jetcascade::zassenhaus::matrix_zassenhaus_fit;
use jetcascade::{fixtures, Error};
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::report::{check, read_input, Failure, Report, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Burnside,
    Flag,
    Kolchin,
    Splitting,
    Escape,
    Derived,
    Trace,
    Powers,
    FreePair,
    ZassenhausConstant,
}

impl Op {
    fn needs_group(self) -> bool {
        self != Op::ZassenhausConstant
    }
}

pub const MATRIX_EXAMPLES: [&str; 3] = ["shears", "heisenberg", "free-rotations"];

fn matrix_example(name: &str) -> Result<MatrixGroupSpec, Failure> {
    let named: Vec<(String, CMatrix)> = match name {
        "shears" => {
            let (a, b) = fixtures::shear_pair();
            vec![("a".into(), a), ("b".into(), b)]
        }
        "heisenberg" => ["x", "y", "z"]
            .iter()
            .zip(fixtures::heisenberg_matrices())
            .map(|(n, m)| (n.to_string(), m))
            .collect(),
        "free-rotations" => {
            let (a, b) = fixtures::free_rotation_matrices();
            vec![("a".into(), a), ("b".into(), b)]
        }
        other => {
            return Err(Failure::invalid(
                "example is known",
                format!("'{other}' is not one of {}", MATRIX_EXAMPLES.join(", ")),
            ))
        }
    };
    Ok(MatrixGroupSpec::new(named)?)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearParams {
    pub op: Option<Op>,
    /// Matrix-set file.
    pub input: Option<PathBuf>,
    /// Bundled matrix set: shears, heisenberg or free-rotations.
    pub example: Option<String>,
    pub max_word_len: Option<usize>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub depth: Option<usize>,
    /// Restrict per-generator ops to this generator.
    pub generator: Option<String>,
    pub trace_bound: Option<f64>,
    pub samples: Option<usize>,
    pub dim: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LinearArgs {
    #[arg(long, value_enum)]
    op: Option<Op>,
    /// Matrix-set file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    max_word_len: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    trace_bound: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
}

impl LinearArgs {
    pub fn apply(self, p: &mut LinearParams) {
        macro_rules! set {
            ($($f:ident),*) => {$( if self.$f.is_some() { p.$f = self.$f; } )*};
        }
        set!(op, input, example, max_word_len, tol, eps, depth, generator, trace_bound, samples, dim);
    }
}

impl LinearParams {
    fn op(&self) -> Op {
        self.op.expect("validated")
    }

    /// Fill op-specific defaults so the header shows every value used.
    fn fill_defaults(&mut self, spec: Option<&MatrixGroupSpec>) {
        let op = self.op();
        let (len, tol) = match op {
            Op::Burnside => (Some(3), None),
            Op::Flag => (None, None),
            Op::Kolchin => (None, Some(FLAG_TOL)),
            Op::Splitting => (None, Some(1e-9)),
            Op::Escape => (Some(4), Some(ESCAPE_TOL)),
            Op::Derived => (Some(2), Some(FP_TOL)),
            Op::Trace => (Some(4), None),
            Op::Powers => (None, Some(1e-3)),
            Op::FreePair => (Some(8), None),
            Op::ZassenhausConstant => (None, None),
        };
        if self.max_word_len.is_none() {
            self.max_word_len = len;
        }
        if self.tol.is_none() {
            self.tol = tol;
        }
        match op {
            Op::Derived if self.depth.is_none() => self.depth = Some(3),
            Op::Trace if self.trace_bound.is_none() => self.trace_bound = spec.map(|s| s.dim() as f64),
            Op::FreePair if self.eps.is_none() => self.eps = Some(0.05),
            Op::ZassenhausConstant => {
                self.eps.get_or_insert(0.05);
                self.samples.get_or_insert(10_000);
                self.dim.get_or_insert(2);
            }
            _ => {}
        }
    }

    fn selected(&self, spec: &MatrixGroupSpec) -> Result<Vec<(String, CMatrix)>, Failure> {
        let all = spec.alphabet().names().iter().cloned().zip(spec.generators().iter().cloned());
        match &self.generator {
            None => Ok(all.collect()),
            Some(g) => {
                let picked: Vec<_> = all.filter(|(n, _)| n == g).collect();
                if picked.is_empty() {
                    return Err(Failure::invalid("generator exists", format!("no generator named '{g}'")));
                }
                Ok(picked)
            }
        }
    }
}

impl Experiment for LinearParams {
    fn rebase(&mut self, dir: &std::path::Path) {
        crate::config::rebase_opt(dir, &mut self.input);
    }

    const NAME: &'static str = "linear-analyze";
    type Prepared = Option<MatrixGroupSpec>;

    fn prepare(&mut self) -> Result<Self::Prepared, Failure> {
        let mut v = Vec::new();
        let Some(op) = self.op else {
            return Err(Failure::invalid("op given", "choose an analysis with --op"));
        };
        if op.needs_group() {
            match (&self.input, &self.example) {
                (None, None) => v.push(Violation::new("input given", format!("op '{}' needs --input or --example", op.to_possible_value().expect("no skipped variants").get_name()))),
                (Some(_), Some(_)) => v.push(Violation::new("one input source", "give either input or example, not both")),
                _ => {}
            }
        }
        for (name, x) in [("tol > 0", self.tol), ("eps > 0", self.eps), ("trace_bound > 0", self.trace_bound)] {
            if let Some(x) = x {
                if !(x > 0.0) {
                    v.push(Violation::new(name, format!("got {x}")));
                }
            }
        }
        if self.samples == Some(0) {
            v.push(Violation::new("samples >= 1", "got 0"));
        }
        if self.dim == Some(0) {
            v.push(Violation::new("dim >= 1", "got 0"));
        }
        check(v)?;
        let spec = if !op.needs_group() {
            None
        } else if let Some(path) = &self.input {
            Some(parse_matrix_set(&read_input(path, "matrix file")?)?)
        } else {
            Some(matrix_example(self.example.as_deref().expect("checked"))?)
        };
        self.fill_defaults(spec.as_ref());
        if let Some(s) = &spec {
            self.selected(s)?;
        }
        Ok(spec)
    }

    fn plan(&self, spec: &Self::Prepared) -> Vec<String> {
        let mut steps = vec![format!("op {:?}", self.op())];
        if let Some(s) = spec {
            steps.push(format!(
                "group generated by {} in GL({}, C)",
                s.alphabet().names().join(" "),
                s.dim()
            ));
        }
        steps
    }

    fn execute(&self, spec: Self::Prepared, seed: u64, report: &mut Report) -> Result<(), Failure> {
        let len = self.max_word_len.unwrap_or(0);
        let tol = self.tol.unwrap_or(FP_TOL);
        let op = self.op();
        if op == Op::ZassenhausConstant {
            let fit = matrix_zassenhaus_fit(self.dim.unwrap(), self.eps.unwrap(), self.samples.unwrap(), seed)?;
            return report.emit("zassenhaus_constant", &fit);
        }
        let spec = spec.expect("prepared");
        match op {
            Op::Burnside => report.emit("burnside", &burnside_irreducibility(&spec, len)),
            Op::Flag => report.emit("flag", &invariant_flag(&spec)),
            Op::Kolchin => {
                let t = kolchin_triangularize(&spec, tol)?;
                report.emit(
                    "kolchin",
                    &serde_json::json!({
                        "residual": t.residual,
                        "diagonal_residual": t.diagonal_residual,
                        "change_of_basis": matrix_to_rows(&t.p),
                    }),
                )
            }
            Op::Splitting => {
                for (name, m) in self.selected(&spec)? {
                    let split = stable_splitting(&m, tol);
                    report.emit(
                        "splitting",
                        &serde_json::json!({
                            "generator": name,
                            "hyperbolic": is_hyperbolic(&m, tol),
                            "split": split,
                        }),
                    )?;
                }
                Ok(())
            }
            Op::Escape => {
                let candidates = self.selected(&spec)?;
                let (name, m) = candidates
                    .iter()
                    .find(|(_, m)| stable_splitting(m, 1e-9).stable_dim > 0)
                    .ok_or_else(|| Error::domain("no selected generator has a stable direction"))?;
                let split = stable_splitting(m, 1e-9);
                let v = split.stable.column(0).into_owned();
                let w = escape_direction(&spec, &split, &v, len, tol)?;
                report.emit("escape", &serde_json::json!({ "generator": name, "witness": w }))
            }
            Op::Derived => {
                let opts = DerivedSeriesOptions {
                    max_word_len: len,
                    tol,
                    ..DerivedSeriesOptions::default()
                };
                let series = derived_series(&spec, self.depth.unwrap(), &opts)?;
                for level in &series.levels {
                    report.emit("derived_level", level)?;
                }
                report.emit("derived_summary", &serde_json::json!({ "trivial_depth": series.trivial_depth() }))
            }
            Op::Trace => report.emit("trace", &trace_bound_check(&spec, len, self.trace_bound.unwrap())),
            Op::Powers => {
                for (name, m) in self.selected(&spec)? {
                    let eigs = linalg::eigenvalues(&m);
                    let rec = power_recurrence(&eigs, tol, 1_000_000)?;
                    report.emit("powers", &serde_json::json!({ "generator": name, "recurrence": rec }))?;
                }
                Ok(())
            }
            Op::FreePair => {
                let options = FreePairOptions {
                    word_length: len,
                    ..FreePairOptions::default()
                };
                let r = free_pair_near_identity(&spec, self.eps.unwrap(), &options)?;
                report.emit(
                    "free_pair",
                    &serde_json::json!({
                        "result": r,
                        "a": matrix_to_rows(&r.a),
                        "b": matrix_to_rows(&r.b),
                    }),
                )
            }
            Op::ZassenhausConstant => unreachable!(),
        }
    }
}
