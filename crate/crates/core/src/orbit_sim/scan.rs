use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{distance, serialize_point, word_image, PseudogroupSpec};
use crate::cascade::{CascadeState, Word};
use crate::error::{Error, Result};
use crate::parallel;
use crate::tolerances::{ETA_FACTOR, FIXPOINT_FACTOR, FP_TOL, GRID_POINTS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points_per_axis: usize,
    /// Grid the real and imaginary parts (`m^{2n}` points) instead of the
    /// real slice (`m^n` points).
    pub complex: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points_per_axis: GRID_POINTS,
            complex: false,
        }
    }
}

/// Points of the centered cube inscribed in the closed ball of radius
/// `radius`, in lexicographic order of their grid indices.
pub fn grid_points(dim: usize, radius: f64, grid: &GridSpec) -> Vec<Vec<C64>> {
    let m = grid.points_per_axis.max(1);
    let axes = if grid.complex { 2 * dim } else { dim };
    let half = radius / (axes as f64).sqrt();
    let coord = |k: usize| {
        if m == 1 {
            0.0
        } else {
            half * (2.0 * k as f64 / (m - 1) as f64 - 1.0)
        }
    };
    let total = m.pow(axes as u32);
    (0..total)
        .map(|mut code| {
            let mut idx = vec![0usize; axes];
            for slot in idx.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            (0..dim)
                .map(|i| {
                    if grid.complex {
                        C64::new(coord(idx[2 * i]), coord(idx[2 * i + 1]))
                    } else {
                        C64::new(coord(idx[i]), 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanWord {
    pub level: usize,
    pub index: usize,
    pub word: Word,
}

/// Words of the nontrivial entries of levels `0..=max_level`, in cascade
/// order.
pub fn cascade_words(state: &CascadeState, max_level: usize) -> Vec<ScanWord> {
    state
        .levels()
        .iter()
        .enumerate()
        .take(max_level + 1)
        .flat_map(|(level, l)| {
            l.entries
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.jet.is_identity(FP_TOL))
                .map(move |(index, e)| ScanWord {
                    level,
                    index,
                    word: e.word.clone(),
                })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanOptions {
    pub grid: GridSpec,
    /// Witnesses move the point by less than `eta` ...
    pub eta: f64,
    /// ... and by more than `fixpoint_tol`.
    pub fixpoint_tol: f64,
}

impl ScanOptions {
    pub fn for_radius(r: f64) -> Self {
        ScanOptions {
            grid: GridSpec::default(),
            eta: ETA_FACTOR * r,
            fixpoint_tol: FIXPOINT_FACTOR * r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanWitness {
    pub word: String,
    pub level: usize,
    pub index: usize,
    pub displacement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRecord {
    #[serde(serialize_with = "serialize_point")]
    pub point: Vec<C64>,
    pub recurrent: bool,
    pub witness: Option<ScanWitness>,
    /// Every word whose orbit stayed in the domain fixed the point (up to
    /// `fixpoint_tol`): a candidate point of the common fixed set.
    pub fixed_by_all: bool,
    pub words_in_domain: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub radius: f64,
    pub eta: f64,
    pub fixpoint_tol: f64,
    pub words_tested: usize,
    pub points: Vec<PointRecord>,
    pub witnessed: usize,
}

impl RecurrenceReport {
    /// Fraction of witnessed points among those different from the origin.
    pub fn witnessed_fraction_off_origin(&self) -> f64 {
        let off: Vec<&PointRecord> = self
            .points
            .iter()
            .filter(|p| p.point.iter().any(|c| *c != C64::new(0.0, 0.0)))
            .collect();
        if off.is_empty() {
            return 0.0;
        }
        off.iter().filter(|p| p.recurrent).count() as f64 / off.len() as f64
    }

    /// CSV with one row per point: coordinates, recurrent flag, witness
    /// word, displacement.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let n = self.points.first().map_or(0, |p| p.point.len());
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..n)
            .flat_map(|i| [format!("re{i}"), format!("im{i}")])
            .collect();
        header.extend(["recurrent", "witness", "displacement"].map(String::from));
        w.write_record(&header).map_err(csv_error)?;
        for p in &self.points {
            let mut row: Vec<String> = p
                .point
                .iter()
                .flat_map(|c| [c.re.to_string(), c.im.to_string()])
                .collect();
            row.push(p.recurrent.to_string());
            match &p.witness {
                Some(wit) => {
                    row.push(wit.word.clone());
                    row.push(wit.displacement.to_string());
                }
                None => {
                    row.push(String::new());
                    row.push(String::new());
                }
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(|e| Error::Resource(format!("csv output: {e}")))?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Resource(format!("csv output: {e}"))
}

/// For each grid point of `B_{r/2}`, the first word (in the given order)
/// whose orbit stays in the domain and moves the point by a distance in
/// `(fixpoint_tol, eta)`.
pub fn recurrence_scan(spec: &PseudogroupSpec, words: &[ScanWord], options: &ScanOptions) -> Result<RecurrenceReport> {
    if !(options.eta > options.fixpoint_tol && options.fixpoint_tol >= 0.0) {
        return Err(Error::validation(
            "0 <= fixpoint_tol < eta",
            format!("eta = {}, fixpoint_tol = {}", options.eta, options.fixpoint_tol),
        ));
    }
    if let Some(w) = words
        .iter()
        .find(|w| w.word.letters().iter().any(|l| l.generator >= spec.alphabet().len()))
    {
        return Err(Error::structure(format!(
            "word at level {} index {} uses a letter outside the alphabet",
            w.level, w.index
        )));
    }
    let r = spec.radius();
    let points = grid_points(spec.dim(), r / 2.0, &options.grid);
    let records = parallel::map(&points, |q| scan_point(spec, words, options, q));
    let witnessed = records.iter().filter(|p| p.recurrent).count();
    Ok(RecurrenceReport {
        radius: r,
        eta: options.eta,
        fixpoint_tol: options.fixpoint_tol,
        words_tested: words.len(),
        points: records,
        witnessed,
    })
}

fn scan_point(spec: &PseudogroupSpec, words: &[ScanWord], options: &ScanOptions, q: &[C64]) -> PointRecord {
    let mut in_domain = 0;
    let mut all_fixed = true;
    for w in words.iter().filter(|w| !w.word.is_empty()) {
        let Some(image) = word_image(spec, &w.word, q) else {
            continue;
        };
        in_domain += 1;
        let d = distance(&image, q);
        if d > options.fixpoint_tol {
            all_fixed = false;
            if d < options.eta {
                return PointRecord {
                    point: q.to_vec(),
                    recurrent: true,
                    witness: Some(ScanWitness {
                        word: spec.alphabet().format(&w.word),
                        level: w.level,
                        index: w.index,
                        displacement: d,
                    }),
                    fixed_by_all: false,
                    words_in_domain: in_domain,
                };
            }
        }
    }
    PointRecord {
        point: q.to_vec(),
        recurrent: false,
        witness: None,
        fixed_by_all: all_fixed && in_domain > 0,
        words_in_domain: in_domain,
    }
}
