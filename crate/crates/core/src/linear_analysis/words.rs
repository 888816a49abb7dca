use serde::Serialize;

use super::group::MatrixGroupSpec;
use super::spectral::SpectralSplit;
use crate::cascade::{Letter, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::tolerances::{DEDUP_TOL, FP_TOL};

pub(crate) fn letters(spec: &MatrixGroupSpec) -> Vec<Letter> {
    (0..spec.generators().len())
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect()
}

/// All nonempty reduced words of length `≤ max_len` with their matrices, in
/// shortlex order (letters ordered `a, A, b, B, …`).
pub(crate) fn reduced_words(spec: &MatrixGroupSpec, max_len: usize) -> Vec<(Word, CMatrix)> {
    let alphabet = letters(spec);
    let mat = |l: Letter| {
        if l.inverse {
            &spec.inverses()[l.generator]
        } else {
            &spec.generators()[l.generator]
        }
    };
    let mut out: Vec<(Word, CMatrix)> = Vec::new();
    let mut frontier: Vec<(Vec<Letter>, CMatrix)> = vec![(Vec::new(), linalg::identity(spec.dim()))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for (w, m) in &frontier {
            for &l in &alphabet {
                if w.last().is_some_and(|&t| t == l.inv()) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l);
                next.push((w2, m * mat(l)));
            }
        }
        out.extend(next.iter().map(|(w, m)| (Word::from_letters(w.clone()), m.clone())));
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub bound: f64,
    pub words_checked: usize,
    pub max_trace_modulus: f64,
    /// Words whose trace has modulus above the bound, with that modulus.
    pub violations: Vec<(String, f64)>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Screen for hyperbolic elements: groups without them have traces bounded
/// by the dimension.
pub fn trace_bound_check(spec: &MatrixGroupSpec, max_word_len: usize, c: f64) -> TraceReport {
    let words = reduced_words(spec, max_word_len);
    let mut report = TraceReport {
        bound: c,
        words_checked: words.len(),
        max_trace_modulus: 0.0,
        violations: Vec::new(),
    };
    for (w, m) in &words {
        let t = m.trace().norm();
        report.max_trace_modulus = report.max_trace_modulus.max(t);
        if t > c * (1.0 + FP_TOL) {
            report.violations.push((spec.alphabet().format(w), t));
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeWitness {
    pub word: String,
    #[serde(skip)]
    pub matrix: CMatrix,
    #[serde(skip)]
    pub image: CVector,
    /// Principal angles (radians) between the line through the image and
    /// the two subspaces of the splitting.
    pub angle_to_stable: f64,
    pub angle_to_center_unstable: f64,
}

/// Shortest word `B` (shortlex) such that the line through `B v` is at
/// angle `> escape_tol` from both `V^s` and `V^{cu}`.
pub fn escape_direction(
    spec: &MatrixGroupSpec,
    split: &SpectralSplit,
    v: &CVector,
    max_word_len: usize,
    escape_tol: f64,
) -> Result<EscapeWitness> {
    if v.norm() == 0.0 || v.len() != spec.dim() {
        return Err(Error::validation("v ∈ V^s", "v must be a nonzero vector of the right size"));
    }
    if linalg::angle_to_subspace(v, &split.stable) > 1e-6 {
        return Err(Error::validation("v ∈ V^s", "v is not in the stable subspace"));
    }
    for (w, m) in reduced_words(spec, max_word_len) {
        let image = &m * v;
        let a_s = linalg::angle_to_subspace(&image, &split.stable);
        let a_cu = linalg::angle_to_subspace(&image, &split.center_unstable);
        if a_s > escape_tol && a_cu > escape_tol {
            return Ok(EscapeWitness {
                word: spec.alphabet().format(&w),
                matrix: m,
                image,
                angle_to_stable: a_s,
                angle_to_center_unstable: a_cu,
            });
        }
    }
    Err(Error::domain(format!(
        "no word of length <= {max_word_len} moves v off [V^s] ∪ [V^cu]; \
         the group likely preserves a subspace (see burnside_irreducibility)"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedSeriesOptions {
    /// Words over the current generators used as commutator arguments.
    pub max_word_len: usize,
    /// Cap on the argument pool per depth.
    pub max_pool: usize,
    /// Cap on the generators kept per depth (largest distance to `I` first).
    pub max_generators: usize,
    pub tol: f64,
}

impl Default for DerivedSeriesOptions {
    fn default() -> Self {
        DerivedSeriesOptions {
            max_word_len: 2,
            max_pool: 256,
            max_generators: 32,
            tol: FP_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedLevel {
    pub depth: usize,
    /// Words over the original generators.
    pub words: Vec<String>,
    #[serde(skip)]
    pub matrices: Vec<CMatrix>,
    pub max_distance: f64,
    pub trivial: bool,
    /// True when a pool or generator cap dropped elements at this depth.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedSeriesReport {
    pub levels: Vec<DerivedLevel>,
}

impl DerivedSeriesReport {
    /// First depth whose generators are all within tolerance of `I`.
    pub fn trivial_depth(&self) -> Option<usize> {
        self.levels.iter().find(|l| l.trivial).map(|l| l.depth)
    }
}

/// Generators of `G^(k)` for `k ≤ depth`: depth `k + 1` is spanned by the
/// commutators `[x, y]` of words `x, y` of length `≤ max_word_len` over the
/// depth-`k` generators, merged by matrix proximity and with identity
/// elements removed.
///
/// Commutator entries grow quickly for non-compact groups; a level whose
/// generators can no longer be inverted reliably is a domain error.
pub fn derived_series(
    spec: &MatrixGroupSpec,
    depth: usize,
    options: &DerivedSeriesOptions,
) -> Result<DerivedSeriesReport> {
    let alphabet = spec.alphabet();
    let mut words: Vec<Word> = (0..spec.generators().len()).map(Word::letter).collect();
    let mut mats: Vec<CMatrix> = spec.generators().to_vec();
    let mut levels = Vec::new();
    let mut truncated = false;
    for k in 0..=depth {
        let max_distance = mats
            .iter()
            .map(linalg::distance_to_identity)
            .fold(0.0, f64::max);
        let trivial = max_distance <= options.tol;
        levels.push(DerivedLevel {
            depth: k,
            words: words.iter().map(|w| alphabet.format(w)).collect(),
            matrices: mats.clone(),
            max_distance,
            trivial,
            truncated,
        });
        if trivial || k == depth {
            break;
        }
        // argument pool: reduced words over the current generators
        let sub = MatrixGroupSpec::from_matrices(mats.clone()).map_err(|e| {
            Error::domain(format!("derived series stops at depth {k}: {e}"))
        })?;
        let mut pool: Vec<(Word, CMatrix)> = reduced_words(&sub, options.max_word_len)
            .into_iter()
            .map(|(w, m)| {
                let expanded = w
                    .letters()
                    .iter()
                    .map(|l| {
                        let base = &words[l.generator];
                        if l.inverse {
                            base.inverse()
                        } else {
                            base.clone()
                        }
                    })
                    .fold(Word::empty(), |acc, x| acc.concat(&x))
                    .free_reduce();
                (expanded, m)
            })
            .collect();
        truncated = pool.len() > options.max_pool;
        pool.truncate(options.max_pool);
        let mut next: Vec<(Word, CMatrix, f64)> = Vec::new();
        for (i, (wx, x)) in pool.iter().enumerate() {
            for (wy, y) in pool.iter().skip(i + 1) {
                let c = linalg::commutator(x, y)
                    .ok_or_else(|| Error::domain(format!("derived series stops at depth {k}: singular word")))?;
                let d = linalg::distance_to_identity(&c);
                if d <= options.tol {
                    continue;
                }
                if next.iter().any(|(_, m, _)| linalg::max_abs(&(m - &c)) < DEDUP_TOL) {
                    continue;
                }
                next.push((Word::commutator(wx, wy), c, d));
            }
        }
        if next.len() > options.max_generators {
            truncated = true;
            next.sort_by(|a, b| b.2.total_cmp(&a.2));
            next.truncate(options.max_generators);
        }
        if next.is_empty() {
            words = vec![Word::empty()];
            mats = vec![linalg::identity(spec.dim())];
        } else {
            words = next.iter().map(|(w, _, _)| w.clone()).collect();
            mats = next.into_iter().map(|(_, m, _)| m).collect();
        }
    }
    Ok(DerivedSeriesReport { levels })
}
