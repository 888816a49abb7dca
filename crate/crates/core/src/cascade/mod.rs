//! The leveled commutator families `S_p(j)`.
//!
//! `S_p(0)` is a generator set closed under inverses and
//! `S_p(j+1) = { [f,g], [g,f] : f ∈ S_p(j), g ∈ S_p(j-p) ∪ … ∪ S_p(j) }`
//! with `S_p(k) = {1}` for `k < 0`. A group is `p`-pseudo-solvable for the
//! generators when some level is `{1}`.
//!
//! Triviality is always triviality of degree-`d` jets, a necessary but not
//! sufficient condition for triviality of the germs.

mod derivation;
mod free_words;
mod word;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use derivation::{verify_alpha_membership, Derivation};
pub use free_words::{free_words_alpha, AlphaWords};
pub use word::{free_reduce, Alphabet, Letter, Word, WordDisplay};

use crate::error::{Error, Result};
use crate::jet::JetDiffeo;
use crate::tolerances::{DEDUP_TOL, DEFAULT_LEVEL_CAP, FP_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeOptions {
    pub p: usize,
    /// Entries closer than this (max coefficient distance) are merged.
    pub dedup_tol: f64,
    /// Maximum number of distinct entries per level in exhaustive mode.
    pub level_cap: usize,
    /// When set, each level keeps only the `width` entries farthest from the
    /// identity (plus their inverses) and is marked incomplete if anything
    /// was dropped.
    pub beam_width: Option<usize>,
    /// Radius `r` of the norm certificate `sup_norm_bound(· - Id, r)`.
    pub certificate_radius: f64,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        CascadeOptions {
            p: 1,
            dedup_tol: DEDUP_TOL,
            level_cap: DEFAULT_LEVEL_CAP,
            beam_width: None,
            certificate_radius: 0.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CascadeEntry {
    pub word: Word,
    pub jet: JetDiffeo,
    pub norm_certificate: f64,
    inverse: JetDiffeo,
}

impl CascadeEntry {
    pub fn inverse_jet(&self) -> &JetDiffeo {
        &self.inverse
    }

    pub fn distance_to_identity(&self) -> f64 {
        self.jet.distance_to_identity()
    }
}

#[derive(Clone, Debug)]
pub struct CascadeLevel {
    pub entries: Vec<CascadeEntry>,
    /// False when this level or one it was built from was truncated by the
    /// beam; the entries are then genuine members of `S_p(j)` but not all
    /// of it.
    pub complete: bool,
}

impl CascadeLevel {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.jet.is_identity(tol))
    }
}

#[derive(Clone, Debug)]
pub struct CascadeState {
    alphabet: Alphabet,
    generators: Vec<JetDiffeo>,
    inverses: Vec<JetDiffeo>,
    options: CascadeOptions,
    levels: Vec<CascadeLevel>,
}

/// One line of the cascade JSON-lines report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadeRecord {
    pub level: usize,
    pub word: String,
    pub norm_certificate: f64,
    pub jet_ref: String,
}

/// Projection index used to find merge candidates: the projection is
/// 1-Lipschitz for the max-coefficient distance, so every jet within `tol`
/// of a stored one has projection within `tol` of it.
struct ProximityIndex {
    weights: Vec<f64>,
    keys: BTreeMap<OrdF64, Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl ProximityIndex {
    fn new(len: usize) -> Self {
        // weights 1 + frac(k φ), normalized to unit l1 norm
        let golden = 0.618_033_988_749_895_f64;
        let raw: Vec<f64> = (0..len).map(|k| 1.0 + (k as f64 * golden).fract()).collect();
        let total: f64 = raw.iter().sum();
        ProximityIndex {
            weights: raw.into_iter().map(|w| w / total).collect(),
            keys: BTreeMap::new(),
        }
    }

    fn project(&self, jet: &JetDiffeo) -> f64 {
        let mut acc = 0.0;
        let mut k = 0;
        for i in 0..jet.dim() {
            for c in jet.dense(i) {
                acc += self.weights[k] * c.re + self.weights[k + 1] * c.im;
                k += 2;
            }
        }
        acc
    }

    fn find(&self, key: f64, tol: f64, close: impl Fn(usize) -> bool) -> Option<usize> {
        self.keys
            .range(OrdF64(key - tol)..=OrdF64(key + tol))
            .flat_map(|(_, v)| v.iter().copied())
            .filter(|&i| close(i))
            .min()
    }

    fn insert(&mut self, key: f64, idx: usize) {
        self.keys.entry(OrdF64(key)).or_default().push(idx);
    }
}

/// Distinct entries of a level under construction, with the index of each
/// entry's inverse.
struct LevelBuilder {
    index: ProximityIndex,
    entries: Vec<CascadeEntry>,
    partner: Vec<usize>,
    tol: f64,
    radius: f64,
}

impl LevelBuilder {
    fn new(jet_len: usize, tol: f64, radius: f64) -> Self {
        LevelBuilder {
            index: ProximityIndex::new(jet_len),
            entries: Vec::new(),
            partner: Vec::new(),
            tol,
            radius,
        }
    }

    fn insert(&mut self, word: Word, jet: JetDiffeo, inverse: JetDiffeo) -> (usize, bool) {
        let key = self.index.project(&jet);
        let entries = &self.entries;
        let tol = self.tol;
        if let Some(i) = self.index.find(key, tol, |i| entries[i].jet.distance(&jet) < tol) {
            return (i, false);
        }
        let idx = self.entries.len();
        let norm_certificate = jet.sup_norm_bound(self.radius).expect("positive radius");
        self.entries.push(CascadeEntry {
            word,
            jet,
            norm_certificate,
            inverse,
        });
        self.partner.push(idx);
        self.index.insert(key, idx);
        (idx, true)
    }

    /// Insert `x` and its inverse `y` as a pair.
    fn insert_pair(&mut self, x: (Word, JetDiffeo), y: (Word, JetDiffeo)) {
        let (ix, new_x) = self.insert(x.0, x.1.clone(), y.1.clone());
        let (iy, new_y) = self.insert(y.0, y.1, x.1);
        if new_x {
            self.partner[ix] = iy;
        }
        if new_y {
            self.partner[iy] = ix;
        }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    /// Keep the `width` entries with the largest certificates, completed by
    /// their inverses. Returns true if entries were dropped.
    fn truncate_beam(&mut self, width: usize) -> bool {
        if self.entries.len() <= width {
            return false;
        }
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            self.entries[b]
                .norm_certificate
                .total_cmp(&self.entries[a].norm_certificate)
                .then(a.cmp(&b))
        });
        let mut keep = vec![false; self.entries.len()];
        let mut count = 0;
        for &i in &order {
            if count >= width {
                break;
            }
            for j in [i, self.partner[i]] {
                if !keep[j] {
                    keep[j] = true;
                    count += 1;
                }
            }
        }
        let entries = std::mem::take(&mut self.entries);
        self.entries = entries
            .into_iter()
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e))
            .collect();
        true
    }
}

enum Partner<'a> {
    One,
    Entry(&'a CascadeEntry),
}

fn commutator_with_inverses(
    f: &JetDiffeo,
    f_inv: &JetDiffeo,
    g: &JetDiffeo,
    g_inv: &JetDiffeo,
) -> JetDiffeo {
    let left = f.compose(g).expect("matching shapes");
    let right = f_inv.compose(g_inv).expect("matching shapes");
    left.compose(&right).expect("matching shapes")
}

impl CascadeState {
    /// Level 0 from named generators; the inverses are added automatically.
    pub fn new(generators: Vec<(String, JetDiffeo)>, options: CascadeOptions) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::validation("generators", "at least one generator is required"));
        }
        if !(options.dedup_tol >= 0.0) || !(options.certificate_radius > 0.0) {
            return Err(Error::validation(
                "cascade options",
                "dedup_tol must be >= 0 and certificate_radius > 0",
            ));
        }
        if options.beam_width == Some(0) || options.level_cap == 0 {
            return Err(Error::validation(
                "cascade options",
                "beam_width and level_cap must be positive",
            ));
        }
        let names: Vec<&str> = generators.iter().map(|(n, _)| n.as_str()).collect();
        let alphabet = Alphabet::new(&names)?;
        let (dim, degree) = (generators[0].1.dim(), generators[0].1.degree());
        if generators
            .iter()
            .any(|(_, g)| g.dim() != dim || g.degree() != degree)
        {
            return Err(Error::structure("generators must share dimension and degree"));
        }
        let jets: Vec<JetDiffeo> = generators.into_iter().map(|(_, g)| g).collect();
        let inverses = jets
            .iter()
            .map(|g| g.invert())
            .collect::<Result<Vec<_>>>()?;
        let mut builder = LevelBuilder::new(
            2 * jets[0].dim() * jets[0].basis().len(),
            options.dedup_tol,
            options.certificate_radius,
        );
        for (i, (g, gi)) in jets.iter().zip(&inverses).enumerate() {
            builder.insert_pair(
                (Word::letter(i), g.clone()),
                (Word::inverse_letter(i), gi.clone()),
            );
        }
        let level0 = CascadeLevel {
            entries: builder.entries,
            complete: true,
        };
        Ok(CascadeState {
            alphabet,
            generators: jets,
            inverses,
            options,
            levels: vec![level0],
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn options(&self) -> &CascadeOptions {
        &self.options
    }

    pub fn generators(&self) -> &[JetDiffeo] {
        &self.generators
    }

    pub fn levels(&self) -> &[CascadeLevel] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> Option<&CascadeLevel> {
        self.levels.get(j)
    }

    /// Index of the deepest computed level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.generators[0].degree()
    }

    /// The jet denoted by `w` over the generator jets.
    pub fn evaluate_word(&self, w: &Word) -> JetDiffeo {
        let id = JetDiffeo::identity(self.dim(), self.degree());
        w.evaluate(&self.generators, &self.inverses, id, |a, b| {
            a.compose(b).expect("matching shapes")
        })
    }

    /// Populate levels through `up_to_level`. On a level-cap overflow the
    /// levels computed so far are kept and a resource error is returned.
    pub fn extend(&mut self, up_to_level: usize) -> Result<()> {
        while self.depth() < up_to_level {
            let next = self.build_next_level()?;
            self.levels.push(next);
        }
        Ok(())
    }

    fn build_next_level(&self) -> Result<CascadeLevel> {
        let j = self.depth();
        let p = self.options.p;
        let f_level = &self.levels[j];
        let mut partners: Vec<Partner> = Vec::new();
        let mut complete = f_level.complete;
        if j < p {
            partners.push(Partner::One);
        }
        for k in j.saturating_sub(p)..=j {
            complete &= self.levels[k].complete;
            partners.extend(self.levels[k].entries.iter().map(Partner::Entry));
        }
        let jet_len = 2 * self.dim() * self.generators[0].basis().len();
        let mut builder = LevelBuilder::new(
            jet_len,
            self.options.dedup_tol,
            self.options.certificate_radius,
        );
        let identity = JetDiffeo::identity(self.dim(), self.degree());
        let chunk = 16;
        for rows in f_level.entries.chunks(chunk) {
            let computed = crate::parallel::map(rows, |f| {
                partners
                    .iter()
                    .map(|g| match g {
                        Partner::One => None,
                        Partner::Entry(g) => {
                            let fg = commutator_with_inverses(&f.jet, &f.inverse, &g.jet, &g.inverse);
                            let gf = commutator_with_inverses(&g.jet, &g.inverse, &f.jet, &f.inverse);
                            Some((fg, gf))
                        }
                    })
                    .collect::<Vec<_>>()
            });
            for (f, row) in rows.iter().zip(computed) {
                for (g, jets) in partners.iter().zip(row) {
                    match (g, jets) {
                        (Partner::Entry(g), Some((fg, gf))) => {
                            builder.insert_pair(
                                (Word::commutator(&f.word, &g.word), fg),
                                (Word::commutator(&g.word, &f.word), gf),
                            );
                        }
                        _ => {
                            builder.insert_pair(
                                (Word::empty(), identity.clone()),
                                (Word::empty(), identity.clone()),
                            );
                        }
                    }
                }
            }
            if self.options.beam_width.is_none() && builder.len() > self.options.level_cap {
                return Err(Error::Resource(format!(
                    "level {} exceeds the cap of {} distinct entries; levels 0..={} are kept",
                    j + 1,
                    self.options.level_cap,
                    j
                )));
            }
        }
        if let Some(width) = self.options.beam_width {
            if builder.truncate_beam(width) {
                complete = false;
            }
        }
        Ok(CascadeLevel {
            entries: builder.entries,
            complete,
        })
    }

    /// JSON-lines records, one per entry, in level order.
    pub fn report_records(&self) -> Vec<CascadeRecord> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(j, level)| {
                level.entries.iter().enumerate().map(move |(i, e)| CascadeRecord {
                    level: j,
                    word: self.alphabet.format(&e.word),
                    norm_certificate: e.norm_certificate,
                    jet_ref: format!("L{j}/{i}"),
                })
            })
            .collect()
    }
}

/// Functional form of [`CascadeState::extend`] with an explicit merge
/// tolerance; the state is returned even when the cap is hit.
pub fn cascade_extend(
    mut state: CascadeState,
    up_to_level: usize,
    dedup_tol: f64,
) -> (CascadeState, Result<()>) {
    state.options.dedup_tol = dedup_tol;
    let result = state.extend(up_to_level);
    (state, result)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub level: usize,
    pub index: usize,
    pub word: String,
    pub word_length: usize,
    pub norm_certificate: f64,
    pub distance_to_identity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProbeOutcome {
    /// `S_p(level)` is trivial at the jet degree and no earlier level is.
    TerminatesAt { level: usize },
    /// One witness per level `0..=max_level`, each a genuine element of its
    /// level at jet distance > tol from the identity.
    NonTrivialThrough { max_level: usize, witnesses: Vec<Witness> },
    /// The kept entries of an incomplete (beam-truncated) level are all
    /// trivial, which proves nothing about the full level.
    Undetermined { level: usize },
}

/// Decide whether the computed cascade collapses by `max_level`.
pub fn pseudo_solvable_probe(state: &CascadeState, max_level: usize, tol: f64) -> Result<ProbeOutcome> {
    if state.depth() < max_level {
        return Err(Error::validation(
            "probe depth",
            format!(
                "cascade has depth {} but the probe needs level {max_level}",
                state.depth()
            ),
        ));
    }
    let mut witnesses = Vec::new();
    for (j, level) in state.levels.iter().enumerate().take(max_level + 1) {
        let best = level
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.distance_to_identity()))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        match best {
            Some((i, dist)) if dist > tol => {
                let e = &level.entries[i];
                witnesses.push(Witness {
                    level: j,
                    index: i,
                    word: state.alphabet.format(&e.word),
                    word_length: e.word.len(),
                    norm_certificate: e.norm_certificate,
                    distance_to_identity: dist,
                });
            }
            _ if level.complete => return Ok(ProbeOutcome::TerminatesAt { level: j }),
            _ => return Ok(ProbeOutcome::Undetermined { level: j }),
        }
    }
    Ok(ProbeOutcome::NonTrivialThrough {
        max_level,
        witnesses,
    })
}

/// Default triviality tolerance of the probe.
pub const PROBE_TOL: f64 = FP_TOL;

/// The two sufficient values of `p` for pseudo-solvability to imply
/// solvability in dimension `n`: `C^n` with `C = (n+1)^3 (n^2+1)`, and
/// `n (n^2 (n^2+1))^n`. Reported, never enforced.
pub fn theoretical_p_thresholds(n: u32) -> (BigUint, BigUint) {
    let n_big = BigUint::from(n);
    let c = BigUint::from(n + 1).pow(3) * BigUint::from(n * n + 1);
    let first = c.pow(n);
    let second = &n_big * (BigUint::from(n * n) * BigUint::from(n * n + 1)).pow(n);
    (first, second)
}

#[cfg(test)]
mod tests;
