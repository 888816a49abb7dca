//! Orbits of the pseudogroup generated by polynomial maps restricted to a
//! ball: word evaluation with domain tracking, recurrence scans over
//! cascade words, the stable-manifold return hunt and a discrete search for
//! recurrent cells.
//!
//! Every map is the exact polynomial given by a jet; inverses are the
//! polynomials of the inverse jets. A word `w = l_1 … l_k` denotes the
//! composition `l_1 ∘ … ∘ l_k`, as in the jet group, so `l_k` is applied
//! first.

mod hunt;
mod minimal;
mod scan;

pub use hunt::{stable_manifold_hunt, HuntOptions, HuntReport, HuntReturn};
pub use minimal::{minimal_set_search, Cell, CellIndex, MinimalSetReport};
pub use scan::{
    cascade_words, grid_points, recurrence_scan, GridSpec, PointRecord, RecurrenceReport, ScanOptions,
    ScanWitness, ScanWord,
};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::cascade::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::jet::{euclidean_norm, JetDiffeo};
use crate::sampling;

/// Samples per map on the restricted sphere when checking
/// `f(B_{r·s}) ⊂ B_r`.
const CONTAINMENT_SAMPLES: usize = 256;

/// Generators `f_i` restricted to `B_{r·s}` inside `B_r`, `s` the
/// restriction factor.
#[derive(Clone, Debug)]
pub struct PseudogroupSpec {
    alphabet: Alphabet,
    maps: Vec<JetDiffeo>,
    inverses: Vec<JetDiffeo>,
    radius: f64,
    restriction: f64,
}

/// `1 - δ/4`.
pub fn default_restriction(delta: f64) -> f64 {
    1.0 - delta / 4.0
}

impl PseudogroupSpec {
    pub fn new(maps: Vec<(String, JetDiffeo)>, radius: f64, restriction: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation("r > 0", format!("r = {radius}")));
        }
        if !(restriction > 0.5 && restriction <= 1.0) {
            return Err(Error::validation(
                "1/2 < restriction <= 1",
                format!("restriction = {restriction}"),
            ));
        }
        if maps.is_empty() {
            return Err(Error::validation("maps", "at least one map is required"));
        }
        let names: Vec<&str> = maps.iter().map(|(n, _)| n.as_str()).collect();
        let alphabet = Alphabet::new(&names)?;
        let dim = maps[0].1.dim();
        if maps.iter().any(|(_, f)| f.dim() != dim) {
            return Err(Error::structure("maps must share the ambient dimension"));
        }
        let jets: Vec<JetDiffeo> = maps.into_iter().map(|(_, f)| f).collect();
        let inverses = jets.iter().map(|f| f.invert()).collect::<Result<Vec<_>>>()?;
        let spec = PseudogroupSpec {
            alphabet,
            maps: jets,
            inverses,
            radius,
            restriction,
        };
        spec.check_containment()?;
        Ok(spec)
    }

    /// Sampled check that every map and inverse sends the restricted ball
    /// into `B_r`. The norm of a holomorphic map is plurisubharmonic, so
    /// sampling the boundary sphere suffices.
    fn check_containment(&self) -> Result<()> {
        let mut rng = sampling::rng(0);
        let inner = self.inner_radius();
        let mut points: Vec<Vec<C64>> = (0..CONTAINMENT_SAMPLES)
            .map(|_| sampling::point_on_sphere(&mut rng, self.dim(), inner))
            .collect();
        for i in 0..self.dim() {
            for sign in [1.0, -1.0] {
                let mut z = vec![C64::new(0.0, 0.0); self.dim()];
                z[i] = C64::new(sign * inner, 0.0);
                points.push(z);
            }
        }
        for (k, f) in self.maps.iter().chain(&self.inverses).enumerate() {
            let worst = points
                .iter()
                .map(|z| euclidean_norm(&f.eval(z)))
                .fold(0.0, f64::max);
            if worst >= self.radius {
                let g = k % self.maps.len();
                let name = &self.alphabet.names()[g];
                let which = if k < self.maps.len() { name.clone() } else { format!("{name}^-1") };
                return Err(Error::validation(
                    "f(B_{r(1-δ/4)}) ⊂ B_r",
                    format!(
                        "map '{which}' reaches norm {worst:.6e} >= r = {} on the sphere of radius {inner:.6e}",
                        self.radius
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn restriction(&self) -> f64 {
        self.restriction
    }

    /// Radius of the common domain `B_{r·s}` of the generators.
    pub fn inner_radius(&self) -> f64 {
        self.radius * self.restriction
    }

    pub fn maps(&self) -> &[JetDiffeo] {
        &self.maps
    }

    fn apply(&self, generator: usize, inverse: bool, z: &[C64]) -> Vec<C64> {
        debug_assert!(euclidean_norm(z) <= self.radius);
        if inverse {
            self.inverses[generator].eval(z)
        } else {
            self.maps[generator].eval(z)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitStep {
    pub letter: String,
    #[serde(serialize_with = "serialize_point")]
    pub image: Vec<C64>,
    /// The image lies in the restricted ball, so the next letter may act.
    pub in_domain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    LeftDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    #[serde(serialize_with = "serialize_point")]
    pub seed: Vec<C64>,
    pub steps: Vec<OrbitStep>,
    pub terminated: Termination,
}

impl OrbitRecord {
    pub fn completed(&self) -> bool {
        self.terminated == Termination::Completed
    }

    /// Final image (the seed for the empty word).
    pub fn end(&self) -> &[C64] {
        self.steps.last().map_or(&self.seed, |s| &s.image)
    }
}

pub(crate) fn serialize_point<S: serde::Serializer>(z: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(z.len()))?;
    for c in z {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

/// Image of `point` under the word, letter by letter from the right. The
/// orbit stops as soon as an image leaves the restricted ball.
pub fn evaluate_word(spec: &PseudogroupSpec, word: &Word, point: &[C64]) -> Result<OrbitRecord> {
    if point.len() != spec.dim() {
        return Err(Error::structure(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            spec.dim()
        )));
    }
    if let Some(l) = word.letters().iter().find(|l| l.generator >= spec.maps.len()) {
        return Err(Error::structure(format!("unknown generator index {}", l.generator)));
    }
    if euclidean_norm(point) >= spec.inner_radius() {
        return Err(Error::domain(format!(
            "seed norm {} is outside the restricted ball of radius {}",
            euclidean_norm(point),
            spec.inner_radius()
        )));
    }
    let mut z = point.to_vec();
    let mut steps = Vec::with_capacity(word.len());
    for l in word.letters().iter().rev() {
        let image = spec.apply(l.generator, l.inverse, &z);
        let in_domain = euclidean_norm(&image) < spec.inner_radius();
        steps.push(OrbitStep {
            letter: spec.alphabet.name_of(*l),
            image: image.clone(),
            in_domain,
        });
        if !in_domain {
            return Ok(OrbitRecord {
                seed: point.to_vec(),
                steps,
                terminated: Termination::LeftDomain,
            });
        }
        z = image;
    }
    Ok(OrbitRecord {
        seed: point.to_vec(),
        steps,
        terminated: Termination::Completed,
    })
}

/// Final image only, or `None` if the orbit leaves the restricted ball.
pub(crate) fn word_image(spec: &PseudogroupSpec, word: &Word, point: &[C64]) -> Option<Vec<C64>> {
    let mut z = point.to_vec();
    for l in word.letters().iter().rev() {
        z = spec.apply(l.generator, l.inverse, &z);
        if euclidean_norm(&z) >= spec.inner_radius() {
            return None;
        }
    }
    Some(z)
}

pub(crate) fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests;
