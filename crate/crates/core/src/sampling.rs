//! Seeded random generation of jets and matrices.
//!
//! All sampling goes through [`rng`], a ChaCha8 stream; identical seeds give
//! identical experiments on every platform.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::jet::{JetDiffeo, JetVectorField, MonomialBasis};
use crate::linalg::{self, CMatrix};

/// Name and version of the generator recorded in reports.
pub const GENERATOR: &str = "rand_chacha-0.3/ChaCha8Rng";

pub type ExperimentRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the square `[-1, 1] + i[-1, 1]`.
pub fn complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex(rng))
}

/// Random matrix that is comfortably invertible (`I + M/(2‖M‖)`-style).
pub fn well_conditioned<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = matrix(rng, n);
    let s = linalg::spectral_norm(&m).max(1e-12);
    linalg::identity(n) + m * C64::new(0.5 / s, 0.0)
}

/// Unit upper triangular with off-diagonal entries in the unit square.
pub fn unit_upper_triangular<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
        std::cmp::Ordering::Less => complex(rng),
        std::cmp::Ordering::Greater => C64::new(0.0, 0.0),
    })
}

/// Uniform point of the complex `n`-ball of radius `r`.
pub fn point_in_ball<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<C64> {
    let mut z: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = crate::jet::euclidean_norm(&z).max(1e-300);
    let radius = r * rng.gen_range(0.0f64..1.0).powf(1.0 / (2 * n) as f64);
    z.iter_mut().for_each(|c| *c *= radius / norm);
    z
}

/// Uniform point of the sphere `|z| = r`.
pub fn point_on_sphere<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<C64> {
    let mut z: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = crate::jet::euclidean_norm(&z).max(1e-300);
    z.iter_mut().for_each(|c| *c *= r / norm);
    z
}

fn nonlinear_terms<R: Rng>(rng: &mut R, basis: &MonomialBasis, scale: f64) -> Vec<C64> {
    (0..basis.len())
        .map(|k| {
            if basis.degree_of(k) >= 2 {
                complex(rng) * scale
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Jet with the given linear part and random higher-order coefficients in
/// `[-scale, scale]^2`.
pub fn jet_with_linear<R: Rng>(
    rng: &mut R,
    linear: &CMatrix,
    degree: usize,
    scale: f64,
) -> JetDiffeo {
    let n = linear.nrows();
    let base = JetDiffeo::from_linear(linear, degree).expect("invertible linear part");
    let basis = MonomialBasis::get(n, degree);
    let mut coords: Vec<Vec<C64>> = (0..n).map(|i| base.dense(i).to_vec()).collect();
    for row in coords.iter_mut() {
        let extra = nonlinear_terms(rng, &basis, scale);
        row.iter_mut().zip(extra).for_each(|(c, e)| *c += e);
    }
    JetDiffeo::from_raw(basis, coords)
}

/// Generic jet: well-conditioned random linear part plus nonlinear terms.
pub fn jet<R: Rng>(rng: &mut R, dim: usize, degree: usize, scale: f64) -> JetDiffeo {
    let lin = well_conditioned(rng, dim);
    jet_with_linear(rng, &lin, degree, scale)
}

/// Jet whose coefficient bound `sup_norm_bound(g, 1)` equals `bound`
/// exactly (up to rounding).
pub fn jet_with_bound<R: Rng>(rng: &mut R, dim: usize, degree: usize, bound: f64) -> JetDiffeo {
    let basis = MonomialBasis::get(dim, degree);
    // coefficients of g - Id
    let mut coords: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..basis.len())
                .map(|k| if k == 0 { C64::new(0.0, 0.0) } else { complex(rng) })
                .collect()
        })
        .collect();
    let per_coord: Vec<f64> = coords
        .iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .collect();
    let current = per_coord.iter().map(|s| s * s).sum::<f64>().sqrt();
    let s = bound / current;
    for (i, row) in coords.iter_mut().enumerate() {
        row.iter_mut().for_each(|c| *c *= s);
        row[basis.var_index(i)] += C64::new(1.0, 0.0);
    }
    JetDiffeo::from_raw(basis, coords)
}

/// Vector field whose linear part is a conjugated strictly upper triangular
/// matrix (hence nilpotent).
pub fn nilpotent_field<R: Rng>(rng: &mut R, dim: usize, degree: usize, scale: f64) -> JetVectorField {
    let q = well_conditioned(rng, dim);
    let qi = linalg::invert(&q).expect("well conditioned");
    let u = CMatrix::from_fn(dim, dim, |i, j| {
        if i < j {
            complex(rng) * scale
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let lin = &q * u * qi;
    let mut x = JetVectorField::from_linear(&lin, degree).expect("square");
    let basis = MonomialBasis::get(dim, degree);
    for row in x.coords.iter_mut() {
        let extra = nonlinear_terms(rng, &basis, scale);
        row.iter_mut().zip(extra).for_each(|(c, e)| *c += e);
    }
    x
}
