//! Truncated jets of holomorphic diffeomorphisms and vector fields of
//! `(C^n, 0)`.
//!
//! A jet of degree `d` is a tuple of `n` polynomials without constant term,
//! all arithmetic is exact truncation at total degree `d` in double
//! precision. [`JetDiffeo`] forms a group under [`JetDiffeo::compose`];
//! unipotent jets correspond bijectively to vector fields with nilpotent
//! linear part through [`JetVectorField::exp`] and [`JetDiffeo::log`].

mod basis;
mod diffeo;
mod field;
pub mod format;
mod poly;

use std::sync::Arc;

use num_complex::Complex64 as C64;

pub use basis::{MonomialBasis, MultiIndex};
pub use diffeo::{
    commutator, compose, invert, is_tangent_to_identity, is_unipotent, sup_norm_bound, JetDiffeo,
};
pub use field::{exp_nilpotent, log_unipotent, JetVectorField};

use crate::error::{Error, Result};

/// Terms of one coordinate: `(exponents, coefficient)` pairs.
pub type TermList = Vec<(MultiIndex, C64)>;

/// Open ball `B_r^n` centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallDomain {
    radius: f64,
}

impl BallDomain {
    pub fn new(radius: f64) -> Result<Self> {
        if radius > 0.0 && radius.is_finite() {
            Ok(BallDomain { radius })
        } else {
            Err(Error::domain(format!("ball radius must be positive, got {radius}")))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        euclidean_norm(z) < self.radius
    }
}

pub fn euclidean_norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn collect_terms(
    dim: usize,
    degree: usize,
    terms: &[TermList],
) -> Result<(Arc<MonomialBasis>, Vec<Vec<C64>>)> {
    if dim == 0 || degree == 0 {
        return Err(Error::structure("jets need dim >= 1 and degree >= 1"));
    }
    if terms.len() != dim {
        return Err(Error::structure(format!(
            "expected {dim} coordinates, got {}",
            terms.len()
        )));
    }
    let basis = MonomialBasis::get(dim, degree);
    let mut coords = vec![poly::zero(&basis); dim];
    for (i, list) in terms.iter().enumerate() {
        for (m, c) in list {
            if m.dim() != dim {
                return Err(Error::structure(format!(
                    "multi-index {m} has length {}, expected {dim}",
                    m.dim()
                )));
            }
            let deg = m.total_degree() as usize;
            if deg == 0 {
                return Err(Error::structure(format!(
                    "coordinate {i}: constant terms are not allowed"
                )));
            }
            if deg > degree {
                return Err(Error::structure(format!(
                    "coordinate {i}: term {m} exceeds truncation degree {degree}"
                )));
            }
            let k = basis.index_of(m).expect("degree checked");
            coords[i][k] += c;
        }
    }
    Ok((basis, coords))
}

#[cfg(test)]
mod tests;
