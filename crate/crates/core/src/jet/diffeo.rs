use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::basis::{MonomialBasis, MultiIndex};
use super::{collect_terms, poly, TermList};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::DET_TOL;

/// A germ of biholomorphism of `(C^n, 0)` truncated at total degree `d`.
///
/// Coordinate `i` is a polynomial without constant term; the degree-one
/// coefficients form the linear part `D_0 φ`, which is invertible.
#[derive(Clone, Debug)]
pub struct JetDiffeo {
    pub(crate) basis: Arc<MonomialBasis>,
    pub(crate) coords: Vec<Vec<C64>>,
}

impl PartialEq for JetDiffeo {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.degree() == other.degree() && self.coords == other.coords
    }
}

impl JetDiffeo {
    pub fn identity(dim: usize, degree: usize) -> Self {
        assert!(dim >= 1 && degree >= 1, "jets need dim >= 1 and degree >= 1");
        let basis = MonomialBasis::get(dim, degree);
        let coords = (0..dim)
            .map(|i| {
                let mut p = poly::zero(&basis);
                p[basis.var_index(i)] = C64::new(1.0, 0.0);
                p
            })
            .collect();
        JetDiffeo { basis, coords }
    }

    /// The jet of the linear map `x ↦ M x`.
    pub fn from_linear(m: &CMatrix, degree: usize) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::structure(format!(
                "linear part must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let dim = m.nrows();
        let mut jet = JetDiffeo::identity(dim, degree.max(1));
        for i in 0..dim {
            for j in 0..dim {
                jet.coords[i][jet.basis.var_index(j)] = m[(i, j)];
            }
        }
        jet.check_invertible()?;
        Ok(jet)
    }

    /// Build from explicit `(exponents, coefficient)` terms per coordinate.
    pub fn from_terms(dim: usize, degree: usize, terms: &[TermList]) -> Result<Self> {
        let (basis, coords) = collect_terms(dim, degree, terms)?;
        let jet = JetDiffeo { basis, coords };
        jet.check_invertible()?;
        Ok(jet)
    }

    pub(crate) fn from_raw(basis: Arc<MonomialBasis>, coords: Vec<Vec<C64>>) -> Self {
        JetDiffeo { basis, coords }
    }

    fn check_invertible(&self) -> Result<()> {
        let det = self.linear_part().determinant().norm();
        if det.is_finite() && det > DET_TOL {
            Ok(())
        } else {
            Err(Error::Singular { det, tol: DET_TOL })
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeff(&self, coord: usize, index: &MultiIndex) -> C64 {
        self.basis
            .index_of(index)
            .map_or(C64::new(0.0, 0.0), |k| self.coords[coord][k])
    }

    /// Nonzero terms of one coordinate in graded-lex order.
    pub fn terms(&self, coord: usize) -> impl Iterator<Item = (&MultiIndex, C64)> + '_ {
        self.coords[coord]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(move |(k, &c)| (self.basis.monomial(k), c))
    }

    /// Raw dense coefficients of one coordinate, indexed by the basis.
    pub fn dense(&self, coord: usize) -> &[C64] {
        &self.coords[coord]
    }

    pub fn linear_part(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| self.coords[i][self.basis.var_index(j)])
    }

    fn check_compatible(&self, other: &JetDiffeo) -> Result<()> {
        if self.dim() != other.dim() || self.degree() != other.degree() {
            return Err(Error::structure(format!(
                "jet shapes differ: (dim {}, degree {}) vs (dim {}, degree {})",
                self.dim(),
                self.degree(),
                other.dim(),
                other.degree()
            )));
        }
        Ok(())
    }

    /// `self ∘ other`, truncated at degree `d`.
    pub fn compose(&self, other: &JetDiffeo) -> Result<JetDiffeo> {
        self.check_compatible(other)?;
        let pows = poly::powers(&self.basis, &other.coords);
        Ok(self.substitute_powers(&pows))
    }

    pub(crate) fn substitute_powers(&self, pows: &[Vec<C64>]) -> JetDiffeo {
        let coords = self
            .coords
            .iter()
            .map(|h| poly::substitute(&self.basis, h, pows))
            .collect();
        JetDiffeo::from_raw(self.basis.clone(), coords)
    }

    /// Compositional inverse, solved degree by degree from the linear part.
    pub fn invert(&self) -> Result<JetDiffeo> {
        let lin = self.linear_part();
        let det = lin.determinant().norm();
        if !(det.is_finite() && det > DET_TOL) {
            return Err(Error::Singular { det, tol: DET_TOL });
        }
        let lin_inv = linalg::invert(&lin).ok_or(Error::Singular { det, tol: DET_TOL })?;
        let basis = self.basis.clone();
        let n = self.dim();

        // nonlinear part N = f - L
        let mut nonlinear = self.coords.clone();
        for row in nonlinear.iter_mut() {
            for j in 0..n {
                row[basis.var_index(j)] = C64::new(0.0, 0.0);
            }
        }

        let apply_lin_inv = |v: &[Vec<C64>]| -> Vec<Vec<C64>> {
            (0..n)
                .map(|i| {
                    let mut out = poly::zero(&basis);
                    for (j, vj) in v.iter().enumerate() {
                        let a = lin_inv[(i, j)];
                        if a == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for (o, &x) in out.iter_mut().zip(vj) {
                            *o += a * x;
                        }
                    }
                    out
                })
                .collect()
        };

        let ident = JetDiffeo::identity(n, self.degree()).coords;
        let mut h = apply_lin_inv(&ident);
        // each pass fixes one more homogeneous degree of h = L^{-1}(x - N(h))
        for _ in 2..=self.degree() {
            let pows = poly::powers(&basis, &h);
            let rhs: Vec<Vec<C64>> = (0..n)
                .map(|i| {
                    let nh = poly::substitute(&basis, &nonlinear[i], &pows);
                    ident[i].iter().zip(&nh).map(|(a, b)| a - b).collect()
                })
                .collect();
            h = apply_lin_inv(&rhs);
        }
        Ok(JetDiffeo::from_raw(basis, h))
    }

    /// Group commutator `[f, g] = f g f⁻¹ g⁻¹`.
    pub fn commutator(&self, other: &JetDiffeo) -> Result<JetDiffeo> {
        self.check_compatible(other)?;
        let fg = self.compose(other)?;
        let fi_gi = self.invert()?.compose(&other.invert()?)?;
        fg.compose(&fi_gi)
    }

    /// Evaluate as an exact polynomial map.
    pub fn eval(&self, z: &[C64]) -> Vec<C64> {
        let monos = poly::monomial_values(&self.basis, z);
        self.coords
            .iter()
            .map(|h| h.iter().zip(&monos).map(|(c, m)| c * m).sum())
            .collect()
    }

    /// Drop all terms above degree `degree`.
    pub fn truncate(&self, degree: usize) -> Result<JetDiffeo> {
        if degree == 0 || degree > self.degree() {
            return Err(Error::structure(format!(
                "cannot truncate degree {} jet to degree {degree}",
                self.degree()
            )));
        }
        let basis = MonomialBasis::get(self.dim(), degree);
        let coords = self
            .coords
            .iter()
            .map(|h| h[..basis.len()].to_vec())
            .collect();
        Ok(JetDiffeo::from_raw(basis, coords))
    }

    /// Max coefficient distance. Jets must share dim and degree.
    pub fn distance(&self, other: &JetDiffeo) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        debug_assert_eq!(self.degree(), other.degree());
        self.coords
            .iter()
            .zip(&other.coords)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub fn distance_to_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, h) in self.coords.iter().enumerate() {
            for (k, c) in h.iter().enumerate() {
                let id = if k == self.basis.var_index(i) { 1.0 } else { 0.0 };
                worst = worst.max((c - id).norm());
            }
        }
        worst
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance_to_identity() <= tol
    }

    /// Rigorous upper bound for `sup_{|z| < r} |f(z) - z|`: per coordinate
    /// `Σ |c_α| r^{|α|}` over the coefficients of `f - Id`, combined by the
    /// Euclidean norm.
    pub fn sup_norm_bound(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        let rpow: Vec<f64> = (0..=self.degree()).map(|k| r.powi(k as i32)).collect();
        let mut total = 0.0;
        for (i, h) in self.coords.iter().enumerate() {
            let mut s = 0.0;
            for (k, c) in h.iter().enumerate() {
                let id = if k == self.basis.var_index(i) { 1.0 } else { 0.0 };
                s += (c - id).norm() * rpow[self.basis.degree_of(k)];
            }
            total += s * s;
        }
        Ok(total.sqrt())
    }

    /// `D_0 φ - Id` nilpotent.
    pub fn is_unipotent(&self, tol: f64) -> bool {
        let n = self.dim();
        linalg::is_nilpotent(&(self.linear_part() - linalg::identity(n)), tol)
    }

    /// `D_0 φ = Id` coefficientwise within `tol`.
    pub fn is_tangent_to_identity(&self, tol: f64) -> bool {
        let n = self.dim();
        linalg::max_abs(&(self.linear_part() - linalg::identity(n))) <= tol
    }

    /// Conjugate by the homothety `x ↦ s x`: `υ_s⁻¹ ∘ φ ∘ υ_s`.
    pub fn rescale(&self, s: f64) -> JetDiffeo {
        let coords = self
            .coords
            .iter()
            .map(|h| {
                h.iter()
                    .enumerate()
                    .map(|(k, c)| c * s.powi(self.basis.degree_of(k) as i32 - 1))
                    .collect()
            })
            .collect();
        JetDiffeo::from_raw(self.basis.clone(), coords)
    }
}

pub fn compose(f: &JetDiffeo, g: &JetDiffeo) -> Result<JetDiffeo> {
    f.compose(g)
}

pub fn invert(f: &JetDiffeo) -> Result<JetDiffeo> {
    f.invert()
}

pub fn commutator(f: &JetDiffeo, g: &JetDiffeo) -> Result<JetDiffeo> {
    f.commutator(g)
}

pub fn sup_norm_bound(f: &JetDiffeo, r: f64) -> Result<f64> {
    f.sup_norm_bound(r)
}

pub fn is_unipotent(f: &JetDiffeo, tol: f64) -> bool {
    f.is_unipotent(tol)
}

pub fn is_tangent_to_identity(f: &JetDiffeo, tol: f64) -> bool {
    f.is_tangent_to_identity(tol)
}
