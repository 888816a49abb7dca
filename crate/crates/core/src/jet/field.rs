use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::basis::{MonomialBasis, MultiIndex};
use super::diffeo::JetDiffeo;
use super::{collect_terms, poly, TermList};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::FP_TOL;

/// A formal vector field `Σ X_i ∂/∂x_i` vanishing at the origin, truncated at
/// degree `d`.
#[derive(Clone, Debug)]
pub struct JetVectorField {
    pub(crate) basis: Arc<MonomialBasis>,
    pub(crate) coords: Vec<Vec<C64>>,
}

impl JetVectorField {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim >= 1 && degree >= 1, "jets need dim >= 1 and degree >= 1");
        let basis = MonomialBasis::get(dim, degree);
        let coords = vec![poly::zero(&basis); dim];
        JetVectorField { basis, coords }
    }

    pub fn from_terms(dim: usize, degree: usize, terms: &[TermList]) -> Result<Self> {
        let (basis, coords) = collect_terms(dim, degree, terms)?;
        Ok(JetVectorField { basis, coords })
    }

    pub fn from_linear(m: &CMatrix, degree: usize) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::structure("linear part must be square and nonempty"));
        }
        let mut x = JetVectorField::zero(m.nrows(), degree.max(1));
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                x.coords[i][x.basis.var_index(j)] = m[(i, j)];
            }
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn coeff(&self, coord: usize, index: &MultiIndex) -> C64 {
        self.basis
            .index_of(index)
            .map_or(C64::new(0.0, 0.0), |k| self.coords[coord][k])
    }

    pub fn terms(&self, coord: usize) -> impl Iterator<Item = (&MultiIndex, C64)> + '_ {
        self.coords[coord]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(move |(k, &c)| (self.basis.monomial(k), c))
    }

    pub fn dense(&self, coord: usize) -> &[C64] {
        &self.coords[coord]
    }

    pub fn linear_part(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| self.coords[i][self.basis.var_index(j)])
    }

    pub fn is_nilpotent(&self, tol: f64) -> bool {
        linalg::is_nilpotent(&self.linear_part(), tol)
    }

    pub fn distance(&self, other: &JetVectorField) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        debug_assert_eq!(self.degree(), other.degree());
        self.coords
            .iter()
            .zip(&other.coords)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coords.iter().map(|h| poly::max_abs(h)).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> JetVectorField {
        let coords = self
            .coords
            .iter()
            .map(|h| h.iter().map(|c| c * s).collect())
            .collect();
        JetVectorField {
            basis: self.basis.clone(),
            coords,
        }
    }

    pub fn add(&self, other: &JetVectorField) -> Result<JetVectorField> {
        if self.dim() != other.dim() || self.degree() != other.degree() {
            return Err(Error::structure("vector field shapes differ"));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(JetVectorField {
            basis: self.basis.clone(),
            coords,
        })
    }

    /// Apply `X` as a derivation to a truncated function.
    pub(crate) fn derive(&self, h: &[C64]) -> Vec<C64> {
        poly::derivation(&self.basis, &self.coords, h)
    }

    /// Bracket normalized so that `log [exp X, exp Y] = [X, Y] + (higher
    /// order)` for the group commutator `f g f⁻¹ g⁻¹` of jets: components
    /// `Y(X_i) - X(Y_i)`.
    pub fn lie_bracket(&self, other: &JetVectorField) -> Result<JetVectorField> {
        if self.dim() != other.dim() || self.degree() != other.degree() {
            return Err(Error::structure("vector field shapes differ"));
        }
        let coords = (0..self.dim())
            .map(|i| {
                let yx = other.derive(&self.coords[i]);
                let xy = self.derive(&other.coords[i]);
                yx.iter().zip(&xy).map(|(a, b)| a - b).collect()
            })
            .collect();
        Ok(JetVectorField {
            basis: self.basis.clone(),
            coords,
        })
    }

    /// Time-one flow: `φ_i = exp(X)(x_i) = Σ_k X^k(x_i) / k!`.
    ///
    /// The derivation induced by `X` on the jet space is nilpotent exactly
    /// when the linear part is nilpotent, so the series is a finite sum.
    pub fn exp(&self) -> Result<JetDiffeo> {
        if !self.is_nilpotent(FP_TOL) {
            return Err(Error::domain(
                "exp requires a vector field with nilpotent linear part",
            ));
        }
        let basis = &self.basis;
        let steps = basis.jet_space_dim();
        let coords = (0..self.dim())
            .map(|i| {
                let mut term = poly::zero(basis);
                term[basis.var_index(i)] = C64::new(1.0, 0.0);
                let mut sum = term.clone();
                for k in 1..=steps {
                    term = self.derive(&term);
                    let inv_k = 1.0 / k as f64;
                    term.iter_mut().for_each(|c| *c *= inv_k);
                    if poly::is_exact_zero(&term) {
                        break;
                    }
                    sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
                }
                sum
            })
            .collect();
        Ok(JetDiffeo::from_raw(basis.clone(), coords))
    }
}

impl JetDiffeo {
    /// Infinitesimal generator of a unipotent jet: `log C_φ` applied to the
    /// coordinate functions, where `C_φ(h) = h ∘ φ` acts on the jet space
    /// and `C_φ - I` is nilpotent there.
    pub fn log(&self) -> Result<JetVectorField> {
        if !self.is_unipotent(FP_TOL) {
            return Err(Error::domain("log requires a unipotent jet"));
        }
        // The alternating series cancels badly when `C_φ - I` is large, so
        // follow it with Newton steps: the residual `exp(-Y) ∘ φ` is close to
        // the identity and its own series is accurate.
        let mut y = self.log_series();
        let mut last = f64::INFINITY;
        for _ in 0..LOG_REFINE_STEPS {
            let back = y.scale(C64::new(-1.0, 0.0)).exp()?;
            let z = back.compose(self)?.log_series();
            let size = z.max_coeff();
            if size >= last {
                break;
            }
            y = y.add(&y.dexp_inverse(&z)?)?;
            last = size;
            if size <= f64::EPSILON * y.max_coeff().max(1.0) {
                break;
            }
        }
        Ok(y)
    }

    /// `log C_φ = Σ_k (-1)^(k+1) (C_φ - I)^k / k` on the coordinate functions.
    fn log_series(&self) -> JetVectorField {
        let basis = self.basis.clone();
        let pows = poly::powers(&basis, &self.coords);
        let steps = basis.jet_space_dim();
        let coords = (0..self.dim())
            .map(|i| {
                let mut w = self.coords[i].clone();
                w[basis.var_index(i)] -= C64::new(1.0, 0.0);
                let mut sum = w.clone();
                for k in 2..=steps {
                    if poly::is_exact_zero(&w) {
                        break;
                    }
                    let cw = poly::substitute(&basis, &w, &pows);
                    w = cw.iter().zip(&w).map(|(a, b)| a - b).collect();
                    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                    let factor = sign / k as f64;
                    sum.iter_mut().zip(&w).for_each(|(s, t)| *s += t * factor);
                }
                sum
            })
            .collect();
        JetVectorField { basis, coords }
    }
}

impl JetVectorField {
    /// `ad_Y / (1 - e^(-ad_Y))` applied to `z`: the first-order term of
    /// `log(exp(Y) ∘ exp(z)) - Y`.
    fn dexp_inverse(&self, z: &JetVectorField) -> Result<JetVectorField> {
        let mut term = z.clone();
        let mut sum = z.clone();
        for &b in BERNOULLI_OVER_FACTORIAL.iter().skip(1) {
            term = self.lie_bracket(&term)?;
            if term.max_coeff() == 0.0 {
                break;
            }
            if b != 0.0 {
                sum = sum.add(&term.scale(C64::new(b, 0.0)))?;
            }
        }
        Ok(sum)
    }
}

/// Taylor coefficients of `x / (1 - e^(-x))`.
const BERNOULLI_OVER_FACTORIAL: [f64; 21] = [
    1.0,
    0.5,
    1.0 / 12.0,
    0.0,
    -1.0 / 720.0,
    0.0,
    1.0 / 30240.0,
    0.0,
    -1.0 / 1209600.0,
    0.0,
    1.0 / 47900160.0,
    0.0,
    -691.0 / 1307674368000.0,
    0.0,
    1.0 / 74724249600.0,
    0.0,
    -3617.0 / 10670622842880000.0,
    0.0,
    43867.0 / 5109094217170944000.0,
    0.0,
    -174611.0 / 802857662698291200000.0,
];

const LOG_REFINE_STEPS: usize = 60;

pub fn exp_nilpotent(x: &JetVectorField) -> Result<JetDiffeo> {
    x.exp()
}

pub fn log_unipotent(f: &JetDiffeo) -> Result<JetVectorField> {
    f.log()
}
