use crate::cascade::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::{DET_TOL, FP_TOL};

/// Named generators of a subgroup of `GL(n, C)` together with their
/// inverses.
#[derive(Clone, Debug)]
pub struct MatrixGroupSpec {
    alphabet: Alphabet,
    generators: Vec<CMatrix>,
    inverses: Vec<CMatrix>,
}

impl MatrixGroupSpec {
    pub fn new(named: Vec<(String, CMatrix)>) -> Result<Self> {
        if named.is_empty() {
            return Err(Error::validation("generators", "at least one generator is required"));
        }
        let names: Vec<&str> = named.iter().map(|(n, _)| n.as_str()).collect();
        let alphabet = Alphabet::new(&names)?;
        let n = named[0].1.nrows();
        let mut generators = Vec::with_capacity(named.len());
        let mut inverses = Vec::with_capacity(named.len());
        for (name, m) in named {
            if m.nrows() != n || m.ncols() != n || n == 0 {
                return Err(Error::structure(format!(
                    "generator '{name}' is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let det = m.determinant().norm();
            if det <= DET_TOL {
                return Err(Error::Singular { det, tol: DET_TOL });
            }
            let inv = linalg::invert(&m).ok_or(Error::Singular { det, tol: DET_TOL })?;
            let err = linalg::max_abs(&(&m * &inv - linalg::identity(n)));
            if err > FP_TOL * linalg::max_abs(&m).max(1.0) * linalg::max_abs(&inv).max(1.0) {
                return Err(Error::structure(format!(
                    "generator '{name}' is too ill-conditioned: |M M^-1 - I| = {err:e}"
                )));
            }
            generators.push(m);
            inverses.push(inv);
        }
        Ok(MatrixGroupSpec {
            alphabet,
            generators,
            inverses,
        })
    }

    /// Generators named `a`, `b`, `c`, … in order.
    pub fn from_matrices(ms: Vec<CMatrix>) -> Result<Self> {
        let named = ms
            .into_iter()
            .enumerate()
            .map(|(i, m)| (default_name(i), m))
            .collect();
        MatrixGroupSpec::new(named)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn inverses(&self) -> &[CMatrix] {
        &self.inverses
    }

    pub fn evaluate(&self, w: &Word) -> CMatrix {
        w.evaluate(
            &self.generators,
            &self.inverses,
            linalg::identity(self.dim()),
            |a, b| a * b,
        )
    }

    /// Same group in the basis given by the columns of `p`: generators
    /// `p⁻¹ A p`.
    pub fn conjugate(&self, p: &CMatrix) -> Result<Self> {
        let pi = linalg::invert(p).ok_or_else(|| Error::structure("conjugating matrix is singular"))?;
        let named = self
            .alphabet
            .names()
            .iter()
            .zip(&self.generators)
            .map(|(n, a)| (n.clone(), &pi * a * p))
            .collect();
        MatrixGroupSpec::new(named)
    }

    /// Restriction to an invariant subspace with orthonormal basis `q`
    /// (`q^H A q`) or, for `q` spanning an orthogonal complement of an
    /// invariant subspace, the induced quotient action.
    pub(crate) fn compress(&self, q: &CMatrix) -> Self {
        let qh = q.adjoint();
        let generators: Vec<CMatrix> = self.generators.iter().map(|a| &qh * a * q).collect();
        let inverses: Vec<CMatrix> = self.inverses.iter().map(|a| &qh * a * q).collect();
        MatrixGroupSpec {
            alphabet: self.alphabet.clone(),
            generators,
            inverses,
        }
    }
}

pub(crate) fn default_name(i: usize) -> String {
    let letters = "abcdefghijklmnopqrstuvwxyz";
    if i < letters.len() {
        letters[i..=i].to_string()
    } else {
        format!("g{i}")
    }
}
