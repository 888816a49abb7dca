use num_complex::Complex64 as C64;
use serde::Serialize;

use super::group::MatrixGroupSpec;
use crate::linalg::{self, CMatrix, CVector};
use crate::tolerances::{FLAG_TOL, RANK_TOL};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BurnsideOutcome {
    /// Words of length `≤ word_length` span all `n²` matrices.
    Irreducible { algebra_dim: usize, word_length: usize },
    /// The algebra closed at dimension `< n²`; `subspace` (orthonormal
    /// columns) is a proper invariant subspace.
    Reducible {
        algebra_dim: usize,
        #[serde(skip)]
        subspace: CMatrix,
        subspace_dim: usize,
    },
    /// Neither certificate was found within the word-length budget.
    Inconclusive { algebra_dim: usize },
}

fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().cloned())
}

fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_iterator(n, n, v.iter().cloned())
}

/// Grow the linear span of words of length `≤ max_word_len`; decide
/// irreducibility by reaching dimension `n²`, reducibility by closure of the
/// span below `n²` together with an explicit invariant subspace.
pub fn burnside_irreducibility(spec: &MatrixGroupSpec, max_word_len: usize) -> BurnsideOutcome {
    let n = spec.dim();
    let full = n * n;
    let mut basis: Vec<CVector> = Vec::new();
    let id = vectorize(&linalg::identity(n));
    let first = linalg::orthogonal_residual(&basis, &id, RANK_TOL).expect("identity is nonzero");
    basis.push(first);
    let mut fresh: Vec<CMatrix> = vec![linalg::identity(n)];
    if full == 1 {
        return BurnsideOutcome::Irreducible {
            algebra_dim: 1,
            word_length: 0,
        };
    }
    let multipliers: Vec<&CMatrix> = spec.generators().iter().chain(spec.inverses()).collect();
    for len in 1..=max_word_len {
        let mut added = Vec::new();
        for m in &fresh {
            for g in &multipliers {
                let prod = m * *g;
                if let Some(u) = linalg::orthogonal_residual(&basis, &vectorize(&prod), RANK_TOL) {
                    basis.push(u);
                    added.push(prod);
                    if basis.len() == full {
                        return BurnsideOutcome::Irreducible {
                            algebra_dim: full,
                            word_length: len,
                        };
                    }
                }
            }
        }
        if added.is_empty() {
            return match invariant_subspace(&basis, n) {
                Some(subspace) => BurnsideOutcome::Reducible {
                    algebra_dim: basis.len(),
                    subspace_dim: subspace.ncols(),
                    subspace,
                },
                None => BurnsideOutcome::Inconclusive {
                    algebra_dim: basis.len(),
                },
            };
        }
        fresh = added;
    }
    BurnsideOutcome::Inconclusive {
        algebra_dim: basis.len(),
    }
}

/// Smallest cyclic subspace `𝒜 v` over eigenvectors `v` of a generic element
/// of the algebra `𝒜` spanned by `basis`; proper when `𝒜` is not everything.
fn invariant_subspace(basis: &[CVector], n: usize) -> Option<CMatrix> {
    let mats: Vec<CMatrix> = basis.iter().map(|v| unvectorize(v, n)).collect();
    // fixed, irrational-looking coefficients
    let mut x = CMatrix::zeros(n, n);
    for (k, m) in mats.iter().enumerate() {
        let t = (k as f64 + 1.0) * 0.754_877_666_246_692_7;
        x += m * C64::new(t.fract() + 0.1, (t * 1.3247).fract() - 0.5);
    }
    let mut best: Option<CMatrix> = None;
    for lambda in linalg::eigenvalues(&x) {
        let shifted = &x - linalg::identity(n) * lambda;
        let (v, _) = linalg::smallest_right_singular(&shifted, 1);
        let v = v.column(0).into_owned();
        let images: Vec<CVector> = mats.iter().map(|m| m * &v).collect();
        let span = linalg::orthonormalize(&linalg::from_columns(n, &images), 1e-8);
        if span.ncols() < n && best.as_ref().is_none_or(|b| span.ncols() < b.ncols()) {
            best = Some(span);
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientCertificate {
    Irreducible,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantFlag {
    /// Orthonormal bases of `V_1 ⊊ … ⊊ V_r = C^n`; each basis extends the
    /// previous one, so the last is a unitary flag-adapted basis.
    #[serde(skip)]
    pub subspaces: Vec<CMatrix>,
    /// `d_0 = 0, d_1, …, d_r = n`.
    pub dims: Vec<usize>,
    /// `c_j = d_j - d_{j-1}`.
    pub quotient_dims: Vec<usize>,
    pub certificates: Vec<QuotientCertificate>,
    /// Largest `‖(I - Π_j) A Π_j‖` over generators and flag members.
    pub invariance_residual: f64,
}

impl InvariantFlag {
    pub fn basis(&self) -> &CMatrix {
        self.subspaces.last().expect("nonempty flag")
    }
}

/// Minimal invariant subspace inside the span of `q` (orthonormal, invariant)
/// for the action `spec`, as orthonormal columns of `C^n`.
fn refine_minimal(spec: &MatrixGroupSpec, q: CMatrix) -> (CMatrix, QuotientCertificate) {
    let mut q = q;
    loop {
        let k = q.ncols();
        let restricted = spec.compress(&q);
        match burnside_irreducibility(&restricted, k * k) {
            BurnsideOutcome::Irreducible { .. } => return (q, QuotientCertificate::Irreducible),
            BurnsideOutcome::Inconclusive { .. } => return (q, QuotientCertificate::Inconclusive),
            BurnsideOutcome::Reducible { subspace, .. } => {
                let next = linalg::orthonormalize(&(&q * subspace), RANK_TOL);
                if next.ncols() == 0 || next.ncols() >= k {
                    return (q, QuotientCertificate::Inconclusive);
                }
                q = next;
            }
        }
    }
}

/// A maximal flag of invariant subspaces with irreducible quotients,
/// built by repeatedly extracting a minimal invariant subspace of the
/// quotient action.
pub fn invariant_flag(spec: &MatrixGroupSpec) -> InvariantFlag {
    let n = spec.dim();
    let mut adapted = CMatrix::zeros(n, 0);
    let mut subspaces = Vec::new();
    let mut dims = vec![0];
    let mut certificates = Vec::new();
    while adapted.ncols() < n {
        let complement = if adapted.ncols() == 0 {
            linalg::identity(n)
        } else {
            linalg::orthogonal_complement(&adapted)
        };
        let quotient = spec.compress(&complement);
        let m = complement.ncols();
        let (w, cert) = refine_minimal(&quotient, linalg::identity(m));
        let lifted = &complement * w;
        let mut cols: Vec<CVector> = (0..adapted.ncols()).map(|j| adapted.column(j).into_owned()).collect();
        for j in 0..lifted.ncols() {
            if let Some(u) = linalg::orthogonal_residual(&cols, &lifted.column(j).into_owned(), RANK_TOL) {
                cols.push(u);
            }
        }
        if cols.len() == adapted.ncols() {
            break;
        }
        adapted = linalg::from_columns(n, &cols);
        dims.push(adapted.ncols());
        subspaces.push(adapted.clone());
        certificates.push(cert);
    }
    let quotient_dims = dims.windows(2).map(|w| w[1] - w[0]).collect();
    let mut invariance_residual = 0.0f64;
    for v in &subspaces {
        let pi = linalg::projector(v);
        let rest = linalg::identity(n) - &pi;
        for a in spec.generators() {
            let r = linalg::spectral_norm(&(&rest * a * &pi));
            invariance_residual = invariance_residual.max(r / linalg::spectral_norm(a).max(1.0));
        }
    }
    debug_assert!(invariance_residual < FLAG_TOL.sqrt());
    InvariantFlag {
        subspaces,
        dims,
        quotient_dims,
        certificates,
        invariance_residual,
    }
}
