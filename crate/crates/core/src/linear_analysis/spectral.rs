use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::{self, CMatrix};
use crate::tolerances::{EIGEN_CLUSTER_TOL, RANK_TOL};

/// Some eigenvalue has `||λ| - 1| > tol`.
pub fn is_hyperbolic(a: &CMatrix, tol: f64) -> bool {
    linalg::eigenvalues(a)
        .iter()
        .any(|l| (l.norm() - 1.0).abs() > tol)
}

/// Orthonormal basis of `ker (A - λ I)^m`, the generalized eigenspace of an
/// eigenvalue of algebraic multiplicity `m`.
pub fn generalized_eigenspace(a: &CMatrix, lambda: C64, m: usize) -> CMatrix {
    let n = a.nrows();
    let shifted = a - linalg::identity(n) * lambda;
    let pow = linalg::power(&shifted, m as u64);
    linalg::smallest_right_singular(&pow, m).0
}

#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    pub semisimple: CMatrix,
    pub unipotent: CMatrix,
    /// Condition number of the eigenbasis used to build the semisimple part.
    pub condition: f64,
    pub warning: Option<String>,
}

/// `A = A_s A_u` with `A_s` diagonalizable, `A_u` unipotent and
/// `A_s A_u = A_u A_s`.
pub fn jordan_multiplicative(a: &CMatrix) -> JordanDecomposition {
    let n = a.nrows();
    let clusters = linalg::eigenvalue_clusters(a, EIGEN_CLUSTER_TOL);
    let mut p = CMatrix::zeros(n, n);
    let mut diag = Vec::with_capacity(n);
    let mut col = 0;
    for &(lambda, m) in &clusters {
        let basis = generalized_eigenspace(a, lambda, m);
        for j in 0..m {
            p.set_column(col, &basis.column(j));
            diag.push(lambda);
            col += 1;
        }
    }
    let sv = p.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let warning = (condition > 1e8).then(|| format!("eigenbasis condition number {condition:e}"));
    let semisimple = match linalg::invert(&p) {
        Some(pi) => &p * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) * pi,
        None => a.clone(),
    };
    let unipotent = linalg::invert(&semisimple)
        .map(|si| si * a)
        .unwrap_or_else(|| linalg::identity(n));
    JordanDecomposition {
        semisimple,
        unipotent,
        condition,
        warning,
    }
}

/// `⟨A⟩` is relatively compact: `A` is diagonalizable with spectrum on the
/// unit circle.
pub fn is_power_bounded(a: &CMatrix, tol: f64) -> bool {
    if is_hyperbolic(a, tol) {
        return false;
    }
    let jd = jordan_multiplicative(a);
    linalg::distance_to_identity(&jd.unipotent) <= tol
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSplit {
    #[serde(skip)]
    pub matrix: CMatrix,
    /// Orthonormal basis of the sum of generalized eigenspaces with
    /// `|λ| < 1 - tol`.
    #[serde(skip)]
    pub stable: CMatrix,
    /// Orthonormal basis of the sum for `|λ| ≥ 1 - tol`.
    #[serde(skip)]
    pub center_unstable: CMatrix,
    pub stable_dim: usize,
    pub center_unstable_dim: usize,
    pub stable_eigenvalues: Vec<[f64; 2]>,
    pub center_unstable_eigenvalues: Vec<[f64; 2]>,
    /// Some eigenvalue with `1 - tol ≤ |λ| < 1` was put in `V^{cu}`.
    pub borderline: bool,
}

pub fn stable_splitting(a: &CMatrix, tol: f64) -> SpectralSplit {
    let n = a.nrows();
    let clusters = linalg::eigenvalue_clusters(a, EIGEN_CLUSTER_TOL);
    let mut stable_cols = Vec::new();
    let mut cu_cols = Vec::new();
    let mut split = SpectralSplit {
        matrix: a.clone(),
        stable: CMatrix::zeros(n, 0),
        center_unstable: CMatrix::zeros(n, 0),
        stable_dim: 0,
        center_unstable_dim: 0,
        stable_eigenvalues: Vec::new(),
        center_unstable_eigenvalues: Vec::new(),
        borderline: false,
    };
    for &(lambda, m) in &clusters {
        let basis = generalized_eigenspace(a, lambda, m);
        let cols: Vec<_> = (0..m).map(|j| basis.column(j).into_owned()).collect();
        let modulus = lambda.norm();
        if modulus < 1.0 - tol {
            stable_cols.extend(cols);
            split.stable_eigenvalues.extend(std::iter::repeat_n([lambda.re, lambda.im], m));
        } else {
            if modulus < 1.0 {
                split.borderline = true;
            }
            cu_cols.extend(cols);
            split
                .center_unstable_eigenvalues
                .extend(std::iter::repeat_n([lambda.re, lambda.im], m));
        }
    }
    split.stable = linalg::orthonormalize(&linalg::from_columns(n, &stable_cols), RANK_TOL);
    split.center_unstable = linalg::orthonormalize(&linalg::from_columns(n, &cu_cols), RANK_TOL);
    split.stable_dim = split.stable.ncols();
    split.center_unstable_dim = split.center_unstable.ncols();
    split
}
