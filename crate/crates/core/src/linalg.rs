//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::tolerances::EIGEN_CLUSTER_TOL;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn distance_to_identity(m: &CMatrix) -> f64 {
    spectral_norm(&(m - identity(m.nrows())))
}

/// `N` is nilpotent up to rounding: `‖N^n‖ <= tol · max(1, ‖N‖)^n`.
pub fn is_nilpotent(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    let scale = max_abs(m).max(1.0);
    let mut p = identity(n);
    for _ in 0..n {
        p = &p * m;
    }
    max_abs(&p) <= tol * scale.powi(n as i32)
}

/// Eigenvalues via the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Eigenvalues grouped by proximity; each group carries the mean value and
/// the algebraic multiplicity.
pub fn eigenvalue_clusters(m: &CMatrix, tol: f64) -> Vec<(C64, usize)> {
    let eig = eigenvalues(m);
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for l in eig {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|&x| (x - l).norm() <= tol * (1.0 + l.norm())))
        {
            Some(cl) => cl.push(l),
            None => clusters.push(vec![l]),
        }
    }
    // merge transitively connected groups
    let mut merged = true;
    while merged {
        merged = false;
        'outer: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let close = clusters[i].iter().any(|&a| {
                    clusters[j]
                        .iter()
                        .any(|&b| (a - b).norm() <= tol * (1.0 + a.norm()))
                });
                if close {
                    let moved = clusters.remove(j);
                    clusters[i].extend(moved);
                    merged = true;
                    break 'outer;
                }
            }
        }
    }
    clusters
        .into_iter()
        .map(|cl| {
            let k = cl.len();
            let mean = cl.iter().sum::<C64>() / k as f64;
            (mean, k)
        })
        .collect()
}

pub fn default_clusters(m: &CMatrix) -> Vec<(C64, usize)> {
    eigenvalue_clusters(m, EIGEN_CLUSTER_TOL)
}

/// Right singular vectors for the `k` smallest singular values of `m`:
/// an orthonormal basis of the numerical kernel when its dimension is known.
pub fn smallest_right_singular(m: &CMatrix, k: usize) -> (CMatrix, Vec<f64>) {
    let ncols = m.ncols();
    // pad to at least square so that V is complete
    let padded = if m.nrows() < ncols {
        let mut p = CMatrix::zeros(ncols, ncols);
        p.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let picked: Vec<usize> = order.into_iter().take(k).collect();
    let mut basis = CMatrix::zeros(ncols, picked.len());
    let mut values = Vec::with_capacity(picked.len());
    for (col, &i) in picked.iter().enumerate() {
        for r in 0..ncols {
            basis[(r, col)] = v_t[(i, r)].conj();
        }
        values.push(sv[i]);
    }
    (basis, values)
}

/// Numerical kernel of `m` with relative cutoff `rel_tol`.
pub fn null_space(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let ncols = m.ncols();
    let (all, values) = smallest_right_singular(m, ncols);
    let scale = values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let keep: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel_tol * scale)
        .map(|(i, _)| i)
        .collect();
    let mut out = CMatrix::zeros(ncols, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        out.set_column(col, &all.column(i));
    }
    out
}

/// Orthonormal basis for the column span of `m` (modified Gram-Schmidt with
/// reorthogonalization); columns with relative residual below `rel_tol` are
/// dropped.
pub fn orthonormalize(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let mut cols: Vec<CVector> = Vec::new();
    for j in 0..m.ncols() {
        let v = m.column(j).into_owned();
        if let Some(u) = orthogonal_residual(&cols, &v, rel_tol) {
            cols.push(u);
        }
    }
    from_columns(m.nrows(), &cols)
}

/// Component of `v` orthogonal to the orthonormal set `basis`, normalized,
/// or `None` when it is negligible relative to `‖v‖`.
pub fn orthogonal_residual(basis: &[CVector], v: &CVector, rel_tol: f64) -> Option<CVector> {
    let norm = v.norm();
    if norm == 0.0 {
        return None;
    }
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
    }
    let r = w.norm();
    (r > rel_tol * norm).then(|| w / C64::new(r, 0.0))
}

pub fn from_columns(nrows: usize, cols: &[CVector]) -> CMatrix {
    let mut out = CMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Orthonormal completion: columns spanning the orthogonal complement of the
/// (orthonormal) columns of `q`.
pub fn orthogonal_complement(q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let mut cols: Vec<CVector> = (0..q.ncols()).map(|j| q.column(j).into_owned()).collect();
    let start = cols.len();
    for i in 0..n {
        let mut e = CVector::zeros(n);
        e[i] = C64::new(1.0, 0.0);
        if let Some(u) = orthogonal_residual(&cols, &e, 1e-8) {
            cols.push(u);
        }
        if cols.len() == n {
            break;
        }
    }
    from_columns(n, &cols[start..])
}

/// Orthogonal projector onto the span of orthonormal columns `q`.
pub fn projector(q: &CMatrix) -> CMatrix {
    q * q.adjoint()
}

/// Largest principal angle between the line through `v` and the subspace
/// spanned by orthonormal columns `q`; `π/2` when `q` is empty.
pub fn angle_to_subspace(v: &CVector, q: &CMatrix) -> f64 {
    let nv = v.norm();
    if q.ncols() == 0 || nv == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let proj = q.adjoint() * v;
    let cos = (proj.norm() / nv).min(1.0);
    cos.acos()
}

pub fn invert(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    let ai = invert(a)?;
    let bi = invert(b)?;
    Some(a * b * ai * bi)
}

/// Matrix power by repeated squaring.
pub fn power(m: &CMatrix, mut k: u64) -> CMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    result
}

pub fn from_rows(rows: &[Vec<C64>]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn to_rows(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotency_test_accepts_strict_upper() {
        let n = from_real_rows(&[&[0.0, 2.0, 1.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
        assert!(is_nilpotent(&n, 1e-9));
        let d = from_real_rows(&[&[1e-3, 0.0], &[0.0, 0.0]]);
        assert!(!is_nilpotent(&d, 1e-9));
    }

    #[test]
    fn clusters_group_jordan_block() {
        let j = from_real_rows(&[&[0.5, 1.0, 0.0], &[0.0, 0.5, 1.0], &[0.0, 0.0, 2.0]]);
        let mut cl = default_clusters(&j);
        cl.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].1, 2);
        assert!((cl[0].0 - c(0.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = from_real_rows(&[&[1.0, 1.0], &[2.0, 2.0]]);
        let k = null_space(&m, 1e-10);
        assert_eq!(k.ncols(), 1);
        assert!(max_abs(&(&m * &k)) < 1e-12);
    }

    #[test]
    fn complement_is_orthogonal() {
        let q = orthonormalize(&from_real_rows(&[&[1.0], &[1.0], &[0.0]]), 1e-12);
        let comp = orthogonal_complement(&q);
        assert_eq!(comp.ncols(), 2);
        assert!(max_abs(&(q.adjoint() * &comp)) < 1e-12);
    }
}
