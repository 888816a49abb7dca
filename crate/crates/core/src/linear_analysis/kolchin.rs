use serde::Serialize;

use super::group::MatrixGroupSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct Triangularization {
    /// Unitary change of basis: every `P⁻¹ A P = P^H A P` is unit upper
    /// triangular.
    #[serde(skip)]
    pub p: CMatrix,
    /// Largest modulus below the diagonal over all `P⁻¹ A_i P`.
    pub residual: f64,
    /// Largest `|d - 1|` over their diagonal entries.
    pub diagonal_residual: f64,
}

/// Simultaneous triangularization of a group generated by unipotent
/// matrices: pick a common fixed vector, pass to the quotient by it, and
/// recurse. `tol` is the relative threshold for unipotency and for the
/// common kernel.
pub fn kolchin_triangularize(spec: &MatrixGroupSpec, tol: f64) -> Result<Triangularization> {
    let n = spec.dim();
    for (i, a) in spec.generators().iter().enumerate() {
        let nilp = a - linalg::identity(n);
        if !linalg::is_nilpotent(&nilp, tol) {
            return Err(Error::domain(format!(
                "generator '{}' is not unipotent within {tol:e}",
                spec.alphabet().names()[i]
            )));
        }
    }
    let mut p = linalg::identity(n);
    let mut current = spec.clone();
    // columns of p already fixed: 0..k; `current` acts on the complement
    for k in 0..n {
        let m = n - k;
        let stacked = {
            let gens = current.generators();
            let mut s = CMatrix::zeros(m * gens.len(), m);
            for (g, a) in gens.iter().enumerate() {
                let shifted = a - linalg::identity(m);
                s.view_mut((g * m, 0), (m, m)).copy_from(&shifted);
            }
            s
        };
        let scale = linalg::max_abs(&stacked).max(1.0);
        let (v, sv) = linalg::smallest_right_singular(&stacked, 1);
        if sv[0] > tol * scale {
            return Err(Error::domain(format!(
                "no common fixed vector at step {k}: smallest singular value {:e} \
                 (input not unipotent or tolerance too tight)",
                sv[0]
            )));
        }
        // unitary basis of the current complement starting with v
        let q = {
            let comp = linalg::orthogonal_complement(&v);
            let mut q = CMatrix::zeros(m, m);
            q.set_column(0, &v.column(0));
            for j in 0..comp.ncols() {
                q.set_column(j + 1, &comp.column(j));
            }
            q
        };
        // update the global basis: columns k.. of p are replaced by p_k q
        let block = p.columns(k, m) * &q;
        p.columns_mut(k, m).copy_from(&block);
        if m > 1 {
            let rest = q.columns(1, m - 1).into_owned();
            current = current.compress(&rest);
        }
    }
    let ph = p.adjoint();
    let mut residual = 0.0f64;
    let mut diagonal_residual = 0.0f64;
    for a in spec.generators() {
        let t = &ph * a * &p;
        for i in 0..n {
            diagonal_residual = diagonal_residual.max((t[(i, i)] - linalg::c(1.0, 0.0)).norm());
            for j in 0..i {
                residual = residual.max(t[(i, j)].norm());
            }
        }
    }
    Ok(Triangularization {
        p,
        residual,
        diagonal_residual,
    })
}
