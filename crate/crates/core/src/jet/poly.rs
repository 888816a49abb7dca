//! Dense truncated polynomial kernels shared by diffeomorphism and vector
//! field jets. Coefficient vectors are indexed by a [`MonomialBasis`].

use num_complex::Complex64 as C64;

use super::basis::MonomialBasis;

pub(crate) fn zero(basis: &MonomialBasis) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); basis.len()]
}

pub(crate) fn mul(basis: &MonomialBasis, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = zero(basis);
    for (i, &ai) in a.iter().enumerate() {
        if ai == C64::new(0.0, 0.0) {
            continue;
        }
        let limit = basis.degree_range(basis.degree() - basis.degree_of(i)).end;
        for (j, &bj) in b[..limit].iter().enumerate() {
            if bj == C64::new(0.0, 0.0) {
                continue;
            }
            if let Some(k) = basis.product_index(i, j) {
                out[k] += ai * bj;
            }
        }
    }
    out
}

/// All monomials evaluated on the polynomial tuple `g`: `out[α] = g^α`.
pub(crate) fn powers(basis: &MonomialBasis, g: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(basis.len());
    let mut one = zero(basis);
    one[0] = C64::new(1.0, 0.0);
    out.push(one);
    for idx in 1..basis.len() {
        let (v, pred) = basis.split(idx);
        let p = mul(basis, &out[pred], &g[v]);
        out.push(p);
    }
    out
}

/// `h ∘ g` where `pows = powers(g)`.
pub(crate) fn substitute(basis: &MonomialBasis, h: &[C64], pows: &[Vec<C64>]) -> Vec<C64> {
    let mut out = zero(basis);
    for (a, &c) in h.iter().enumerate() {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, &p) in out.iter_mut().zip(&pows[a]) {
            *o += c * p;
        }
    }
    out
}

/// Lie derivative `X(h) = Σ_v X_v ∂h/∂x_v`, truncated.
pub(crate) fn derivation(basis: &MonomialBasis, field: &[Vec<C64>], h: &[C64]) -> Vec<C64> {
    let mut out = zero(basis);
    for (v, fv) in field.iter().enumerate().take(basis.dim()) {
        let mut dh = zero(basis);
        let mut any = false;
        for (idx, &c) in h.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            if let Some((a, k)) = basis.derivative(idx, v) {
                dh[k] += c * a as f64;
                any = true;
            }
        }
        if !any {
            continue;
        }
        let term = mul(basis, fv, &dh);
        for (o, t) in out.iter_mut().zip(term) {
            *o += t;
        }
    }
    out
}

pub(crate) fn max_abs(a: &[C64]) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub(crate) fn is_exact_zero(a: &[C64]) -> bool {
    a.iter().all(|c| *c == C64::new(0.0, 0.0))
}

pub(crate) fn monomial_values(basis: &MonomialBasis, z: &[C64]) -> Vec<C64> {
    let mut vals = Vec::with_capacity(basis.len());
    vals.push(C64::new(1.0, 0.0));
    for idx in 1..basis.len() {
        let (v, pred) = basis.split(idx);
        let m = vals[pred] * z[v];
        vals.push(m);
    }
    vals
}
