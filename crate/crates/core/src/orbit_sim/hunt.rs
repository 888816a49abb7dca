use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{distance, serialize_point};
use crate::error::{Error, Result};
use crate::jet::{euclidean_norm, JetDiffeo};
use crate::linalg::{self, CMatrix, CVector};
use crate::linear_analysis::stable_splitting;
use crate::tolerances::{ESCAPE_TOL, FP_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuntOptions {
    /// Forward iterates `p = 1..=max_power` per seed.
    pub max_power: usize,
    /// Seeds spread radially over the annulus, starting at the given one.
    pub seeds: usize,
    /// Cap on the pull-back exponent `m`.
    pub max_pullback: usize,
    /// Every evaluated point must stay in this ball.
    pub domain_radius: f64,
    pub escape_tol: f64,
}

impl Default for HuntOptions {
    fn default() -> Self {
        HuntOptions {
            max_power: 8,
            seeds: 4,
            max_pullback: 256,
            domain_radius: 1.0,
            escape_tol: ESCAPE_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntReturn {
    pub seed_index: usize,
    pub p: usize,
    pub m: usize,
    /// `φ^{-m}(ψ(φ^p(q)))`.
    #[serde(serialize_with = "serialize_point")]
    pub point: Vec<C64>,
    pub norm: f64,
    pub distance_to_annulus: f64,
    pub distance_to_stable: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntReport {
    /// Outer radius `ρ` of the annulus `{x ∈ V^s : ρ λ ≤ |x| ≤ ρ}`.
    pub rho: f64,
    /// `λ = ‖A|_{V^s}‖`, `A` the linear part of `φ`.
    pub contraction: f64,
    pub stable_dim: usize,
    /// The ψ-image of the limit direction left `[V^s] ∪ [V^cu]`. False only
    /// for the control run `ψ = Id`.
    pub escaped: bool,
    #[serde(serialize_with = "serialize_seeds")]
    pub seeds: Vec<Vec<C64>>,
    pub returns: Vec<HuntReturn>,
    /// Attempts whose pull-back missed the annulus or left the domain.
    pub skipped: usize,
    pub distinct_returns: usize,
    pub min_pairwise_distance: f64,
    /// Per seed, distances to the annulus strictly decrease with `p`.
    pub decreasing: bool,
}

fn serialize_seeds<S: serde::Serializer>(seeds: &[Vec<C64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<[f64; 2]>> = seeds
        .iter()
        .map(|z| z.iter().map(|c| [c.re, c.im]).collect())
        .collect();
    v.serialize(s)
}

impl HuntReport {
    /// Return points grouped by seed, in order of `p`.
    pub fn orbits(&self) -> Vec<Vec<Vec<C64>>> {
        let mut out = vec![Vec::new(); self.seeds.len()];
        for r in &self.returns {
            out[r.seed_index].push(r.point.clone());
        }
        out
    }
}

fn to_vector(z: &[C64]) -> CVector {
    CVector::from_vec(z.to_vec())
}

fn annulus_distance(z: &[C64], stable: &CMatrix, inner: f64, outer: f64) -> (f64, f64) {
    let v = to_vector(z);
    let proj = stable * (stable.adjoint() * &v);
    let to_stable = (&v - &proj).norm();
    let pn = proj.norm();
    let nearest = if pn < inner {
        if pn == 0.0 {
            return (to_stable.hypot(inner), to_stable);
        }
        &proj * C64::new(inner / pn, 0.0)
    } else if pn > outer {
        &proj * C64::new(outer / pn, 0.0)
    } else {
        proj
    };
    ((&v - nearest).norm(), to_stable)
}

/// `φ^k(z)`, or `None` once an iterate leaves the domain.
fn iterate(f: &JetDiffeo, z: &[C64], k: usize, domain: f64) -> Option<Vec<C64>> {
    let mut z = z.to_vec();
    for _ in 0..k {
        z = f.eval(&z);
        if euclidean_norm(&z) > domain {
            return None;
        }
    }
    Some(z)
}

/// Return points `φ^{-m}(ψ(φ^p(q)))` in the fundamental annulus of `φ` on
/// its stable space, for seeds `q` spread over the annulus. `m` is the
/// first exponent bringing the norm back above the inner radius.
pub fn stable_manifold_hunt(phi: &JetDiffeo, psi: &JetDiffeo, seed: &[C64], options: &HuntOptions) -> Result<HuntReport> {
    let n = phi.dim();
    if psi.dim() != n || seed.len() != n {
        return Err(Error::structure("phi, psi and the seed must share the dimension"));
    }
    if options.seeds == 0 || options.max_power == 0 {
        return Err(Error::validation("seeds >= 1, max_power >= 1", "empty hunt budget"));
    }
    let a = phi.linear_part();
    let split = stable_splitting(&a, FP_TOL);
    if split.stable_dim == 0 {
        return Err(Error::domain("the linear part of phi has no eigenvalue inside the unit disc"));
    }
    let q0 = to_vector(seed);
    let rho = q0.norm();
    if rho == 0.0 || linalg::angle_to_subspace(&q0, &split.stable) > 1e-9 {
        return Err(Error::validation("seed ∈ V^s \\ {0}", "the seed must be a nonzero vector of the stable space"));
    }
    if rho >= options.domain_radius {
        return Err(Error::validation("|seed| < domain_radius", format!("|seed| = {rho}")));
    }
    let restricted = split.stable.adjoint() * &a * &split.stable;
    let contraction = linalg::spectral_norm(&restricted);
    let inner = rho * contraction;

    // limit direction of φ^p(q) and its ψ-image
    let mut ell = q0.clone();
    for _ in 0..options.max_power.max(32) {
        ell = &a * ell;
        let nrm = ell.norm();
        ell /= C64::new(nrm, 0.0);
    }
    let b = psi.linear_part();
    let image = &b * &ell;
    let to_cu = linalg::angle_to_subspace(&image, &split.center_unstable);
    let to_s = linalg::angle_to_subspace(&image, &split.stable);
    let control = psi.is_identity(FP_TOL);
    if to_cu <= options.escape_tol || (to_s <= options.escape_tol && !control) {
        return Err(Error::domain(format!(
            "psi maps the limit direction into an invariant subspace of phi \
             (angles: {to_s:.3e} to V^s, {to_cu:.3e} to V^cu); choose psi with escape_direction"
        )));
    }

    let phi_inv = phi.invert()?;
    let seeds: Vec<Vec<C64>> = (0..options.seeds)
        .map(|i| {
            let t = contraction.powf(i as f64 / options.seeds as f64);
            seed.iter().map(|c| c * t).collect()
        })
        .collect();
    let mut returns = Vec::new();
    let mut skipped = 0;
    for (si, q) in seeds.iter().enumerate() {
        for p in 1..=options.max_power {
            let Some(x) = iterate(phi, q, p, options.domain_radius) else {
                skipped += 1;
                continue;
            };
            let mut z = psi.eval(&x);
            let mut m = 0;
            let mut ok = euclidean_norm(&z) <= options.domain_radius;
            while ok && euclidean_norm(&z) < inner && m < options.max_pullback {
                z = phi_inv.eval(&z);
                m += 1;
                ok = euclidean_norm(&z) <= options.domain_radius;
            }
            let norm = euclidean_norm(&z);
            if !ok || norm < inner || norm > rho {
                skipped += 1;
                continue;
            }
            let (distance_to_annulus, distance_to_stable) = annulus_distance(&z, &split.stable, inner, rho);
            returns.push(HuntReturn {
                seed_index: si,
                p,
                m,
                point: z,
                norm,
                distance_to_annulus,
                distance_to_stable,
            });
        }
    }
    let mut min_pairwise_distance = f64::INFINITY;
    let mut distinct_returns = 0;
    for (i, r) in returns.iter().enumerate() {
        let nearest = returns[..i]
            .iter()
            .map(|s| distance(&r.point, &s.point))
            .fold(f64::INFINITY, f64::min);
        min_pairwise_distance = min_pairwise_distance.min(nearest);
        if nearest > FP_TOL {
            distinct_returns += 1;
        }
    }
    let decreasing = (0..seeds.len()).all(|si| {
        let d: Vec<f64> = returns
            .iter()
            .filter(|r| r.seed_index == si)
            .map(|r| r.distance_to_annulus)
            .collect();
        d.windows(2).all(|w| w[1] < w[0])
    });
    Ok(HuntReport {
        rho,
        contraction,
        stable_dim: split.stable_dim,
        escaped: !control,
        seeds,
        returns,
        skipped,
        distinct_returns,
        min_pairwise_distance,
        decreasing,
    })
}
