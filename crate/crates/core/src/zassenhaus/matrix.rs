use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::sampling;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZassenhausFit {
    pub dim: usize,
    pub eps: f64,
    pub samples: usize,
    pub seed: u64,
    /// Largest observed `‖[A,B] - I‖ / (‖A - I‖ ‖B - I‖)`.
    pub constant: f64,
    /// Pairs with `A = I` or `B = I` (ratio 0/0), left out of the max.
    pub skipped: usize,
}

/// `I + E` with `E` of random direction and spectral norm uniform-in-ball
/// distributed up to `eps`.
fn near_identity<R: Rng>(rng: &mut R, dim: usize, eps: f64) -> CMatrix {
    let m = CMatrix::from_fn(dim, dim, |_, _| sampling::complex_normal(rng));
    let norm = linalg::spectral_norm(&m);
    if norm == 0.0 {
        return linalg::identity(dim);
    }
    let radius = eps * rng.gen_range(0.0f64..1.0).powf(1.0 / (2 * dim * dim) as f64);
    linalg::identity(dim) + m * C64::new(radius / norm, 0.0)
}

/// `‖[A,B] - I‖ / (‖A - I‖ ‖B - I‖)`, or `None` when a factor is the
/// identity (or not invertible).
pub fn zassenhaus_ratio(a: &CMatrix, b: &CMatrix) -> Option<f64> {
    let da = linalg::distance_to_identity(a);
    let db = linalg::distance_to_identity(b);
    if da == 0.0 || db == 0.0 {
        return None;
    }
    let c = linalg::commutator(a, b)?;
    Some(linalg::distance_to_identity(&c) / (da * db))
}

/// Empirical constant `C` in `‖[A,B] - I‖ ≤ C ‖A - I‖ ‖B - I‖` for
/// `‖A - I‖, ‖B - I‖ ≤ eps` in the spectral norm.
pub fn matrix_zassenhaus_fit(dim: usize, eps: f64, samples: usize, seed: u64) -> Result<ZassenhausFit> {
    if dim == 0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::validation(
            "0 < eps < 1",
            format!("dim = {dim}, eps = {eps}: sampled matrices must stay invertible"),
        ));
    }
    let mut rng = sampling::rng(seed);
    let mut constant = 0.0f64;
    let mut skipped = 0;
    for _ in 0..samples {
        let a = near_identity(&mut rng, dim, eps);
        let b = near_identity(&mut rng, dim, eps);
        match zassenhaus_ratio(&a, &b) {
            Some(r) => constant = constant.max(r),
            None => skipped += 1,
        }
    }
    Ok(ZassenhausFit {
        dim,
        eps,
        samples,
        seed,
        constant,
        skipped,
    })
}
