use num_complex::Complex64 as C64;
use serde::Serialize;

use super::burnside::invariant_flag;
use super::group::MatrixGroupSpec;
use super::words::reduced_words;
use crate::cascade::{free_words_alpha, Alphabet};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::FLAG_TOL;

/// Certificate threshold of the search: a few hundred ulps, above the
/// rounding error of products of eight near-unitary factors.
pub const SEARCH_CERT_TOL: f64 = 1e-13;

/// Modulus slack for eigenvalues considered to lie on the unit circle.
const UNIT_CIRCLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerRecurrence {
    /// Smallest `n` with `max |λ^n - 1| < tol`, or the best `n ≤ n_max`.
    pub n: u64,
    pub achieved: f64,
    pub tol: f64,
    pub converged: bool,
}

fn power_defect(eigenvalues: &[C64], n: u64) -> f64 {
    eigenvalues
        .iter()
        .map(|l| (l.powu(n as u32) - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max)
}

/// Simultaneous return of unit-modulus eigenvalues near `1`.
pub fn power_recurrence(eigenvalues: &[C64], tol: f64, n_max: u64) -> Result<PowerRecurrence> {
    if !(tol > 0.0) {
        return Err(Error::validation("tol > 0", format!("tol = {tol}")));
    }
    if n_max == 0 || n_max > u32::MAX as u64 {
        return Err(Error::validation("1 <= n_max < 2^32", format!("n_max = {n_max}")));
    }
    if let Some(l) = eigenvalues.iter().find(|l| (l.norm() - 1.0).abs() > tol) {
        return Err(Error::domain(format!(
            "eigenvalue {l} is not on the unit circle within {tol:e}"
        )));
    }
    let mut best = (1, f64::INFINITY);
    for n in 1..=n_max {
        let d = power_defect(eigenvalues, n);
        if d < tol {
            return Ok(PowerRecurrence {
                n,
                achieved: d,
                tol,
                converged: true,
            });
        }
        if d < best.1 {
            best = (n, d);
        }
    }
    Ok(PowerRecurrence {
        n: best.0,
        achieved: best.1,
        tol,
        converged: false,
    })
}

fn validate_dims(dims: &[usize], n: usize) -> Result<()> {
    let ok = dims.len() >= 2
        && dims[0] == 0
        && *dims.last().unwrap() == n
        && dims.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::validation(
            "0 = d_0 < d_1 < ... < d_r = n",
            format!("dims = {dims:?}, n = {n}"),
        ))
    }
}

/// Block index of each coordinate.
fn block_of(dims: &[usize], n: usize) -> Vec<usize> {
    (0..n)
        .map(|i| dims.windows(2).position(|w| w[0] <= i && i < w[1]).unwrap())
        .collect()
}

fn below_block_residual(a: &CMatrix, dims: &[usize]) -> f64 {
    let lvl = block_of(dims, a.nrows());
    let mut r = 0.0f64;
    for j in 0..a.nrows() {
        for k in 0..a.ncols() {
            if lvl[j] > lvl[k] {
                r = r.max(a[(j, k)].norm());
            }
        }
    }
    r
}

fn zero_below_blocks(a: &mut CMatrix, dims: &[usize]) {
    let lvl = block_of(dims, a.nrows());
    for j in 0..a.nrows() {
        for k in 0..a.ncols() {
            if lvl[j] > lvl[k] {
                a[(j, k)] = C64::new(0.0, 0.0);
            }
        }
    }
}

fn block_diagonal(a: &CMatrix, dims: &[usize]) -> CMatrix {
    let lvl = block_of(dims, a.nrows());
    CMatrix::from_fn(a.nrows(), a.ncols(), |j, k| {
        if lvl[j] == lvl[k] {
            a[(j, k)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `(C^s)⁻¹ A C^s` for `C^s = diag(s^l)` on the `l`-th block of the flag with
/// dimensions `dims`: entry `(j, k)` is multiplied by `s^(l_k - l_j)`.
pub fn block_scaling(a: &CMatrix, dims: &[usize], s: f64) -> Result<CMatrix> {
    let n = a.nrows();
    validate_dims(dims, n)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::validation("s > 0", format!("s = {s}")));
    }
    let residual = below_block_residual(a, dims);
    if residual > FLAG_TOL * linalg::max_abs(a).max(1.0) {
        return Err(Error::domain(format!(
            "matrix is not block upper triangular for dims {dims:?} (residual {residual:e})"
        )));
    }
    let lvl = block_of(dims, n);
    Ok(CMatrix::from_fn(n, n, |j, k| {
        a[(j, k)] * s.powi(lvl[k] as i32 - lvl[j] as i32)
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreenessCertificate {
    /// Reduced words of length `≤ word_length` were checked.
    pub word_length: usize,
    pub cert_tol: f64,
    pub words_checked: usize,
    pub min_distance: f64,
    pub closest_word: String,
    pub passed: bool,
}

/// Every nontrivial reduced word of length `≤ max_word_len` in `a, b` stays
/// at spectral distance `> cert_tol` from `I`.
pub fn freeness_certificate(a: &CMatrix, b: &CMatrix, max_word_len: usize, cert_tol: f64) -> Result<FreenessCertificate> {
    let spec = MatrixGroupSpec::from_matrices(vec![a.clone(), b.clone()])?;
    let mut min_distance = f64::INFINITY;
    let mut closest_word = String::new();
    let words = reduced_words(&spec, max_word_len);
    for (w, m) in &words {
        let d = linalg::distance_to_identity(m);
        if d < min_distance {
            min_distance = d;
            closest_word = spec.alphabet().format(w);
        }
    }
    Ok(FreenessCertificate {
        word_length: max_word_len,
        cert_tol,
        words_checked: words.len(),
        min_distance,
        closest_word,
        passed: min_distance > cert_tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentStep {
    pub level: usize,
    /// `‖α_{a,k} - I‖`, `‖α_{b,k} - I‖`.
    pub distance_a: f64,
    pub distance_b: f64,
    #[serde(skip)]
    pub a: CMatrix,
    #[serde(skip)]
    pub b: CMatrix,
}

impl DescentStep {
    pub fn distance(&self) -> f64 {
        self.distance_a.max(self.distance_b)
    }
}

/// `x y x⁻¹ y⁻¹` over the table `[a, b, a⁻¹, b⁻¹]`.
fn table_commutator(t: &[CMatrix; 4], i: usize, j: usize) -> CMatrix {
    &t[i] * &t[j] * &t[inv_index(i)] * &t[inv_index(j)]
}

fn inv_index(i: usize) -> usize {
    (i + 2) % 4
}

fn partner_index(i: usize) -> usize {
    // a -> b⁻¹, b -> a⁻¹, a⁻¹ -> b, b⁻¹ -> a
    [3, 2, 1, 0][i]
}

/// Matrices of the words `α_{f,k}`, `k = 0..=levels`, computed level by
/// level from the four matrices of the previous level.
pub fn alpha_descent(a: &CMatrix, b: &CMatrix, levels: usize) -> Result<Vec<DescentStep>> {
    let ai = linalg::invert(a).ok_or_else(|| Error::domain("a is singular"))?;
    let bi = linalg::invert(b).ok_or_else(|| Error::domain("b is singular"))?;
    let mut t = [a.clone(), b.clone(), ai, bi];
    let mut steps = Vec::with_capacity(levels + 1);
    for level in 0..=levels {
        steps.push(DescentStep {
            level,
            distance_a: linalg::distance_to_identity(&t[0]),
            distance_b: linalg::distance_to_identity(&t[1]),
            a: t[0].clone(),
            b: t[1].clone(),
        });
        if level == levels {
            break;
        }
        let next = |f: usize| {
            let g = partner_index(f);
            let l = table_commutator(&t, f, g);
            let r = table_commutator(&t, inv_index(f), inv_index(g));
            let li = table_commutator(&t, g, f);
            let ri = table_commutator(&t, inv_index(g), inv_index(f));
            &l * &r * li * ri
        };
        t = [next(0), next(1), next(2), next(3)];
    }
    Ok(steps)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreePairOptions {
    /// Targets for the power and scaling stages, tried in order. Larger
    /// targets need more descent levels less often; each word level pushes
    /// short relations in the returned pair towards the rounding floor.
    pub eps0: Vec<f64>,
    pub word_length: usize,
    pub cert_tol: f64,
    pub n_max: u64,
    pub max_descent_levels: usize,
    pub min_scale: f64,
}

impl Default for FreePairOptions {
    fn default() -> Self {
        FreePairOptions {
            eps0: vec![0.5, 0.35, 0.25],
            word_length: 8,
            cert_tol: SEARCH_CERT_TOL,
            n_max: 1_000_000,
            max_descent_levels: 4,
            min_scale: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FreePairResult {
    #[serde(skip)]
    pub a: CMatrix,
    #[serde(skip)]
    pub b: CMatrix,
    /// The pair is `Q⁻¹ w(a^{n_a}, b^{n_b}) Q` for this `Q`.
    #[serde(skip)]
    pub conjugator: CMatrix,
    pub flag_dims: Vec<usize>,
    pub power_a: u64,
    pub power_b: u64,
    pub scale: f64,
    pub descent_level: usize,
    /// `α_{a,k}`, `α_{b,k}` over the letters `a = a^{n_a}`, `b = b^{n_b}`.
    pub word_a: String,
    pub word_b: String,
    pub distance_a: f64,
    pub distance_b: f64,
    pub descent: Vec<DescentStep>,
    pub certificate: FreenessCertificate,
}

fn stalled(stage: &str, detail: String) -> Error {
    Error::Resource(format!("free pair search stalled at stage '{stage}': {detail}"))
}

fn pair_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::distance_to_identity(a).max(linalg::distance_to_identity(b))
}

/// Shrink the power tolerance until the diagonal blocks of `a^n` are within
/// `target` of the identity.
fn recurrent_power(a: &CMatrix, dims: &[usize], target: f64, n_max: u64) -> Result<(u64, CMatrix)> {
    let eigs = linalg::eigenvalues(a);
    if let Some(l) = eigs.iter().find(|l| (l.norm() - 1.0).abs() > UNIT_CIRCLE_TOL) {
        return Err(Error::domain(format!(
            "stage 'powers': eigenvalue {l} is off the unit circle (hyperbolic generator)"
        )));
    }
    let mut tol = target;
    while tol > 1e-12 {
        let rec = power_recurrence(&eigs, tol.max(UNIT_CIRCLE_TOL), n_max)?;
        if !rec.converged {
            return Err(stalled(
                "powers",
                format!("no n <= {n_max} brings the eigenvalues within {tol:e} of 1"),
            ));
        }
        let mut p = linalg::power(a, rec.n);
        zero_below_blocks(&mut p, dims);
        if linalg::distance_to_identity(&block_diagonal(&p, dims)) < target {
            return Ok((rec.n, p));
        }
        tol /= 2.0;
    }
    Err(stalled(
        "powers",
        "diagonal blocks of the powers do not approach the identity (unipotent part?)".into(),
    ))
}

fn alpha_word_strings(k: usize) -> (String, String) {
    let alphabet = Alphabet::new(&["a", "b"]).expect("valid names");
    let w = free_words_alpha(k);
    (alphabet.format(&w.a), alphabet.format(&w.b))
}

/// Conjugate of a pair of elements of `⟨a, b⟩` (the first two generators of
/// `spec`) with both elements within `eps` of the identity, together with a
/// word-length-bounded freeness certificate.
///
/// Stages: invariant flag, recurrent powers of both generators, block
/// scaling of the off-diagonal blocks, then descent along the words `α_k`.
pub fn free_pair_near_identity(spec: &MatrixGroupSpec, eps: f64, options: &FreePairOptions) -> Result<FreePairResult> {
    if spec.generators().len() < 2 {
        return Err(Error::validation("two generators", "free pair search needs generators a and b"));
    }
    if !(eps > 0.0) {
        return Err(Error::validation("eps > 0", format!("eps = {eps}")));
    }
    let n = spec.dim();
    let (a, b) = (&spec.generators()[0], &spec.generators()[1]);
    let certify = |x: &CMatrix, y: &CMatrix| freeness_certificate(x, y, options.word_length, options.cert_tol);

    if pair_distance(a, b) < eps {
        let certificate = certify(a, b)?;
        if certificate.passed {
            let (word_a, word_b) = alpha_word_strings(0);
            return Ok(FreePairResult {
                a: a.clone(),
                b: b.clone(),
                conjugator: linalg::identity(n),
                flag_dims: vec![0, n],
                power_a: 1,
                power_b: 1,
                scale: 1.0,
                descent_level: 0,
                word_a,
                word_b,
                distance_a: linalg::distance_to_identity(a),
                distance_b: linalg::distance_to_identity(b),
                descent: Vec::new(),
                certificate,
            });
        }
    }

    let pair = MatrixGroupSpec::from_matrices(vec![a.clone(), b.clone()])?;
    let flag = invariant_flag(&pair);
    if options.eps0.is_empty() {
        return Err(Error::validation("eps0 nonempty", "no power-stage targets given"));
    }
    let mut last_err = None;
    for &target in &options.eps0 {
        match attempt(a, b, &flag.basis().clone(), &flag.dims, target.max(eps), eps, options) {
            Ok(res) => return Ok(res),
            Err(e @ Error::Resource(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn attempt(
    a: &CMatrix,
    b: &CMatrix,
    p: &CMatrix,
    dims: &[usize],
    target: f64,
    eps: f64,
    options: &FreePairOptions,
) -> Result<FreePairResult> {
    let n = a.nrows();
    let ph = p.adjoint();
    let mut a1 = &ph * a * p;
    let mut b1 = &ph * b * p;
    zero_below_blocks(&mut a1, dims);
    zero_below_blocks(&mut b1, dims);
    let (power_a, an) = recurrent_power(&a1, dims, target, options.n_max)?;
    let (power_b, bn) = recurrent_power(&b1, dims, target, options.n_max)?;

    let mut s = 1.0;
    let (a2, b2) = loop {
        let a2 = block_scaling(&an, dims, s)?;
        let b2 = block_scaling(&bn, dims, s)?;
        if pair_distance(&a2, &b2) < target {
            break (a2, b2);
        }
        s /= 2.0;
        if s < options.min_scale {
            return Err(stalled(
                "scaling",
                format!("off-diagonal blocks stay above {target} down to s = {:e}", options.min_scale),
            ));
        }
    };

    let descent = alpha_descent(&a2, &b2, options.max_descent_levels)?;
    for w in descent.windows(2) {
        if w[0].distance() < eps {
            break;
        }
        if !(w[1].distance() < w[0].distance()) {
            return Err(stalled(
                "descent",
                format!(
                    "distance did not decrease from level {} ({:e}) to level {} ({:e})",
                    w[0].level,
                    w[0].distance(),
                    w[1].level,
                    w[1].distance()
                ),
            ));
        }
    }
    let Some(k) = descent.iter().position(|st| st.distance() < eps) else {
        return Err(stalled(
            "descent",
            format!("still above {eps} after {} levels", options.max_descent_levels),
        ));
    };
    let descent: Vec<DescentStep> = descent.into_iter().take(k + 1).collect();
    let last = descent.last().expect("k < len");
    let certificate = freeness_certificate(&last.a, &last.b, options.word_length, options.cert_tol)?;
    if !certificate.passed {
        return Err(stalled(
            "certificate",
            format!(
                "word '{}' is within {:e} of the identity",
                certificate.closest_word, certificate.min_distance
            ),
        ));
    }
    let scaling = CMatrix::from_fn(n, n, |j, k| {
        if j == k {
            let l = dims.windows(2).position(|w| w[0] <= j && j < w[1]).unwrap();
            C64::new(s.powi(l as i32), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let (word_a, word_b) = alpha_word_strings(k);
    Ok(FreePairResult {
        a: last.a.clone(),
        b: last.b.clone(),
        conjugator: p * scaling,
        flag_dims: dims.to_vec(),
        power_a,
        power_b,
        scale: s,
        descent_level: k,
        word_a,
        word_b,
        distance_a: last.distance_a,
        distance_b: last.distance_b,
        certificate,
        descent,
    })
}
