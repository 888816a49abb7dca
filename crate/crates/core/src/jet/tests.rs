use num_complex::Complex64 as C64;
use proptest::prelude::*;

use super::*;
use crate::linalg::{self, from_real_rows};
use crate::sampling;

fn univariate(coeffs: &[f64]) -> JetDiffeo {
    // coeffs[k] multiplies x^{k+1}
    let terms = vec![coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, &c)| (MultiIndex::new(vec![k as u32 + 1]), C64::new(c, 0.0)))
        .collect()];
    JetDiffeo::from_terms(1, coeffs.len(), &terms).unwrap()
}

fn coeffs_of(f: &JetDiffeo) -> Vec<C64> {
    (1..=f.degree())
        .map(|k| f.coeff(0, &MultiIndex::new(vec![k as u32])))
        .collect()
}

/// Independent oracle: truncated univariate series composition by direct
/// polynomial multiplication (coefficient k is the x^k coefficient).
fn series_compose(f: &[f64], g: &[f64], d: usize) -> Vec<f64> {
    let mul = |a: &[f64], b: &[f64]| {
        let mut out = vec![0.0; d + 1];
        for i in 0..=d {
            for j in 0..=(d - i) {
                out[i + j] += a[i] * b[j];
            }
        }
        out
    };
    let mut result = vec![0.0; d + 1];
    let mut power = vec![0.0; d + 1];
    power[0] = 1.0;
    for fk in &f[1..=d] {
        power = mul(&power, g);
        for (r, p) in result.iter_mut().zip(&power) {
            *r += fk * p;
        }
    }
    result
}

fn assert_coeffs(f: &JetDiffeo, expected: &[f64], tol: f64) {
    let got = coeffs_of(f);
    assert_eq!(got.len(), expected.len());
    for (k, (g, e)) in got.iter().zip(expected).enumerate() {
        assert!(
            (g - C64::new(*e, 0.0)).norm() <= tol,
            "x^{} coefficient: got {g}, expected {e}",
            k + 1
        );
    }
}

#[test]
fn compose_with_identity() {
    let mut rng = sampling::rng(1);
    let f = sampling::jet(&mut rng, 2, 4, 0.3);
    let id = JetDiffeo::identity(2, 4);
    assert!(f.compose(&id).unwrap().distance(&f) < 1e-15);
    assert!(id.compose(&f).unwrap().distance(&f) < 1e-15);
}

#[test]
fn compose_linear_is_matrix_product() {
    let a = from_real_rows(&[&[1.0, 2.0], &[0.5, -1.0]]);
    let b = from_real_rows(&[&[0.0, 1.0], &[3.0, 1.0]]);
    let ab = JetDiffeo::from_linear(&a, 3)
        .unwrap()
        .compose(&JetDiffeo::from_linear(&b, 3).unwrap())
        .unwrap();
    let expected = JetDiffeo::from_linear(&(&a * &b), 3).unwrap();
    assert!(ab.distance(&expected) < 1e-15);
}

#[test]
fn compose_univariate_matches_series_oracle() {
    let f = univariate(&[1.0, 1.0, 0.0]);
    let got = f.compose(&f).unwrap();
    let oracle = series_compose(&[0.0, 1.0, 1.0, 0.0], &[0.0, 1.0, 1.0, 0.0], 3);
    assert_eq!(&oracle[1..], &[1.0, 2.0, 2.0]);
    assert_coeffs(&got, &oracle[1..], 1e-15);
}

#[test]
fn invert_univariate() {
    let f = univariate(&[1.0, 1.0, 0.0]);
    let inv = f.invert().unwrap();
    assert_coeffs(&inv, &[1.0, -1.0, 2.0], 1e-14);
    let back = series_compose(&[0.0, 1.0, 1.0, 0.0], &[0.0, 1.0, -1.0, 2.0], 3);
    assert_eq!(&back[1..], &[1.0, 0.0, 0.0]);
}

#[test]
fn invert_identity_and_linear() {
    let id = JetDiffeo::identity(3, 4);
    assert!(id.invert().unwrap().distance(&id) < 1e-15);
    let a = from_real_rows(&[&[2.0, 1.0], &[0.0, 0.5]]);
    let inv = JetDiffeo::from_linear(&a, 3).unwrap().invert().unwrap();
    let expected = JetDiffeo::from_linear(&linalg::invert(&a).unwrap(), 3).unwrap();
    assert!(inv.distance(&expected) < 1e-14);
}

#[test]
fn singular_linear_part_is_rejected() {
    let a = from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
    assert!(matches!(
        JetDiffeo::from_linear(&a, 2),
        Err(crate::Error::Singular { .. })
    ));
}

#[test]
fn mismatched_shapes_are_structural_errors() {
    let f = JetDiffeo::identity(2, 3);
    let g = JetDiffeo::identity(2, 4);
    assert!(matches!(f.compose(&g), Err(crate::Error::Structure(_))));
    let h = JetDiffeo::identity(3, 3);
    assert!(matches!(f.commutator(&h), Err(crate::Error::Structure(_))));
}

#[test]
fn commutator_trivial_cases() {
    let mut rng = sampling::rng(2);
    let f = sampling::jet(&mut rng, 2, 5, 0.2);
    let id = JetDiffeo::identity(2, 5);
    assert!(f.commutator(&f).unwrap().is_identity(1e-12));
    assert!(f.commutator(&id).unwrap().is_identity(1e-12));
    let d1 = JetDiffeo::from_linear(&from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]), 5).unwrap();
    let d2 = JetDiffeo::from_linear(&from_real_rows(&[&[-1.0, 0.0], &[0.0, 3.0]]), 5).unwrap();
    assert!(d1.commutator(&d2).unwrap().is_identity(1e-14));
}

#[test]
fn exp_of_zero_and_linear_nilpotent() {
    let zero = JetVectorField::zero(2, 4);
    assert!(zero.exp().unwrap().is_identity(0.0));
    let n = from_real_rows(&[&[0.0, 1.0, 2.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
    let x = JetVectorField::from_linear(&n, 3).unwrap();
    // e^N = I + N + N^2/2 for N^3 = 0
    let e_n = linalg::identity(3) + &n + (&n * &n) * C64::new(0.5, 0.0);
    let expected = JetDiffeo::from_linear(&e_n, 3).unwrap();
    assert!(x.exp().unwrap().distance(&expected) < 1e-14);
}

#[test]
fn exp_x2_matches_geometric_series() {
    // flow of x^2 d/dx is x / (1 - x)
    let x = JetVectorField::from_terms(
        1,
        8,
        &[vec![(MultiIndex::new(vec![2]), C64::new(1.0, 0.0))]],
    )
    .unwrap();
    let f = x.exp().unwrap();
    assert_coeffs(&f, &[1.0; 8], 1e-12);
    let f3 = x_field_deg3().exp().unwrap();
    assert_coeffs(&f3, &[1.0, 1.0, 1.0], 1e-15);
}

fn x_field_deg3() -> JetVectorField {
    JetVectorField::from_terms(1, 3, &[vec![(MultiIndex::new(vec![2]), C64::new(1.0, 0.0))]])
        .unwrap()
}

#[test]
fn exp_rejects_non_nilpotent() {
    let x = JetVectorField::from_linear(&from_real_rows(&[&[1.0]]), 3).unwrap();
    assert!(matches!(x.exp(), Err(crate::Error::Domain(_))));
}

#[test]
fn log_univariate() {
    let f = univariate(&[1.0, 1.0, 0.0]);
    let x = f.log().unwrap();
    let c2 = x.coeff(0, &MultiIndex::new(vec![2]));
    let c3 = x.coeff(0, &MultiIndex::new(vec![3]));
    assert!((c2 - C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((c3 - C64::new(-1.0, 0.0)).norm() < 1e-15);
    assert!(x.exp().unwrap().distance(&f) < 1e-15);
}

#[test]
fn log_of_identity_and_rejects_hyperbolic() {
    let id = JetDiffeo::identity(2, 4);
    assert!(id.log().unwrap().max_coeff() == 0.0);
    let a = JetDiffeo::from_linear(&from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]), 3).unwrap();
    assert!(matches!(a.log(), Err(crate::Error::Domain(_))));
}

#[test]
fn sup_norm_bound_examples() {
    assert_eq!(JetDiffeo::identity(3, 4).sup_norm_bound(0.7).unwrap(), 0.0);
    let f = univariate(&[1.0, 1.0]);
    assert!((f.sup_norm_bound(0.5).unwrap() - 0.25).abs() < 1e-16);
    assert!(f.sup_norm_bound(0.0).is_err());
    assert!(f.sup_norm_bound(-1.0).is_err());
}

#[test]
fn unipotency_predicates() {
    let id = JetDiffeo::identity(2, 3);
    assert!(id.is_unipotent(1e-9) && id.is_tangent_to_identity(1e-9));
    let d = JetDiffeo::from_linear(&from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]), 3).unwrap();
    assert!(!d.is_unipotent(1e-9) && !d.is_tangent_to_identity(1e-9));
    let f = univariate(&[1.0, 0.0, 1.0]);
    assert!(f.is_unipotent(1e-9) && f.is_tangent_to_identity(1e-9));
    let shear = JetDiffeo::from_linear(&from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]), 3).unwrap();
    assert!(shear.is_unipotent(1e-9) && !shear.is_tangent_to_identity(1e-9));
}

#[test]
fn rescale_conjugates_by_homothety() {
    let mut rng = sampling::rng(9);
    let f = sampling::jet(&mut rng, 2, 4, 0.4);
    let s = 0.3;
    let g = f.rescale(s);
    let z = vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.05)];
    let sz: Vec<C64> = z.iter().map(|c| c * s).collect();
    let lhs = g.eval(&z);
    let rhs: Vec<C64> = f.eval(&sz).iter().map(|c| c / s).collect();
    for (a, b) in lhs.iter().zip(&rhs) {
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn format_roundtrip_and_validation() {
    let mut rng = sampling::rng(4);
    let f = sampling::jet(&mut rng, 2, 3, 0.5);
    let text = format::jet_to_string(&f);
    let g = format::parse_jet(&text).unwrap();
    assert_eq!(f, g);
    assert!(format::parse_jet(r#"{"dim":1,"degree":2,"coords":[[[0,1.0,0.0]]]}"#).is_err());
    assert!(format::parse_jet(r#"{"dim":1,"degree":2,"coords":[[[3,1.0,0.0]]]}"#).is_err());
    assert!(format::parse_jet(r#"{"dim":1,"degree":2,"coords":[[[1.5,1.0,0.0]]]}"#).is_err());
    assert!(format::parse_jet(r#"{"dim":1,"degree":2,"coords":[[[1,1.0,0.0]]],"x":1}"#).is_err());
}

#[test]
fn bracket_is_leading_term_of_group_commutator() {
    // X = x^2 d/dx, Y = x^3 d/dx: [X, Y] is a multiple of x^4 d/dx; at
    // degree 4 every higher correction is truncated away.
    let d = 4;
    let x = JetVectorField::from_terms(1, d, &[vec![(MultiIndex::new(vec![2]), C64::new(1.0, 0.0))]]).unwrap();
    let y = JetVectorField::from_terms(1, d, &[vec![(MultiIndex::new(vec![3]), C64::new(1.0, 0.0))]]).unwrap();
    let comm = x.exp().unwrap().commutator(&y.exp().unwrap()).unwrap();
    let log = comm.log().unwrap();
    let bracket = x.lie_bracket(&y).unwrap();
    assert!(log.distance(&bracket) < 1e-14, "log {:?} vs bracket {:?}", log.dense(0), bracket.dense(0));
    assert!(bracket.coeff(0, &MultiIndex::new(vec![4])).norm() > 0.5);
}

fn jet_strategy(max_dim: usize, max_degree: usize) -> impl Strategy<Value = (usize, usize, u64)> {
    (1..=max_dim, 1..=max_degree, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws((dim, degree, seed) in jet_strategy(3, 5)) {
        let mut rng = sampling::rng(seed);
        let f = sampling::jet(&mut rng, dim, degree, 0.3);
        let g = sampling::jet(&mut rng, dim, degree, 0.3);
        let h = sampling::jet(&mut rng, dim, degree, 0.3);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(left.distance(&right) < 1e-9);
        prop_assert!(f.compose(&f.invert().unwrap()).unwrap().is_identity(1e-9));
        prop_assert!(f.invert().unwrap().compose(&f).unwrap().is_identity(1e-9));
        let c = f.commutator(&g).unwrap();
        let c_rev = g.commutator(&f).unwrap();
        prop_assert!(c.compose(&c_rev).unwrap().is_identity(1e-9));
    }

    #[test]
    fn exp_log_bijection((dim, degree, seed) in jet_strategy(3, 5)) {
        let mut rng = sampling::rng(seed);
        let x = sampling::nilpotent_field(&mut rng, dim, degree, 0.4);
        let f = x.exp().unwrap();
        prop_assert!(f.is_unipotent(1e-9));
        let back = f.log().unwrap();
        prop_assert!(back.distance(&x) < 1e-9);
        prop_assert!(back.exp().unwrap().distance(&f) < 1e-9);
    }

    #[test]
    fn truncation_commutes_with_arithmetic((dim, degree, seed) in jet_strategy(3, 5)) {
        prop_assume!(degree >= 2);
        let mut rng = sampling::rng(seed);
        let f = sampling::jet(&mut rng, dim, degree, 0.3);
        let g = sampling::jet(&mut rng, dim, degree, 0.3);
        let low = degree - 1;
        let direct = f.truncate(low).unwrap().commutator(&g.truncate(low).unwrap()).unwrap();
        let via_high = f.commutator(&g).unwrap().truncate(low).unwrap();
        prop_assert!(direct.distance(&via_high) < 1e-9);
    }

    #[test]
    fn sup_norm_bound_is_sound_and_monotone((dim, degree, seed) in jet_strategy(3, 5), r in 0.05f64..1.5) {
        let mut rng = sampling::rng(seed);
        let f = sampling::jet(&mut rng, dim, degree, 0.3);
        let bound = f.sup_norm_bound(r).unwrap();
        for _ in 0..100 {
            let z = sampling::point_in_ball(&mut rng, dim, r);
            let fz = f.eval(&z);
            let diff: Vec<C64> = fz.iter().zip(&z).map(|(a, b)| a - b).collect();
            prop_assert!(euclidean_norm(&diff) <= bound + 1e-12);
        }
        prop_assert!(f.sup_norm_bound(r * 0.5).unwrap() <= bound);
    }
}
