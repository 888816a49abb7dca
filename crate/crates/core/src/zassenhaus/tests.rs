use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::cascade::{CascadeOptions, CascadeState};
use crate::jet::JetDiffeo;
use crate::linalg::{self, from_real_rows};
use crate::sampling;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn estimate_examples() {
    let (t, b) = commutator_estimate(&q(1, 1), &q(1, 16), &q(1, 16), &q(1, 4)).unwrap();
    assert_eq!(t, q(1, 2));
    assert_eq!(b, q(1, 32));
    let (_, b) = commutator_estimate(&1.0, &0.0, &0.1, &0.2).unwrap();
    assert_eq!(b, 0.0);
    let err = commutator_estimate(&1.0, &0.2, &0.1, &0.3).unwrap_err();
    assert!(err.to_string().contains("4·max(eps_f, eps_g) + tau < r"), "{err}");
    assert!(commutator_estimate(&1.0, &0.1, &0.1, &0.0).is_err());
}

#[test]
fn estimate_halves_along_initial_regime() {
    let delta = q(1, 160);
    for j in 0..6usize {
        let r = BigRational::from_integer(1.into()) - q(2 * j as i64, 1) * &delta;
        let beta = &delta / q(1 << (j + 2), 1);
        let (t, b) = commutator_estimate(&r, &(&delta / q(4, 1)), &beta, &delta).unwrap();
        assert_eq!(b, &delta / q(1 << (j + 3), 1));
        assert_eq!(t, r - q(2, 1) * &delta);
    }
}

#[test]
fn schedule_examples() {
    let s = build_schedule(1, &q(1, 40), 6).unwrap();
    assert_eq!(s.rows[2].radius, q(9, 10));
    assert_eq!(s.rows[2].bound, q(1, 640));
    for p in 0..4usize {
        let delta = q(1, 10 * (p as i64 + 3));
        let s = build_schedule(p, &delta, p + 4).unwrap();
        let expected = BigRational::from_integer(1.into()) - q(2 * (p as i64 + 1) + 1, 1) * &delta;
        assert_eq!(s.rows[p + 2].radius, expected);
        assert_eq!(s.rows[p + 2].regime, Regime::Tail);
        assert_eq!(s.rows[p + 1].regime, Regime::Initial);
    }
}

#[test]
fn schedule_radii_stay_above_half() {
    for p in 0..4usize {
        let delta = q(1, 4 * (p as i64 + 2) + 1);
        let s = build_schedule(p, &delta, 64).unwrap();
        let floor = BigRational::from_integer(1.into()) - q(2 * p as i64 + 4, 1) * &delta;
        assert!(floor > q(1, 2));
        for w in s.rows.windows(2) {
            assert!(w[1].radius < w[0].radius);
            assert_eq!(&w[1].bound * q(2, 1), w[0].bound);
        }
        assert!(s.rows.iter().all(|r| r.radius > floor));
    }
}

#[test]
fn closed_form_matches_chained_estimates() {
    for p in 0..5usize {
        for den in [40i64, 160, 1000] {
            let delta = q(1, den);
            if check_parameters(p, &delta).is_err() {
                continue;
            }
            let a = build_schedule(p, &delta, 14).unwrap();
            let b = chain_schedule(p, &delta, 14).unwrap();
            assert_eq!(a, b, "p={p} δ=1/{den}");
        }
    }
}

#[test]
fn parameter_constraint_is_named() {
    let err = build_schedule(2, &q(1, 16), 3).unwrap_err();
    assert!(err.to_string().contains("(p+2)δ < 1/4"), "{err}");
    assert!(build_schedule(0, &q(0, 1), 3).is_err());
    // boundary: (p+2)δ = 1/4 is rejected
    assert!(build_schedule(0, &q(1, 8), 3).is_err());
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_rational("1/160").unwrap(), q(1, 160));
    assert_eq!(parse_rational("0.00625").unwrap(), q(1, 160));
    assert_eq!(parse_rational("3").unwrap(), q(3, 1));
    assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
    for bad in ["", "1/0", "abc", "1e-3", "."] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

#[test]
fn records_are_exact_strings() {
    let s = build_schedule(1, &q(1, 160), 3).unwrap();
    let r = s.records();
    assert_eq!(r[3].bound, "1/5120");
    assert_eq!(r[1].radius, "79/80");
}

fn cascade_with(gens: Vec<(String, JetDiffeo)>, p: usize, levels: usize) -> CascadeState {
    let mut s = CascadeState::new(
        gens,
        CascadeOptions {
            p,
            ..CascadeOptions::default()
        },
    )
    .unwrap();
    s.extend(levels).unwrap();
    s
}

#[test]
fn identity_generators_pass_vacuously() {
    let s = cascade_with(vec![("a".into(), JetDiffeo::identity(2, 4))], 1, 3);
    let sched = build_schedule(1, &q(1, 160), 3).unwrap();
    let rep = verify_cascade_against_schedule(&s, &sched);
    assert!(rep.precondition_ok && rep.all_pass);
    assert_eq!(rep.truncation_degree, 4);
}

#[test]
fn oversized_generator_gives_precondition_report() {
    let delta = 1.0 / 160.0;
    let mut rng = sampling::rng(8);
    let gens = vec![
        ("a".into(), sampling::jet_with_bound(&mut rng, 2, 3, 0.5 * delta / 4.0)),
        ("b".into(), sampling::jet_with_bound(&mut rng, 2, 3, 3.0 * delta / 4.0)),
    ];
    let s = cascade_with(gens, 1, 1);
    let rep = verify_cascade_against_schedule(&s, &build_schedule(1, &q(1, 160), 3).unwrap());
    assert!(!rep.precondition_ok);
    assert!(rep.entries.is_empty());
    assert!(rep.generator_violations.iter().any(|v| v.word == "b"));
    assert!(rep.generator_violations.iter().all(|v| v.word != "a" && v.word != "A"));
}

#[test]
fn small_generators_pass_and_rerun_identically() {
    let delta = 1.0 / 160.0;
    let mut rng = sampling::rng(21);
    let gens: Vec<(String, JetDiffeo)> = ["a", "b"]
        .iter()
        .map(|n| (n.to_string(), sampling::jet_with_bound(&mut rng, 2, 4, 0.9 * delta / 4.0)))
        .collect();
    let sched = build_schedule(1, &q(1, 160), 3).unwrap();
    let s = cascade_with(gens.clone(), 1, 3);
    let rep = verify_cascade_against_schedule(&s, &sched);
    assert!(rep.precondition_ok);
    assert!(rep.all_pass, "{:?}", rep.entries.iter().find(|e| !e.pass));
    let again = verify_cascade_against_schedule(&cascade_with(gens, 1, 3), &sched);
    assert_eq!(rep, again);
}

#[test]
fn failing_entries_carry_sampled_sup() {
    // the schedule is tightened by hand so that honest entries fail
    let mut rng = sampling::rng(2);
    let gens = vec![("a".into(), sampling::jet_with_bound(&mut rng, 2, 3, 1e-3))];
    let s = cascade_with(gens, 0, 1);
    let mut sched = build_schedule(0, &q(1, 160), 1).unwrap();
    for row in sched.rows.iter_mut() {
        row.bound = &row.bound / q(1_000_000, 1);
    }
    let rep = verify_cascade_against_schedule(&s, &sched);
    assert!(rep.precondition_ok);
    let failed: Vec<_> = rep.entries.iter().filter(|e| !e.pass).collect();
    assert!(!failed.is_empty() && !rep.all_pass);
    for f in failed {
        assert!(f.margin < 0.0);
        let sup = f.sampled_sup.unwrap();
        assert!(sup > 0.0 && sup <= f.bound + 1e-15);
    }
}

#[test]
fn ratio_edge_cases() {
    let i = linalg::identity(2);
    let b = from_real_rows(&[&[1.01, 0.02], &[0.0, 0.99]]);
    assert_eq!(zassenhaus_ratio(&i, &b), None);
    let d1 = from_real_rows(&[&[1.01, 0.0], &[0.0, 0.98]]);
    let d2 = from_real_rows(&[&[0.97, 0.0], &[0.0, 1.02]]);
    assert!(zassenhaus_ratio(&d1, &d2).unwrap() < 1e-12);
}

#[test]
fn matrix_constant_is_moderate() {
    let fit = matrix_zassenhaus_fit(2, 0.05, 2000, 1).unwrap();
    assert!(fit.constant > 0.5 && fit.constant <= 4.0, "{fit:?}");
    assert_eq!(fit.skipped, 0);
    assert!(matrix_zassenhaus_fit(2, 1.5, 10, 1).is_err());
}
