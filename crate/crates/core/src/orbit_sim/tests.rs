use num_complex::Complex64 as C64;
use proptest::prelude::*;

use super::*;
use crate::cascade::{CascadeOptions, CascadeState, Letter, Word};
use crate::error::Error;
use crate::fixtures::{monomial_flow, rotation2};
use crate::jet::{JetDiffeo, MultiIndex};
use crate::linalg::{c, from_real_rows};
use crate::sampling;
use crate::tolerances::FP_TOL;

fn linear1(a: f64, degree: usize) -> JetDiffeo {
    JetDiffeo::from_terms(1, degree, &[vec![(MultiIndex::new(vec![1]), c(a, 0.0))]]).unwrap()
}

fn flows_spec(r: f64, restriction: f64) -> PseudogroupSpec {
    PseudogroupSpec::new(
        vec![("a".into(), monomial_flow(2, 8)), ("b".into(), monomial_flow(3, 8))],
        r,
        restriction,
    )
    .unwrap()
}

#[test]
fn empty_word_keeps_the_seed() {
    let spec = flows_spec(0.1, 0.85);
    let q = [c(0.03, 0.01)];
    let rec = evaluate_word(&spec, &Word::empty(), &q).unwrap();
    assert!(rec.completed());
    assert!(rec.steps.is_empty());
    assert_eq!(rec.end(), &q);
}

#[test]
fn word_and_inverse_cancel() {
    let spec = flows_spec(0.1, 0.85);
    let w = spec.alphabet().parse("a A").unwrap();
    let q = [c(0.04, -0.02)];
    let rec = evaluate_word(&spec, &w, &q).unwrap();
    assert!(rec.completed());
    assert_eq!(rec.steps[0].letter, "A");
    assert!((rec.end()[0] - q[0]).norm() < FP_TOL);
}

#[test]
fn expanding_map_leaves_the_domain() {
    // r = 1, restricted radius 0.6, f(x) = 1.5 x: 0.1 -> 0.15 -> 0.225 ->
    // 0.3375 -> 0.50625 -> 0.759375, which is outside at step 5
    let spec = PseudogroupSpec::new(vec![("f".into(), linear1(1.5, 3))], 1.0, 0.6).unwrap();
    let w = spec.alphabet().parse("f f f f f f").unwrap();
    let rec = evaluate_word(&spec, &w, &[c(0.1, 0.0)]).unwrap();
    assert_eq!(rec.terminated, Termination::LeftDomain);
    assert_eq!(rec.steps.len(), 5);
    assert!(rec.steps[..4].iter().all(|s| s.in_domain));
    assert!(!rec.steps[4].in_domain);
    assert!((rec.steps[4].image[0].re - 0.759375).abs() < 1e-15);
}

#[test]
fn word_evaluation_errors() {
    let spec = flows_spec(0.1, 0.85);
    let bad = Word::from_letters(vec![Letter::new(7, false)]);
    assert!(matches!(evaluate_word(&spec, &bad, &[c(0.01, 0.0)]), Err(Error::Structure(_))));
    assert!(matches!(
        evaluate_word(&spec, &Word::letter(0), &[c(0.09, 0.0)]),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        evaluate_word(&spec, &Word::letter(0), &[c(0.01, 0.0), c(0.0, 0.0)]),
        Err(Error::Structure(_))
    ));
}

#[test]
fn containment_is_validated() {
    // f(x) = x + x^2 + ... maps the ball of radius 0.1 (1 - δ/4) beyond 0.1
    let err = PseudogroupSpec::new(
        vec![("a".into(), monomial_flow(2, 8))],
        0.1,
        default_restriction(1.0 / 160.0),
    )
    .unwrap_err();
    assert!(err.to_string().contains("f(B_{r(1-δ/4)}) ⊂ B_r"), "{err}");
    assert!(PseudogroupSpec::new(vec![("a".into(), monomial_flow(2, 8))], 0.1, 0.4).is_err());
}

#[test]
fn grid_geometry() {
    let pts = grid_points(2, 0.05, &GridSpec { points_per_axis: 5, complex: false });
    assert_eq!(pts.len(), 25);
    let max = pts.iter().map(|p| crate::jet::euclidean_norm(p)).fold(0.0, f64::max);
    assert!((max - 0.05).abs() < 1e-15);
    assert_eq!(pts[12], vec![c(0.0, 0.0), c(0.0, 0.0)]);
    let cplx = grid_points(1, 0.05, &GridSpec { points_per_axis: 3, complex: true });
    assert_eq!(cplx.len(), 9);
    assert_eq!(grid_points(1, 0.05, &GridSpec::default()).len(), 41);
}

fn flows_cascade(max_level: usize) -> CascadeState {
    let mut state = CascadeState::new(
        vec![("a".into(), monomial_flow(2, 8)), ("b".into(), monomial_flow(3, 8))],
        CascadeOptions::default(),
    )
    .unwrap();
    state.extend(max_level).unwrap();
    state
}

#[test]
fn identity_words_witness_nothing() {
    let id = JetDiffeo::identity(1, 4);
    let spec = PseudogroupSpec::new(vec![("a".into(), id)], 0.1, 0.9).unwrap();
    let words: Vec<ScanWord> = (0..3)
        .map(|k| ScanWord {
            level: 0,
            index: k,
            word: Word::from_letters(vec![Letter::new(0, false); k + 1]),
        })
        .collect();
    let report = recurrence_scan(&spec, &words, &ScanOptions::for_radius(0.1)).unwrap();
    assert_eq!(report.witnessed, 0);
    assert!(report.points.iter().all(|p| p.fixed_by_all));
    let empty = recurrence_scan(&spec, &[], &ScanOptions::for_radius(0.1)).unwrap();
    assert_eq!(empty.witnessed, 0);
}

#[test]
fn flows_scan_witnesses_the_grid() {
    let spec = flows_spec(0.1, 0.85);
    let state = flows_cascade(6);
    let words = cascade_words(&state, 6);
    assert!(words.iter().all(|w| w.level <= 6));
    let opts = ScanOptions::for_radius(0.1);
    let report = recurrence_scan(&spec, &words, &opts).unwrap();
    assert_eq!(report.points.len(), 41);
    assert!(report.witnessed_fraction_off_origin() >= 0.9);
    let origin = &report.points[20];
    assert_eq!(origin.point, vec![c(0.0, 0.0)]);
    assert!(!origin.recurrent && origin.fixed_by_all);
    // witnesses re-verify by independent evaluation
    for p in report.points.iter().filter(|p| p.recurrent) {
        let w = p.witness.as_ref().unwrap();
        let word = spec.alphabet().parse(&w.word).unwrap();
        let rec = evaluate_word(&spec, &word, &p.point).unwrap();
        assert!(rec.completed());
        let d = (rec.end()[0] - p.point[0]).norm();
        assert_eq!(d, w.displacement);
        assert!(d < opts.eta && d > opts.fixpoint_tol);
    }
    let again = recurrence_scan(&spec, &words, &opts).unwrap();
    assert_eq!(again, report);
}

#[test]
fn scan_csv_layout() {
    let spec = flows_spec(0.1, 0.85);
    let words = cascade_words(&flows_cascade(1), 1);
    let opts = ScanOptions {
        grid: GridSpec { points_per_axis: 3, complex: false },
        ..ScanOptions::for_radius(0.1)
    };
    let report = recurrence_scan(&spec, &words, &opts).unwrap();
    let mut buf = Vec::new();
    report.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re0,im0,recurrent,witness,displacement");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("0,0,false,,"));
}

#[test]
fn scan_rejects_bad_tolerances() {
    let spec = flows_spec(0.1, 0.85);
    let opts = ScanOptions {
        eta: 1e-12,
        fixpoint_tol: 1e-10,
        ..ScanOptions::for_radius(0.1)
    };
    assert!(matches!(recurrence_scan(&spec, &[], &opts), Err(Error::Validation { .. })));
}

fn hunt_maps(psi: &crate::linalg::CMatrix) -> (JetDiffeo, JetDiffeo) {
    let phi = from_real_rows(&[&[0.5, 0.0], &[0.0, 2.0]]);
    (
        JetDiffeo::from_linear(&phi, 3).unwrap(),
        JetDiffeo::from_linear(psi, 3).unwrap(),
    )
}

fn hunt_options() -> HuntOptions {
    HuntOptions {
        max_power: 10,
        ..HuntOptions::default()
    }
}

#[test]
fn hunt_with_mixing_rotation() {
    let (phi, psi) = hunt_maps(&rotation2(std::f64::consts::FRAC_PI_4));
    let seed = [c(0.5, 0.0), c(0.0, 0.0)];
    let report = stable_manifold_hunt(&phi, &psi, &seed, &hunt_options()).unwrap();
    assert!(report.escaped);
    assert!((report.contraction - 0.5).abs() < 1e-12);
    assert!(report.distinct_returns >= 20);
    assert!(report.min_pairwise_distance > 1e-10);
    assert!(report.decreasing);
    assert!(report.returns.iter().all(|r| r.distance_to_stable > 0.0));
    // each return recomputed from scratch
    let phi_inv = phi.invert().unwrap();
    for r in &report.returns {
        let mut z = report.seeds[r.seed_index].clone();
        for _ in 0..r.p {
            z = phi.eval(&z);
        }
        z = psi.eval(&z);
        for _ in 0..r.m {
            z = phi_inv.eval(&z);
        }
        assert!(distance(&z, &r.point) < FP_TOL);
        assert!(r.norm >= 0.25 && r.norm <= 0.5);
    }
    let cells = minimal_set_search(&report.orbits(), 1e-3, 3).unwrap();
    assert!(cells.recurrent_cell.is_some());
}

#[test]
fn hunt_control_with_identity() {
    let (phi, psi) = hunt_maps(&from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]));
    let seed = [c(0.5, 0.0), c(0.0, 0.0)];
    let report = stable_manifold_hunt(&phi, &psi, &seed, &hunt_options()).unwrap();
    assert!(!report.escaped);
    for r in &report.returns {
        // the return is a point of the forward orbit of its seed
        let mut z = report.seeds[r.seed_index].clone();
        for _ in 0..(r.p - r.m) {
            z = phi.eval(&z);
        }
        assert!(distance(&z, &r.point) < FP_TOL);
        assert_eq!(r.distance_to_stable, 0.0);
    }
    assert!(report.distinct_returns <= 2 * report.seeds.len());
}

#[test]
fn hunt_aborts_on_invariant_axes() {
    let seed = [c(0.5, 0.0), c(0.0, 0.0)];
    let (phi, swap) = hunt_maps(&from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
    let err = stable_manifold_hunt(&phi, &swap, &seed, &hunt_options()).unwrap_err();
    assert!(err.to_string().contains("escape_direction"), "{err}");
    let (phi, diag) = hunt_maps(&from_real_rows(&[&[3.0, 0.0], &[0.0, 0.25]]));
    assert!(matches!(
        stable_manifold_hunt(&phi, &diag, &seed, &hunt_options()),
        Err(Error::Domain(_))
    ));
    let (phi, psi) = hunt_maps(&rotation2(0.3));
    let off = [c(0.3, 0.0), c(0.1, 0.0)];
    assert!(matches!(
        stable_manifold_hunt(&phi, &psi, &off, &hunt_options()),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn minimal_set_single_cluster() {
    let orbit = vec![vec![c(0.123, 0.0)]; 5];
    let rep = minimal_set_search(&[orbit], 1e-3, 3).unwrap();
    let cell = rep.recurrent_cell.unwrap();
    assert_eq!(cell.index, vec![123, 0]);
    assert_eq!(cell.hits, 5);
}

#[test]
fn minimal_set_uniform_annulus_takes_first_cell() {
    let mut rng = sampling::rng(3);
    let orbit: Vec<Vec<C64>> = (0..20_000)
        .map(|_| {
            let z = sampling::point_on_sphere(&mut rng, 1, 1.0)[0];
            let t: f64 = 0.5 + 0.5 * rand::Rng::gen::<f64>(&mut rng);
            vec![z * t]
        })
        .collect();
    let rep = minimal_set_search(std::slice::from_ref(&orbit), 0.25, 3).unwrap();
    let cell = rep.recurrent_cell.unwrap();
    // the lexicographically smallest occupied cell
    let first = orbit
        .iter()
        .map(|z| vec![(z[0].re / 0.25).floor() as i64, (z[0].im / 0.25).floor() as i64])
        .min()
        .unwrap();
    assert_eq!(cell.index, first);
    assert!(rep.sizes.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn minimal_set_isolated_points_give_nothing() {
    let orbits: Vec<Vec<Vec<C64>>> = (0..5).map(|k| vec![vec![c(k as f64, 0.0)]]).collect();
    let rep = minimal_set_search(&orbits, 0.5, 2).unwrap();
    assert!(rep.tau_empty);
    assert!(rep.recurrent_cell.is_none());
    assert!(minimal_set_search(&orbits, 0.0, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn word_then_inverse_returns(seed in any::<u64>(), len in 1usize..6) {
        let mut rng = sampling::rng(seed);
        let maps: Vec<(String, JetDiffeo)> = ["a", "b"]
            .iter()
            .map(|n| {
                let lin = crate::linalg::identity(2) + sampling::matrix(&mut rng, 2) * c(0.05, 0.0);
                (n.to_string(), sampling::jet_with_linear(&mut rng, &lin, 6, 0.1))
            })
            .collect();
        let spec = PseudogroupSpec::new(maps, 0.1, 0.9).unwrap();
        let letters: Vec<Letter> = (0..len)
            .map(|_| Letter::new(rand::Rng::gen_range(&mut rng, 0..2), rand::Rng::gen(&mut rng)))
            .collect();
        let w = Word::from_letters(letters);
        let ww = Word::from_letters(w.letters().iter().chain(w.inverse().letters()).cloned().collect());
        let q = sampling::point_in_ball(&mut rng, 2, 0.05);
        let rec = evaluate_word(&spec, &ww, &q).unwrap();
        // domain safety: every step that was evaluated started inside
        for s in &rec.steps {
            prop_assert!(crate::jet::euclidean_norm(&s.image) < spec.radius());
        }
        if rec.completed() {
            let back = distance(rec.end(), &q);
            prop_assert!(back < 2.0 * ww.len() as f64 * FP_TOL, "back = {back}");
        }
    }

    #[test]
    fn tau_iteration_descends(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let orbits: Vec<Vec<Vec<C64>>> = (0..4)
            .map(|_| (0..30).map(|_| sampling::point_in_ball(&mut rng, 1, 0.01)).collect())
            .collect();
        let rep = minimal_set_search(&orbits, 2e-3, 2).unwrap();
        prop_assert!(rep.sizes.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(rep.sizes.len() <= rep.occupied_cells + 1);
    }
}
