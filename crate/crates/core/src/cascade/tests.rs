use proptest::prelude::*;

use super::*;
use crate::fixtures;
use crate::linalg::from_real_rows;
use crate::sampling;

fn ab() -> Alphabet {
    Alphabet::new(&["a", "b"]).unwrap()
}

#[test]
fn free_reduce_examples() {
    let al = ab();
    assert!(al.parse("a A").unwrap().free_reduce().is_empty());
    let w = al.parse("a b B a").unwrap().free_reduce();
    assert_eq!(al.format(&w), "a a");
    assert!(w.is_reduced());
    assert!(!al.parse("a b B a").unwrap().is_reduced());
    assert_eq!(al.format(&Word::empty()), "1");
    assert!(al.parse("a c").is_err());
}

#[test]
fn alphabet_rules() {
    assert!(Alphabet::new(&["A"]).is_err());
    assert!(Alphabet::new(&["a", "a"]).is_err());
    let al = Alphabet::new(&["phi", "psi"]).unwrap();
    let w = al.parse("phi Psi").unwrap();
    assert_eq!(al.format(&w), "phi Psi");
    assert_eq!(w.letters()[1], Letter::new(1, true));
}

#[test]
fn commutator_word_is_reduced_product() {
    let al = ab();
    let w = Word::commutator(&al.parse("a").unwrap(), &al.parse("b").unwrap());
    assert_eq!(al.format(&w), "a b A B");
    let v = Word::commutator(&al.parse("a b").unwrap(), &al.parse("b").unwrap());
    // a b · b · B A · B reduces to a b A B
    assert_eq!(al.format(&v), "a b A B");
}

#[test]
fn alpha_words_have_length_4_pow_2k() {
    for k in 0..=3 {
        let words = free_words_alpha(k);
        for (f, w) in words.all() {
            assert!(w.is_reduced());
            assert_eq!(w.len(), 4usize.pow(2 * k as u32), "k={k}");
            assert_eq!(w.first(), Some(f));
            assert_eq!(w.last(), Some(f));
        }
    }
    let one = free_words_alpha(1);
    // (a B A b)(A b a B)(B a b A)(b A B a)
    assert_eq!(ab().format(&one.a), "a B A b A b a B B a b A b A B a");
}

#[test]
fn alpha_derivations_respect_p0_recursion() {
    for k in 0..=3 {
        for (f, _) in free_words_alpha(k).all() {
            assert!(verify_alpha_membership(f, k), "k={k} f={f:?}");
        }
    }
    // an unbalanced commutator is rejected at p = 0 but fine at p = 1
    let a = Derivation::Generator(Letter::new(0, false));
    let b = Derivation::Generator(Letter::new(1, false));
    let ab1 = Derivation::commutator(a.clone(), b);
    let lopsided = Derivation::commutator(ab1, a);
    assert!(lopsided.verify(0).is_err());
    assert_eq!(lopsided.verify(1).unwrap().0, 2);
}

#[test]
fn alpha_words_appear_in_exhaustive_p0_cascade() {
    let opts = CascadeOptions {
        p: 0,
        ..CascadeOptions::default()
    };
    let mut state = CascadeState::new(fixtures::free_rotation_pair(1), opts).unwrap();
    state.extend(2).unwrap();
    for k in 0..=1 {
        let level = state.level(2 * k).unwrap();
        for (_, w) in free_words_alpha(k).all() {
            let jet = state.evaluate_word(w);
            assert!(
                level.entries.iter().any(|e| e.jet.distance(&jet) < FP_TOL),
                "alpha word of k={k} missing from level {}",
                2 * k
            );
        }
    }
    let sizes: Vec<usize> = state.levels().iter().map(|l| l.len()).collect();
    assert!(sizes[0] < sizes[1] && sizes[1] < sizes[2], "{sizes:?}");
}

#[test]
fn identity_generator_gives_trivial_levels() {
    let gens = vec![("e".to_string(), JetDiffeo::identity(2, 3))];
    let mut state = CascadeState::new(gens, CascadeOptions::default()).unwrap();
    state.extend(3).unwrap();
    for level in state.levels() {
        assert_eq!(level.len(), 1);
        assert!(level.is_trivial(0.0));
    }
    assert_eq!(
        pseudo_solvable_probe(&state, 3, PROBE_TOL).unwrap(),
        ProbeOutcome::TerminatesAt { level: 0 }
    );
}

#[test]
fn abelian_and_single_generators_terminate_at_one() {
    let d1 = from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]);
    let d2 = from_real_rows(&[&[-1.0, 0.0], &[0.0, 3.0]]);
    let gens = vec![
        ("a".to_string(), JetDiffeo::from_linear(&d1, 3).unwrap()),
        ("b".to_string(), JetDiffeo::from_linear(&d2, 3).unwrap()),
    ];
    let mut state = CascadeState::new(gens, CascadeOptions::default()).unwrap();
    state.extend(1).unwrap();
    assert!(state.level(1).unwrap().is_trivial(PROBE_TOL));
    assert_eq!(
        pseudo_solvable_probe(&state, 1, PROBE_TOL).unwrap(),
        ProbeOutcome::TerminatesAt { level: 1 }
    );

    let mut rng = sampling::rng(5);
    let f = sampling::jet(&mut rng, 2, 4, 0.3);
    let mut single = CascadeState::new(vec![("f".into(), f)], CascadeOptions::default()).unwrap();
    single.extend(2).unwrap();
    assert_eq!(
        pseudo_solvable_probe(&single, 2, PROBE_TOL).unwrap(),
        ProbeOutcome::TerminatesAt { level: 1 }
    );
}

#[test]
fn heisenberg_terminates_at_level_two() {
    for p in 0..=2 {
        let mut state = CascadeState::new(
            fixtures::heisenberg_triple(3),
            CascadeOptions {
                p,
                ..CascadeOptions::default()
            },
        )
        .unwrap();
        state.extend(3).unwrap();
        assert_eq!(
            pseudo_solvable_probe(&state, 3, PROBE_TOL).unwrap(),
            ProbeOutcome::TerminatesAt { level: 2 },
            "p={p}"
        );
        // level 1 is {Id, z, z^-1}
        assert_eq!(state.level(1).unwrap().len(), 3);
    }
}

#[test]
fn probe_requires_depth() {
    let state = CascadeState::new(fixtures::heisenberg_triple(2), CascadeOptions::default()).unwrap();
    assert!(pseudo_solvable_probe(&state, 2, PROBE_TOL).is_err());
}

#[test]
fn level_cap_keeps_partial_state() {
    let opts = CascadeOptions {
        p: 0,
        level_cap: 20,
        ..CascadeOptions::default()
    };
    let state = CascadeState::new(fixtures::free_rotation_pair(1), opts).unwrap();
    let (state, result) = cascade_extend(state, 4, DEDUP_TOL);
    assert!(matches!(result, Err(Error::Resource(_))));
    assert_eq!(state.depth(), 1);
}

#[test]
fn beam_keeps_free_pair_alive() {
    let opts = CascadeOptions {
        p: 1,
        beam_width: Some(24),
        ..CascadeOptions::default()
    };
    let mut state = CascadeState::new(fixtures::free_rotation_pair(1), opts).unwrap();
    state.extend(6).unwrap();
    assert!(!state.level(6).unwrap().complete);
    match pseudo_solvable_probe(&state, 6, PROBE_TOL).unwrap() {
        ProbeOutcome::NonTrivialThrough { witnesses, .. } => {
            assert_eq!(witnesses.len(), 7);
            assert!(witnesses.iter().all(|w| w.distance_to_identity > 1e-6));
        }
        other => panic!("unexpected {other:?}"),
    }
    for level in state.levels() {
        assert!(level.len() <= 26);
    }
}

#[test]
fn entries_match_their_words_and_inverses() {
    let mut rng = sampling::rng(11);
    let gens = vec![
        ("a".to_string(), sampling::jet_with_bound(&mut rng, 2, 4, 0.05)),
        ("b".to_string(), sampling::jet_with_bound(&mut rng, 2, 4, 0.05)),
    ];
    let mut state = CascadeState::new(gens, CascadeOptions::default()).unwrap();
    state.extend(2).unwrap();
    for level in state.levels() {
        for e in &level.entries {
            let jet = state.evaluate_word(&e.word);
            assert!(jet.distance(&e.jet) < FP_TOL);
            assert!(e.jet.compose(e.inverse_jet()).unwrap().is_identity(FP_TOL));
            let inv_word = e.word.inverse();
            assert!(level
                .entries
                .iter()
                .any(|x| x.jet.distance(&state.evaluate_word(&inv_word)) < 1e-9));
        }
    }
}

#[test]
fn larger_p_contains_smaller_p() {
    let mut rng = sampling::rng(3);
    let gens = vec![
        ("a".to_string(), sampling::jet_with_bound(&mut rng, 2, 3, 0.3)),
        ("b".to_string(), sampling::jet_with_bound(&mut rng, 2, 3, 0.3)),
    ];
    let build = |p| {
        let mut s = CascadeState::new(
            gens.clone(),
            CascadeOptions {
                p,
                ..CascadeOptions::default()
            },
        )
        .unwrap();
        s.extend(2).unwrap();
        s
    };
    let (s0, s1) = (build(0), build(1));
    for j in 0..=2 {
        for e in &s0.level(j).unwrap().entries {
            let found = s1.levels()[..=j]
                .iter()
                .flat_map(|l| &l.entries)
                .any(|x| x.jet.distance(&e.jet) < 1e-9);
            assert!(found, "level {j} entry missing");
        }
    }
}

#[test]
fn report_lines_are_json() {
    let mut state = CascadeState::new(fixtures::heisenberg_triple(1), CascadeOptions::default()).unwrap();
    state.extend(1).unwrap();
    let records = state.report_records();
    assert_eq!(records.len(), 6 + 3);
    assert_eq!(records[0].word, "x");
    assert_eq!(records[1].word, "X");
    let line = serde_json::to_string(&records[0]).unwrap();
    assert!(line.contains("\"jet_ref\":\"L0/0\""));
}

#[test]
fn thresholds() {
    let (c1, c2) = theoretical_p_thresholds(1);
    assert_eq!(c1, BigUint::from(16u32));
    assert_eq!(c2, BigUint::from(2u32));
    let (c1, _) = theoretical_p_thresholds(2);
    assert_eq!(c1, BigUint::from(135u32 * 135));
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..3, any::<bool>()), 0..24)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
}

proptest! {
    #[test]
    fn free_reduce_laws(u in word_strategy(), v in word_strategy()) {
        let r = u.free_reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(
            u.concat(&v).free_reduce(),
            r.concat(&v.free_reduce()).free_reduce()
        );
        prop_assert!(u.concat(&u.inverse()).free_reduce().is_empty());
    }
}
