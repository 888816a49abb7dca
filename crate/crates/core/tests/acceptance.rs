//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p jetcascade --test acceptance`.

use std::time::{Duration, Instant};

use jetcascade::cascade::{
    free_words_alpha, pseudo_solvable_probe, verify_alpha_membership, CascadeOptions, CascadeState, ProbeOutcome,
    PROBE_TOL,
};
use jetcascade::fixtures::{
    free_rotation_matrices, free_rotation_pair, heisenberg_triple, monomial_flow, rotation2, shear_pair,
};
use jetcascade::jet::{JetDiffeo, JetVectorField, MultiIndex};
use jetcascade::linalg::{self, c, from_real_rows, CMatrix};
use jetcascade::linear_analysis::{
    burnside_irreducibility, freeness_certificate, kolchin_triangularize, BurnsideOutcome, MatrixGroupSpec,
};
use jetcascade::orbit_sim::{
    cascade_words, minimal_set_search, recurrence_scan, stable_manifold_hunt, HuntOptions, PseudogroupSpec,
    ScanOptions,
};
use jetcascade::sampling;
use jetcascade::zassenhaus::{build_schedule, chain_schedule, matrix_zassenhaus_fit, verify_cascade_against_schedule};
use jetcascade::BigRational;
use num_bigint::BigInt;
use rand::Rng;

// tolerances and budgets of the criteria
const GROUP_LAW_TOL: f64 = 1e-9;
const GROUP_LAW_BUDGET: Duration = Duration::from_secs(10);
const EXP_LOG_TOL: f64 = 1e-9;
const FLOW_COEFF_TOL: f64 = 1e-12;
const SCHEDULE_BUDGET: Duration = Duration::from_secs(60);
const ZASSENHAUS_SPREAD: f64 = 0.10;
/// Largest observed `‖[A,B] - I‖ / (‖A - I‖ ‖B - I‖)` for dim 2,
/// eps = 0.05, 10^4 samples, seed 0.
const ZASSENHAUS_REFERENCE: f64 = 1.857509;
const KOLCHIN_TOL: f64 = 1e-8;
const WITNESS_MIN_DISTANCE: f64 = 1e-6;
const SCAN_FRACTION: f64 = 0.9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn group_laws() -> Outcome {
    let start = Instant::now();
    let mut rng = sampling::rng(1);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let n = 1 + i % 3;
        let d = 2 + i % 5;
        let f = sampling::jet(&mut rng, n, d, 0.2);
        let g = sampling::jet(&mut rng, n, d, 0.2);
        let h = sampling::jet(&mut rng, n, d, 0.2);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        let fi = f.invert().unwrap();
        worst = worst
            .max(left.distance(&right))
            .max(f.compose(&fi).unwrap().distance_to_identity())
            .max(fi.compose(&f).unwrap().distance_to_identity());
    }
    let elapsed = start.elapsed();
    ensure(worst < GROUP_LAW_TOL, format!("max defect {worst:e}"))?;
    ensure(elapsed < GROUP_LAW_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("500 jets, max defect {worst:.1e}, {:.2}s", elapsed.as_secs_f64()))
}

fn exp_log() -> Outcome {
    let mut rng = sampling::rng(2);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = 1 + i % 3;
        let d = 2 + i % 5;
        let x = sampling::nilpotent_field(&mut rng, n, d, 0.5);
        let back = x.exp().unwrap().log().unwrap();
        worst = worst.max(back.distance(&x));
    }
    ensure(worst < EXP_LOG_TOL, format!("roundtrip defect {worst:e}"))?;
    // exp(x^2 d/dx) = x / (1 - x) = x + x^2 + x^3 + ...
    let field = JetVectorField::from_terms(1, 8, &[vec![(MultiIndex::new(vec![2]), c(1.0, 0.0))]]).unwrap();
    let flow = field.exp().unwrap();
    let mut coeff_err: f64 = 0.0;
    for k in 1..=8u32 {
        coeff_err = coeff_err.max((flow.coeff(0, &MultiIndex::new(vec![k])) - c(1.0, 0.0)).norm());
    }
    ensure(coeff_err < FLOW_COEFF_TOL, format!("x/(1-x) coefficients off by {coeff_err:e}"))?;
    Ok(format!("200 fields, defect {worst:.1e}; x/(1-x) to degree 8 within {coeff_err:.1e}"))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn zassenhaus_schedule() -> Outcome {
    let start = Instant::now();
    let delta = rat(1, 160);
    let (p, levels) = (1usize, 6usize);
    // exact table from the closed forms, written out independently
    let schedule = build_schedule(p, &delta, levels).map_err(|e| e.to_string())?;
    for row in &schedule.rows {
        let j = row.level as i64;
        let radius = if row.level <= p + 1 {
            rat(1, 1) - rat(2 * j, 160)
        } else {
            let tail: BigRational = (0..=(row.level - p - 2)).map(|i| rat(1, 1 << i)).sum();
            rat(1, 1) - &delta * (rat(2 * (p as i64 + 1), 1) + tail)
        };
        ensure(row.radius == radius, format!("radius at level {j}: {} vs {radius}", row.radius))?;
        ensure(row.bound == rat(1, 160 << (j + 2)), format!("bound at level {j}"))?;
    }
    let chained = chain_schedule(p, &delta, levels).map_err(|e| e.to_string())?;
    ensure(chained == schedule, "chained estimates differ from the closed form")?;

    let mut rng = sampling::rng(3);
    let gens: Vec<(String, JetDiffeo)> = ["a", "b"]
        .iter()
        .map(|n| (n.to_string(), sampling::jet_with_bound(&mut rng, 2, 6, 0.9 / 160.0 / 4.0)))
        .collect();
    let mut state = CascadeState::new(gens, CascadeOptions { p, ..CascadeOptions::default() }).unwrap();
    state.extend(levels).map_err(|e| e.to_string())?;
    let report = verify_cascade_against_schedule(&state, &schedule);
    let elapsed = start.elapsed();
    ensure(report.precondition_ok, "generators exceed δ/4")?;
    ensure(report.all_pass, "an entry exceeds δ/2^(j+2)")?;
    ensure(report.levels_checked == levels, "cascade too shallow")?;
    ensure(elapsed < SCHEDULE_BUDGET, format!("took {elapsed:?}"))?;
    let min_margin = report.entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} entries through level {levels} pass, min margin {min_margin:.2e}, {:.2}s",
        report.entries.len(),
        elapsed.as_secs_f64()
    ))
}

/// Independent sampler: `I + E` with Gaussian `E` scaled to spectral norm
/// uniform-in-ball up to `eps`.
fn oracle_zassenhaus_max(eps: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = sampling::rng(seed ^ 0x5eed);
    let draw = |rng: &mut sampling::ExperimentRng| {
        let e = CMatrix::from_fn(2, 2, |_, _| c(sampling::standard_normal(rng), sampling::standard_normal(rng)));
        let s = e.clone().svd(false, false).singular_values[0];
        let r = eps * rng.gen::<f64>().powf(0.125);
        (CMatrix::identity(2, 2) + e * c(r / s, 0.0), r)
    };
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let (a, ra) = draw(&mut rng);
        let (b, rb) = draw(&mut rng);
        let comm = &a * &b * a.clone().try_inverse().unwrap() * b.clone().try_inverse().unwrap()
            - CMatrix::identity(2, 2);
        best = best.max(comm.svd(false, false).singular_values[0] / (ra * rb));
    }
    best
}

fn matrix_zassenhaus() -> Outcome {
    let fits: Vec<f64> = (0..5)
        .map(|seed| matrix_zassenhaus_fit(2, 0.05, 10_000, seed).map(|f| f.constant))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(fits.iter().all(|c| c.is_finite()), "non-finite constant")?;
    let (lo, hi) = fits.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    ensure((hi - lo) / hi <= ZASSENHAUS_SPREAD, format!("seeds spread {lo:.4}..{hi:.4}"))?;
    ensure((fits[0] - ZASSENHAUS_REFERENCE).abs() < 1e-6, format!("seed 0 gives {}", fits[0]))?;
    let oracle = oracle_zassenhaus_max(0.05, 10_000, 0);
    ensure(
        (oracle - ZASSENHAUS_REFERENCE).abs() <= ZASSENHAUS_SPREAD * ZASSENHAUS_REFERENCE,
        format!("independent sampler finds {oracle:.4}"),
    )?;
    Ok(format!("C = {ZASSENHAUS_REFERENCE} (seeds {lo:.4}..{hi:.4}, independent sampler {oracle:.4})"))
}

fn free_words() -> Outcome {
    for k in 0..=3 {
        let words = free_words_alpha(k);
        for (f, w) in words.all() {
            ensure(w.len() == 16usize.pow(k as u32), format!("|α_{f:?},{k}| = {}", w.len()))?;
            ensure(w.free_reduce() == *w, "not reduced")?;
            ensure(w.first() == Some(f) && w.last() == Some(f), "first/last letter")?;
            ensure(verify_alpha_membership(f, k), format!("α_{f:?},{k} not derived at level {}", 2 * k))?;
        }
    }
    // α_{f,1} is an entry of level 2 of the p = 0 cascade
    let options = CascadeOptions {
        p: 0,
        ..CascadeOptions::default()
    };
    let mut state = CascadeState::new(free_rotation_pair(2), options).unwrap();
    state.extend(2).map_err(|e| e.to_string())?;
    let words = free_words_alpha(1);
    for (f, w) in words.all() {
        let jet = state.evaluate_word(w);
        let found = state.levels()[2].entries.iter().any(|e| e.jet.distance(&jet) < 1e-10);
        ensure(found, format!("α_{f:?},1 missing from level 2"))?;
    }
    Ok(format!(
        "k = 0..3 lengths 16^k, level 2 holds α_1 ({} entries)",
        state.levels()[2].len()
    ))
}

fn kolchin() -> Outcome {
    let mut rng = sampling::rng(6);
    let mut worst: f64 = 0.0;
    let mut ok = 0;
    for i in 0..100 {
        let n = 2 + i % 3;
        let q = sampling::well_conditioned(&mut rng, n);
        let qi = linalg::invert(&q).unwrap();
        let mats: Vec<CMatrix> = (0..2)
            .map(|_| &q * sampling::unit_upper_triangular(&mut rng, n) * &qi)
            .collect();
        let spec = MatrixGroupSpec::from_matrices(mats).unwrap();
        if let Ok(t) = kolchin_triangularize(&spec, KOLCHIN_TOL) {
            worst = worst.max(t.residual);
            if t.residual < KOLCHIN_TOL {
                ok += 1;
            }
        }
    }
    ensure(ok == 100, format!("{ok}/100 triangularized"))?;
    Ok(format!("100/100, max residual {worst:.1e}"))
}

fn burnside() -> Outcome {
    let (a, b) = shear_pair();
    let spec = MatrixGroupSpec::from_matrices(vec![a, b]).unwrap();
    match burnside_irreducibility(&spec, 3) {
        BurnsideOutcome::Irreducible { algebra_dim: 4, word_length } if word_length <= 3 => {}
        other => return Err(format!("shears: {other:?}")),
    }
    let mut rng = sampling::rng(7);
    let diag = |rng: &mut sampling::ExperimentRng| {
        let (x, y) = (sampling::complex(rng), sampling::complex(rng));
        CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0) + x * 0.5,
            (1, 1) => c(1.0, 0.0) + y * 0.5,
            _ => c(0.0, 0.0),
        })
    };
    for _ in 0..10 {
        let spec = MatrixGroupSpec::from_matrices(vec![diag(&mut rng), diag(&mut rng)]).unwrap();
        match burnside_irreducibility(&spec, 3) {
            BurnsideOutcome::Reducible { .. } => {}
            other => return Err(format!("diagonal pair: {other:?}")),
        }
    }
    Ok("shears irreducible (dim 4), 10 diagonal pairs reducible".into())
}

fn probe() -> Outcome {
    let mut heis = CascadeState::new(heisenberg_triple(4), CascadeOptions::default()).unwrap();
    heis.extend(3).map_err(|e| e.to_string())?;
    let level = match pseudo_solvable_probe(&heis, 3, PROBE_TOL).map_err(|e| e.to_string())? {
        ProbeOutcome::TerminatesAt { level } if level <= 3 => level,
        other => return Err(format!("heisenberg: {other:?}")),
    };
    let (a, b) = free_rotation_matrices();
    let cert = freeness_certificate(&a, &b, 8, 1e-10).map_err(|e| e.to_string())?;
    ensure(cert.passed, "rotation pair not certified")?;
    let options = CascadeOptions {
        beam_width: Some(16),
        ..CascadeOptions::default()
    };
    let mut free = CascadeState::new(free_rotation_pair(3), options).unwrap();
    free.extend(6).map_err(|e| e.to_string())?;
    let min = match pseudo_solvable_probe(&free, 6, WITNESS_MIN_DISTANCE).map_err(|e| e.to_string())? {
        ProbeOutcome::NonTrivialThrough { witnesses, .. } => witnesses
            .iter()
            .map(|w| w.distance_to_identity)
            .fold(f64::INFINITY, f64::min),
        other => return Err(format!("free pair: {other:?}")),
    };
    ensure(min > WITNESS_MIN_DISTANCE, format!("witness at distance {min:e}"))?;
    Ok(format!(
        "heisenberg terminates at level {level}; certified free pair alive through level 6, \
         min witness distance {min:.3}"
    ))
}

fn scan() -> Outcome {
    // restriction 0.85: at r = 0.1 the flows do not map the default inner
    // ball into B_r
    let maps = vec![
        ("a".to_string(), monomial_flow(2, 8)),
        ("b".to_string(), monomial_flow(3, 8)),
    ];
    let spec = PseudogroupSpec::new(maps.clone(), 0.1, 0.85).map_err(|e| e.to_string())?;
    let mut state = CascadeState::new(maps, CascadeOptions::default()).unwrap();
    state.extend(6).map_err(|e| e.to_string())?;
    let words = cascade_words(&state, 6);
    let options = ScanOptions::for_radius(0.1);
    let first = recurrence_scan(&spec, &words, &options).map_err(|e| e.to_string())?;
    let again = recurrence_scan(&spec, &words, &options).map_err(|e| e.to_string())?;
    ensure(first == again, "scan is not deterministic")?;
    ensure(first.points.len() == 41, "grid size")?;
    let frac = first.witnessed_fraction_off_origin();
    ensure(frac >= SCAN_FRACTION, format!("witnessed fraction {frac:.3}"))?;
    Ok(format!(
        "{:.1}% of 40 off-origin points witnessed with displacement < {:e}",
        100.0 * frac,
        options.eta
    ))
}

fn hunt() -> Outcome {
    let phi = JetDiffeo::from_linear(&from_real_rows(&[&[0.5, 0.0], &[0.0, 2.0]]), 3).unwrap();
    let psi = JetDiffeo::from_linear(&rotation2(std::f64::consts::FRAC_PI_4), 3).unwrap();
    let seed = [c(0.5, 0.0), c(0.0, 0.0)];
    let report = stable_manifold_hunt(&phi, &psi, &seed, &HuntOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.distinct_returns >= 20, format!("{} distinct returns", report.distinct_returns))?;
    ensure(
        report.min_pairwise_distance > 1e-10,
        format!("min distance {:e}", report.min_pairwise_distance),
    )?;
    ensure(report.decreasing, "distances to the annulus do not decrease")?;
    let minimal = minimal_set_search(&report.orbits(), 1e-3, 3).map_err(|e| e.to_string())?;
    let cell = minimal.recurrent_cell.ok_or("no cell with q ∈ τ(q)")?;
    Ok(format!(
        "{} distinct returns, min distance {:.1e}, recurrent cell {:?}",
        report.distinct_returns, report.min_pairwise_distance, cell.index
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("jet group laws", group_laws),
        ("exp/log roundtrip", exp_log),
        ("norm schedule", zassenhaus_schedule),
        ("matrix commutator constant", matrix_zassenhaus),
        ("free words", free_words),
        ("simultaneous triangularization", kolchin),
        ("irreducibility", burnside),
        ("collapse probe", probe),
        ("recurrence scan", scan),
        ("stable-manifold hunt", hunt),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
