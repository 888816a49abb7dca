use serde::Serialize;

use super::NormSchedule;
use crate::cascade::CascadeState;
use crate::jet::{euclidean_norm, JetDiffeo};
use crate::sampling;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryVerdict {
    pub level: usize,
    pub index: usize,
    pub word: String,
    /// `sup_norm_bound(f - Id, 1/2)`.
    pub bound: f64,
    /// Schedule value `δ / 2^{j+2}`.
    pub beta: f64,
    pub margin: f64,
    pub pass: bool,
    /// Largest `|f(z) - z|` over random points of `B_{1/2}`; only computed
    /// for failures, to separate slack in the bound from genuine violations.
    pub sampled_sup: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorViolation {
    pub word: String,
    pub bound: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub p: usize,
    pub delta: f64,
    /// All checks concern degree-`d` truncations.
    pub truncation_degree: usize,
    pub levels_checked: usize,
    pub precondition_ok: bool,
    pub generator_violations: Vec<GeneratorViolation>,
    pub entries: Vec<EntryVerdict>,
    pub all_pass: bool,
}

fn sampled_sup(jet: &JetDiffeo, r: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = sampling::rng(seed);
    (0..samples)
        .map(|_| {
            let z = sampling::point_on_sphere(&mut rng, jet.dim(), r);
            let fz = jet.eval(&z);
            let d: Vec<_> = fz.iter().zip(&z).map(|(a, b)| a - b).collect();
            euclidean_norm(&d)
        })
        .fold(0.0, f64::max)
}

/// Check every cascade entry at level `j ≤ schedule.max_level()` against
/// `sup_norm_bound(f - Id, 1/2) ≤ δ / 2^{j+2}`.
///
/// The generators (level 0, inverses included) must satisfy
/// `sup_norm_bound(g - Id, 1) ≤ δ/4`; otherwise the report lists the
/// offenders and checks nothing else.
pub fn verify_cascade_against_schedule(state: &CascadeState, schedule: &NormSchedule) -> VerificationReport {
    let delta = schedule.delta_f64();
    let required = delta / 4.0;
    let alphabet = state.alphabet();
    let generator_violations: Vec<GeneratorViolation> = state.levels()[0]
        .entries
        .iter()
        .filter_map(|e| {
            let bound = e.jet.sup_norm_bound(1.0).expect("positive radius");
            (bound > required).then(|| GeneratorViolation {
                word: alphabet.format(&e.word),
                bound,
                required,
            })
        })
        .collect();
    let levels_checked = state.depth().min(schedule.max_level());
    let mut report = VerificationReport {
        p: schedule.p,
        delta,
        truncation_degree: state.degree(),
        levels_checked,
        precondition_ok: generator_violations.is_empty(),
        generator_violations,
        entries: Vec::new(),
        all_pass: false,
    };
    if !report.precondition_ok {
        return report;
    }
    let items: Vec<(usize, usize)> = (0..=levels_checked)
        .flat_map(|j| (0..state.levels()[j].len()).map(move |i| (j, i)))
        .collect();
    report.entries = crate::parallel::map(&items, |&(j, i)| {
        let e = &state.levels()[j].entries[i];
        let bound = e.jet.sup_norm_bound(0.5).expect("positive radius");
        let beta = schedule.rows[j].bound_f64();
        let pass = bound <= beta;
        EntryVerdict {
            level: j,
            index: i,
            word: alphabet.format(&e.word),
            bound,
            beta,
            margin: beta - bound,
            pass,
            sampled_sup: (!pass).then(|| sampled_sup(&e.jet, 0.5, 512, (j * 1_000_003 + i) as u64)),
        }
    });
    report.all_pass = report.entries.iter().all(|v| v.pass);
    report
}
