use jetcascade::cascade::{free_words_alpha, Alphabet};
use jetcascade::fixtures::rotation2;
use jetcascade::jet::format::{parse_jet, JetDocument};
use jetcascade::jet::JetDiffeo;
use jetcascade::linalg::from_real_rows;
use jetcascade::orbit_sim::{minimal_set_search, stable_manifold_hunt, HuntOptions};
use jetcascade::C64;
use serde::Serialize;

/// Longest α-word depth the demo will print.
pub const MAX_DEMO_K: usize = 2;

fn text<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CommutatorOut {
    commutator: JetDocument,
    distance_to_identity: f64,
    sup_norm_bound_half: f64,
}

pub fn jet_commutator(f: &str, g: &str) -> Result<String, String> {
    let f = parse_jet(f).map_err(|e| format!("f: {e}"))?;
    let g = parse_jet(g).map_err(|e| format!("g: {e}"))?;
    let c = f.commutator(&g).map_err(|e| e.to_string())?;
    text(&CommutatorOut {
        commutator: JetDocument::from_diffeo(&c),
        distance_to_identity: c.distance_to_identity(),
        sup_norm_bound_half: c.sup_norm_bound(0.5).map_err(|e| e.to_string())?,
    })
}

#[derive(Serialize)]
struct AlphaOut {
    letter: String,
    length: usize,
    word: String,
}

pub fn alpha_words(k: usize) -> Result<String, String> {
    if k > MAX_DEMO_K {
        return Err(format!("k must be at most {MAX_DEMO_K} here (words have 16^k letters)"));
    }
    let alphabet = Alphabet::new(&["a", "b"]).map_err(|e| e.to_string())?;
    let words = free_words_alpha(k);
    let out: Vec<AlphaOut> = words
        .all()
        .iter()
        .map(|(f, w)| AlphaOut {
            letter: alphabet.name_of(*f),
            length: w.len(),
            word: alphabet.format(w),
        })
        .collect();
    text(&out)
}

#[derive(Serialize)]
struct HuntOut {
    rho: f64,
    contraction: f64,
    escaped: bool,
    distinct_returns: usize,
    min_pairwise_distance: f64,
    decreasing: bool,
    /// Real parts of the returns, `[x, y]`.
    points: Vec<[f64; 2]>,
    recurrent_cell: Option<[f64; 2]>,
}

pub fn stable_hunt(angle_degrees: f64, max_power: usize, seeds: usize) -> Result<String, String> {
    if max_power == 0 || max_power > 40 || seeds == 0 || seeds > 16 {
        return Err("max_power must be in 1..=40 and seeds in 1..=16".into());
    }
    let phi = JetDiffeo::from_linear(&from_real_rows(&[&[0.5, 0.0], &[0.0, 2.0]]), 3).map_err(|e| e.to_string())?;
    let psi = JetDiffeo::from_linear(&rotation2(angle_degrees.to_radians()), 3).map_err(|e| e.to_string())?;
    let options = HuntOptions {
        max_power,
        seeds,
        ..HuntOptions::default()
    };
    let seed = [C64::new(0.5, 0.0), C64::new(0.0, 0.0)];
    let report = stable_manifold_hunt(&phi, &psi, &seed, &options).map_err(|e| e.to_string())?;
    let minimal = minimal_set_search(&report.orbits(), 1e-3, 3).map_err(|e| e.to_string())?;
    text(&HuntOut {
        rho: report.rho,
        contraction: report.contraction,
        escaped: report.escaped,
        distinct_returns: report.distinct_returns,
        min_pairwise_distance: report.min_pairwise_distance,
        decreasing: report.decreasing,
        points: report.returns.iter().map(|r| [r.point[0].re, r.point[1].re]).collect(),
        recurrent_cell: minimal.recurrent_cell.map(|c| [c.center[0][0], c.center[1][0]]),
    })
}
