//! Input documents and bundled example generator sets.

use std::path::Path;

use jetcascade::jet::format::{parse_jet_set, JetDocument, NamedJetDocument};
use jetcascade::jet::JetDiffeo;
use jetcascade::linalg::from_real_rows;
use jetcascade::orbit_sim::PseudogroupSpec;
use jetcascade::{fixtures, C64};
use serde::{Deserialize, Serialize};

use crate::report::{read_input, Failure};

pub const JET_EXAMPLES: [&str; 3] = ["heisenberg", "free-rotations", "monomial-flows"];

pub fn jet_example(name: &str, degree: usize) -> Result<Vec<(String, JetDiffeo)>, Failure> {
    match name {
        "heisenberg" => Ok(fixtures::heisenberg_triple(degree)),
        "free-rotations" => Ok(fixtures::free_rotation_pair(degree)),
        "monomial-flows" => Ok(vec![
            ("a".into(), fixtures::monomial_flow(2, degree)),
            ("b".into(), fixtures::monomial_flow(3, degree)),
        ]),
        other => Err(Failure::invalid(
            "example is known",
            format!("'{other}' is not one of {}", JET_EXAMPLES.join(", ")),
        )),
    }
}

pub fn load_jet_set(path: &Path) -> Result<Vec<(String, JetDiffeo)>, Failure> {
    let text = read_input(path, "generator file")?;
    Ok(parse_jet_set(&text)?)
}

/// Pseudogroup file: named jets, the domain radius and the restriction
/// factor of the inner ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudogroupDocument {
    pub radius: f64,
    pub restriction: f64,
    pub jets: Vec<NamedJetDocument>,
}

impl PseudogroupDocument {
    pub fn to_spec(&self) -> Result<PseudogroupSpec, Failure> {
        let maps = self
            .jets
            .iter()
            .map(|j| Ok((j.name.clone(), j.to_diffeo()?)))
            .collect::<Result<Vec<_>, jetcascade::Error>>()?;
        Ok(PseudogroupSpec::new(maps, self.radius, self.restriction)?)
    }
}

/// The two flows `exp(x^2 d/dx)`, `exp(x^3 d/dx)` at degree 8 on the disc of
/// radius 0.1, inner radius 0.085.
pub fn default_pseudogroup() -> PseudogroupDocument {
    PseudogroupDocument {
        radius: 0.1,
        restriction: 0.85,
        jets: vec![
            NamedJetDocument::new("a", &fixtures::monomial_flow(2, 8)),
            NamedJetDocument::new("b", &fixtures::monomial_flow(3, 8)),
        ],
    }
}

/// Stable-manifold hunt input: hyperbolic `phi`, mixing `psi`, and a seed
/// point on the stable subspace of `phi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuntDocument {
    pub phi: JetDocument,
    pub psi: JetDocument,
    pub seed: Vec<[f64; 2]>,
}

impl HuntDocument {
    pub fn maps(&self) -> Result<(JetDiffeo, JetDiffeo, Vec<C64>), Failure> {
        let phi = self.phi.to_diffeo()?;
        let psi = self.psi.to_diffeo()?;
        let seed = self.seed.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Ok((phi, psi, seed))
    }
}

/// `diag(1/2, 2)` with the rotation by 45 degrees, seed `(1/2, 0)`.
pub fn default_hunt() -> HuntDocument {
    let phi = from_real_rows(&[&[0.5, 0.0], &[0.0, 2.0]]);
    let psi = fixtures::rotation2(std::f64::consts::FRAC_PI_4);
    HuntDocument {
        phi: JetDocument::from_diffeo(&JetDiffeo::from_linear(&phi, 3).expect("invertible")),
        psi: JetDocument::from_diffeo(&JetDiffeo::from_linear(&psi, 3).expect("invertible")),
        seed: vec![[0.5, 0.0], [0.0, 0.0]],
    }
}
