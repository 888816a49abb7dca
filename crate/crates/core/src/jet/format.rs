//! Text serialization of jets.
//!
//! ```json
//! {"dim": 2, "degree": 3,
//!  "coords": [[[1, 0, 1.0, 0.0], [2, 0, 0.5, 0.0]],
//!             [[0, 1, 1.0, 0.0]]]}
//! ```
//!
//! `coords[i]` lists the nonzero terms of coordinate `i` in graded-lex order,
//! each as `[e_1, …, e_n, re, im]`. Vector fields use the same layout.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{JetDiffeo, JetVectorField, MultiIndex, TermList};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDocument {
    pub dim: usize,
    pub degree: usize,
    pub coords: Vec<Vec<Vec<f64>>>,
}

/// A jet with a generator name, as stored in generator-set files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedJetDocument {
    pub name: String,
    pub dim: usize,
    pub degree: usize,
    pub coords: Vec<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetSetDocument {
    pub jets: Vec<NamedJetDocument>,
}

impl NamedJetDocument {
    pub fn new(name: &str, jet: &JetDiffeo) -> Self {
        let doc = JetDocument::from_diffeo(jet);
        NamedJetDocument {
            name: name.to_string(),
            dim: doc.dim,
            degree: doc.degree,
            coords: doc.coords,
        }
    }

    pub fn to_diffeo(&self) -> Result<JetDiffeo> {
        JetDocument {
            dim: self.dim,
            degree: self.degree,
            coords: self.coords.clone(),
        }
        .to_diffeo()
    }
}

fn encode(terms: impl Iterator<Item = Vec<(MultiIndex, C64)>>) -> Vec<Vec<Vec<f64>>> {
    terms
        .map(|list| {
            list.into_iter()
                .map(|(m, c)| {
                    let mut row: Vec<f64> = m.exponents().iter().map(|&e| e as f64).collect();
                    row.push(c.re);
                    row.push(c.im);
                    row
                })
                .collect()
        })
        .collect()
}

impl JetDocument {
    pub fn from_diffeo(jet: &JetDiffeo) -> Self {
        let terms = (0..jet.dim()).map(|i| jet.terms(i).map(|(m, c)| (m.clone(), c)).collect());
        JetDocument {
            dim: jet.dim(),
            degree: jet.degree(),
            coords: encode(terms),
        }
    }

    pub fn from_field(x: &JetVectorField) -> Self {
        let terms = (0..x.dim()).map(|i| x.terms(i).map(|(m, c)| (m.clone(), c)).collect());
        JetDocument {
            dim: x.dim(),
            degree: x.degree(),
            coords: encode(terms),
        }
    }

    fn decode(&self) -> Result<Vec<TermList>> {
        let n = self.dim;
        if self.coords.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} coordinate lists, found {}",
                self.coords.len()
            )));
        }
        self.coords
            .iter()
            .enumerate()
            .map(|(i, list)| {
                list.iter()
                    .map(|row| {
                        if row.len() != n + 2 {
                            return Err(Error::Parse(format!(
                                "coordinate {i}: entry {row:?} must have {} numbers",
                                n + 2
                            )));
                        }
                        let exps = row[..n]
                            .iter()
                            .map(|&e| {
                                if e >= 0.0 && e.fract() == 0.0 && e <= u32::MAX as f64 {
                                    Ok(e as u32)
                                } else {
                                    Err(Error::Parse(format!(
                                        "coordinate {i}: exponent {e} is not a nonnegative integer"
                                    )))
                                }
                            })
                            .collect::<Result<Vec<u32>>>()?;
                        Ok((MultiIndex::new(exps), C64::new(row[n], row[n + 1])))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_diffeo(&self) -> Result<JetDiffeo> {
        JetDiffeo::from_terms(self.dim, self.degree, &self.decode()?)
    }

    pub fn to_field(&self) -> Result<JetVectorField> {
        JetVectorField::from_terms(self.dim, self.degree, &self.decode()?)
    }
}

pub fn parse_jet(text: &str) -> Result<JetDiffeo> {
    serde_json::from_str::<JetDocument>(text)?.to_diffeo()
}

pub fn jet_to_string(jet: &JetDiffeo) -> String {
    serde_json::to_string(&JetDocument::from_diffeo(jet)).expect("jet documents serialize")
}

pub fn parse_jet_set(text: &str) -> Result<Vec<(String, JetDiffeo)>> {
    let doc: JetSetDocument = serde_json::from_str(text)?;
    doc.jets
        .iter()
        .map(|j| Ok((j.name.clone(), j.to_diffeo()?)))
        .collect()
}
