use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a cube of the net: `floor(re / ε), floor(im / ε)` per
/// coordinate.
pub type CellIndex = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub index: CellIndex,
    pub center: Vec<[f64; 2]>,
    /// Sample points in the cell.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimalSetReport {
    pub resolution: f64,
    pub min_hits: usize,
    pub occupied_cells: usize,
    /// `|T_k|` along `T_{k+1} = T_k ∩ τ(T_k)`, starting from all occupied
    /// cells.
    pub sizes: Vec<usize>,
    /// No cell has a nonempty `τ`: the resolution is too coarse for the
    /// sample (or the sample too short).
    pub tau_empty: bool,
    /// Lexicographically first cell `c` of the stable set with `c ∈ τ(c)`.
    pub recurrent_cell: Option<Cell>,
}

fn cell_of(z: &[C64], eps: f64) -> CellIndex {
    z.iter()
        .flat_map(|c| [(c.re / eps).floor() as i64, (c.im / eps).floor() as i64])
        .collect()
}

/// Discrete version of the accumulation map: `τ(c)` is the set of cells
/// holding at least `min_hits` points of some orbit that visits `c`.
/// Iterates `T ↦ T ∩ τ(T)` from all occupied cells until it stabilizes
/// and reports a cell with `c ∈ τ(c)`.
pub fn minimal_set_search(orbits: &[Vec<Vec<C64>>], resolution: f64, min_hits: usize) -> Result<MinimalSetReport> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::validation("resolution > 0", format!("resolution = {resolution}")));
    }
    if min_hits == 0 {
        return Err(Error::validation("min_hits >= 1", "min_hits = 0"));
    }
    let mut occupancy: BTreeMap<CellIndex, usize> = BTreeMap::new();
    let mut visits: BTreeMap<CellIndex, BTreeSet<usize>> = BTreeMap::new();
    let mut accumulation: Vec<BTreeSet<CellIndex>> = Vec::with_capacity(orbits.len());
    for (o, orbit) in orbits.iter().enumerate() {
        let mut counts: BTreeMap<CellIndex, usize> = BTreeMap::new();
        for z in orbit {
            let c = cell_of(z, resolution);
            *counts.entry(c.clone()).or_default() += 1;
            *occupancy.entry(c.clone()).or_default() += 1;
            visits.entry(c).or_default().insert(o);
        }
        accumulation.push(
            counts
                .into_iter()
                .filter(|(_, k)| *k >= min_hits)
                .map(|(c, _)| c)
                .collect(),
        );
    }
    let tau = |c: &CellIndex| -> BTreeSet<CellIndex> {
        visits
            .get(c)
            .into_iter()
            .flatten()
            .flat_map(|&o| accumulation[o].iter().cloned())
            .collect()
    };
    let tau_of_cells: BTreeMap<CellIndex, BTreeSet<CellIndex>> =
        occupancy.keys().map(|c| (c.clone(), tau(c))).collect();
    let tau_empty = tau_of_cells.values().all(|t| t.is_empty());

    let mut current: BTreeSet<CellIndex> = occupancy.keys().cloned().collect();
    let mut sizes = vec![current.len()];
    loop {
        let image: BTreeSet<CellIndex> = current
            .iter()
            .flat_map(|c| tau_of_cells[c].iter().cloned())
            .collect();
        let next: BTreeSet<CellIndex> = current.intersection(&image).cloned().collect();
        if next == current {
            break;
        }
        current = next;
        sizes.push(current.len());
    }
    let recurrent_cell = current
        .iter()
        .find(|c| tau_of_cells[*c].contains(*c))
        .map(|c| Cell {
            index: c.clone(),
            center: c
                .chunks(2)
                .map(|k| [(k[0] as f64 + 0.5) * resolution, (k[1] as f64 + 0.5) * resolution])
                .collect(),
            hits: occupancy[c],
        });
    Ok(MinimalSetReport {
        resolution,
        min_hits,
        occupied_cells: occupancy.len(),
        sizes,
        tau_empty,
        recurrent_cell,
    })
}
