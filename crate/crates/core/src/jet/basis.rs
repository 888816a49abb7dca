use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial `x_1^{a_1} ... x_n^{a_n}`.
///
/// Ordered graded-lexicographically: lower total degree first, then
/// `x_1` before `x_2` and so on within a degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex { exponents }
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            exponents: vec![0; dim],
        }
    }

    /// The exponent vector of the coordinate function `x_var`.
    pub fn unit(dim: usize, var: usize) -> Self {
        let mut exponents = vec![0; dim];
        exponents[var] = 1;
        MultiIndex { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

const NONE: u32 = u32::MAX;

/// Monomials of degree `<= degree` in `dim` variables, in graded-lex order,
/// together with the index tables used by truncated arithmetic.
///
/// Index 0 is always the constant monomial.
#[derive(Debug)]
pub struct MonomialBasis {
    dim: usize,
    degree: usize,
    monomials: Vec<MultiIndex>,
    lookup: HashMap<Vec<u32>, usize>,
    degree_start: Vec<usize>,
    /// `mul[i * len + j]` is the index of `m_i * m_j`, or `NONE` when the
    /// product exceeds the truncation degree.
    mul: Vec<u32>,
    /// For every non-constant monomial: a variable `v` and the index of
    /// `m / x_v`, so powers can be built by one multiplication each.
    split: Vec<(usize, usize)>,
    /// `deriv[i * dim + v]` = (exponent of `x_v` in `m_i`, index of `m_i / x_v`).
    deriv: Vec<(u32, u32)>,
}

impl MonomialBasis {
    fn build(dim: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut degree_start = Vec::with_capacity(degree + 2);
        for deg in 0..=degree {
            degree_start.push(monomials.len());
            let mut block = Vec::new();
            enumerate_degree(dim, deg as u32, &mut Vec::with_capacity(dim), &mut block);
            block.sort();
            monomials.extend(block);
        }
        degree_start.push(monomials.len());

        let lookup: HashMap<Vec<u32>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents.clone(), i))
            .collect();
        let len = monomials.len();

        let mut mul = vec![NONE; len * len];
        for i in 0..len {
            for j in 0..len {
                let di = monomials[i].total_degree() as usize;
                let dj = monomials[j].total_degree() as usize;
                if di + dj > degree {
                    continue;
                }
                let e: Vec<u32> = monomials[i]
                    .exponents
                    .iter()
                    .zip(&monomials[j].exponents)
                    .map(|(a, b)| a + b)
                    .collect();
                mul[i * len + j] = lookup[&e] as u32;
            }
        }

        let mut split = vec![(0, 0); len];
        let mut deriv = vec![(0, NONE); len * dim];
        for (i, m) in monomials.iter().enumerate() {
            for v in 0..dim {
                let a = m.exponents[v];
                if a > 0 {
                    let mut e = m.exponents.clone();
                    e[v] -= 1;
                    deriv[i * dim + v] = (a, lookup[&e] as u32);
                }
            }
            if i > 0 {
                let v = m.exponents.iter().position(|&a| a > 0).unwrap();
                split[i] = (v, deriv[i * dim + v].1 as usize);
            }
        }

        MonomialBasis {
            dim,
            degree,
            monomials,
            lookup,
            degree_start,
            mul,
            split,
            deriv,
        }
    }

    /// Shared basis for `(dim, degree)`; built once per process.
    pub fn get(dim: usize, degree: usize) -> Arc<MonomialBasis> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((dim, degree))
            .or_insert_with(|| Arc::new(MonomialBasis::build(dim, degree)))
            .clone()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &MultiIndex {
        &self.monomials[idx]
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.lookup.get(&m.exponents).copied()
    }

    pub fn var_index(&self, var: usize) -> usize {
        1 + var
    }

    /// Index range of the homogeneous monomials of degree `deg`.
    pub fn degree_range(&self, deg: usize) -> std::ops::Range<usize> {
        self.degree_start[deg]..self.degree_start[deg + 1]
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.monomials[idx].total_degree() as usize
    }

    #[inline]
    pub(crate) fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.mul[i * self.len() + j];
        (k != NONE).then_some(k as usize)
    }

    #[inline]
    pub(crate) fn split(&self, idx: usize) -> (usize, usize) {
        self.split[idx]
    }

    #[inline]
    pub(crate) fn derivative(&self, idx: usize, var: usize) -> Option<(u32, usize)> {
        let (a, k) = self.deriv[idx * self.dim + var];
        (k != NONE).then_some((a, k as usize))
    }

    /// Dimension of the jet space `m / m^{d+1}`: polynomials of degree
    /// `<= d` without constant term.
    pub fn jet_space_dim(&self) -> usize {
        self.len() - 1
    }
}

fn enumerate_degree(dim: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == dim {
        prefix.push(deg);
        out.push(MultiIndex::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for a in 0..=deg {
        prefix.push(a);
        enumerate_degree(dim, deg - a, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn basis_size_matches_binomial() {
        for dim in 1..=4 {
            for degree in 1..=6 {
                let b = MonomialBasis::get(dim, degree);
                assert_eq!(b.len(), binom(dim + degree, degree));
            }
        }
    }

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::get(2, 2);
        let got: Vec<Vec<u32>> = b.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(b.var_index(1), 2);
    }

    #[test]
    fn product_table_truncates() {
        let b = MonomialBasis::get(2, 3);
        let x = b.var_index(0);
        let xy = b.index_of(&MultiIndex::new(vec![1, 1])).unwrap();
        let x2y = b.index_of(&MultiIndex::new(vec![2, 1])).unwrap();
        assert_eq!(b.product_index(x, xy), Some(x2y));
        assert_eq!(b.product_index(xy, xy), None);
    }
}
