use super::free_words::{partner, A, B};
use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// A commutator derivation: a tree whose leaves are generators (level 0)
/// and whose internal nodes are commutators `[left, right]` sitting one
/// level above `left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Generator(Letter),
    Commutator(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    pub fn commutator(left: Derivation, right: Derivation) -> Derivation {
        Derivation::Commutator(Box::new(left), Box::new(right))
    }

    /// Derivation of `α_{f,k}` at level `2k` of the `p = 0` cascade.
    pub fn alpha(f: Letter, k: usize) -> Derivation {
        assert!(f.generator == A || f.generator == B);
        if k == 0 {
            return Derivation::Generator(f);
        }
        let g = partner(f);
        let left = Derivation::commutator(Derivation::alpha(f, k - 1), Derivation::alpha(g, k - 1));
        let right = Derivation::commutator(
            Derivation::alpha(f.inv(), k - 1),
            Derivation::alpha(g.inv(), k - 1),
        );
        Derivation::commutator(left, right)
    }

    /// Check the level discipline of the `S_p` recursion and return the
    /// level and reduced word of the root. For an internal node at level
    /// `j + 1`, one child sits at level `j` and the other at a level in
    /// `j - p ..= j`.
    pub fn verify(&self, p: usize) -> Result<(usize, Word)> {
        match self {
            Derivation::Generator(l) => Ok((0, Word::from_letters(vec![*l]))),
            Derivation::Commutator(left, right) => {
                let (jl, wl) = left.verify(p)?;
                let (jr, wr) = right.verify(p)?;
                let j = jl.max(jr);
                if j - jl.min(jr) > p {
                    return Err(Error::validation(
                        "cascade recursion",
                        format!("commutator of levels {jl} and {jr} is not allowed for p = {p}"),
                    ));
                }
                Ok((j + 1, Word::commutator(&wl, &wr)))
            }
        }
    }

    pub fn evaluate<T: Clone>(&self, leaf: &impl Fn(Letter) -> T, comm: &impl Fn(&T, &T) -> T) -> T {
        match self {
            Derivation::Generator(l) => leaf(*l),
            Derivation::Commutator(left, right) => {
                comm(&left.evaluate(leaf, comm), &right.evaluate(leaf, comm))
            }
        }
    }
}

/// Certify `α_{f,k} ∈ S_0(2k)` by checking its derivation: returns `true`
/// when the derivation respects the `p = 0` recursion, ends at level `2k`,
/// and reproduces the word `α_{f,k}`.
pub fn verify_alpha_membership(f: Letter, k: usize) -> bool {
    let words = super::free_words::free_words_alpha(k);
    match Derivation::alpha(f, k).verify(0) {
        Ok((level, w)) => level == 2 * k && &w == words.get(f),
        Err(_) => false,
    }
}
