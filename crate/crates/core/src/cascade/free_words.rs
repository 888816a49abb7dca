use super::word::{Letter, Word};

/// Generator ids of the two-letter alphabet used by [`free_words_alpha`].
pub const A: usize = 0;
pub const B: usize = 1;

/// The four words `α_{f,k}` for `f ∈ {a, b, a⁻¹, b⁻¹}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaWords {
    pub k: usize,
    pub a: Word,
    pub b: Word,
    pub a_inv: Word,
    pub b_inv: Word,
}

impl AlphaWords {
    pub fn get(&self, f: Letter) -> &Word {
        match (f.generator, f.inverse) {
            (A, false) => &self.a,
            (A, true) => &self.a_inv,
            (B, false) => &self.b,
            (B, true) => &self.b_inv,
            _ => panic!("alpha words are defined over the letters a and b"),
        }
    }

    pub fn all(&self) -> [(Letter, &Word); 4] {
        [
            (Letter::new(A, false), &self.a),
            (Letter::new(B, false), &self.b),
            (Letter::new(A, true), &self.a_inv),
            (Letter::new(B, true), &self.b_inv),
        ]
    }
}

/// Partner letter in the recursion: `α_{f,k+1} = [[α_f, α_g], [α_{f⁻¹}, α_{g⁻¹}]]`.
pub(crate) fn partner(f: Letter) -> Letter {
    match (f.generator, f.inverse) {
        (A, false) => Letter::new(B, true),
        (A, true) => Letter::new(B, false),
        (B, false) => Letter::new(A, true),
        _ => Letter::new(A, false),
    }
}

/// Words `α_{f,k}` of reduced length `4^{2k}` starting and ending with `f`.
///
/// `α_{f,0} = f` and
/// `α_{a,k+1} = [[α_{a,k}, α_{b⁻¹,k}], [α_{a⁻¹,k}, α_{b,k}]]`, with the
/// analogous rules for `a⁻¹`, `b`, `b⁻¹`. Every returned word is freely
/// reduced.
pub fn free_words_alpha(k: usize) -> AlphaWords {
    let mut cur = AlphaWords {
        k: 0,
        a: Word::letter(A),
        b: Word::letter(B),
        a_inv: Word::inverse_letter(A),
        b_inv: Word::inverse_letter(B),
    };
    for step in 0..k {
        let next = |f: Letter| {
            let g = partner(f);
            let left = Word::commutator(cur.get(f), cur.get(g));
            let right = Word::commutator(cur.get(f.inv()), cur.get(g.inv()));
            Word::commutator(&left, &right)
        };
        cur = AlphaWords {
            k: step + 1,
            a: next(Letter::new(A, false)),
            b: next(Letter::new(B, false)),
            a_inv: next(Letter::new(A, true)),
            b_inv: next(Letter::new(B, true)),
        };
    }
    cur
}
