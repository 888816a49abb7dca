use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word in the generators and their inverses, read as a product: the word
/// `a b` denotes `a ∘ b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    reduced: bool,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
            reduced: true,
        }
    }

    pub fn letter(generator: usize) -> Self {
        Word::from_letters(vec![Letter::new(generator, false)])
    }

    pub fn inverse_letter(generator: usize) -> Self {
        Word::from_letters(vec![Letter::new(generator, true)])
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        let reduced = letters.windows(2).all(|w| !w[0].cancels(w[1]));
        Word { letters, reduced }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            reduced: self.reduced,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_letters(letters)
    }

    pub fn free_reduce(&self) -> Word {
        if self.reduced {
            return self.clone();
        }
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word {
            letters: out,
            reduced: true,
        }
    }

    /// Reduced form of `u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        let mut letters = Vec::with_capacity(2 * (u.len() + v.len()));
        letters.extend_from_slice(&u.letters);
        letters.extend_from_slice(&v.letters);
        letters.extend(u.letters.iter().rev().map(|l| l.inv()));
        letters.extend(v.letters.iter().rev().map(|l| l.inv()));
        Word::from_letters(letters).free_reduce()
    }

    /// Evaluate in a group given by its product; `inverses[i]` is the inverse
    /// of `generators[i]`.
    pub fn evaluate<T: Clone>(
        &self,
        generators: &[T],
        inverses: &[T],
        identity: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        self.letters.iter().fold(identity, |acc, l| {
            let g = if l.inverse {
                &inverses[l.generator]
            } else {
                &generators[l.generator]
            };
            mul(&acc, g)
        })
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// Generator names. Names start with a lowercase ASCII letter; the inverse
/// of `name` is written with its first letter capitalized (`a` / `A`,
/// `phi` / `Phi`). The empty word is written `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let mut chars = name.chars();
            let ok_first = chars.next().is_some_and(|c| c.is_ascii_lowercase());
            let ok_rest = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok_first || !ok_rest {
                return Err(Error::validation(
                    "generator names",
                    format!("'{name}' must start with a lowercase letter and contain only [A-Za-z0-9_]"),
                ));
            }
            if out.iter().any(|n| n == name) {
                return Err(Error::validation(
                    "generator names",
                    format!("duplicate generator name '{name}'"),
                ));
            }
            out.push(name.to_string());
        }
        Ok(Alphabet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, letter: Letter) -> String {
        let name = &self.names[letter.generator];
        if letter.inverse {
            let mut chars = name.chars();
            let first = chars.next().expect("nonempty name").to_ascii_uppercase();
            std::iter::once(first).chain(chars).collect()
        } else {
            name.clone()
        }
    }

    pub fn lookup(&self, token: &str) -> Option<Letter> {
        let first = token.chars().next()?;
        if first.is_ascii_uppercase() {
            let lowered: String = std::iter::once(first.to_ascii_lowercase())
                .chain(token.chars().skip(1))
                .collect();
            self.names
                .iter()
                .position(|n| *n == lowered)
                .map(|g| Letter::new(g, true))
        } else {
            self.names
                .iter()
                .position(|n| n == token)
                .map(|g| Letter::new(g, false))
        }
    }

    /// Parse a space-separated word such as `"a B a b"`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::empty());
        }
        let letters = trimmed
            .split_whitespace()
            .map(|tok| {
                self.lookup(tok)
                    .ok_or_else(|| Error::structure(format!("unknown letter '{tok}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_letters(letters))
    }

    pub fn format(&self, w: &Word) -> String {
        w.display(self).to_string()
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (k, &l) in self.word.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.alphabet.name_of(l))?;
        }
        Ok(())
    }
}
