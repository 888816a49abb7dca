use clap::Args;
use jetcascade::cascade::{free_words_alpha, verify_alpha_membership, Alphabet};
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::report::{check, Failure, Report, Violation};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FreeWordsParams {
    pub k: usize,
    /// Words longer than this are reported without their letters.
    pub max_print: usize,
}

impl Default for FreeWordsParams {
    fn default() -> Self {
        FreeWordsParams { k: 2, max_print: 4096 }
    }
}

#[derive(Args, Debug)]
pub struct FreeWordsArgs {
    /// Recursion depth; words have length 16^k.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_print: Option<usize>,
}

impl FreeWordsArgs {
    pub fn apply(self, p: &mut FreeWordsParams) {
        if let Some(v) = self.k {
            p.k = v;
        }
        if let Some(v) = self.max_print {
            p.max_print = v;
        }
    }
}

pub const MAX_K: usize = 5;

#[derive(Serialize)]
struct AlphaRecord {
    k: usize,
    letter: String,
    length: usize,
    expected_length: usize,
    first: String,
    last: String,
    reduced: bool,
    /// The derivation respects the p = 0 recursion and lands on level 2k.
    in_level_2k: bool,
    word: Option<String>,
}

impl Experiment for FreeWordsParams {
    const NAME: &'static str = "free-words";
    type Prepared = ();

    fn prepare(&mut self) -> Result<(), Failure> {
        let mut v = Vec::new();
        if self.k > MAX_K {
            v.push(Violation::new(format!("k <= {MAX_K}"), format!("got {}, words would have 16^{} letters", self.k, self.k)));
        }
        check(v)
    }

    fn plan(&self, _: &()) -> Vec<String> {
        vec![format!("α-words of depth {} over a, b and their inverses", self.k)]
    }

    fn execute(&self, _: (), _seed: u64, report: &mut Report) -> Result<(), Failure> {
        let alphabet = Alphabet::new(&["a", "b"])?;
        let words = free_words_alpha(self.k);
        for (f, w) in words.all() {
            let name = |l| alphabet.name_of(l);
            report.emit(
                "alpha",
                &AlphaRecord {
                    k: self.k,
                    letter: name(f),
                    length: w.len(),
                    expected_length: 16usize.pow(self.k as u32),
                    first: w.first().map(name).unwrap_or_default(),
                    last: w.last().map(name).unwrap_or_default(),
                    reduced: w.is_reduced(),
                    in_level_2k: verify_alpha_membership(f, self.k),
                    word: (w.len() <= self.max_print).then(|| alphabet.format(w)),
                },
            )?;
        }
        Ok(())
    }
}
