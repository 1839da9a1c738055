//! Ground-truth taggers for verification.
//!
//! [`exhaustive_tag`] enumerates the full valid-tag assignment space of a
//! sentence and returns a global fitness maximum; it is the oracle the GA
//! is checked against on small instances. [`baseline_tag`] is the
//! context-free most-frequent-tag baseline.

use alloc::vec::Vec;
use core::fmt;

use crate::corpus::RawSentence;
use crate::fitness::{self, FitnessError, FitnessParams};
use crate::ga::{Individual, TagChoices};
use crate::tables::Lexicon;
use crate::tagset::{TagId, Tagset};

/// Default bound on the assignment-space size.
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The valid-tag assignment space exceeds the cap.
    SearchSpaceExceeded { size: u128, cap: u64 },
    Fitness(FitnessError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SearchSpaceExceeded { size, cap } => {
                write!(f, "search space of {size} assignments exceeds cap {cap}")
            }
            OracleError::Fitness(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OracleError {}

impl From<FitnessError> for OracleError {
    fn from(e: FitnessError) -> Self {
        OracleError::Fitness(e)
    }
}

/// Enumerates every assignment in valid-tag space and returns one with
/// maximal fitness; ties go to the lexicographically smallest gene
/// sequence. Deterministic, no randomness involved.
pub fn exhaustive_tag(
    sentence: &RawSentence,
    lexicon: &Lexicon,
    tagset: &Tagset,
    params: &FitnessParams<'_>,
    cap: u64,
) -> Result<Individual, OracleError> {
    let choices = TagChoices::for_sentence(sentence, lexicon, tagset);
    let size = choices.space_size();
    if size > u128::from(cap) {
        return Err(OracleError::SearchSpaceExceeded { size, cap });
    }
    let n = choices.len();
    // ascending tag order makes the first optimum the lexicographic one
    let candidates: Vec<Vec<TagId>> = (0..n)
        .map(|i| {
            let mut c = choices.candidates(i).to_vec();
            c.sort_unstable();
            c
        })
        .collect();
    let mut cursor = alloc::vec![0usize; n];
    let mut genes: Vec<TagId> = candidates.iter().map(|c| c[0]).collect();
    let mut best_genes = genes.clone();
    let mut best_fitness = f64::NEG_INFINITY;
    loop {
        let fitness = fitness::genes_fitness(params, &genes);
        if fitness > best_fitness || (fitness == best_fitness && genes < best_genes) {
            best_fitness = fitness;
            best_genes.clone_from(&genes);
        }
        // odometer: advance the rightmost position first, so enumeration
        // is in lexicographic order and the first optimum sticks
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(Individual::from_parts(best_genes, best_fitness));
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < candidates[pos].len() {
                genes[pos] = candidates[pos][cursor[pos]];
                break;
            }
            cursor[pos] = 0;
            genes[pos] = candidates[pos][0];
        }
    }
}

/// Most-frequent-tag baseline: each known word gets its lexicon argmax,
/// unknown words the corpus-wide most frequent tag (ties: lowest index).
pub fn baseline_tag(sentence: &RawSentence, lexicon: &Lexicon, tagset: &Tagset) -> Vec<TagId> {
    TagChoices::for_sentence(sentence, lexicon, tagset)
        .baseline()
        .to_vec()
}
