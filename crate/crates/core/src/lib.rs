//! Corpus-driven part-of-speech tagging by genetic search.
//!
//! A sentence is tagged by evolving a population of candidate taggings
//! (one tag per word) under a fitness that scores each gene by the log
//! probability of its tag given the surrounding tags, estimated from a
//! count table built over a hand-tagged corpus. Unseen contexts back off
//! by alternately dropping the outermost right and left context tags until
//! a counted window is found, falling back to the tag's corpus frequency.
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: every
//! randomized component is driven by an explicit seed, and identical seeds
//! produce identical results on any platform.
//!
//! - [`tagset`] / [`corpus`]: tag inventories and `word/TAG` corpora.
//! - [`tables`]: training table (context counts with NULL padding) and
//!   lexicon (valid tags per word).
//! - [`fitness`]: context log-probability with reduction backoff.
//! - [`ga`]: encoding, initialization, selection, crossover, mutation and
//!   the generational loop.
//! - [`oracle`]: exhaustive global-optimum search and a most-frequent-tag
//!   baseline, for verification.
//! - [`metrics`]: tagging accuracy rate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod fitness;
pub mod ga;
pub mod metrics;
pub mod oracle;
pub mod tables;
pub mod tagset;

pub use corpus::{RawSentence, TaggedCorpus, TaggedSentence};
pub use fitness::FitnessParams;
pub use ga::{GaConfig, Individual};
pub use tables::{Lexicon, TrainingTable};
pub use tagset::{TagId, Tagset};
