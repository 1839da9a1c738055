//! Batch tagging, parallel across sentences.

use rayon::prelude::*;

use gapos_core::corpus::RawSentence;
use gapos_core::fitness::FitnessParams;
use gapos_core::ga::{self, GaConfig, TaggingOutcome};
use gapos_core::tables::Lexicon;
use gapos_core::tagset::Tagset;

use crate::error::CliError;

/// Tags each sentence with its own GA run. Sentences are independent and
/// carry content-derived sub-seeds, so the result does not depend on the
/// worker count or execution order.
pub fn tag_sentences(
    sentences: &[RawSentence],
    lexicon: &Lexicon,
    tagset: &Tagset,
    params: &FitnessParams<'_>,
    config: &GaConfig,
) -> Result<Vec<TaggingOutcome>, CliError> {
    sentences
        .par_iter()
        .map(|sentence| {
            let mut sub = *config;
            sub.seed = ga::sentence_seed(config.seed, sentence);
            ga::run_ga(sentence, lexicon, tagset, params, &sub)
                .map(|run| TaggingOutcome {
                    tags: run.best.genes().to_vec(),
                    fitness: run.best.fitness(),
                    evaluations: run.evaluations,
                })
                .map_err(CliError::from)
        })
        .collect()
}

/// Mean individual-fitness evaluations per sentence.
pub fn mean_evaluations(outcomes: &[TaggingOutcome]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().map(|o| o.evaluations).sum::<u64>() as f64 / outcomes.len() as f64
}
