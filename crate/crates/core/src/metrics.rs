//! Tagging accuracy rate.

use alloc::vec::Vec;
use core::fmt;

use crate::corpus::TaggedCorpus;
use crate::tagset::TagId;

/// Token- and sentence-level accuracy counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accuracy {
    pub correct_tokens: u64,
    pub total_tokens: u64,
    pub correct_sentences: u64,
    pub total_sentences: u64,
}

impl Accuracy {
    /// Correctly tagged tokens over all tokens.
    pub fn token_rate(&self) -> f64 {
        self.correct_tokens as f64 / self.total_tokens as f64
    }

    /// Fully correct sentences over all sentences.
    pub fn sentence_rate(&self) -> f64 {
        self.correct_sentences as f64 / self.total_sentences as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Sentence counts or sentence lengths differ.
    ShapeMismatch {
        sentence: usize,
        reference: usize,
        hypothesis: usize,
    },
    /// No tokens to score.
    Empty,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::ShapeMismatch {
                sentence,
                reference,
                hypothesis,
            } => write!(
                f,
                "sentence {sentence}: reference has {reference} items, hypothesis {hypothesis}"
            ),
            MetricsError::Empty => write!(f, "no tokens to score"),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Compares a hypothesis tagging against the reference corpus,
/// sentence by sentence.
pub fn accuracy(
    reference: &TaggedCorpus,
    hypothesis: &[Vec<TagId>],
) -> Result<Accuracy, MetricsError> {
    if reference.len() != hypothesis.len() {
        return Err(MetricsError::ShapeMismatch {
            sentence: 0,
            reference: reference.len(),
            hypothesis: hypothesis.len(),
        });
    }
    if reference.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut acc = Accuracy {
        correct_tokens: 0,
        total_tokens: 0,
        correct_sentences: 0,
        total_sentences: 0,
    };
    for (index, (sentence, tags)) in reference.sentences().iter().zip(hypothesis).enumerate() {
        if sentence.len() != tags.len() {
            return Err(MetricsError::ShapeMismatch {
                sentence: index + 1,
                reference: sentence.len(),
                hypothesis: tags.len(),
            });
        }
        let mut all = true;
        for (tok, &tag) in sentence.tokens().iter().zip(tags) {
            acc.total_tokens += 1;
            if tok.tag == tag {
                acc.correct_tokens += 1;
            } else {
                all = false;
            }
        }
        acc.total_sentences += 1;
        if all {
            acc.correct_sentences += 1;
        }
    }
    Ok(acc)
}

/// Tagging accuracy rate: correctly tagged tokens over all reference
/// tokens.
pub fn tar(reference: &TaggedCorpus, hypothesis: &[Vec<TagId>]) -> Result<f64, MetricsError> {
    accuracy(reference, hypothesis).map(|a| a.token_rate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_tagged_corpus;
    use crate::tagset::load_tagset;

    #[test]
    fn identical_hypothesis_scores_one() {
        let ts = load_tagset("Noun\nProperNoun\nVerb\nPreposition").unwrap();
        let corpus = parse_tagged_corpus(
            "ذهب/Verb محمد/ProperNoun إلى/Preposition المدرسة/Noun",
            &ts,
        )
        .unwrap();
        let gold: Vec<Vec<TagId>> = corpus.sentences().iter().map(|s| s.tags().collect()).collect();
        assert_eq!(tar(&corpus, &gold).unwrap(), 1.0);
        let acc = accuracy(&corpus, &gold).unwrap();
        assert_eq!(acc.sentence_rate(), 1.0);
    }

    #[test]
    fn one_wrong_token_of_four() {
        let ts = load_tagset("Noun\nProperNoun\nVerb\nPreposition").unwrap();
        let corpus = parse_tagged_corpus(
            "ذهب/Verb محمد/ProperNoun إلى/Preposition المدرسة/Noun",
            &ts,
        )
        .unwrap();
        let mut hyp: Vec<Vec<TagId>> =
            corpus.sentences().iter().map(|s| s.tags().collect()).collect();
        hyp[0][3] = ts.id("Verb").unwrap();
        assert_eq!(tar(&corpus, &hyp).unwrap(), 0.75);
        let acc = accuracy(&corpus, &hyp).unwrap();
        assert_eq!(acc.sentence_rate(), 0.0);
    }

    #[test]
    fn empty_and_mismatched_shapes_rejected() {
        let ts = load_tagset("A").unwrap();
        let empty = parse_tagged_corpus("", &ts).unwrap();
        assert_eq!(tar(&empty, &[]), Err(MetricsError::Empty));
        let corpus = parse_tagged_corpus("x/A y/A", &ts).unwrap();
        assert!(matches!(
            tar(&corpus, &[]),
            Err(MetricsError::ShapeMismatch { .. })
        ));
        let short = alloc::vec![alloc::vec![ts.id("A").unwrap()]];
        assert!(matches!(
            tar(&corpus, &short),
            Err(MetricsError::ShapeMismatch { sentence: 1, .. })
        ));
    }
}
