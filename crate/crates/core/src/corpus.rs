//! Tagged corpora in `word/TAG` format.
//!
//! One sentence per line, tokens separated by exactly one space, UTF-8,
//! LF line endings. Words are compared as exact strings; no normalization
//! or segmentation is applied.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::tagset::{TagId, Tagset};

/// One `word/TAG` token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub word: String,
    pub tag: TagId,
}

/// A non-empty sequence of tagged tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    tokens: Vec<Token>,
}

/// A tagset plus the sentences tagged against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedCorpus {
    tagset: Tagset,
    sentences: Vec<TaggedSentence>,
}

/// An untagged, pre-tokenized sentence (the tagging input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSentence {
    words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusError {
    /// Format error at 1-based line/column.
    Parse {
        line: usize,
        column: usize,
        kind: ParseErrorKind,
    },
    EmptySentence,
    /// Word is empty or contains whitespace.
    InvalidWord(String),
    InvalidTag,
    FractionOutOfRange(f64),
    CorpusTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Token has no `/` separator or an empty word/tag part.
    MalformedToken(String),
    UnknownTag(String),
    /// `NULL` is a boundary marker, never a word tag.
    NullTag,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Parse { line, column, kind } => match kind {
                ParseErrorKind::MalformedToken(tok) => {
                    write!(f, "line {line}, column {column}: malformed token {tok:?}")
                }
                ParseErrorKind::UnknownTag(tag) => {
                    write!(f, "line {line}, column {column}: unknown tag {tag:?}")
                }
                ParseErrorKind::NullTag => {
                    write!(f, "line {line}, column {column}: NULL is not assignable")
                }
            },
            CorpusError::EmptySentence => write!(f, "sentence has no tokens"),
            CorpusError::InvalidWord(w) => write!(f, "invalid word {w:?}"),
            CorpusError::InvalidTag => write!(f, "tag index not valid for tagset"),
            CorpusError::FractionOutOfRange(x) => write!(f, "fraction {x} out of range"),
            CorpusError::CorpusTooSmall => write!(f, "corpus too small to split"),
        }
    }
}

impl core::error::Error for CorpusError {}

fn check_word(word: &str) -> Result<(), CorpusError> {
    if word.is_empty() || word.contains(|c: char| c.is_whitespace()) {
        return Err(CorpusError::InvalidWord(word.to_string()));
    }
    Ok(())
}

impl TaggedSentence {
    /// Validates tokens against the tagset: non-empty sentence, non-empty
    /// whitespace-free words, assignable (non-NULL) tags.
    pub fn new(tokens: Vec<Token>, tagset: &Tagset) -> Result<TaggedSentence, CorpusError> {
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        for tok in &tokens {
            check_word(&tok.word)?;
            if tok.tag.index() >= tagset.len() || tagset.is_null(tok.tag) {
                return Err(CorpusError::InvalidTag);
            }
        }
        Ok(TaggedSentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.word.as_str())
    }

    pub fn tags(&self) -> impl Iterator<Item = TagId> + '_ {
        self.tokens.iter().map(|t| t.tag)
    }

    /// The words alone, as a tagging input.
    pub fn to_raw(&self) -> RawSentence {
        RawSentence {
            words: self.words().map(ToString::to_string).collect(),
        }
    }
}

impl TaggedCorpus {
    pub fn new(
        tagset: Tagset,
        sentences: Vec<TaggedSentence>,
    ) -> Result<TaggedCorpus, CorpusError> {
        for s in &sentences {
            for tok in &s.tokens {
                if tok.tag.index() >= tagset.len() || tagset.is_null(tok.tag) {
                    return Err(CorpusError::InvalidTag);
                }
            }
        }
        Ok(TaggedCorpus { tagset, sentences })
    }

    pub fn tagset(&self) -> &Tagset {
        &self.tagset
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }
}

impl RawSentence {
    pub fn new(words: Vec<String>) -> Result<RawSentence, CorpusError> {
        if words.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        for w in &words {
            check_word(w)?;
        }
        Ok(RawSentence { words })
    }

    /// Splits a line on whitespace. Errors on blank input.
    pub fn from_line(line: &str) -> Result<RawSentence, CorpusError> {
        RawSentence::new(line.split_whitespace().map(ToString::to_string).collect())
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Parses `word/TAG` sentences, one per line. Blank lines are skipped; the
/// tag is taken after the last `/` so words may themselves contain `/`.
/// The first error is reported with its 1-based line and column.
pub fn parse_tagged_corpus(text: &str, tagset: &Tagset) -> Result<TaggedCorpus, CorpusError> {
    let mut sentences = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut tokens = Vec::new();
        let mut column = 1usize;
        for piece in line.split(' ') {
            let err = |kind| CorpusError::Parse {
                line: line_idx + 1,
                column,
                kind,
            };
            let (word, tag_name) = match piece.rsplit_once('/') {
                Some((w, t)) if !w.is_empty() && !t.is_empty() => (w, t),
                _ => return Err(err(ParseErrorKind::MalformedToken(piece.to_string()))),
            };
            if word.contains(|c: char| c.is_whitespace()) {
                return Err(err(ParseErrorKind::MalformedToken(piece.to_string())));
            }
            let tag = tagset
                .id(tag_name)
                .ok_or_else(|| err(ParseErrorKind::UnknownTag(tag_name.to_string())))?;
            if tagset.is_null(tag) {
                return Err(err(ParseErrorKind::NullTag));
            }
            tokens.push(Token {
                word: word.to_string(),
                tag,
            });
            column += piece.chars().count() + 1;
        }
        sentences.push(TaggedSentence { tokens });
    }
    Ok(TaggedCorpus {
        tagset: tagset.clone(),
        sentences,
    })
}

/// Writes a corpus back to `word/TAG` text; inverse of [`parse_tagged_corpus`].
pub fn write_tagged_corpus(corpus: &TaggedCorpus) -> String {
    let mut out = String::new();
    for sentence in &corpus.sentences {
        for (i, tok) in sentence.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&tok.word);
            out.push('/');
            out.push_str(corpus.tagset.name(tok.tag));
        }
        out.push('\n');
    }
    out
}

/// `round(fraction * n)`, half up.
fn round_half_up(fraction: f64, n: usize) -> usize {
    libm::floor(fraction * n as f64 + 0.5) as usize
}

/// Sentence-level train/test split: deterministic for a given seed,
/// `|train| = round(train_fraction * N)`, both halves keep corpus order.
pub fn split_corpus(
    corpus: &TaggedCorpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(TaggedCorpus, TaggedCorpus), CorpusError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CorpusError::FractionOutOfRange(train_fraction));
    }
    let n = corpus.sentences.len();
    if n < 2 {
        return Err(CorpusError::CorpusTooSmall);
    }
    let k = round_half_up(train_fraction, n);
    if k == 0 || k == n {
        return Err(CorpusError::CorpusTooSmall);
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let mut in_train = alloc::vec![false; n];
    for &i in &indices[..k] {
        in_train[i] = true;
    }
    let (mut train, mut test) = (Vec::with_capacity(k), Vec::with_capacity(n - k));
    for (i, sentence) in corpus.sentences.iter().enumerate() {
        if in_train[i] {
            train.push(sentence.clone());
        } else {
            test.push(sentence.clone());
        }
    }
    Ok((
        TaggedCorpus {
            tagset: corpus.tagset.clone(),
            sentences: train,
        },
        TaggedCorpus {
            tagset: corpus.tagset.clone(),
            sentences: test,
        },
    ))
}

/// First `round(fraction * N)` sentences, order preserved.
pub fn take_prefix(corpus: &TaggedCorpus, fraction: f64) -> Result<TaggedCorpus, CorpusError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CorpusError::FractionOutOfRange(fraction));
    }
    let k = round_half_up(fraction, corpus.sentences.len());
    Ok(TaggedCorpus {
        tagset: corpus.tagset.clone(),
        sentences: corpus.sentences[..k].to_vec(),
    })
}
