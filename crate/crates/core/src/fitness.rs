//! Gene and individual fitness.
//!
//! A gene's fitness is `ln P(T | LC, RC)` estimated from the training
//! table. When the full window was never counted, the context is reduced
//! along the table's backoff schedule until a window is found whose
//! context has been seen *and* in which the candidate tag occurred; a
//! matched context where the tag never occurred would give `ln 0`, so the
//! walk keeps reducing. At the bare-tag level the estimate is the tag's
//! corpus frequency; a tag never seen at all scores `floor_log_prob`.
//!
//! An individual's fitness is the sum over its genes, each gene's context
//! read from the individual's own neighboring tags with NULL padding
//! beyond the sentence ends.

use alloc::vec::Vec;
use core::fmt;

use crate::corpus::RawSentence;
use crate::tables::{push_window, TrainingTable};
use crate::tagset::TagId;

/// Fitness configuration: a training table plus the floor score for tags
/// never seen in the corpus.
#[derive(Debug, Clone, Copy)]
pub struct FitnessParams<'t> {
    table: &'t TrainingTable,
    floor_log_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitnessError {
    /// NULL may appear only in contexts, never as the scored tag.
    NullTag,
    /// Tag index outside the table's tagset.
    InvalidTag,
    WindowLength {
        expected: (usize, usize),
        got: (usize, usize),
    },
    LengthMismatch {
        words: usize,
        tags: usize,
    },
}

impl fmt::Display for FitnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitnessError::NullTag => write!(f, "cannot score the NULL tag"),
            FitnessError::InvalidTag => write!(f, "tag index outside the tagset"),
            FitnessError::WindowLength { expected, got } => write!(
                f,
                "window sized {}-{} but table expects {}-{}",
                got.0, got.1, expected.0, expected.1
            ),
            FitnessError::LengthMismatch { words, tags } => {
                write!(f, "{tags} tags for {words} words")
            }
        }
    }
}

impl core::error::Error for FitnessError {}

impl<'t> FitnessParams<'t> {
    /// Default floor: one pseudo-observation,
    /// `ln(1 / (total_tokens + |tagset|))`.
    pub fn new(table: &'t TrainingTable) -> FitnessParams<'t> {
        let floor = -libm::log((table.total_tokens() + table.tag_count() as u64) as f64);
        FitnessParams {
            table,
            floor_log_prob: floor,
        }
    }

    /// Overrides the floor. Any finite value at or below the lowest
    /// achievable log-frequency keeps fitness meaningful.
    pub fn with_floor(mut self, floor_log_prob: f64) -> FitnessParams<'t> {
        debug_assert!(floor_log_prob.is_finite());
        self.floor_log_prob = floor_log_prob;
        self
    }

    pub fn table(&self) -> &'t TrainingTable {
        self.table
    }

    pub fn floor_log_prob(&self) -> f64 {
        self.floor_log_prob
    }

    fn check_tag(&self, t: TagId) -> Result<(), FitnessError> {
        if t == self.table.null() {
            return Err(FitnessError::NullTag);
        }
        if t.index() >= self.table.tag_count() {
            return Err(FitnessError::InvalidTag);
        }
        Ok(())
    }
}

/// Reusable window buffers for the backoff walk.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    key: Vec<TagId>,
    ctx: Vec<TagId>,
}

/// Walks the schedule; `fill` writes the flattened window for a level.
/// Returns `(numerator, denominator, depth)` of the first level where both
/// are positive, or `None` when even the bare tag was never seen.
fn resolve<F>(table: &TrainingTable, fill: &mut F, s: &mut Scratch) -> Option<(u64, u64, usize)>
where
    F: FnMut(usize, usize, &mut Vec<TagId>),
{
    for (depth, &(a, b)) in table.schedule().iter().enumerate() {
        fill(a, b, &mut s.key);
        s.ctx.clear();
        s.ctx.extend_from_slice(&s.key[..a]);
        s.ctx.extend_from_slice(&s.key[a + 1..]);
        let denom = table.context_count_of(&s.ctx);
        if denom > 0 {
            let num = table.count_of(&s.key);
            if num > 0 {
                return Some((num, denom, depth));
            }
        }
    }
    None
}

fn resolve_slices(
    params: &FitnessParams<'_>,
    lc: &[TagId],
    t: TagId,
    rc: &[TagId],
    s: &mut Scratch,
) -> Result<Option<(u64, u64, usize)>, FitnessError> {
    params.check_tag(t)?;
    let table = params.table;
    if lc.len() != table.l_lc() || rc.len() != table.l_rc() {
        return Err(FitnessError::WindowLength {
            expected: (table.l_lc(), table.l_rc()),
            got: (lc.len(), rc.len()),
        });
    }
    let mut fill = |a: usize, b: usize, buf: &mut Vec<TagId>| {
        buf.clear();
        buf.extend_from_slice(&lc[lc.len() - a..]);
        buf.push(t);
        buf.extend_from_slice(&rc[..b]);
    };
    Ok(resolve(table, &mut fill, s))
}

/// Probability of tag `t` in the padded context `(lc, rc)` together with
/// the backoff depth that resolved it (0 = full window). A tag never seen
/// in the corpus yields `exp(floor_log_prob)` at the deepest level.
pub fn context_probability(
    params: &FitnessParams<'_>,
    lc: &[TagId],
    t: TagId,
    rc: &[TagId],
) -> Result<(f64, usize), FitnessError> {
    let mut s = Scratch::default();
    Ok(match resolve_slices(params, lc, t, rc, &mut s)? {
        Some((num, denom, depth)) => (num as f64 / denom as f64, depth),
        None => (
            libm::exp(params.floor_log_prob),
            params.table.schedule().len() - 1,
        ),
    })
}

/// `ln` of [`context_probability`]; always finite.
pub fn gene_fitness(
    params: &FitnessParams<'_>,
    lc: &[TagId],
    t: TagId,
    rc: &[TagId],
) -> Result<f64, FitnessError> {
    let mut s = Scratch::default();
    Ok(match resolve_slices(params, lc, t, rc, &mut s)? {
        Some((num, denom, _)) => libm::log(num as f64 / denom as f64),
        None => params.floor_log_prob,
    })
}

/// Log probability of assigning `t` at position `i`, with the context read
/// from `tags` (NULL-padded beyond the ends). Callers guarantee `t` is a
/// valid non-NULL tag.
pub(crate) fn gene_log_prob_at(
    params: &FitnessParams<'_>,
    tags: &[TagId],
    i: usize,
    t: TagId,
    s: &mut Scratch,
) -> f64 {
    let table = params.table;
    let null = table.null();
    let mut fill =
        |a: usize, b: usize, buf: &mut Vec<TagId>| push_window(tags, i, t, a, b, null, buf);
    match resolve(table, &mut fill, s) {
        Some((num, denom, _)) => libm::log(num as f64 / denom as f64),
        None => params.floor_log_prob,
    }
}

pub(crate) fn validate_tags(params: &FitnessParams<'_>, tags: &[TagId]) -> Result<(), FitnessError> {
    for &t in tags {
        params.check_tag(t)?;
    }
    Ok(())
}

pub(crate) fn genes_fitness(params: &FitnessParams<'_>, tags: &[TagId]) -> f64 {
    let mut s = Scratch::default();
    let mut sum = 0.0;
    for (i, &t) in tags.iter().enumerate() {
        sum += gene_log_prob_at(params, tags, i, t, &mut s);
    }
    sum
}

/// Sum of gene fitness over a candidate tagging of `sentence`, each gene's
/// context taken from the candidate's own neighboring tags.
pub fn individual_fitness(
    params: &FitnessParams<'_>,
    sentence: &RawSentence,
    tags: &[TagId],
) -> Result<f64, FitnessError> {
    if sentence.len() != tags.len() {
        return Err(FitnessError::LengthMismatch {
            words: sentence.len(),
            tags: tags.len(),
        });
    }
    validate_tags(params, tags)?;
    Ok(genes_fitness(params, tags))
}
