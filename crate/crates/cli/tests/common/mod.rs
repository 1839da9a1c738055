//! Deterministic synthetic corpora for the test suites.
//!
//! Sentences come from a fixed tag-bigram chain over 8 tags; each word of
//! a 400-word vocabulary may carry 1 to 4 of those tags, with a small set
//! of common words and a long tail of rare ones so that small training
//! fractions leave real gaps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gapos_core::corpus::{RawSentence, TaggedCorpus, TaggedSentence, Token};
use gapos_core::tables::Lexicon;
use gapos_core::tagset::{load_tagset, TagId, Tagset};

pub const TAG_COUNT: usize = 8;
pub const VOCAB: usize = 400;

pub struct Synth {
    pub tagset: Tagset,
    start: Vec<u64>,
    transitions: Vec<Vec<u64>>,
    /// Per tag: (word index, emission weight).
    pools: Vec<Vec<(usize, u64)>>,
}

/// The 1-to-4 tags word `m` may carry (stride 5 is coprime with 8, so the
/// picks are distinct).
fn designed_tags(m: usize) -> Vec<usize> {
    let size = 1 + m % 4;
    (0..size).map(|j| (m + j * 5) % TAG_COUNT).collect()
}

fn word_name(m: usize) -> String {
    format!("w{m}")
}

impl Synth {
    pub fn new() -> Synth {
        let tagset = load_tagset("N\nV\nP\nD\nJ\nR\nC\nB").unwrap();
        let start: Vec<u64> = (0..TAG_COUNT).map(|j| 1 + (j as u64 % 3) * 2).collect();
        let transitions: Vec<Vec<u64>> = (0..TAG_COUNT)
            .map(|i| {
                (0..TAG_COUNT)
                    .map(|j| {
                        let base = 1 + ((i * 3 + j * 5) % 7) as u64;
                        // peak on the successor tag: strong bigram structure
                        base + if j == (i + 1) % TAG_COUNT { 10 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        let mut pools: Vec<Vec<(usize, u64)>> = vec![Vec::new(); TAG_COUNT];
        for m in 0..VOCAB {
            // two-tier frequencies: 80 common words, 320 rare ones
            let tier = if m < 80 { 12 } else { 1 };
            for t in designed_tags(m) {
                pools[t].push((m, tier * (1 + ((m + t) % 3) as u64)));
            }
        }
        Synth {
            tagset,
            start,
            transitions,
            pools,
        }
    }

    fn pick(weights: impl Iterator<Item = u64> + Clone, rng: &mut ChaCha8Rng) -> usize {
        let total: u64 = weights.clone().sum();
        let mut x = rng.random_range(0..total);
        for (i, w) in weights.enumerate() {
            if x < w {
                return i;
            }
            x -= w;
        }
        unreachable!("weights are non-empty")
    }

    fn tag_ids(&self) -> Vec<TagId> {
        self.tagset.assignable_ids().collect()
    }

    pub fn sentence(&self, rng: &mut ChaCha8Rng, min_len: usize, max_len: usize) -> TaggedSentence {
        let ids = self.tag_ids();
        let len = rng.random_range(min_len..=max_len);
        let mut tokens = Vec::with_capacity(len);
        let mut tag = Self::pick(self.start.iter().copied(), rng);
        for _ in 0..len {
            let pool = &self.pools[tag];
            let w = Self::pick(pool.iter().map(|&(_, w)| w), rng);
            tokens.push(Token {
                word: word_name(pool[w].0),
                tag: ids[tag],
            });
            tag = Self::pick(self.transitions[tag].iter().copied(), rng);
        }
        TaggedSentence::new(tokens, &self.tagset).unwrap()
    }

    pub fn corpus(
        &self,
        seed: u64,
        sentences: usize,
        min_len: usize,
        max_len: usize,
    ) -> TaggedCorpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let list = (0..sentences)
            .map(|_| self.sentence(&mut rng, min_len, max_len))
            .collect();
        TaggedCorpus::new(self.tagset.clone(), list).unwrap()
    }

    /// Raw sentences whose words are all in `lexicon` (hence at most 4
    /// valid tags each) and whose assignment space stays within `cap`.
    pub fn known_sentences(
        &self,
        seed: u64,
        count: usize,
        min_len: usize,
        max_len: usize,
        lexicon: &Lexicon,
        cap: u128,
    ) -> Vec<RawSentence> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            assert!(attempts < count * 1000, "generator starved");
            let sentence = self.sentence(&mut rng, min_len, max_len).to_raw();
            let mut space = 1u128;
            let known = sentence.words().iter().all(|w| {
                match lexicon.known_tags(w) {
                    Some(pairs) => {
                        space = space.saturating_mul(pairs.len() as u128);
                        true
                    }
                    None => false,
                }
            });
            if known && space <= cap {
                out.push(sentence);
            }
        }
        out
    }
}

impl Default for Synth {
    fn default() -> Self {
        Synth::new()
    }
}
