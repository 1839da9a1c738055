//! Per-sentence genetic search.
//!
//! An individual encodes one tag per word; every gene stays within the
//! word's valid tags. The initial population has one greedy seed (each
//! word re-argmaxed left to right against its neighbors' current tags,
//! starting from the per-word most frequent tag) plus frequency-weighted
//! resamples. Parents are drawn by shifted-fitness roulette; pairs recombine
//! by uniform or one-point crossover with the configured probability, every
//! gene then mutates independently to another valid tag. Replacement is
//! purely generational; the best individual ever seen is tracked for
//! reporting only.
//!
//! Everything is deterministic per seed.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawSentence;
use crate::fitness::{self, FitnessError, FitnessParams};
use crate::tables::Lexicon;
use crate::tagset::{TagId, Tagset};

const ROULETTE_TINY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossoverKind {
    #[default]
    Uniform,
    OnePoint,
}

impl CrossoverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossoverKind::Uniform => "uniform",
            CrossoverKind::OnePoint => "one-point",
        }
    }
}

impl core::str::FromStr for CrossoverKind {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(CrossoverKind::Uniform),
            "one-point" | "one_point" => Ok(CrossoverKind::OnePoint),
            _ => Err("expected uniform or one-point"),
        }
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// GA knobs. The defaults are population 60, 30 generations, 50% uniform
/// crossover and 4% mutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub crossover: CrossoverKind,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 60,
            generations: 30,
            crossover_rate: 0.5,
            mutation_rate: 0.04,
            crossover: CrossoverKind::Uniform,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population_size < 2 {
            return Err(GaError::InvalidConfig("population size must be at least 2"));
        }
        if self.generations < 1 {
            return Err(GaError::InvalidConfig("generations must be at least 1"));
        }
        for (name, rate) in [
            ("crossover rate", self.crossover_rate),
            ("mutation rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                let _ = name;
                return Err(GaError::InvalidConfig("rates must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaError {
    InvalidConfig(&'static str),
    /// Crossover parents have different gene counts.
    GeneLength { left: usize, right: usize },
    Fitness(FitnessError),
}

impl fmt::Display for GaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaError::InvalidConfig(msg) => write!(f, "invalid GA config: {msg}"),
            GaError::GeneLength { left, right } => {
                write!(f, "parents have {left} and {right} genes")
            }
            GaError::Fitness(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GaError {}

impl From<FitnessError> for GaError {
    fn from(e: FitnessError) -> Self {
        GaError::Fitness(e)
    }
}

/// One candidate tagging with its cached fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    genes: Vec<TagId>,
    fitness: f64,
}

impl Individual {
    /// Builds an individual and computes its fitness.
    pub fn evaluated(genes: Vec<TagId>, params: &FitnessParams<'_>) -> Result<Individual, FitnessError> {
        fitness::validate_tags(params, &genes)?;
        let fitness = fitness::genes_fitness(params, &genes);
        Ok(Individual { genes, fitness })
    }

    /// Builds an individual from an already-known fitness. The caller
    /// vouches that `fitness` matches the genes.
    pub fn from_parts(genes: Vec<TagId>, fitness: f64) -> Individual {
        Individual { genes, fitness }
    }

    pub fn genes(&self) -> &[TagId] {
        &self.genes
    }

    pub fn fitness(&self) -> f64 {
        self.fitness
    }
}

/// A population of same-length individuals.
pub type Population = Vec<Individual>;

/// The valid tags of each word of one sentence, with lexicon frequencies
/// for proportional sampling and the per-word most frequent tag.
#[derive(Debug, Clone)]
pub struct TagChoices {
    candidates: Vec<Vec<TagId>>,
    weights: Vec<Vec<u64>>,
    totals: Vec<u64>,
    argmax: Vec<TagId>,
}

impl TagChoices {
    pub fn for_sentence(sentence: &RawSentence, lexicon: &Lexicon, tagset: &Tagset) -> TagChoices {
        let n = sentence.len();
        let mut choices = TagChoices {
            candidates: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
            totals: Vec::with_capacity(n),
            argmax: Vec::with_capacity(n),
        };
        for word in sentence.words() {
            match lexicon.known_tags(word) {
                Some(pairs) => {
                    choices.candidates.push(pairs.iter().map(|&(t, _)| t).collect());
                    let weights: Vec<u64> = pairs.iter().map(|&(_, c)| c).collect();
                    choices.totals.push(weights.iter().sum());
                    choices.weights.push(weights);
                    choices.argmax.push(pairs[0].0);
                }
                None => {
                    // unknown word: any assignable tag, uniform weights
                    let all: Vec<TagId> = tagset.assignable_ids().collect();
                    choices.totals.push(all.len() as u64);
                    choices.weights.push(alloc::vec![1; all.len()]);
                    choices.candidates.push(all);
                    choices.argmax.push(lexicon.global_argmax());
                }
            }
        }
        choices
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn candidates(&self, word: usize) -> &[TagId] {
        &self.candidates[word]
    }

    /// Per-word most frequent tag (corpus-wide for unknown words).
    pub fn baseline(&self) -> &[TagId] {
        &self.argmax
    }

    /// Search-space size, saturating.
    pub fn space_size(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    fn sample(&self, word: usize, rng: &mut impl Rng) -> TagId {
        let cands = &self.candidates[word];
        if cands.len() == 1 {
            return cands[0];
        }
        let mut x = rng.random_range(0..self.totals[word]);
        for (i, &w) in self.weights[word].iter().enumerate() {
            if x < w {
                return cands[i];
            }
            x -= w;
        }
        cands[cands.len() - 1]
    }
}

/// The deterministic random stream used throughout: uniform reals and
/// integers plus Bernoulli draws, identical for identical seeds on every
/// platform.
pub type RandomSource = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> RandomSource {
    RandomSource::seed_from_u64(seed)
}

/// Seed for one sentence of a batch: the master seed mixed with a content
/// hash, so a sentence's tagging does not depend on its batch position.
pub fn sentence_seed(master: u64, sentence: &RawSentence) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for word in sentence.words() {
        for &byte in word.as_bytes() {
            h = (h ^ u64::from(byte)).wrapping_mul(0x100_0000_01b3);
        }
        // 0xff never occurs in UTF-8; unambiguous word separator
        h = (h ^ 0xff).wrapping_mul(0x100_0000_01b3);
    }
    let mut z = master ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn greedy_seed(choices: &TagChoices, params: &FitnessParams<'_>) -> Vec<TagId> {
    let mut genes = choices.argmax.clone();
    let mut scratch = fitness::Scratch::default();
    for i in 0..genes.len() {
        let mut best_tag = genes[i];
        let mut best_f = f64::NEG_INFINITY;
        for &t in choices.candidates(i) {
            let f = fitness::gene_log_prob_at(params, &genes, i, t, &mut scratch);
            if f > best_f || (f == best_f && t < best_tag) {
                best_f = f;
                best_tag = t;
            }
        }
        genes[i] = best_tag;
    }
    genes
}

fn init_population(
    choices: &TagChoices,
    params: &FitnessParams<'_>,
    population_size: usize,
    rng: &mut impl Rng,
    evaluations: &mut u64,
) -> Result<Population, GaError> {
    let mut population = Vec::with_capacity(population_size);
    *evaluations += 1;
    population.push(Individual::evaluated(greedy_seed(choices, params), params)?);
    while population.len() < population_size {
        let genes: Vec<TagId> = (0..choices.len()).map(|i| choices.sample(i, rng)).collect();
        *evaluations += 1;
        population.push(Individual::evaluated(genes, params)?);
    }
    Ok(population)
}

/// Initial population: one greedy seed individual plus `P - 1`
/// frequency-weighted resamples, all with cached fitness.
pub fn initialize_population(
    sentence: &RawSentence,
    lexicon: &Lexicon,
    tagset: &Tagset,
    params: &FitnessParams<'_>,
    config: &GaConfig,
    rng: &mut impl Rng,
) -> Result<Population, GaError> {
    config.validate()?;
    let choices = TagChoices::for_sentence(sentence, lexicon, tagset);
    let mut evaluations = 0;
    init_population(&choices, params, config.population_size, rng, &mut evaluations)
}

/// Draws one index with probability proportional to the shifted fitness
/// `f - min + eps`, `eps = (max - min) / P` plus a tiny constant. Uniform
/// when all fitness values are equal.
pub fn roulette_select(population: &[Individual], rng: &mut impl Rng) -> usize {
    assert!(!population.is_empty(), "empty population");
    if population.len() == 1 {
        return 0;
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for ind in population {
        min = min.min(ind.fitness);
        max = max.max(ind.fitness);
    }
    if max == min {
        return rng.random_range(0..population.len());
    }
    let eps = (max - min) / population.len() as f64 + ROULETTE_TINY;
    let total: f64 = population.iter().map(|ind| ind.fitness - min + eps).sum();
    let mut x = rng.random::<f64>() * total;
    for (index, ind) in population.iter().enumerate() {
        let weight = ind.fitness - min + eps;
        if x < weight {
            return index;
        }
        x -= weight;
    }
    population.len() - 1
}

/// Mask semantics: `false` at a locus takes parent 1's gene for child 1;
/// child 2 mirrors.
fn crossover_with_mask(p1: &[TagId], p2: &[TagId], mask: &[bool]) -> (Vec<TagId>, Vec<TagId>) {
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for i in 0..p1.len() {
        if mask[i] {
            c1.push(p2[i]);
            c2.push(p1[i]);
        } else {
            c1.push(p1[i]);
            c2.push(p2[i]);
        }
    }
    (c1, c2)
}

fn uniform_genes(p1: &[TagId], p2: &[TagId], rng: &mut impl Rng) -> (Vec<TagId>, Vec<TagId>) {
    let mask: Vec<bool> = (0..p1.len()).map(|_| rng.random_bool(0.5)).collect();
    crossover_with_mask(p1, p2, &mask)
}

fn one_point_genes(p1: &[TagId], p2: &[TagId], cut: usize) -> (Vec<TagId>, Vec<TagId>) {
    let mut c1 = p1[..cut].to_vec();
    c1.extend_from_slice(&p2[cut..]);
    let mut c2 = p2[..cut].to_vec();
    c2.extend_from_slice(&p1[cut..]);
    (c1, c2)
}

fn check_parents(p1: &Individual, p2: &Individual) -> Result<(), GaError> {
    if p1.genes.len() != p2.genes.len() {
        return Err(GaError::GeneLength {
            left: p1.genes.len(),
            right: p2.genes.len(),
        });
    }
    Ok(())
}

/// Per-locus random-mask crossover; children's fitness is recomputed.
pub fn uniform_crossover(
    p1: &Individual,
    p2: &Individual,
    params: &FitnessParams<'_>,
    rng: &mut impl Rng,
) -> Result<(Individual, Individual), GaError> {
    check_parents(p1, p2)?;
    let (g1, g2) = uniform_genes(&p1.genes, &p2.genes, rng);
    Ok((
        Individual::evaluated(g1, params)?,
        Individual::evaluated(g2, params)?,
    ))
}

/// Single random cut in `[1, len-1]`; parents shorter than 2 genes are
/// cloned unchanged.
pub fn one_point_crossover(
    p1: &Individual,
    p2: &Individual,
    params: &FitnessParams<'_>,
    rng: &mut impl Rng,
) -> Result<(Individual, Individual), GaError> {
    check_parents(p1, p2)?;
    if p1.genes.len() < 2 {
        return Ok((p1.clone(), p2.clone()));
    }
    let cut = rng.random_range(1..p1.genes.len());
    let (g1, g2) = one_point_genes(&p1.genes, &p2.genes, cut);
    Ok((
        Individual::evaluated(g1, params)?,
        Individual::evaluated(g2, params)?,
    ))
}

/// Returns whether any gene changed.
fn mutate_genes(
    genes: &mut [TagId],
    choices: &TagChoices,
    mutation_rate: f64,
    rng: &mut impl Rng,
) -> bool {
    let mut changed = false;
    for i in 0..genes.len() {
        if !rng.random_bool(mutation_rate) {
            continue;
        }
        let cands = choices.candidates(i);
        if cands.len() <= 1 {
            continue;
        }
        let replacement = match cands.iter().position(|&t| t == genes[i]) {
            Some(current) => {
                // uniform over the other valid tags
                let j = rng.random_range(0..cands.len() - 1);
                cands[if j >= current { j + 1 } else { j }]
            }
            None => cands[rng.random_range(0..cands.len())],
        };
        changed |= replacement != genes[i];
        genes[i] = replacement;
    }
    changed
}

/// Mutates each gene with probability `mutation_rate` to another of its
/// word's valid tags; fitness is recomputed only if something changed.
/// Panics if the rate is outside `[0, 1]`.
pub fn mutate(
    individual: &Individual,
    choices: &TagChoices,
    mutation_rate: f64,
    params: &FitnessParams<'_>,
    rng: &mut impl Rng,
) -> Result<Individual, GaError> {
    let mut genes = individual.genes.clone();
    if mutate_genes(&mut genes, choices, mutation_rate, rng) {
        Ok(Individual::evaluated(genes, params)?)
    } else {
        Ok(individual.clone())
    }
}

/// Best/mean population fitness of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub best: f64,
    pub mean: f64,
}

fn generation_stats(population: &[Individual]) -> GenerationStats {
    let best = population.iter().map(|i| i.fitness).fold(f64::NEG_INFINITY, f64::max);
    let mean = population.iter().map(|i| i.fitness).sum::<f64>() / population.len() as f64;
    GenerationStats { best, mean }
}

/// Result of one GA run: the best individual ever seen, per-generation
/// stats (initial population first) and the number of individual fitness
/// evaluations spent.
#[derive(Debug, Clone, PartialEq)]
pub struct GaRun {
    pub best: Individual,
    pub history: Vec<GenerationStats>,
    pub evaluations: u64,
}

/// Evolves one sentence: generational replacement, best-ever tracked for
/// reporting only. Deterministic per `config.seed`.
pub fn run_ga(
    sentence: &RawSentence,
    lexicon: &Lexicon,
    tagset: &Tagset,
    params: &FitnessParams<'_>,
    config: &GaConfig,
) -> Result<GaRun, GaError> {
    config.validate()?;
    let choices = TagChoices::for_sentence(sentence, lexicon, tagset);
    let mut rng = rng_from_seed(config.seed);
    let mut evaluations = 0u64;
    let mut population = init_population(
        &choices,
        params,
        config.population_size,
        &mut rng,
        &mut evaluations,
    )?;
    let mut best = population
        .iter()
        .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .cloned()
        .expect("population is non-empty");
    let mut history = Vec::with_capacity(config.generations + 1);
    history.push(generation_stats(&population));

    for _ in 0..config.generations {
        let mut next: Population = Vec::with_capacity(config.population_size);
        while next.len() < config.population_size {
            let first = &population[roulette_select(&population, &mut rng)];
            let second = &population[roulette_select(&population, &mut rng)];
            let mut crossed = rng.random_bool(config.crossover_rate);
            let (mut g1, mut g2) = if crossed {
                match config.crossover {
                    CrossoverKind::Uniform => uniform_genes(&first.genes, &second.genes, &mut rng),
                    CrossoverKind::OnePoint => {
                        if first.genes.len() < 2 {
                            crossed = false;
                            (first.genes.clone(), second.genes.clone())
                        } else {
                            let cut = rng.random_range(1..first.genes.len());
                            one_point_genes(&first.genes, &second.genes, cut)
                        }
                    }
                }
            } else {
                (first.genes.clone(), second.genes.clone())
            };
            let m1 = mutate_genes(&mut g1, &choices, config.mutation_rate, &mut rng);
            let m2 = mutate_genes(&mut g2, &choices, config.mutation_rate, &mut rng);
            for (genes, touched, parent) in [(g1, crossed || m1, first), (g2, crossed || m2, second)]
            {
                if next.len() == config.population_size {
                    break; // odd population: drop the surplus child
                }
                let child = if touched {
                    evaluations += 1;
                    Individual::evaluated(genes, params)?
                } else {
                    parent.clone()
                };
                next.push(child);
            }
        }
        population = next;
        for ind in &population {
            if ind.fitness > best.fitness {
                best = ind.clone();
            }
        }
        history.push(generation_stats(&population));
    }
    Ok(GaRun {
        best,
        history,
        evaluations,
    })
}

/// One sentence's tagging result within a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggingOutcome {
    pub tags: Vec<TagId>,
    pub fitness: f64,
    pub evaluations: u64,
}

/// Tags sentences independently, one GA run each, with per-sentence seeds
/// derived via [`sentence_seed`].
pub fn tag_text(
    sentences: &[RawSentence],
    lexicon: &Lexicon,
    tagset: &Tagset,
    params: &FitnessParams<'_>,
    config: &GaConfig,
) -> Result<Vec<TaggingOutcome>, GaError> {
    sentences
        .iter()
        .map(|sentence| {
            let mut sub = *config;
            sub.seed = sentence_seed(config.seed, sentence);
            run_ga(sentence, lexicon, tagset, params, &sub).map(|run| TaggingOutcome {
                tags: run.best.genes.clone(),
                fitness: run.best.fitness,
                evaluations: run.evaluations,
            })
        })
        .collect()
}
