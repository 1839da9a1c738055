//! Randomized invariants across the library.

use proptest::prelude::*;

use gapos_core::corpus::{
    parse_tagged_corpus, split_corpus, take_prefix, write_tagged_corpus, RawSentence,
    TaggedCorpus, TaggedSentence, Token,
};
use gapos_core::fitness::{gene_fitness, FitnessParams};
use gapos_core::ga::{self, GaConfig, Individual, TagChoices};
use gapos_core::metrics;
use gapos_core::oracle;
use gapos_core::tables::{
    build_lexicon, build_training_table, load_lexicon, load_table, save_lexicon, save_table,
    valid_tags, ReduceOrder,
};
use gapos_core::tagset::{load_tagset, TagId, Tagset};

fn tagset() -> Tagset {
    load_tagset("A\nB\nC\nD").unwrap()
}

prop_compose! {
    fn sentence_strategy(tagset: Tagset)
        (tokens in prop::collection::vec(("[a-d]{1,3}", 0..tagset.assignable_len()), 1..6))
        -> TaggedSentence
    {
        let assignable: Vec<TagId> = tagset.assignable_ids().collect();
        let tokens = tokens
            .into_iter()
            .map(|(word, tag)| Token { word, tag: assignable[tag] })
            .collect();
        TaggedSentence::new(tokens, &tagset).unwrap()
    }
}

fn corpus_strategy(max_sentences: usize) -> impl Strategy<Value = TaggedCorpus> {
    let ts = tagset();
    prop::collection::vec(sentence_strategy(ts.clone()), 1..max_sentences)
        .prop_map(move |sentences| TaggedCorpus::new(ts.clone(), sentences).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corpus_write_parse_round_trip(corpus in corpus_strategy(8)) {
        let text = write_tagged_corpus(&corpus);
        let parsed = parse_tagged_corpus(&text, corpus.tagset()).unwrap();
        prop_assert_eq!(parsed, corpus);
    }

    #[test]
    fn split_partitions_and_is_seed_deterministic(
        corpus in corpus_strategy(12),
        fraction in 0.1f64..0.9,
        seed in any::<u64>(),
    ) {
        prop_assume!(corpus.len() >= 2);
        let split = split_corpus(&corpus, fraction, seed);
        let Ok((train, test)) = split else {
            // only legal failure here: rounded size hit 0 or N
            return Ok(());
        };
        prop_assert_eq!(train.len() + test.len(), corpus.len());
        let (train2, test2) = split_corpus(&corpus, fraction, seed).unwrap();
        prop_assert_eq!(&train, &train2);
        prop_assert_eq!(&test, &test2);
        // order-preserving partition: merged halves restore the corpus
        let mut merged = Vec::new();
        let (mut i, mut j) = (0, 0);
        for sentence in corpus.sentences() {
            if i < train.len() && train.sentences()[i] == *sentence {
                merged.push(train.sentences()[i].clone());
                i += 1;
            } else {
                prop_assert_eq!(&test.sentences()[j], sentence);
                merged.push(test.sentences()[j].clone());
                j += 1;
            }
        }
        prop_assert_eq!(merged.len(), corpus.len());
    }

    #[test]
    fn prefixes_are_nested(corpus in corpus_strategy(12), f1 in 0.05f64..1.0, f2 in 0.05f64..1.0) {
        let (small, large) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let a = take_prefix(&corpus, small).unwrap();
        let b = take_prefix(&corpus, large).unwrap();
        prop_assert!(a.len() <= b.len());
        prop_assert_eq!(a.sentences(), &b.sentences()[..a.len()]);
    }

    #[test]
    fn table_and_lexicon_round_trip(
        corpus in corpus_strategy(8),
        l_lc in 0usize..3,
        l_rc in 0usize..3,
        left_first in any::<bool>(),
    ) {
        prop_assume!(l_lc + l_rc >= 1);
        let order = if left_first { ReduceOrder::LeftFirst } else { ReduceOrder::RightFirst };
        let table = build_training_table(&corpus, l_lc, l_rc, order).unwrap();
        let text = save_table(&table, corpus.tagset());
        let loaded = load_table(&text, corpus.tagset()).unwrap();
        prop_assert_eq!(&loaded, &table);
        prop_assert_eq!(save_table(&loaded, corpus.tagset()), text);

        let lexicon = build_lexicon(&corpus).unwrap();
        let text = save_lexicon(&lexicon, corpus.tagset());
        let loaded = load_lexicon(&text, corpus.tagset()).unwrap();
        prop_assert_eq!(&loaded, &lexicon);
        prop_assert_eq!(save_lexicon(&loaded, corpus.tagset()), text);
    }

    #[test]
    fn backoff_counts_never_shrink(corpus in corpus_strategy(8)) {
        let table = build_training_table(&corpus, 2, 2, ReduceOrder::RightFirst).unwrap();
        let schedule = table.schedule().to_vec();
        for (window, count) in table.windows() {
            let shape = (window.lc.len(), window.rc.len());
            let pos = schedule.iter().position(|&s| s == shape).unwrap();
            if pos + 1 == schedule.len() {
                continue;
            }
            let (a, b) = schedule[pos + 1];
            let reduced =
                table.occurrences(&window.lc[window.lc.len() - a..], window.tag, &window.rc[..b]);
            prop_assert!(reduced >= count);
        }
        // full-width counts conserve the token total
        let full: u64 = table
            .windows()
            .filter(|(w, _)| (w.lc.len(), w.rc.len()) == (2, 2))
            .map(|(_, c)| c)
            .sum();
        prop_assert_eq!(full, corpus.token_count() as u64);
    }

    #[test]
    fn gene_fitness_is_never_positive(
        corpus in corpus_strategy(8),
        picks in prop::collection::vec((0usize..5, 0usize..5, 0usize..4), 12),
    ) {
        let ts = corpus.tagset().clone();
        let table = build_training_table(&corpus, 1, 1, ReduceOrder::RightFirst).unwrap();
        let params = FitnessParams::new(&table);
        let all: Vec<TagId> = ts.ids().collect();
        let assignable: Vec<TagId> = ts.assignable_ids().collect();
        for (l, r, t) in picks {
            let f = gene_fitness(&params, &[all[l]], assignable[t], &[all[r]]).unwrap();
            prop_assert!(f <= 0.0 && f.is_finite());
        }
    }

    #[test]
    fn operators_preserve_gene_closure(
        corpus in corpus_strategy(8),
        words in prop::collection::vec("[a-d]{1,3}", 2..6),
        seed in any::<u64>(),
    ) {
        let ts = corpus.tagset().clone();
        let table = build_training_table(&corpus, 1, 1, ReduceOrder::RightFirst).unwrap();
        let lexicon = build_lexicon(&corpus).unwrap();
        let params = FitnessParams::new(&table);
        let sentence = RawSentence::new(words).unwrap();
        let choices = TagChoices::for_sentence(&sentence, &lexicon, &ts);
        let config = GaConfig { population_size: 6, generations: 3, mutation_rate: 0.3, seed, ..GaConfig::default() };
        let mut rng = ga::rng_from_seed(seed);
        let pop = ga::initialize_population(&sentence, &lexicon, &ts, &params, &config, &mut rng).unwrap();
        let closed = |ind: &Individual| {
            ind.genes()
                .iter()
                .enumerate()
                .all(|(i, g)| choices.candidates(i).contains(g))
        };
        for ind in &pop {
            prop_assert!(closed(ind));
        }
        let (c1, c2) = ga::uniform_crossover(&pop[0], &pop[1], &params, &mut rng).unwrap();
        let (c3, c4) = ga::one_point_crossover(&pop[2], &pop[3], &params, &mut rng).unwrap();
        for ind in [&c1, &c2, &c3, &c4] {
            prop_assert!(closed(ind));
            let mutated = ga::mutate(ind, &choices, 0.5, &params, &mut rng).unwrap();
            prop_assert!(closed(&mutated));
        }
        // the full loop keeps closure too, and never loses to its seed
        let run = ga::run_ga(&sentence, &lexicon, &ts, &params, &config).unwrap();
        prop_assert!(closed(&run.best));
        prop_assert!(run.best.fitness() >= run.history[0].best || (run.best.fitness() - run.history[0].best).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_oracle_dominates_ga(
        corpus in corpus_strategy(8),
        word_picks in prop::collection::vec(0usize..64, 1..5),
        seed in any::<u64>(),
    ) {
        let ts = corpus.tagset().clone();
        let table = build_training_table(&corpus, 1, 1, ReduceOrder::RightFirst).unwrap();
        let lexicon = build_lexicon(&corpus).unwrap();
        let params = FitnessParams::new(&table);
        // draw sentence words from the lexicon so the space stays tiny
        let known: Vec<String> = lexicon.words().map(str::to_string).collect();
        let words: Vec<String> = word_picks.iter().map(|&p| known[p % known.len()].clone()).collect();
        let sentence = RawSentence::new(words).unwrap();
        let config = GaConfig { population_size: 8, generations: 5, seed, ..GaConfig::default() };
        let run = ga::run_ga(&sentence, &lexicon, &ts, &params, &config).unwrap();
        let best = oracle::exhaustive_tag(&sentence, &lexicon, &ts, &params, 1_000_000).unwrap();
        prop_assert!(best.fitness() >= run.best.fitness() - 1e-12);
    }

    #[test]
    fn tar_matches_token_recount(
        corpus in corpus_strategy(10),
        flips in prop::collection::vec((any::<u32>(), 0usize..4), 0..20),
    ) {
        let ts = corpus.tagset().clone();
        let assignable: Vec<TagId> = ts.assignable_ids().collect();
        let mut hyp: Vec<Vec<TagId>> = corpus
            .sentences()
            .iter()
            .map(|s| s.tags().collect())
            .collect();
        for (pos, tag) in flips {
            let s = pos as usize % hyp.len();
            let w = (pos as usize / 7) % hyp[s].len();
            hyp[s][w] = assignable[tag];
        }
        let reported = metrics::tar(&corpus, &hyp).unwrap();
        let mut correct = 0u64;
        let mut total = 0u64;
        for (sentence, tags) in corpus.sentences().iter().zip(&hyp) {
            for (tok, &tag) in sentence.tokens().iter().zip(tags) {
                total += 1;
                if tok.tag == tag {
                    correct += 1;
                }
            }
        }
        prop_assert_eq!(reported, correct as f64 / total as f64);
        prop_assert!((0.0..=1.0).contains(&reported));
    }

    #[test]
    fn unknown_words_get_all_assignable_tags(corpus in corpus_strategy(6), word in "[x-z]{2,4}") {
        let ts = corpus.tagset().clone();
        let lexicon = build_lexicon(&corpus).unwrap();
        let tags = valid_tags(&lexicon, &word, &ts);
        prop_assert_eq!(tags, ts.assignable_ids().collect::<Vec<_>>());
    }
}

// Wider contexts store more windows and are sparser at query time: a
// query can match a 1-1 table at full width while the 3-2 table has to
// reduce almost all the way down.
#[test]
fn larger_context_grows_tables_and_backoff_depth() {
    let ts = tagset();
    let text = "\
w1/A w2/B w3/C w4/D w5/A\n\
w2/B w3/C w4/D\n\
w5/A w1/A w2/B w3/C\n\
w4/D w5/A w1/B w2/C w3/D w4/A\n";
    let corpus = parse_tagged_corpus(text, &ts).unwrap();
    let narrow = build_training_table(&corpus, 1, 1, ReduceOrder::RightFirst).unwrap();
    let wide = build_training_table(&corpus, 3, 2, ReduceOrder::RightFirst).unwrap();
    assert!(wide.windows().count() > narrow.windows().count());
    assert!(wide.full_window_count() >= narrow.full_window_count());

    // probe: the inner (A, T, B) window of "w1/A w2/B w3/C" flanked by
    // context tags the corpus never produced
    let id = |n: &str| ts.id(n).unwrap();
    let (a, b, c, d) = (id("A"), id("B"), id("C"), id("D"));
    let narrow_params = FitnessParams::new(&narrow);
    let wide_params = FitnessParams::new(&wide);
    let (_, narrow_level) =
        gapos_core::fitness::context_probability(&narrow_params, &[a], b, &[c]).unwrap();
    assert_eq!(narrow_level, 0);
    let (_, wide_level) =
        gapos_core::fitness::context_probability(&wide_params, &[d, d, a], b, &[c, a]).unwrap();
    assert!(
        wide_level > 0,
        "wide table should have had to reduce the fabricated outer context"
    );
}

// Permuting reference sentences (and the hypothesis rows with them)
// leaves TAR unchanged.
#[test]
fn tar_is_sentence_permutation_equivariant() {
    let ts = tagset();
    let text = "w1/A w2/B\nw3/C w4/D w5/A\nw2/B\nw3/C w1/A w4/D\n";
    let corpus = parse_tagged_corpus(text, &ts).unwrap();
    let assignable: Vec<TagId> = ts.assignable_ids().collect();
    let mut hypothesis: Vec<Vec<TagId>> = corpus
        .sentences()
        .iter()
        .map(|s| s.tags().collect())
        .collect();
    hypothesis[1][0] = assignable[0];
    hypothesis[3][2] = assignable[1];
    let baseline = metrics::tar(&corpus, &hypothesis).unwrap();
    let order = [2usize, 0, 3, 1];
    let permuted_corpus = TaggedCorpus::new(
        ts.clone(),
        order.iter().map(|&i| corpus.sentences()[i].clone()).collect(),
    )
    .unwrap();
    let permuted_hyp: Vec<Vec<TagId>> = order.iter().map(|&i| hypothesis[i].clone()).collect();
    assert_eq!(metrics::tar(&permuted_corpus, &permuted_hyp).unwrap(), baseline);
}
