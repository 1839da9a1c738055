//! `gapos` command line.
//!
//! Subcommands: `build` (corpus -> table/lexicon/tagset artifacts),
//! `tag` (raw sentences -> tagged corpus format), `eval` (TAR against a
//! gold corpus) and `sweep` (one-axis parameter study, CSV out). Every
//! command is deterministic given its inputs and `--seed`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gapos::error::CliError;
use gapos::io;
use gapos::sweep::{self, parse_context, SweepAxis, SweepSpec};
use gapos::tagging::{mean_evaluations, tag_sentences};
use gapos_core::corpus::TaggedCorpus;
use gapos_core::fitness::FitnessParams;
use gapos_core::ga::{CrossoverKind, GaConfig};
use gapos_core::metrics;
use gapos_core::tables::{build_lexicon, build_training_table, ReduceOrder};
use gapos_core::tagset::TagId;

fn context_arg(s: &str) -> Result<(usize, usize), String> {
    parse_context(s)
}

#[derive(Parser)]
#[command(name = "gapos", version, about = "Genetic-search part-of-speech tagger")]
struct Cli {
    /// Master RNG seed; falls back to GA_TAGGER_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for tagging sentences
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GaFlags {
    /// Population size
    #[arg(long, default_value_t = 60)]
    population: usize,
    /// Generations per sentence
    #[arg(long, default_value_t = 30)]
    generations: usize,
    /// Probability that a selected pair recombines
    #[arg(long, default_value_t = 0.5)]
    crossover_rate: f64,
    /// Per-gene mutation probability
    #[arg(long, default_value_t = 0.04)]
    mutation_rate: f64,
    /// Crossover operator: uniform or one-point
    #[arg(long, default_value = "uniform")]
    crossover: CrossoverKind,
}

impl GaFlags {
    fn config(&self, seed: u64) -> GaConfig {
        GaConfig {
            population_size: self.population,
            generations: self.generations,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            crossover: self.crossover,
            seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build training table, lexicon and tagset artifacts from a corpus
    Build {
        /// Tagged corpus, one sentence per line of word/TAG tokens
        #[arg(long)]
        corpus: PathBuf,
        /// Tagset file, one tag name per line
        #[arg(long)]
        tagset: PathBuf,
        /// Context sizes L,R
        #[arg(long, default_value = "1,1", value_parser = context_arg)]
        context: (usize, usize),
        /// Backoff reduction order baked into the table
        #[arg(long, default_value = "right-first")]
        reduce_order: ReduceOrder,
        /// Output directory for the artifacts
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Tag raw sentences (one per line) using built artifacts
    Tag {
        /// Directory holding table.txt, lexicon.txt and tagset.txt
        #[arg(long)]
        tables: PathBuf,
        /// Raw sentences, one per line, whitespace-tokenized
        #[arg(long)]
        input: PathBuf,
        /// Write the tagged corpus here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        ga: GaFlags,
    },
    /// Tag a gold corpus's sentences and report TAR
    Eval {
        /// Directory holding table.txt, lexicon.txt and tagset.txt
        #[arg(long)]
        tables: PathBuf,
        /// Gold tagged corpus to score against
        #[arg(long)]
        gold: PathBuf,
        /// Also write a one-row CSV in the sweep schema
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        ga: GaFlags,
    },
    /// Sweep one parameter axis and write a CSV of TAR results
    Sweep {
        /// Training corpus (word/TAG lines)
        #[arg(long)]
        train: PathBuf,
        /// Held-out test corpus (word/TAG lines)
        #[arg(long)]
        test: PathBuf,
        /// Tagset file shared by both corpora
        #[arg(long)]
        tagset: PathBuf,
        /// Axis to sweep
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values (context values as L-R)
        #[arg(long)]
        values: String,
        /// Seed replicates per value (replicate r uses seed + r)
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Context sizes L,R for axes that do not sweep them
        #[arg(long, default_value = "1,1", value_parser = context_arg)]
        context: (usize, usize),
        /// Measure wall time per cell (makes output non-reproducible)
        #[arg(long)]
        timing: bool,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ga: GaFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("GA_TAGGER_SEED") {
        Ok(value) => value.trim().parse().map_err(|_| {
            CliError::InvalidFlag(format!("GA_TAGGER_SEED={value:?} is not an integer"))
        }),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = resolve_seed(cli.seed)?;
    if cli.jobs == 0 {
        return Err(CliError::InvalidFlag("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
        .ok();
    match cli.command {
        Command::Build {
            corpus,
            tagset,
            context,
            reduce_order,
            out_dir,
        } => cmd_build(&corpus, &tagset, context, reduce_order, &out_dir),
        Command::Tag {
            tables,
            input,
            output,
            ga,
        } => cmd_tag(&tables, &input, output.as_deref(), &ga.config(seed)),
        Command::Eval {
            tables,
            gold,
            csv,
            ga,
        } => cmd_eval(&tables, &gold, csv.as_deref(), &ga.config(seed)),
        Command::Sweep {
            train,
            test,
            tagset,
            axis,
            values,
            reps,
            context,
            timing,
            out,
            ga,
        } => {
            let spec = SweepSpec {
                axis,
                values: sweep::parse_axis_values(axis, &values)?,
                base_config: ga.config(seed),
                base_context: context,
                repetitions: reps,
                measure_time: timing,
            };
            cmd_sweep(&spec, &train, &test, &tagset, &out)
        }
    }
}

fn cmd_build(
    corpus_path: &Path,
    tagset_path: &Path,
    context: (usize, usize),
    reduce_order: ReduceOrder,
    out_dir: &Path,
) -> Result<(), CliError> {
    let tagset = io::load_tagset_file(tagset_path)?;
    let corpus = io::load_corpus_file(corpus_path, &tagset)?;
    let as_table_err = |source| CliError::Table {
        path: corpus_path.display().to_string(),
        source,
    };
    let table = build_training_table(&corpus, context.0, context.1, reduce_order)
        .map_err(as_table_err)?;
    let lexicon = build_lexicon(&corpus).map_err(as_table_err)?;
    io::write_artifacts(out_dir, &tagset, &table, &lexicon)?;
    println!("sentences {}", corpus.len());
    println!("tokens {}", corpus.token_count());
    println!("windows {}", table.full_window_count());
    Ok(())
}

fn render_tagged(
    tagset: &gapos_core::tagset::Tagset,
    sentences: &[gapos_core::corpus::RawSentence],
    tags: &[Vec<TagId>],
) -> String {
    let mut out = String::new();
    for (sentence, sentence_tags) in sentences.iter().zip(tags) {
        for (i, (word, &tag)) in sentence.words().iter().zip(sentence_tags).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(word);
            out.push('/');
            out.push_str(tagset.name(tag));
        }
        out.push('\n');
    }
    out
}

fn cmd_tag(
    tables: &Path,
    input: &Path,
    output: Option<&Path>,
    config: &GaConfig,
) -> Result<(), CliError> {
    let artifacts = io::load_artifacts(tables)?;
    let sentences = io::load_raw_sentences(input)?;
    let params = FitnessParams::new(&artifacts.table);
    let outcomes =
        tag_sentences(&sentences, &artifacts.lexicon, &artifacts.tagset, &params, config)?;
    let tags: Vec<Vec<TagId>> = outcomes.into_iter().map(|o| o.tags).collect();
    let text = render_tagged(&artifacts.tagset, &sentences, &tags);
    match output {
        Some(path) => io::write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_eval(
    tables: &Path,
    gold_path: &Path,
    csv: Option<&Path>,
    config: &GaConfig,
) -> Result<(), CliError> {
    let artifacts = io::load_artifacts(tables)?;
    let gold: TaggedCorpus = io::load_corpus_file(gold_path, &artifacts.tagset)?;
    let sentences: Vec<gapos_core::corpus::RawSentence> =
        gold.sentences().iter().map(|s| s.to_raw()).collect();
    let params = FitnessParams::new(&artifacts.table);
    let outcomes =
        tag_sentences(&sentences, &artifacts.lexicon, &artifacts.tagset, &params, config)?;
    let hypothesis: Vec<Vec<TagId>> = outcomes.iter().map(|o| o.tags.clone()).collect();
    let acc = metrics::accuracy(&gold, &hypothesis)?;
    println!("sentences {}", acc.total_sentences);
    println!("tokens {}", acc.total_tokens);
    println!("tar_token {:.6}", acc.token_rate());
    println!("tar_sentence {:.6}", acc.sentence_rate());
    if let Some(path) = csv {
        let result = sweep::SweepResult {
            rows: vec![sweep::SweepRow {
                axis_value: "eval".into(),
                seed: config.seed,
                tar_token: acc.token_rate(),
                tar_sentence: acc.sentence_rate(),
                wall_ms: 0,
                fitness_evals: mean_evaluations(&outcomes),
            }],
        };
        io::write_file(path, &sweep::write_results(&result))?;
    }
    Ok(())
}

fn cmd_sweep(
    spec: &SweepSpec,
    train_path: &Path,
    test_path: &Path,
    tagset_path: &Path,
    out: &Path,
) -> Result<(), CliError> {
    let tagset = io::load_tagset_file(tagset_path)?;
    let train = io::load_corpus_file(train_path, &tagset)?;
    let test = io::load_corpus_file(test_path, &tagset)?;
    let result = sweep::run_sweep(spec, &train, &test)?;
    io::write_file(out, &sweep::write_results(&result))?;
    println!("wrote {} ({} rows)", out.display(), result.rows.len());
    Ok(())
}
