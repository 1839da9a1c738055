//! Parameter sweeps over one axis, with CSV output.
//!
//! A sweep re-tags the test corpus once per (axis value, replicate) cell.
//! Axes that change the training data (corpus fraction, context size)
//! rebuild the affected artifacts; the others only adjust the GA config.
//! Replicate `r` runs with seed `base seed + r`. Rows are ordered by
//! (value, replicate) regardless of how cells execute.
//!
//! CSV schema: `axis_value,seed,tar_token,tar_sentence,wall_ms,fitness_evals`
//! with 6-decimal floats. Wall time is only measured when `measure_time`
//! is set; otherwise the column is 0 so output is byte-reproducible.

use std::time::Instant;

use gapos_core::corpus::{take_prefix, RawSentence, TaggedCorpus};
use gapos_core::fitness::FitnessParams;
use gapos_core::ga::{CrossoverKind, GaConfig};
use gapos_core::metrics;
use gapos_core::tables::{build_lexicon, build_training_table, Lexicon, ReduceOrder, TrainingTable};

use crate::error::CliError;
use crate::tagging::{mean_evaluations, tag_sentences};

/// The swept parameter, one per experiment family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    CorpusFraction,
    ContextSize,
    PopulationSize,
    MutationRate,
    CrossoverKind,
    CrossoverRate,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::CorpusFraction => "corpus-fraction",
            SweepAxis::ContextSize => "context-size",
            SweepAxis::PopulationSize => "population-size",
            SweepAxis::MutationRate => "mutation-rate",
            SweepAxis::CrossoverKind => "crossover-kind",
            SweepAxis::CrossoverRate => "crossover-rate",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corpus-fraction" => Ok(SweepAxis::CorpusFraction),
            "context-size" => Ok(SweepAxis::ContextSize),
            "population-size" => Ok(SweepAxis::PopulationSize),
            "mutation-rate" => Ok(SweepAxis::MutationRate),
            "crossover-kind" => Ok(SweepAxis::CrossoverKind),
            "crossover-rate" => Ok(SweepAxis::CrossoverRate),
            other => Err(format!(
                "unknown axis {other:?} (expected corpus-fraction, context-size, \
                 population-size, mutation-rate, crossover-kind or crossover-rate)"
            )),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One value on a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisValue {
    Fraction(f64),
    Context(usize, usize),
    Population(usize),
    MutationRate(f64),
    CrossoverKind(CrossoverKind),
    CrossoverRate(f64),
}

impl AxisValue {
    /// Canonical CSV label.
    pub fn label(&self) -> String {
        match self {
            AxisValue::Fraction(x) => format!("{x}"),
            AxisValue::Context(l, r) => format!("{l}-{r}"),
            AxisValue::Population(p) => format!("{p}"),
            AxisValue::MutationRate(x) | AxisValue::CrossoverRate(x) => format!("{x}"),
            AxisValue::CrossoverKind(k) => k.as_str().to_string(),
        }
    }
}

/// Parses `L,R` or `L-R`.
pub fn parse_context(s: &str) -> Result<(usize, usize), String> {
    let (l, r) = s
        .split_once(',')
        .or_else(|| s.split_once('-'))
        .ok_or_else(|| format!("context {s:?} is not of the form L,R"))?;
    let l: usize = l.trim().parse().map_err(|_| format!("bad left size {l:?}"))?;
    let r: usize = r.trim().parse().map_err(|_| format!("bad right size {r:?}"))?;
    if l + r == 0 {
        return Err("context must have l_lc + l_rc >= 1".into());
    }
    Ok((l, r))
}

/// Parses the comma-separated `--values` list for an axis.
pub fn parse_axis_values(axis: SweepAxis, list: &str) -> Result<Vec<AxisValue>, CliError> {
    let bad = |msg: String| CliError::InvalidFlag(msg);
    let mut values = Vec::new();
    let items: Vec<&str> = match axis {
        // context values contain no commas; they use L-R
        SweepAxis::ContextSize => list.split(',').collect(),
        _ => list.split(',').collect(),
    };
    for item in items {
        let item = item.trim();
        if item.is_empty() {
            return Err(bad("empty value in --values".into()));
        }
        let value = match axis {
            SweepAxis::CorpusFraction => {
                let x: f64 = item
                    .parse()
                    .map_err(|_| bad(format!("bad fraction {item:?}")))?;
                if !(x > 0.0 && x <= 1.0) {
                    return Err(bad(format!("fraction {x} outside (0, 1]")));
                }
                AxisValue::Fraction(x)
            }
            SweepAxis::ContextSize => {
                let (l, r) = parse_context(item).map_err(bad)?;
                AxisValue::Context(l, r)
            }
            SweepAxis::PopulationSize => {
                let p: usize = item
                    .parse()
                    .map_err(|_| bad(format!("bad population size {item:?}")))?;
                if p < 2 {
                    return Err(bad(format!("population size {p} below 2")));
                }
                AxisValue::Population(p)
            }
            SweepAxis::MutationRate | SweepAxis::CrossoverRate => {
                let x: f64 = item.parse().map_err(|_| bad(format!("bad rate {item:?}")))?;
                if !(0.0..=1.0).contains(&x) {
                    return Err(bad(format!("rate {x} outside [0, 1]")));
                }
                if axis == SweepAxis::MutationRate {
                    AxisValue::MutationRate(x)
                } else {
                    AxisValue::CrossoverRate(x)
                }
            }
            SweepAxis::CrossoverKind => AxisValue::CrossoverKind(
                item.parse().map_err(|e: &str| bad(e.to_string()))?,
            ),
        };
        values.push(value);
    }
    if values.is_empty() {
        return Err(bad("--values must list at least one value".into()));
    }
    Ok(values)
}

/// One sweep experiment: an axis, its values, the settings every cell
/// shares, and the replicate count.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<AxisValue>,
    pub base_config: GaConfig,
    pub base_context: (usize, usize),
    pub repetitions: usize,
    /// Measure wall time per cell; off by default so reruns are
    /// byte-identical.
    pub measure_time: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: String,
    pub seed: u64,
    pub tar_token: f64,
    pub tar_sentence: f64,
    pub wall_ms: u64,
    pub fitness_evals: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

const CSV_HEADER: &str = "axis_value,seed,tar_token,tar_sentence,wall_ms,fitness_evals";

/// Renders the CSV text: header plus one row per (value, replicate).
pub fn write_results(result: &SweepResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{},{:.6}\n",
            row.axis_value, row.seed, row.tar_token, row.tar_sentence, row.wall_ms, row.fitness_evals
        ));
    }
    out
}

/// Parses CSV produced by [`write_results`].
pub fn read_results(text: &str) -> Result<SweepResult, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => return Err(CliError::Csv(format!("bad CSV header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Csv(format!("row {}: expected 6 fields", i + 2)));
        }
        let parse_f64 = |s: &str| -> Result<f64, CliError> {
            s.parse()
                .map_err(|_| CliError::Csv(format!("row {}: bad number {s:?}", i + 2)))
        };
        let parse_u64 = |s: &str| -> Result<u64, CliError> {
            s.parse()
                .map_err(|_| CliError::Csv(format!("row {}: bad integer {s:?}", i + 2)))
        };
        rows.push(SweepRow {
            axis_value: fields[0].to_string(),
            seed: parse_u64(fields[1])?,
            tar_token: parse_f64(fields[2])?,
            tar_sentence: parse_f64(fields[3])?,
            wall_ms: parse_u64(fields[4])?,
            fitness_evals: parse_f64(fields[5])?,
        });
    }
    Ok(SweepResult { rows })
}

fn apply_axis(config: GaConfig, value: &AxisValue) -> GaConfig {
    let mut config = config;
    match value {
        AxisValue::Population(p) => config.population_size = *p,
        AxisValue::MutationRate(x) => config.mutation_rate = *x,
        AxisValue::CrossoverRate(x) => config.crossover_rate = *x,
        AxisValue::CrossoverKind(k) => config.crossover = *k,
        AxisValue::Fraction(_) | AxisValue::Context(_, _) => {}
    }
    config
}

/// Runs every (axis value, replicate) cell and collects one row each.
pub fn run_sweep(
    spec: &SweepSpec,
    train: &TaggedCorpus,
    test: &TaggedCorpus,
) -> Result<SweepResult, CliError> {
    if spec.repetitions < 1 {
        return Err(CliError::InvalidFlag("repetitions must be at least 1".into()));
    }
    if spec.values.is_empty() {
        return Err(CliError::InvalidFlag("no axis values to sweep".into()));
    }
    if train.tagset() != test.tagset() {
        return Err(CliError::InvalidFlag(
            "train and test corpora use different tagsets".into(),
        ));
    }
    if test.is_empty() {
        return Err(CliError::InvalidFlag("test corpus is empty".into()));
    }
    let tagset = train.tagset();
    let as_table_err = |source| CliError::Table {
        path: "<train corpus>".into(),
        source,
    };
    let base_lexicon = build_lexicon(train).map_err(as_table_err)?;
    let (l_lc, l_rc) = spec.base_context;
    // axes that leave the training data alone share one table
    let static_table: Option<TrainingTable> = match spec.axis {
        SweepAxis::CorpusFraction | SweepAxis::ContextSize => None,
        _ => Some(
            build_training_table(train, l_lc, l_rc, ReduceOrder::RightFirst)
                .map_err(as_table_err)?,
        ),
    };
    let test_sentences: Vec<RawSentence> =
        test.sentences().iter().map(|s| s.to_raw()).collect();

    let mut rows = Vec::with_capacity(spec.values.len() * spec.repetitions);
    for value in &spec.values {
        let mut owned_table: Option<TrainingTable> = None;
        let mut owned_lexicon: Option<Lexicon> = None;
        match value {
            AxisValue::Fraction(f) => {
                let sub = take_prefix(train, *f).map_err(|source| CliError::Corpus {
                    path: "<train corpus>".into(),
                    source,
                })?;
                owned_table = Some(
                    build_training_table(&sub, l_lc, l_rc, ReduceOrder::RightFirst)
                        .map_err(as_table_err)?,
                );
                owned_lexicon = Some(build_lexicon(&sub).map_err(as_table_err)?);
            }
            AxisValue::Context(l, r) => {
                owned_table = Some(
                    build_training_table(train, *l, *r, ReduceOrder::RightFirst)
                        .map_err(as_table_err)?,
                );
            }
            _ => {}
        }
        let table = owned_table
            .as_ref()
            .or(static_table.as_ref())
            .expect("a table is always available");
        let lexicon = owned_lexicon.as_ref().unwrap_or(&base_lexicon);
        let params = FitnessParams::new(table);
        let config = apply_axis(spec.base_config, value);
        for replicate in 0..spec.repetitions {
            let mut cell_config = config;
            cell_config.seed = spec.base_config.seed + replicate as u64;
            let start = Instant::now();
            let outcomes =
                tag_sentences(&test_sentences, lexicon, tagset, &params, &cell_config)?;
            let wall_ms = if spec.measure_time {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            let hypothesis: Vec<Vec<gapos_core::tagset::TagId>> =
                outcomes.iter().map(|o| o.tags.clone()).collect();
            let acc = metrics::accuracy(test, &hypothesis)?;
            rows.push(SweepRow {
                axis_value: value.label(),
                seed: cell_config.seed,
                tar_token: acc.token_rate(),
                tar_sentence: acc.sentence_rate(),
                wall_ms,
                fitness_evals: mean_evaluations(&outcomes),
            });
        }
    }
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_parse_and_label() {
        let vals = parse_axis_values(SweepAxis::ContextSize, "1-1,2-2,3-2").unwrap();
        assert_eq!(
            vals,
            vec![
                AxisValue::Context(1, 1),
                AxisValue::Context(2, 2),
                AxisValue::Context(3, 2)
            ]
        );
        assert_eq!(vals[1].label(), "2-2");
        let vals = parse_axis_values(SweepAxis::CrossoverKind, "uniform,one-point").unwrap();
        assert_eq!(vals[1].label(), "one-point");
        let vals = parse_axis_values(SweepAxis::CorpusFraction, "0.1,0.5,1.0").unwrap();
        assert_eq!(vals[0].label(), "0.1");
        assert!(parse_axis_values(SweepAxis::CorpusFraction, "0").is_err());
        assert!(parse_axis_values(SweepAxis::PopulationSize, "1").is_err());
        assert!(parse_axis_values(SweepAxis::MutationRate, "1.5").is_err());
        assert!(parse_axis_values(SweepAxis::CrossoverKind, "zigzag").is_err());
    }

    #[test]
    fn csv_round_trip_and_empty_result() {
        let empty = SweepResult::default();
        let text = write_results(&empty);
        assert_eq!(text, format!("{CSV_HEADER}\n"));
        assert_eq!(read_results(&text).unwrap(), empty);

        let result = SweepResult {
            rows: vec![SweepRow {
                axis_value: "2-2".into(),
                seed: 7,
                tar_token: 0.875,
                tar_sentence: 0.5,
                wall_ms: 0,
                fitness_evals: 1830.25,
            }],
        };
        let text = write_results(&result);
        assert_eq!(
            text,
            format!("{CSV_HEADER}\n2-2,7,0.875000,0.500000,0,1830.250000\n")
        );
        let reread = read_results(&text).unwrap();
        assert_eq!(write_results(&reread), text);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(read_results("nope\n").is_err());
        let text = format!("{CSV_HEADER}\na,b,c\n");
        assert!(read_results(&text).is_err());
        let text = format!("{CSV_HEADER}\nx,1,0.5,0.5,0,zz\n");
        assert!(read_results(&text).is_err());
    }

    #[test]
    fn context_parse_accepts_both_separators() {
        assert_eq!(parse_context("1,1").unwrap(), (1, 1));
        assert_eq!(parse_context("3-2").unwrap(), (3, 2));
        assert!(parse_context("0,0").is_err());
        assert!(parse_context("x,1").is_err());
    }

    #[test]
    fn more_repetitions_keep_prior_rows() {
        use gapos_core::corpus::parse_tagged_corpus;
        use gapos_core::tagset::load_tagset;

        let ts = load_tagset("X\nY").unwrap();
        let text = "a/X b/Y\nb/Y a/X c/X\nc/Y a/X\na/X c/X b/Y\n";
        let corpus = parse_tagged_corpus(text, &ts).unwrap();
        let base = SweepSpec {
            axis: SweepAxis::MutationRate,
            values: parse_axis_values(SweepAxis::MutationRate, "0.0,0.2").unwrap(),
            base_config: GaConfig {
                population_size: 4,
                generations: 2,
                seed: 11,
                ..GaConfig::default()
            },
            base_context: (1, 1),
            repetitions: 2,
            measure_time: false,
        };
        let two = run_sweep(&base, &corpus, &corpus).unwrap();
        let mut three_spec = base.clone();
        three_spec.repetitions = 3;
        let three = run_sweep(&three_spec, &corpus, &corpus).unwrap();
        assert_eq!(two.rows.len(), 4);
        assert_eq!(three.rows.len(), 6);
        // every (value, replicate) cell of the smaller sweep is bit-identical
        let kept: Vec<&SweepRow> = three
            .rows
            .iter()
            .filter(|r| r.seed < base.base_config.seed + 2)
            .collect();
        assert_eq!(kept.len(), two.rows.len());
        for (a, b) in kept.iter().zip(&two.rows) {
            assert_eq!(*a, b);
        }
    }
}
