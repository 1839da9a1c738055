//! File-level loading and saving around the core text formats.

use std::fs;
use std::path::Path;

use gapos_core::corpus::{parse_tagged_corpus, RawSentence, TaggedCorpus};
use gapos_core::tables::{load_lexicon, load_table, save_lexicon, save_table, Lexicon, TrainingTable};
use gapos_core::tagset::{load_tagset, Tagset};

use crate::error::CliError;

pub const TAGSET_FILE: &str = "tagset.txt";
pub const TABLE_FILE: &str = "table.txt";
pub const LEXICON_FILE: &str = "lexicon.txt";

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::ReadInput {
        path: path_str(path),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::WriteOutput {
        path: path_str(path),
        source,
    })
}

pub fn load_tagset_file(path: &Path) -> Result<Tagset, CliError> {
    load_tagset(&read_to_string(path)?).map_err(|source| CliError::Tagset {
        path: path_str(path),
        source,
    })
}

pub fn load_corpus_file(path: &Path, tagset: &Tagset) -> Result<TaggedCorpus, CliError> {
    parse_tagged_corpus(&read_to_string(path)?, tagset).map_err(|source| CliError::Corpus {
        path: path_str(path),
        source,
    })
}

/// One raw sentence per line, whitespace-tokenized; blank lines skipped.
pub fn load_raw_sentences(path: &Path) -> Result<Vec<RawSentence>, CliError> {
    let text = read_to_string(path)?;
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| {
            RawSentence::from_line(line).map_err(|source| CliError::Corpus {
                path: path_str(path),
                source,
            })
        })
        .collect()
}

/// Everything a tagging run needs, as produced by `gapos build`.
pub struct Artifacts {
    pub tagset: Tagset,
    pub table: TrainingTable,
    pub lexicon: Lexicon,
}

/// Writes tagset, table and lexicon into `dir` (created if missing).
pub fn write_artifacts(
    dir: &Path,
    tagset: &Tagset,
    table: &TrainingTable,
    lexicon: &Lexicon,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::WriteOutput {
        path: path_str(dir),
        source,
    })?;
    let mut tagset_text = String::new();
    for id in tagset.ids() {
        tagset_text.push_str(tagset.name(id));
        tagset_text.push('\n');
    }
    write_file(&dir.join(TAGSET_FILE), &tagset_text)?;
    write_file(&dir.join(TABLE_FILE), &save_table(table, tagset))?;
    write_file(&dir.join(LEXICON_FILE), &save_lexicon(lexicon, tagset))?;
    Ok(())
}

pub fn load_artifacts(dir: &Path) -> Result<Artifacts, CliError> {
    let tagset = load_tagset_file(&dir.join(TAGSET_FILE))?;
    let table_path = dir.join(TABLE_FILE);
    let table = load_table(&read_to_string(&table_path)?, &tagset).map_err(|source| {
        CliError::Table {
            path: path_str(&table_path),
            source,
        }
    })?;
    let lexicon_path = dir.join(LEXICON_FILE);
    let lexicon = load_lexicon(&read_to_string(&lexicon_path)?, &tagset).map_err(|source| {
        CliError::Table {
            path: path_str(&lexicon_path),
            source,
        }
    })?;
    Ok(Artifacts {
        tagset,
        table,
        lexicon,
    })
}
