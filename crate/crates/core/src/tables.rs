//! Training table and lexicon.
//!
//! The training table counts, for every token position of a tagged corpus,
//! the window `LC.. T RC..` of surrounding tags (NULL-padded at sentence
//! boundaries) together with every reduced window on the backoff schedule,
//! so that backoff queries are O(1) lookups. The lexicon records the tags
//! observed with each word.
//!
//! Windows are stored flattened as the plain tag sequence `LC.. T RC..`.
//! Within one reduction schedule every backoff level has a distinct total
//! width, so the sequence length alone identifies the LC/RC split; this is
//! also what makes the text format below unambiguous.
//!
//! Table file: header `<version> <l_lc> <l_rc> <total_tokens> <order>`,
//! then one window per line, `LC.. T RC.. count`, NULL spelled `NULL`,
//! single spaces, sorted, LF. Lexicon file: header `<version> <words>`,
//! then `word TAG:count ...` per line, pairs by descending count
//! (ties: ascending tag index), sorted by word.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::TaggedCorpus;
use crate::tagset::{TagId, Tagset};

/// Which outermost context tag the backoff drops first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReduceOrder {
    /// Drop the outermost right-context tag first.
    #[default]
    RightFirst,
    /// Drop the outermost left-context tag first.
    LeftFirst,
}

impl ReduceOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            ReduceOrder::RightFirst => "right-first",
            ReduceOrder::LeftFirst => "left-first",
        }
    }
}

impl core::str::FromStr for ReduceOrder {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "right-first" => Ok(ReduceOrder::RightFirst),
            "left-first" => Ok(ReduceOrder::LeftFirst),
            _ => Err("expected right-first or left-first"),
        }
    }
}

impl fmt::Display for ReduceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The sequence of `(lc_len, rc_len)` window shapes visited by backoff,
/// from the full window down to the bare tag. One context tag is dropped
/// per step, alternating sides starting with `order`'s side and skipping
/// a side once it is empty, so total width decreases by exactly one per
/// level.
pub fn backoff_schedule(l_lc: usize, l_rc: usize, order: ReduceOrder) -> Vec<(usize, usize)> {
    let mut levels = Vec::with_capacity(l_lc + l_rc + 1);
    let (mut lc, mut rc) = (l_lc, l_rc);
    levels.push((lc, rc));
    let mut drop_primary = true;
    while lc + rc > 0 {
        let right_turn = match order {
            ReduceOrder::RightFirst => drop_primary,
            ReduceOrder::LeftFirst => !drop_primary,
        };
        if right_turn {
            if rc > 0 {
                rc -= 1;
                levels.push((lc, rc));
            }
        } else if lc > 0 {
            lc -= 1;
            levels.push((lc, rc));
        }
        drop_primary = !drop_primary;
    }
    levels
}

/// A decoded context window: `lc` leftmost-first (farthest from the tag),
/// `rc` nearest-first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Window {
    pub lc: Vec<TagId>,
    pub tag: TagId,
    pub rc: Vec<TagId>,
}

/// Counts of context windows (full and reduced) over a tagged corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingTable {
    l_lc: usize,
    l_rc: usize,
    order: ReduceOrder,
    schedule: Vec<(usize, usize)>,
    /// Flattened `LC.. T RC..` -> count, all schedule levels.
    counts: BTreeMap<Vec<TagId>, u64>,
    /// Flattened `LC.. RC..` -> sum of counts over the tag slot.
    context_totals: BTreeMap<Vec<TagId>, u64>,
    /// Indexed by tag; NULL is always 0.
    tag_totals: Vec<u64>,
    total_tokens: u64,
    null: TagId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    EmptyCorpus,
    /// `l_lc + l_rc` must be at least 1.
    ZeroContext,
    VersionMismatch { found: String },
    Parse { line: usize, kind: TableParseKind },
    /// Header total does not match the unigram rows.
    TotalMismatch { header: u64, counted: u64 },
    EmptyLexicon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableParseKind {
    Header,
    MalformedRow,
    UnknownTag(String),
    BadCount(String),
    NullTag,
    /// Row width does not correspond to any backoff level.
    BadWidth,
    /// NULL appears somewhere other than boundary padding.
    BadPadding,
    DuplicateRow,
    DuplicateWord(String),
    WordCount { header: usize, counted: usize },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::EmptyCorpus => write!(f, "corpus has no sentences"),
            TableError::ZeroContext => write!(f, "context window must have l_lc + l_rc >= 1"),
            TableError::VersionMismatch { found } => {
                write!(f, "unsupported format version {found:?} (expected 1)")
            }
            TableError::Parse { line, kind } => write!(f, "line {line}: {kind}"),
            TableError::TotalMismatch { header, counted } => {
                write!(f, "token total {header} in header but {counted} counted")
            }
            TableError::EmptyLexicon => write!(f, "lexicon has no entries"),
        }
    }
}

impl fmt::Display for TableParseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableParseKind::Header => write!(f, "malformed header"),
            TableParseKind::MalformedRow => write!(f, "malformed row"),
            TableParseKind::UnknownTag(t) => write!(f, "unknown tag {t:?}"),
            TableParseKind::BadCount(c) => write!(f, "bad count {c:?}"),
            TableParseKind::NullTag => write!(f, "NULL in the tag slot"),
            TableParseKind::BadWidth => write!(f, "row width matches no backoff level"),
            TableParseKind::BadPadding => write!(f, "NULL outside boundary padding"),
            TableParseKind::DuplicateRow => write!(f, "duplicate window"),
            TableParseKind::DuplicateWord(w) => write!(f, "duplicate word {w:?}"),
            TableParseKind::WordCount { header, counted } => {
                write!(f, "{header} words in header but {counted} rows")
            }
        }
    }
}

impl core::error::Error for TableError {}

/// Writes the flattened window `LC.. tag RC..` for position `i` of `tags`
/// at level `(a, b)` into `buf`, NULL-padding beyond the ends. The slot
/// tag is passed explicitly so callers can score alternatives.
pub(crate) fn push_window(
    tags: &[TagId],
    i: usize,
    tag: TagId,
    a: usize,
    b: usize,
    null: TagId,
    buf: &mut Vec<TagId>,
) {
    buf.clear();
    for d in (1..=a).rev() {
        buf.push(if i >= d { tags[i - d] } else { null });
    }
    buf.push(tag);
    for d in 1..=b {
        buf.push(*tags.get(i + d).unwrap_or(&null));
    }
}

/// Counts every window and its backoff reductions over the corpus.
pub fn build_training_table(
    corpus: &TaggedCorpus,
    l_lc: usize,
    l_rc: usize,
    order: ReduceOrder,
) -> Result<TrainingTable, TableError> {
    if corpus.is_empty() {
        return Err(TableError::EmptyCorpus);
    }
    if l_lc + l_rc == 0 {
        return Err(TableError::ZeroContext);
    }
    let tagset = corpus.tagset();
    let null = tagset.null();
    let schedule = backoff_schedule(l_lc, l_rc, order);
    let mut counts: BTreeMap<Vec<TagId>, u64> = BTreeMap::new();
    let mut context_totals: BTreeMap<Vec<TagId>, u64> = BTreeMap::new();
    let mut tag_totals = alloc::vec![0u64; tagset.len()];
    let mut total_tokens = 0u64;
    let mut buf = Vec::with_capacity(l_lc + l_rc + 1);
    for sentence in corpus.sentences() {
        let tags: Vec<TagId> = sentence.tags().collect();
        for i in 0..tags.len() {
            tag_totals[tags[i].index()] += 1;
            total_tokens += 1;
            for &(a, b) in &schedule {
                push_window(&tags, i, tags[i], a, b, null, &mut buf);
                *counts.entry(buf.clone()).or_insert(0) += 1;
                buf.remove(a); // drop the tag slot: the context key
                *context_totals.entry(buf.clone()).or_insert(0) += 1;
            }
        }
    }
    Ok(TrainingTable {
        l_lc,
        l_rc,
        order,
        schedule,
        counts,
        context_totals,
        tag_totals,
        total_tokens,
        null,
    })
}

impl TrainingTable {
    pub fn l_lc(&self) -> usize {
        self.l_lc
    }

    pub fn l_rc(&self) -> usize {
        self.l_rc
    }

    pub fn order(&self) -> ReduceOrder {
        self.order
    }

    pub fn schedule(&self) -> &[(usize, usize)] {
        &self.schedule
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn tag_total(&self, tag: TagId) -> u64 {
        self.tag_totals[tag.index()]
    }

    /// Count of tags in the table, including NULL.
    pub fn tag_count(&self) -> usize {
        self.tag_totals.len()
    }

    pub(crate) fn null(&self) -> TagId {
        self.null
    }

    pub(crate) fn count_of(&self, flat: &[TagId]) -> u64 {
        self.counts.get(flat).copied().unwrap_or(0)
    }

    pub(crate) fn context_count_of(&self, flat: &[TagId]) -> u64 {
        self.context_totals.get(flat).copied().unwrap_or(0)
    }

    /// Occurrences of the window `(lc, tag, rc)`. Returns 0 when the shape
    /// `(|lc|, |rc|)` is not a level of this table's schedule.
    pub fn occurrences(&self, lc: &[TagId], tag: TagId, rc: &[TagId]) -> u64 {
        if !self.schedule.contains(&(lc.len(), rc.len())) {
            return 0;
        }
        let mut key = Vec::with_capacity(lc.len() + 1 + rc.len());
        key.extend_from_slice(lc);
        key.push(tag);
        key.extend_from_slice(rc);
        self.count_of(&key)
    }

    /// Sum of occurrences over all tags in the context `(lc, rc)`.
    pub fn context_total(&self, lc: &[TagId], rc: &[TagId]) -> u64 {
        if !self.schedule.contains(&(lc.len(), rc.len())) {
            return 0;
        }
        let mut key = Vec::with_capacity(lc.len() + rc.len());
        key.extend_from_slice(lc);
        key.extend_from_slice(rc);
        self.context_count_of(&key)
    }

    fn level_for_width(&self, tag_width: usize) -> Option<(usize, usize)> {
        let full = self.l_lc + self.l_rc + 1;
        if tag_width == 0 || tag_width > full {
            return None;
        }
        Some(self.schedule[full - tag_width])
    }

    /// All stored windows (every schedule level) with their counts.
    pub fn windows(&self) -> impl Iterator<Item = (Window, u64)> + '_ {
        self.counts.iter().map(|(flat, &count)| {
            let (a, _) = self
                .level_for_width(flat.len())
                .expect("stored keys always match a level");
            (
                Window {
                    lc: flat[..a].to_vec(),
                    tag: flat[a],
                    rc: flat[a + 1..].to_vec(),
                },
                count,
            )
        })
    }

    /// Number of distinct full-width windows.
    pub fn full_window_count(&self) -> usize {
        let full = self.l_lc + self.l_rc + 1;
        self.counts.keys().filter(|k| k.len() == full).count()
    }
}

/// Serializes a table, sorted by the flattened tag sequence.
pub fn save_table(table: &TrainingTable, tagset: &Tagset) -> String {
    let mut out = String::new();
    out.push_str(&alloc::format!(
        "1 {} {} {} {}\n",
        table.l_lc,
        table.l_rc,
        table.total_tokens,
        table.order.as_str()
    ));
    for (flat, count) in &table.counts {
        for &id in flat {
            out.push_str(tagset.name(id));
            out.push(' ');
        }
        out.push_str(&alloc::format!("{count}\n"));
    }
    out
}

/// Parses a table file against `tagset`; inverse of [`save_table`].
pub fn load_table(text: &str, tagset: &Tagset) -> Result<TrainingTable, TableError> {
    let parse_err = |line, kind| TableError::Parse { line, kind };
    let mut lines = text.lines().enumerate();
    let (version, l_lc, l_rc, header_total, order) = loop {
        match lines.next() {
            Some((_, line)) if line.is_empty() => continue,
            Some((idx, line)) => {
                let fields: Vec<&str> = line.split(' ').collect();
                if fields.len() != 5 {
                    return Err(parse_err(idx + 1, TableParseKind::Header));
                }
                let version = fields[0].to_string();
                let nums: Option<(usize, usize, u64)> = (|| {
                    Some((
                        fields[1].parse().ok()?,
                        fields[2].parse().ok()?,
                        fields[3].parse().ok()?,
                    ))
                })();
                let (l_lc, l_rc, total) =
                    nums.ok_or_else(|| parse_err(idx + 1, TableParseKind::Header))?;
                let order: ReduceOrder = fields[4]
                    .parse()
                    .map_err(|_| parse_err(idx + 1, TableParseKind::Header))?;
                break (version, l_lc, l_rc, total, order);
            }
            None => return Err(parse_err(1, TableParseKind::Header)),
        }
    };
    if version != "1" {
        return Err(TableError::VersionMismatch { found: version });
    }
    if l_lc + l_rc == 0 {
        return Err(TableError::ZeroContext);
    }
    let null = tagset.null();
    let schedule = backoff_schedule(l_lc, l_rc, order);
    let full_width = l_lc + l_rc + 1;
    let mut counts: BTreeMap<Vec<TagId>, u64> = BTreeMap::new();
    let mut context_totals: BTreeMap<Vec<TagId>, u64> = BTreeMap::new();
    let mut tag_totals = alloc::vec![0u64; tagset.len()];
    let mut counted_total = 0u64;
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() < 2 {
            return Err(parse_err(lineno, TableParseKind::MalformedRow));
        }
        let count: u64 = fields[fields.len() - 1]
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| {
                parse_err(
                    lineno,
                    TableParseKind::BadCount(fields[fields.len() - 1].to_string()),
                )
            })?;
        let tag_fields = &fields[..fields.len() - 1];
        if tag_fields.len() > full_width {
            return Err(parse_err(lineno, TableParseKind::BadWidth));
        }
        let (a, b) = schedule[full_width - tag_fields.len()];
        let mut flat = Vec::with_capacity(tag_fields.len());
        for name in tag_fields {
            let id = tagset
                .id(name)
                .ok_or_else(|| parse_err(lineno, TableParseKind::UnknownTag(name.to_string())))?;
            flat.push(id);
        }
        if flat[a] == null {
            return Err(parse_err(lineno, TableParseKind::NullTag));
        }
        // NULL only as boundary padding: a contiguous run at the far end.
        let lc_ok = flat[..a]
            .iter()
            .skip_while(|&&t| t == null)
            .all(|&t| t != null);
        let rc_ok = flat[a + 1..]
            .iter()
            .skip_while(|&&t| t != null)
            .all(|&t| t == null);
        if !lc_ok || !rc_ok {
            return Err(parse_err(lineno, TableParseKind::BadPadding));
        }
        let mut context = flat.clone();
        context.remove(a);
        if (a, b) == (0, 0) {
            tag_totals[flat[0].index()] = count;
            counted_total += count;
        }
        *context_totals.entry(context).or_insert(0) += count;
        if counts.insert(flat, count).is_some() {
            return Err(parse_err(lineno, TableParseKind::DuplicateRow));
        }
    }
    if counted_total != header_total {
        return Err(TableError::TotalMismatch {
            header: header_total,
            counted: counted_total,
        });
    }
    Ok(TrainingTable {
        l_lc,
        l_rc,
        order,
        schedule,
        counts,
        context_totals,
        tag_totals,
        total_tokens: header_total,
        null,
    })
}

/// Tags observed with each word, with per-word and global frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    /// Word -> (tag, count), sorted by descending count then ascending tag.
    entries: BTreeMap<String, Vec<(TagId, u64)>>,
    tag_totals: Vec<u64>,
    total_tokens: u64,
}

/// Counts `(word, tag)` co-occurrences over the corpus.
pub fn build_lexicon(corpus: &TaggedCorpus) -> Result<Lexicon, TableError> {
    if corpus.is_empty() {
        return Err(TableError::EmptyCorpus);
    }
    let mut raw: BTreeMap<String, BTreeMap<TagId, u64>> = BTreeMap::new();
    for sentence in corpus.sentences() {
        for tok in sentence.tokens() {
            *raw.entry(tok.word.clone()).or_default().entry(tok.tag).or_insert(0) += 1;
        }
    }
    let mut lexicon = Lexicon {
        entries: BTreeMap::new(),
        tag_totals: alloc::vec![0u64; corpus.tagset().len()],
        total_tokens: 0,
    };
    for (word, tag_counts) in raw {
        let mut pairs: Vec<(TagId, u64)> = tag_counts.into_iter().collect();
        pairs.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        for &(tag, count) in &pairs {
            lexicon.tag_totals[tag.index()] += count;
            lexicon.total_tokens += count;
        }
        lexicon.entries.insert(word, pairs);
    }
    Ok(lexicon)
}

impl Lexicon {
    /// Observed `(tag, count)` pairs for a known word, best-first.
    pub fn known_tags(&self, word: &str) -> Option<&[(TagId, u64)]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Most frequent tag of a known word (ties: lowest tag index).
    pub fn argmax(&self, word: &str) -> Option<TagId> {
        self.entries.get(word).map(|pairs| pairs[0].0)
    }

    /// Most frequent tag corpus-wide (ties: lowest tag index).
    pub fn global_argmax(&self) -> TagId {
        let (index, _) = self
            .tag_totals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("lexicon is never empty");
        TagId::from_index(index)
    }

    pub fn tag_total(&self, tag: TagId) -> u64 {
        self.tag_totals[tag.index()]
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn word_count(&self) -> usize {
        self.entries.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Tags the GA may assign to `word`: the observed tags by descending count
/// (ties: ascending index) for known words, every assignable tag for
/// unknown words.
pub fn valid_tags(lexicon: &Lexicon, word: &str, tagset: &Tagset) -> Vec<TagId> {
    match lexicon.known_tags(word) {
        Some(pairs) => pairs.iter().map(|&(tag, _)| tag).collect(),
        None => tagset.assignable_ids().collect(),
    }
}

/// Serializes a lexicon, sorted by word.
pub fn save_lexicon(lexicon: &Lexicon, tagset: &Tagset) -> String {
    let mut out = alloc::format!("1 {}\n", lexicon.entries.len());
    for (word, pairs) in &lexicon.entries {
        out.push_str(word);
        for &(tag, count) in pairs {
            out.push_str(&alloc::format!(" {}:{count}", tagset.name(tag)));
        }
        out.push('\n');
    }
    out
}

/// Parses a lexicon file against `tagset`; inverse of [`save_lexicon`].
pub fn load_lexicon(text: &str, tagset: &Tagset) -> Result<Lexicon, TableError> {
    let parse_err = |line, kind| TableError::Parse { line, kind };
    let mut lines = text.lines().enumerate();
    let (version, header_words) = loop {
        match lines.next() {
            Some((_, line)) if line.is_empty() => continue,
            Some((idx, line)) => {
                let fields: Vec<&str> = line.split(' ').collect();
                if fields.len() != 2 {
                    return Err(parse_err(idx + 1, TableParseKind::Header));
                }
                let words: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(idx + 1, TableParseKind::Header))?;
                break (fields[0].to_string(), words);
            }
            None => return Err(parse_err(1, TableParseKind::Header)),
        }
    };
    if version != "1" {
        return Err(TableError::VersionMismatch { found: version });
    }
    let mut lexicon = Lexicon {
        entries: BTreeMap::new(),
        tag_totals: alloc::vec![0u64; tagset.len()],
        total_tokens: 0,
    };
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() < 2 || fields[0].is_empty() {
            return Err(parse_err(lineno, TableParseKind::MalformedRow));
        }
        let word = fields[0].to_string();
        let mut pairs: Vec<(TagId, u64)> = Vec::with_capacity(fields.len() - 1);
        for pair in &fields[1..] {
            let (name, count_str) = pair
                .rsplit_once(':')
                .ok_or_else(|| parse_err(lineno, TableParseKind::MalformedRow))?;
            let tag = tagset
                .id(name)
                .ok_or_else(|| parse_err(lineno, TableParseKind::UnknownTag(name.to_string())))?;
            if tagset.is_null(tag) {
                return Err(parse_err(lineno, TableParseKind::NullTag));
            }
            let count: u64 = count_str
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| parse_err(lineno, TableParseKind::BadCount(count_str.to_string())))?;
            if pairs.iter().any(|&(t, _)| t == tag) {
                return Err(parse_err(lineno, TableParseKind::DuplicateRow));
            }
            lexicon.tag_totals[tag.index()] += count;
            lexicon.total_tokens += count;
            pairs.push((tag, count));
        }
        pairs.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        if lexicon.entries.insert(word.clone(), pairs).is_some() {
            return Err(parse_err(lineno, TableParseKind::DuplicateWord(word)));
        }
    }
    if lexicon.entries.len() != header_words {
        return Err(parse_err(
            1,
            TableParseKind::WordCount {
                header: header_words,
                counted: lexicon.entries.len(),
            },
        ));
    }
    if lexicon.entries.is_empty() {
        return Err(TableError::EmptyLexicon);
    }
    Ok(lexicon)
}
