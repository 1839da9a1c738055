//! Tag inventories.
//!
//! A [`Tagset`] is an ordered list of distinct tag names plus the reserved
//! boundary tag `NULL`, which pads contexts beyond sentence ends and is
//! never assignable to a word.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Name of the reserved boundary tag.
pub const NULL_TAG: &str = "NULL";

/// Index of a tag within a [`Tagset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(u16);

impl TagId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(index: usize) -> TagId {
        TagId(index as u16)
    }
}

/// Ordered inventory of tag names, indexable both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tagset {
    names: Vec<String>,
    ids: BTreeMap<String, TagId>,
    null: TagId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagsetError {
    /// No assignable tags (empty source, or only NULL).
    Empty,
    Duplicate(String),
    /// Tag name is empty or contains whitespace or `/`.
    InvalidName(String),
    TooManyTags(usize),
}

impl fmt::Display for TagsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagsetError::Empty => write!(f, "tagset has no assignable tags"),
            TagsetError::Duplicate(name) => write!(f, "duplicate tag name {name:?}"),
            TagsetError::InvalidName(name) => {
                write!(f, "invalid tag name {name:?} (empty, whitespace or '/')")
            }
            TagsetError::TooManyTags(n) => write!(f, "too many tags ({n}, limit 65535)"),
        }
    }
}

impl core::error::Error for TagsetError {}

impl Tagset {
    /// Builds a tagset from tag names in order, appending `NULL` if absent.
    pub fn from_names<I, S>(names: I) -> Result<Tagset, TagsetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut list: Vec<String> = Vec::new();
        let mut ids = BTreeMap::new();
        for name in names {
            let name = name.into();
            if name.is_empty() || name.contains(|c: char| c.is_whitespace()) || name.contains('/')
            {
                return Err(TagsetError::InvalidName(name));
            }
            if ids.contains_key(&name) {
                return Err(TagsetError::Duplicate(name));
            }
            ids.insert(name.clone(), TagId(list.len() as u16));
            list.push(name);
        }
        if !ids.contains_key(NULL_TAG) {
            ids.insert(NULL_TAG.to_string(), TagId(list.len() as u16));
            list.push(NULL_TAG.to_string());
        }
        if list.len() > u16::MAX as usize {
            return Err(TagsetError::TooManyTags(list.len()));
        }
        if list.len() < 2 {
            // Only NULL present: nothing can ever be assigned.
            return Err(TagsetError::Empty);
        }
        let null = ids[NULL_TAG];
        Ok(Tagset { names: list, ids, null })
    }

    /// Number of tags including `NULL`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of tags assignable to words (everything except `NULL`).
    pub fn assignable_len(&self) -> usize {
        self.names.len() - 1
    }

    pub fn id(&self, name: &str) -> Option<TagId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: TagId) -> &str {
        &self.names[id.index()]
    }

    pub fn null(&self) -> TagId {
        self.null
    }

    pub fn is_null(&self, id: TagId) -> bool {
        id == self.null
    }

    /// All tag ids in tagset order, including `NULL`.
    pub fn ids(&self) -> impl Iterator<Item = TagId> + '_ {
        (0..self.names.len()).map(TagId::from_index)
    }

    /// Assignable tag ids in tagset order (ascending index, `NULL` excluded).
    pub fn assignable_ids(&self) -> impl Iterator<Item = TagId> + '_ {
        let null = self.null;
        self.ids().filter(move |id| *id != null)
    }
}

/// Parses a tagset file: one tag name per line, `#` comment lines and blank
/// lines ignored. `NULL` is appended as the boundary tag if the file does
/// not list it.
pub fn load_tagset(source: &str) -> Result<Tagset, TagsetError> {
    let names = source
        .lines()
        .map(str::trim_end)
        .filter(|line| !line.is_empty() && !line.starts_with('#'));
    Tagset::from_names(names.map(ToString::to_string))
}
