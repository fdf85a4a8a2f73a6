//! Readers for Scopus/WoS BibTeX exports and PubMed MEDLINE files.
//!
//! Parsing produces [`RawRecord`]s that keep every tag the vendor emitted;
//! [`normalize`] then maps them to [`Document`]s through a per-database
//! [`FieldMap`] table.

mod bibtex;
mod medline;
mod normalize;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub use bibtex::{emit_bibtex, parse_bibtex};
pub use medline::{emit_medline, parse_pubmed};
pub use normalize::{normalize, FieldMap, Normalized};

use crate::corpus::{Document, Origin};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceDb {
    Scopus,
    Wos,
    Pubmed,
}

impl SourceDb {
    pub fn origin(self) -> Origin {
        match self {
            SourceDb::Scopus => Origin::Scopus,
            SourceDb::Wos => Origin::Wos,
            SourceDb::Pubmed => Origin::Pubmed,
        }
    }
}

impl FromStr for SourceDb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scopus" => Ok(SourceDb::Scopus),
            "wos" | "web of science" => Ok(SourceDb::Wos),
            "pubmed" | "medline" => Ok(SourceDb::Pubmed),
            other => Err(Error::usage(format!("unknown source `{other}` (expected scopus, wos or pubmed)"))),
        }
    }
}

impl fmt::Display for SourceDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceDb::Scopus => "scopus",
            SourceDb::Wos => "wos",
            SourceDb::Pubmed => "pubmed",
        })
    }
}

/// One exported entry: uppercase tag → raw values in file order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source_db: SourceDb,
    pub fields: IndexMap<String, Vec<String>>,
    /// Byte range of the entry within the decoded input.
    pub byte_span: (usize, usize),
}

impl RawRecord {
    pub fn new(source_db: SourceDb, start: usize) -> Self {
        RawRecord { source_db, fields: IndexMap::new(), byte_span: (start, start) }
    }

    pub fn push(&mut self, tag: &str, value: impl Into<String>) {
        self.fields.entry(tag.to_uppercase()).or_default().push(value.into());
    }

    pub fn get(&self, tag: &str) -> Option<&[String]> {
        self.fields.get(tag).map(Vec::as_slice)
    }

    pub fn first(&self, tag: &str) -> Option<&str> {
        self.get(tag).and_then(|v| v.first()).map(String::as_str)
    }
}

/// A non-fatal problem found while normalizing; `offset` is the record's start byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.offset, self.message)
    }
}

/// Parse a file in the format of `source`.
pub fn parse(bytes: &[u8], source: SourceDb) -> Result<Vec<RawRecord>> {
    match source {
        SourceDb::Scopus | SourceDb::Wos => parse_bibtex(bytes, source),
        SourceDb::Pubmed => parse_pubmed(bytes),
    }
}

/// Parse and normalize a whole export with the default field map of `source`.
pub fn load(bytes: &[u8], source: SourceDb) -> Result<(Vec<Document>, Vec<Warning>)> {
    load_with(bytes, source, &FieldMap::default_for(source))
}

pub fn load_with(bytes: &[u8], source: SourceDb, map: &FieldMap) -> Result<(Vec<Document>, Vec<Warning>)> {
    let records = parse(bytes, source)?;
    let mut docs = Vec::with_capacity(records.len());
    let mut warnings = Vec::new();
    for record in &records {
        let n = normalize(record, map);
        warnings.extend(n.warnings);
        docs.extend(n.document);
    }
    Ok((docs, warnings))
}
