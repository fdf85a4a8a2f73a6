//! Bibliometric analysis engine: parse Scopus/WoS/PubMed exports, merge them
//! into a labeled corpus and compute descriptive statistics, networks, text
//! vectors, projections, topics and extractive summaries.

pub mod corpus;
pub mod countries;
pub mod eda;
pub mod error;
pub mod fuse;
pub mod graphs;
pub mod ingest;
pub mod result;
pub mod summarize;
pub mod textkit;
pub mod topics;
pub mod vectorlab;

pub use corpus::{
    assign_ids, canonicalize, validate, CitationLink, CitationTarget, Corpus, Document, EntityKind, Label, Origin,
};
pub use error::{Error, Result};
pub use fuse::{label, MatchConfig};
