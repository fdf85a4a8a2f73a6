//! Multi-database merging, filtering, Bradford zoning and citation resolution.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    assign_ids, canonicalize, fold_diacritics, CitationLink, CitationTarget, Corpus, Document, EntityKind,
    EntityRegistry, Origin,
};
use crate::countries::CountryTable;
use crate::error::{Error, Result};

/// Tunables for reference-to-document matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Normalized titles shorter than this never match by containment.
    pub min_title_chars: usize,
    /// Share of title tokens that must appear in the reference for an author+year match.
    pub token_fraction: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig { min_title_chars: 20, token_fraction: 0.6 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DedupKey {
    Doi(String),
    Title(String),
    /// Neither DOI nor title: the document never merges with another.
    Unique,
}

impl fmt::Display for DedupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DedupKey::Doi(s) | DedupKey::Title(s) => f.write_str(s),
            DedupKey::Unique => f.write_str("<unique>"),
        }
    }
}

fn title_key(title: &str) -> String {
    fold_diacritics(title).chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect()
}

fn doi_key(doc: &Document) -> Option<String> {
    doc.doi.as_deref().map(|d| d.trim().to_lowercase()).filter(|d| !d.is_empty())
}

pub fn dedup_key(doc: &Document) -> DedupKey {
    if let Some(doi) = doi_key(doc) {
        return DedupKey::Doi(doi);
    }
    let t = title_key(&doc.title);
    if t.is_empty() {
        DedupKey::Unique
    } else {
        DedupKey::Title(t)
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub documents: Vec<Document>,
}

/// Datasets in precedence order: earlier datasets are the reference that later
/// ones may only complement.
#[derive(Debug, Clone)]
pub struct MergePlan {
    datasets: Vec<Dataset>,
}

impl MergePlan {
    pub fn new(datasets: Vec<Dataset>) -> Result<Self> {
        if datasets.is_empty() {
            return Err(Error::usage("a merge plan needs at least one dataset"));
        }
        Ok(MergePlan { datasets })
    }

    pub fn datasets(&self) -> &[Dataset] {
        &self.datasets
    }

    pub fn push(&mut self, dataset: Dataset) {
        self.datasets.push(dataset);
    }
}

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub corpus: Corpus,
    /// Incoming documents folded into an already retained one.
    pub duplicates: usize,
    /// Of those, how many were matched by title because a DOI was missing.
    pub title_matches: usize,
}

impl MergeOutcome {
    /// True when more than 5% of merges relied on the title fallback.
    pub fn title_fallback_suspicious(&self) -> bool {
        self.duplicates > 0 && self.title_matches * 20 > self.duplicates
    }
}

/// Merge datasets in plan order. A duplicate only fills fields that are absent
/// or empty in the retained document; list fields are taken whole, never unioned.
pub fn merge(plan: &MergePlan, cfg: &MatchConfig) -> Result<MergeOutcome> {
    let mut kept: Vec<Document> = Vec::new();
    let mut by_doi: HashMap<String, usize> = HashMap::new();
    let mut by_title: HashMap<String, usize> = HashMap::new();
    let mut duplicates = 0;
    let mut title_matches = 0;

    for dataset in &plan.datasets {
        for doc in &dataset.documents {
            let doi = doi_key(doc);
            let title = title_key(&doc.title);
            let mut hit = doi.as_ref().and_then(|d| by_doi.get(d).copied());
            if hit.is_none() && !title.is_empty() {
                hit = by_title
                    .get(&title)
                    .copied()
                    .filter(|&i| !matches!((doi_key(&kept[i]), &doi), (Some(a), Some(b)) if &a != b));
                if hit.is_some() {
                    title_matches += 1;
                }
            }
            match hit {
                Some(i) => {
                    duplicates += 1;
                    fill_missing(&mut kept[i], doc);
                    kept[i].origin = Origin::Merged;
                    if let Some(d) = doi_key(&kept[i]) {
                        by_doi.entry(d).or_insert(i);
                    }
                }
                None => {
                    let i = kept.len();
                    if let Some(d) = doi {
                        by_doi.insert(d, i);
                    }
                    if !title.is_empty() {
                        by_title.entry(title).or_insert(i);
                    }
                    kept.push(doc.clone());
                }
            }
        }
    }
    let corpus = label(kept, cfg)?;
    Ok(MergeOutcome { corpus, duplicates, title_matches })
}

fn fill_missing(kept: &mut Document, incoming: &Document) {
    fn text(dst: &mut String, src: &str) {
        if dst.trim().is_empty() && !src.trim().is_empty() {
            *dst = src.to_string();
        }
    }
    fn list<T: Clone>(dst: &mut Vec<T>, src: &[T]) {
        if dst.is_empty() && !src.is_empty() {
            *dst = src.to_vec();
        }
    }
    text(&mut kept.title, &incoming.title);
    text(&mut kept.abstract_text, &incoming.abstract_text);
    text(&mut kept.source, &incoming.source);
    text(&mut kept.doc_type, &incoming.doc_type);
    text(&mut kept.language, &incoming.language);
    list(&mut kept.authors, &incoming.authors);
    list(&mut kept.affiliations, &incoming.affiliations);
    list(&mut kept.author_keywords, &incoming.author_keywords);
    list(&mut kept.keywords_plus, &incoming.keywords_plus);
    if kept.year.is_none() {
        kept.year = incoming.year;
    }
    if kept.times_cited.is_none() {
        kept.times_cited = incoming.times_cited;
    }
    if kept.doi.as_deref().is_none_or(|d| d.trim().is_empty()) {
        kept.doi = incoming.doi.clone();
    }
    let kept_refs_empty = kept.references.as_ref().is_none_or(Vec::is_empty);
    if kept_refs_empty && incoming.references.as_ref().is_some_and(|r| !r.is_empty()) {
        kept.references = incoming.references.clone();
    }
}

/// Number documents, build registries and resolve references in one step.
pub fn label(documents: Vec<Document>, cfg: &MatchConfig) -> Result<Corpus> {
    let mut corpus = assign_ids(documents)?;
    resolve_citations(&mut corpus, cfg);
    Ok(corpus)
}

pub fn resolve_citations(corpus: &mut Corpus, cfg: &MatchConfig) {
    let (links, registry) = match_references(corpus, cfg);
    corpus.citation_links = links;
    corpus.registries.insert(EntityKind::Reference, registry);
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterCriteria {
    pub doc_types: Option<BTreeSet<String>>,
    pub year_range: Option<(i32, i32)>,
    pub sources: Option<BTreeSet<String>>,
    pub bradford_zones: Option<BTreeSet<u8>>,
    pub countries: Option<BTreeSet<String>>,
    pub languages: Option<BTreeSet<String>>,
    #[serde(default)]
    pub require_abstract: bool,
}

#[derive(Debug, Clone)]
pub struct Filtered {
    pub corpus: Corpus,
    /// `provenance[new_id]` is the document's id in the unfiltered corpus.
    pub provenance: Vec<usize>,
}

/// Document types compare case-insensitively and ignore a plural `s`
/// ("Articles" selects "Article").
fn type_key(s: &str) -> String {
    let l = s.trim().to_lowercase();
    l.strip_suffix('s').map(str::to_string).unwrap_or(l)
}

/// Keep documents satisfying every active criterion, then relabel.
pub fn filter(corpus: &Corpus, criteria: &FilterCriteria, cfg: &MatchConfig) -> Result<Filtered> {
    if let Some((lo, hi)) = criteria.year_range {
        if lo > hi {
            return Err(Error::usage(format!("year range {lo}:{hi} has min > max")));
        }
    }
    let types: Option<HashSet<String>> = criteria.doc_types.as_ref().map(|s| s.iter().map(|t| type_key(t)).collect());
    let languages: Option<HashSet<String>> =
        criteria.languages.as_ref().map(|s| s.iter().map(|l| l.trim().to_lowercase()).collect());
    let sources: Option<HashSet<String>> =
        criteria.sources.as_ref().map(|s| s.iter().filter_map(|v| canonicalize(v, EntityKind::Source)).collect());
    let table = CountryTable::embedded();
    let countries: Option<HashSet<String>> = criteria.countries.as_ref().map(|s| {
        s.iter()
            .filter_map(|c| table.lookup(c).map(|c| c.name.clone()).or_else(|| canonicalize(c, EntityKind::Country)))
            .collect()
    });
    let zones: Option<HashMap<String, u8>> = match &criteria.bradford_zones {
        Some(_) => Some(bradford_zones(corpus)?.sources.into_iter().map(|s| (s.source, s.zone)).collect()),
        None => None,
    };

    let mut kept = Vec::new();
    let mut provenance = Vec::new();
    for doc in &corpus.documents {
        let ok = types.as_ref().is_none_or(|t| t.contains(&type_key(&doc.doc_type)))
            && criteria.year_range.is_none_or(|(lo, hi)| doc.year.is_some_and(|y| (lo..=hi).contains(&y)))
            && sources.as_ref().is_none_or(|s| s.contains(&doc.source))
            && languages.as_ref().is_none_or(|l| l.contains(&doc.language.trim().to_lowercase()))
            && countries.as_ref().is_none_or(|c| doc.countries().iter().any(|x| c.contains(*x)))
            && (!criteria.require_abstract || !doc.abstract_text.trim().is_empty())
            && match (&zones, &criteria.bradford_zones) {
                (Some(z), Some(wanted)) => z.get(&doc.source).is_some_and(|zone| wanted.contains(zone)),
                _ => true,
            };
        if ok {
            kept.push(doc.clone());
            provenance.push(doc.id);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(Filtered { corpus: label(kept, cfg)?, provenance })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceZone {
    pub source: String,
    pub documents: usize,
    pub zone: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BradfordZoning {
    /// Sources by descending document count (ties by name).
    pub sources: Vec<SourceZone>,
    pub zone_documents: [usize; 3],
    pub zone_sources: [usize; 3],
}

pub fn bradford_zones(corpus: &Corpus) -> Result<BradfordZoning> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for doc in &corpus.documents {
        if !doc.source.is_empty() {
            *counts.entry(doc.source.as_str()).or_default() += 1;
        }
    }
    if counts.is_empty() {
        return Err(Error::unavailable("no document has a source"));
    }
    Ok(bradford_from_counts(counts.into_iter().map(|(s, n)| (s.to_string(), n)).collect()))
}

/// Zone boundaries are the smallest productivity-sorted prefixes holding at
/// least a third and two thirds of all documents.
pub fn bradford_from_counts(mut counts: Vec<(String, usize)>) -> BradfordZoning {
    counts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let n: usize = counts.iter().map(|c| c.1).sum();
    let mut cum = 0usize;
    let mut zone_documents = [0usize; 3];
    let mut zone_sources = [0usize; 3];
    let mut sources = Vec::with_capacity(counts.len());
    for (source, documents) in counts {
        // Zone is decided by where the prefix stood before this source.
        let zone = if 3 * cum < n {
            1
        } else if 3 * cum < 2 * n {
            2
        } else {
            3
        };
        cum += documents;
        zone_documents[zone as usize - 1] += documents;
        zone_sources[zone as usize - 1] += 1;
        sources.push(SourceZone { source, documents, zone });
    }
    BradfordZoning { sources, zone_documents, zone_sources }
}

struct DocKeys {
    doi: Option<String>,
    title_norm: String,
    title_tokens: Vec<String>,
    surname: Option<String>,
    year: Option<String>,
}

fn words(s: &str) -> Vec<String> {
    fold_diacritics(s)
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

impl DocKeys {
    fn of(doc: &Document) -> Self {
        let mut title_tokens: Vec<String> = words(&doc.title).into_iter().filter(|w| w.chars().count() >= 3).collect();
        title_tokens.sort();
        title_tokens.dedup();
        DocKeys {
            doi: doi_key(doc),
            title_norm: title_key(&doc.title),
            title_tokens,
            surname: doc
                .authors
                .first()
                .map(|a| a.split(',').next().unwrap_or(a).trim().to_string())
                .map(|s| words(&s).join(" "))
                .filter(|s| !s.is_empty()),
            year: doc.year.map(|y| y.to_string()),
        }
    }
}

/// Resolve every raw reference to an in-corpus document or a new `r_#` entry.
///
/// Precedence: DOI substring, then normalized-title containment, then first-author
/// surname + year with enough title tokens. Among several candidates of one rule the
/// lowest document id wins. Resolution depends only on the reference text; a
/// reference resolving to its own citing document is dropped.
pub fn match_references(corpus: &Corpus, cfg: &MatchConfig) -> (Vec<CitationLink>, EntityRegistry) {
    let keys: Vec<DocKeys> = corpus.documents.iter().map(DocKeys::of).collect();
    let mut registry = EntityRegistry::new(EntityKind::Reference);
    let mut cache: HashMap<String, Option<usize>> = HashMap::new();
    let mut links = Vec::new();

    for doc in &corpus.documents {
        let Some(refs) = &doc.references else {
            continue;
        };
        for raw in refs {
            let Some(reference) = canonicalize(raw, EntityKind::Reference) else {
                continue;
            };
            let resolved = *cache.entry(reference.clone()).or_insert_with(|| resolve_one(&reference, &keys, cfg));
            match resolved {
                Some(id) if id == doc.id => {}
                Some(id) => links.push(CitationLink { citing: doc.id, target: CitationTarget::Document(id) }),
                None => {
                    let idx = registry.intern(&reference);
                    links.push(CitationLink { citing: doc.id, target: CitationTarget::Reference(idx) });
                }
            }
        }
    }
    links.sort();
    links.dedup();
    (links, registry)
}

fn resolve_one(reference: &str, keys: &[DocKeys], cfg: &MatchConfig) -> Option<usize> {
    let lower = fold_diacritics(reference).to_lowercase();
    if let Some(i) = keys.iter().position(|k| k.doi.as_ref().is_some_and(|d| lower.contains(d.as_str()))) {
        return Some(i);
    }
    let norm: String = lower.chars().filter(|c| c.is_alphanumeric()).collect();
    if let Some(i) =
        keys.iter().position(|k| k.title_norm.chars().count() >= cfg.min_title_chars && norm.contains(&k.title_norm))
    {
        return Some(i);
    }
    let tokens: HashSet<String> = words(reference).into_iter().collect();
    let joined = format!(" {} ", words(reference).join(" "));
    keys.iter().position(|k| {
        let (Some(surname), Some(year)) = (&k.surname, &k.year) else {
            return false;
        };
        if k.title_tokens.is_empty() || !tokens.contains(year) || !joined.contains(&format!(" {surname} ")) {
            return false;
        }
        let present = k.title_tokens.iter().filter(|t| tokens.contains(*t)).count();
        present as f64 >= cfg.token_fraction * k.title_tokens.len() as f64
    })
}
