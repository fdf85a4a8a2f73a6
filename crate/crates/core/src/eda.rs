//! Descriptive statistics: the corpus report, ranked bar series, Lotka fit,
//! keyword evolution, treemap counts, Sankey flows and author productivity.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, EntityKind};
use crate::error::{Error, Result};
use crate::fuse::bradford_zones;

/// A non-negative value held as an exact count of hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hundredths(pub u64);

impl Hundredths {
    /// `num / den` rounded half-up to two decimals, computed in integers.
    pub fn ratio(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let (num, den) = (num as u128, den as u128);
        Some(Hundredths(((200 * num + den) / (2 * den)) as u64))
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

/// Two decimals, minus one trailing zero: `1.2`, `2.64`, `3.0`.
impl fmt::Display for Hundredths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (whole, frac) = (self.0 / 100, self.0 % 100);
        if frac % 10 == 0 {
            write!(f, "{whole}.{}", frac / 10)
        } else {
            write!(f, "{whole}.{frac:02}")
        }
    }
}

impl Serialize for Hundredths {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Hundredths {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v.is_nan() || v < 0.0 {
            return Err(serde::de::Error::custom("expected a non-negative number"));
        }
        Ok(Hundredths((v * 100.0).round() as u64))
    }
}

/// Half-up rounding of a float to two decimals.
pub fn round_half_up(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

pub fn h_index(citations: &[u64]) -> usize {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.iter().enumerate().take_while(|(i, &c)| c > *i as u64).count()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollaborationMode {
    /// (distinct authors − single-authored docs) / multi-authored docs.
    #[default]
    DistinctAuthors,
    /// Mean author-list length over multi-authored documents.
    Appearances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EdaConfig {
    pub top_n: usize,
    pub collaboration: CollaborationMode,
}

impl Default for EdaConfig {
    fn default() -> Self {
        EdaConfig { top_n: 15, collaboration: CollaborationMode::DistinctAuthors }
    }
}

/// The integer totals every report ratio is derived from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportTotals {
    pub documents: u64,
    pub citations: u64,
    pub sources: u64,
    pub authors: u64,
    pub institutions: u64,
    /// Σ author-list lengths.
    pub authorships: u64,
    /// Σ per-document institution-list lengths.
    pub affiliations: u64,
    pub distinct_years: u64,
    pub single_authored: u64,
    pub multi_authored: u64,
    /// Σ author-list lengths over multi-authored documents.
    pub multi_authorships: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Averages {
    pub docs_per_author: Option<Hundredths>,
    pub docs_per_institution: Option<Hundredths>,
    pub docs_per_source: Option<Hundredths>,
    pub docs_per_year: Option<Hundredths>,
    pub citations_per_author: Option<Hundredths>,
    pub citations_per_institution: Option<Hundredths>,
    pub citations_per_document: Option<Hundredths>,
    pub citations_per_source: Option<Hundredths>,
    pub collaboration_index: Option<Hundredths>,
}

impl Averages {
    pub fn from_totals(t: &ReportTotals, mode: CollaborationMode) -> Self {
        Averages {
            docs_per_author: Hundredths::ratio(t.authorships, t.authors),
            docs_per_institution: Hundredths::ratio(t.affiliations, t.institutions),
            docs_per_source: Hundredths::ratio(t.documents, t.sources),
            docs_per_year: Hundredths::ratio(t.documents, t.distinct_years),
            citations_per_author: Hundredths::ratio(t.citations, t.authors),
            citations_per_institution: Hundredths::ratio(t.citations, t.institutions),
            citations_per_document: Hundredths::ratio(t.citations, t.documents),
            citations_per_source: Hundredths::ratio(t.citations, t.sources),
            collaboration_index: collaboration_from_counts(t, mode),
        }
    }
}

fn collaboration_from_counts(t: &ReportTotals, mode: CollaborationMode) -> Option<Hundredths> {
    match mode {
        CollaborationMode::DistinctAuthors => {
            Hundredths::ratio(t.authors.saturating_sub(t.single_authored), t.multi_authored)
        }
        CollaborationMode::Appearances => Hundredths::ratio(t.multi_authorships, t.multi_authored),
    }
}

/// `None` when no document is multi-authored.
pub fn collaboration_index(corpus: &Corpus, mode: CollaborationMode) -> Option<Hundredths> {
    collaboration_from_counts(&totals(corpus), mode)
}

pub fn totals(corpus: &Corpus) -> ReportTotals {
    let docs = &corpus.documents;
    let years: HashSet<i32> = docs.iter().filter_map(|d| d.year).collect();
    // Documents without authors count as single-authored so the two counts partition the corpus.
    let multi: Vec<&Document> = docs.iter().filter(|d| d.authors.len() >= 2).collect();
    ReportTotals {
        documents: docs.len() as u64,
        citations: docs.iter().map(Document::citations).sum(),
        sources: corpus.registry(EntityKind::Source).len() as u64,
        authors: corpus.registry(EntityKind::Author).len() as u64,
        institutions: corpus.registry(EntityKind::Institution).len() as u64,
        authorships: docs.iter().map(|d| d.entities(EntityKind::Author).len() as u64).sum(),
        affiliations: docs.iter().map(|d| d.institutions().len() as u64).sum(),
        distinct_years: years.len() as u64,
        single_authored: (docs.len() - multi.len()) as u64,
        multi_authored: multi.len() as u64,
        multi_authorships: multi.iter().map(|d| d.entities(EntityKind::Author).len() as u64).sum(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaReport {
    pub timespan: Option<(i32, i32)>,
    pub countries: usize,
    pub institutions: usize,
    pub sources: usize,
    pub references: usize,
    pub languages: Vec<(String, usize)>,
    pub documents: usize,
    pub doc_types: Vec<(String, usize)>,
    pub authors: usize,
    pub author_keywords: usize,
    pub keywords_plus: usize,
    pub citations: u64,
    pub single_authored: usize,
    pub multi_authored: usize,
    pub max_h_index: usize,
    pub averages: Averages,
}

fn ranked_counts<'a>(values: impl Iterator<Item = &'a str>) -> Vec<(String, usize)> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for v in values.filter(|v| !v.is_empty()) {
        *counts.entry(v).or_default() += 1;
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

pub fn build_report(corpus: &Corpus, cfg: &EdaConfig) -> Result<EdaReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let t = totals(corpus);
    let docs = &corpus.documents;
    let years: Vec<i32> = docs.iter().filter_map(|d| d.year).collect();
    let timespan = years.iter().min().zip(years.iter().max()).map(|(a, b)| (*a, *b));
    let references: HashSet<_> = corpus.citation_links.iter().map(|l| l.target).collect();
    Ok(EdaReport {
        timespan,
        countries: corpus.registry(EntityKind::Country).len(),
        institutions: t.institutions as usize,
        sources: t.sources as usize,
        references: references.len(),
        languages: ranked_counts(docs.iter().map(|d| d.language.as_str())),
        documents: docs.len(),
        doc_types: ranked_counts(docs.iter().map(|d| d.doc_type.as_str())),
        authors: t.authors as usize,
        author_keywords: corpus.registry(EntityKind::AuthorKeyword).len(),
        keywords_plus: corpus.registry(EntityKind::KeywordPlus).len(),
        citations: t.citations,
        single_authored: t.single_authored as usize,
        multi_authored: t.multi_authored as usize,
        max_h_index: author_h_indices(corpus).first().map_or(0, |a| a.1),
        averages: Averages::from_totals(&t, cfg.collaboration),
    })
}

impl EdaReport {
    /// Report rows in display order.
    pub fn rows(&self) -> Vec<(String, String)> {
        fn avg(v: Option<Hundredths>) -> String {
            v.map_or_else(|| "n/a".to_string(), |h| h.to_string())
        }
        let a = &self.averages;
        let mut rows = vec![(
            "Timespan".to_string(),
            self.timespan.map_or_else(|| "n/a".to_string(), |(lo, hi)| format!("{lo}-{hi}")),
        )];
        let mut push = |label: &str, value: String| rows.push((label.to_string(), value));
        push("Total Number of Countries", self.countries.to_string());
        push("Total Number of Institutions", self.institutions.to_string());
        push("Total Number of Sources", self.sources.to_string());
        push("Total Number of References", self.references.to_string());
        push("Total Number of Languages", self.languages.len().to_string());
        for (lang, n) in &self.languages {
            push(&format!("--{lang} (# of docs)"), n.to_string());
        }
        push("Total Number of Documents", self.documents.to_string());
        for (ty, n) in &self.doc_types {
            push(&format!("--{ty}"), n.to_string());
        }
        push("Average Documents per Author", avg(a.docs_per_author));
        push("Average Documents per Institution", avg(a.docs_per_institution));
        push("Average Documents per Source", avg(a.docs_per_source));
        push("Average Documents per Year", avg(a.docs_per_year));
        push("Total Number of Authors", self.authors.to_string());
        push("Total Number of Authors' Keywords", self.author_keywords.to_string());
        push("Total Number of Authors' Keywords Plus", self.keywords_plus.to_string());
        push("Total Single-Authored Documents", self.single_authored.to_string());
        push("Total Multi-Authored Documents", self.multi_authored.to_string());
        push("Average Collaboration Index", avg(a.collaboration_index));
        push("Max h-Index", self.max_h_index.to_string());
        push("Total Number of Citations", self.citations.to_string());
        push("Average Citations per Author", avg(a.citations_per_author));
        push("Average Citations per Institution", avg(a.citations_per_institution));
        push("Average Citations per Document", avg(a.citations_per_document));
        push("Average Citations per Source", avg(a.citations_per_source));
        rows
    }

    pub fn to_text(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0).max("Main Information".len());
        let mut out = format!("{:<width$}  Results\n", "Main Information");
        for (label, value) in rows {
            out.push_str(&format!("{label:<width$}  {value}\n"));
        }
        out
    }
}

/// Authors with their local h-index, highest first.
pub fn author_h_indices(corpus: &Corpus) -> Vec<(String, usize)> {
    let mut per_author: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for d in &corpus.documents {
        for a in d.entities(EntityKind::Author) {
            per_author.entry(a).or_default().push(d.citations());
        }
    }
    let mut out: Vec<(String, usize)> = per_author.into_iter().map(|(a, c)| (a.to_string(), h_index(&c))).collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// The seven per-document element kinds shared by evolution plots and Sankey diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Author,
    Country,
    Institution,
    Source,
    AuthorKeyword,
    KeywordPlus,
    Language,
}

impl Element {
    pub const ALL: [Element; 7] = [
        Element::Author,
        Element::Country,
        Element::Institution,
        Element::Source,
        Element::AuthorKeyword,
        Element::KeywordPlus,
        Element::Language,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Element::Author => "author",
            Element::Country => "country",
            Element::Institution => "institution",
            Element::Source => "source",
            Element::AuthorKeyword => "author_keyword",
            Element::KeywordPlus => "keyword_plus",
            Element::Language => "language",
        }
    }

    fn entity(self) -> Option<EntityKind> {
        Some(match self {
            Element::Author => EntityKind::Author,
            Element::Country => EntityKind::Country,
            Element::Institution => EntityKind::Institution,
            Element::Source => EntityKind::Source,
            Element::AuthorKeyword => EntityKind::AuthorKeyword,
            Element::KeywordPlus => EntityKind::KeywordPlus,
            Element::Language => return None,
        })
    }

    /// Distinct values of this element in one document.
    pub fn values(self, doc: &Document) -> Vec<&str> {
        match self.entity() {
            Some(kind) => doc.entities(kind),
            None if doc.language.is_empty() => Vec::new(),
            None => vec![doc.language.as_str()],
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_lowercase().replace(['-', ' '], "_");
        let key = key.strip_suffix('s').unwrap_or(&key);
        Ok(match key {
            "author" => Element::Author,
            "country" | "countrie" => Element::Country,
            "institution" => Element::Institution,
            "source" | "journal" => Element::Source,
            "author_keyword" | "authors_keyword" | "kid" => Element::AuthorKeyword,
            "keyword_plu" | "keywords_plu" | "kwp" => Element::KeywordPlus,
            "language" => Element::Language,
            _ => {
                let names: Vec<_> = Element::ALL.iter().map(|e| e.name()).collect();
                return Err(Error::usage(format!("unknown element `{s}` (expected one of {})", names.join(", "))));
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarKind {
    DocumentsPerYear,
    CitationsPerYear,
    PastCitationsPerYear,
    Lotka,
    SourcesPerDocument,
    SourcesPerCitation,
    AuthorsPerDocument,
    AuthorsPerCitation,
    AuthorsPerHIndex,
    Bradford,
    InstitutionsPerDocument,
    InstitutionsPerCitation,
    CountriesPerDocument,
    CountriesPerCitation,
    LanguagePerDocument,
    KeywordsPlusPerDocument,
    AuthorKeywordsPerDocument,
}

impl BarKind {
    pub const ALL: [BarKind; 17] = [
        BarKind::DocumentsPerYear,
        BarKind::CitationsPerYear,
        BarKind::PastCitationsPerYear,
        BarKind::Lotka,
        BarKind::SourcesPerDocument,
        BarKind::SourcesPerCitation,
        BarKind::AuthorsPerDocument,
        BarKind::AuthorsPerCitation,
        BarKind::AuthorsPerHIndex,
        BarKind::Bradford,
        BarKind::InstitutionsPerDocument,
        BarKind::InstitutionsPerCitation,
        BarKind::CountriesPerDocument,
        BarKind::CountriesPerCitation,
        BarKind::LanguagePerDocument,
        BarKind::KeywordsPlusPerDocument,
        BarKind::AuthorKeywordsPerDocument,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BarKind::DocumentsPerYear => "documents-per-year",
            BarKind::CitationsPerYear => "citations-per-year",
            BarKind::PastCitationsPerYear => "past-citations-per-year",
            BarKind::Lotka => "lotka",
            BarKind::SourcesPerDocument => "sources-per-document",
            BarKind::SourcesPerCitation => "sources-per-citation",
            BarKind::AuthorsPerDocument => "authors-per-document",
            BarKind::AuthorsPerCitation => "authors-per-citation",
            BarKind::AuthorsPerHIndex => "authors-per-h-index",
            BarKind::Bradford => "bradford",
            BarKind::InstitutionsPerDocument => "institutions-per-document",
            BarKind::InstitutionsPerCitation => "institutions-per-citation",
            BarKind::CountriesPerDocument => "countries-per-document",
            BarKind::CountriesPerCitation => "countries-per-citation",
            BarKind::LanguagePerDocument => "language-per-document",
            BarKind::KeywordsPlusPerDocument => "keywords-plus-per-document",
            BarKind::AuthorKeywordsPerDocument => "author-keywords-per-document",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            BarKind::DocumentsPerYear => "Documents per Year",
            BarKind::CitationsPerYear => "Citations per Year",
            BarKind::PastCitationsPerYear => "Past Citations per Year",
            BarKind::Lotka => "Lotka's Law",
            BarKind::SourcesPerDocument => "Sources per Document",
            BarKind::SourcesPerCitation => "Sources per Citation",
            BarKind::AuthorsPerDocument => "Authors per Document",
            BarKind::AuthorsPerCitation => "Authors per Citation",
            BarKind::AuthorsPerHIndex => "Authors per h-Index",
            BarKind::Bradford => "Bradford's Law",
            BarKind::InstitutionsPerDocument => "Institutions per Document",
            BarKind::InstitutionsPerCitation => "Institutions per Citation",
            BarKind::CountriesPerDocument => "Countries per Document",
            BarKind::CountriesPerCitation => "Countries per Citation",
            BarKind::LanguagePerDocument => "Language per Document",
            BarKind::KeywordsPlusPerDocument => "Keywords Plus per Document",
            BarKind::AuthorKeywordsPerDocument => "Authors' Keywords per Document",
        }
    }
}

impl FromStr for BarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_lowercase().replace(['_', ' '], "-");
        BarKind::ALL.into_iter().find(|k| k.name() == key).ok_or_else(|| {
            let names: Vec<_> = BarKind::ALL.iter().map(|k| k.name()).collect();
            Error::usage(format!("unknown bar kind `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

impl fmt::Display for BarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "kind")]
pub enum SeriesKind {
    Bar(BarKind),
    Evolution,
    Productivity,
    Treemap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub kind: SeriesKind,
    pub points: Vec<(String, f64)>,
}

impl Series {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,value\n");
        for (c, v) in &self.points {
            out.push_str(&format!("{},{}\n", csv_field(c), v));
        }
        out
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn year_axis(corpus: &Corpus) -> Vec<i32> {
    let years: Vec<i32> = corpus.documents.iter().filter_map(|d| d.year).collect();
    match (years.iter().min(), years.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo..=hi).collect(),
        _ => Vec::new(),
    }
}

fn per_year(corpus: &Corpus, value: impl Fn(&[&Document]) -> f64) -> Vec<(String, f64)> {
    let mut by_year: BTreeMap<i32, Vec<&Document>> = BTreeMap::new();
    for d in &corpus.documents {
        if let Some(y) = d.year {
            by_year.entry(y).or_default().push(d);
        }
    }
    year_axis(corpus).into_iter().map(|y| (y.to_string(), by_year.get(&y).map_or(0.0, |docs| value(docs)))).collect()
}

/// Rank entities by `weight` summed over their documents, ties by name, keep `top_n`.
fn ranked_entities(
    corpus: &Corpus,
    element: Element,
    top_n: usize,
    weight: impl Fn(&Document) -> u64,
) -> Vec<(String, f64)> {
    let mut totals: HashMap<&str, u64> = HashMap::new();
    for d in &corpus.documents {
        for v in element.values(d) {
            *totals.entry(v).or_default() += weight(d);
        }
    }
    let mut out: Vec<(&str, u64)> = totals.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    out.truncate(top_n);
    out.into_iter().map(|(k, v)| (k.to_string(), v as f64)).collect()
}

/// Bar-plot data. Year kinds span min..max year with zero fill; entity kinds are
/// ranked descending and truncated to `cfg.top_n`.
pub fn bar_series(corpus: &Corpus, kind: BarKind, cfg: &EdaConfig) -> Result<Series> {
    let docs = |_: &Document| 1u64;
    let cites = |d: &Document| d.citations();
    let n = cfg.top_n;
    let points = match kind {
        BarKind::DocumentsPerYear => per_year(corpus, |ds| ds.len() as f64),
        BarKind::CitationsPerYear => {
            per_year(corpus, |ds| round_half_up(ds.iter().map(|d| d.citations()).sum::<u64>() as f64 / ds.len() as f64))
        }
        BarKind::PastCitationsPerYear => per_year(corpus, |ds| ds.iter().map(|d| d.citations()).sum::<u64>() as f64),
        BarKind::Lotka => lotka_fit(corpus).observed.iter().map(|(n, c)| (n.to_string(), *c as f64)).collect(),
        BarKind::SourcesPerDocument => ranked_entities(corpus, Element::Source, n, docs),
        BarKind::SourcesPerCitation => ranked_entities(corpus, Element::Source, n, cites),
        BarKind::AuthorsPerDocument => ranked_entities(corpus, Element::Author, n, docs),
        BarKind::AuthorsPerCitation => ranked_entities(corpus, Element::Author, n, cites),
        BarKind::AuthorsPerHIndex => author_h_indices(corpus).into_iter().take(n).map(|(a, h)| (a, h as f64)).collect(),
        BarKind::Bradford => match bradford_zones(corpus) {
            Ok(z) => (0..3)
                .map(|i| (format!("zone {} ({} sources)", i + 1, z.zone_sources[i]), z.zone_documents[i] as f64))
                .collect(),
            Err(_) => Vec::new(),
        },
        BarKind::InstitutionsPerDocument => ranked_entities(corpus, Element::Institution, n, docs),
        BarKind::InstitutionsPerCitation => ranked_entities(corpus, Element::Institution, n, cites),
        BarKind::CountriesPerDocument => ranked_entities(corpus, Element::Country, n, docs),
        BarKind::CountriesPerCitation => ranked_entities(corpus, Element::Country, n, cites),
        BarKind::LanguagePerDocument => ranked_entities(corpus, Element::Language, n, docs),
        BarKind::KeywordsPlusPerDocument => ranked_entities(corpus, Element::KeywordPlus, n, docs),
        BarKind::AuthorKeywordsPerDocument => ranked_entities(corpus, Element::AuthorKeyword, n, docs),
    };
    Ok(Series { label: kind.title().to_string(), kind: SeriesKind::Bar(kind), points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LotkaFit {
    /// (documents per author, number of authors), ascending in n.
    pub observed: Vec<(usize, usize)>,
    /// `None` when fewer than two productivity levels exist.
    pub c: Option<f64>,
    pub beta: Option<f64>,
    pub expected: Vec<(usize, f64)>,
}

pub fn lotka_fit(corpus: &Corpus) -> LotkaFit {
    let mut per_author: HashMap<&str, usize> = HashMap::new();
    for d in &corpus.documents {
        for a in d.entities(EntityKind::Author) {
            *per_author.entry(a).or_default() += 1;
        }
    }
    let mut levels: BTreeMap<usize, usize> = BTreeMap::new();
    for n in per_author.into_values() {
        *levels.entry(n).or_default() += 1;
    }
    lotka_from_levels(levels.into_iter().collect())
}

/// Least squares on (ln n, ln count): β = −slope, C = e^intercept.
pub fn lotka_from_levels(observed: Vec<(usize, usize)>) -> LotkaFit {
    if observed.len() < 2 {
        return LotkaFit { observed, c: None, beta: None, expected: Vec::new() };
    }
    let pts: Vec<(f64, f64)> = observed.iter().map(|&(n, c)| ((n as f64).ln(), (c as f64).ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let beta = -slope;
    let c = (my - slope * mx).exp();
    let expected = observed.iter().map(|&(n, _)| (n, c / (n as f64).powf(beta))).collect();
    LotkaFit { observed, c: Some(c), beta: Some(beta), expected }
}

/// Per-year frequency of the `top_n` most frequent values of `element` within the range.
/// Without a range the corpus year span is used.
pub fn evolution(
    corpus: &Corpus,
    element: Element,
    year_range: Option<(i32, i32)>,
    top_n: usize,
) -> Result<Vec<Series>> {
    let (lo, hi) = match year_range {
        Some(r) => r,
        None => {
            let axis = year_axis(corpus);
            match (axis.first(), axis.last()) {
                (Some(&a), Some(&b)) => (a, b),
                _ => return Err(Error::unavailable("no document has a publication year")),
            }
        }
    };
    if lo > hi {
        return Err(Error::usage(format!("year range {lo}:{hi} is empty")));
    }
    let mut counts: HashMap<&str, BTreeMap<i32, usize>> = HashMap::new();
    for d in &corpus.documents {
        let Some(y) = d.year.filter(|y| (lo..=hi).contains(y)) else {
            continue;
        };
        for v in element.values(d) {
            *counts.entry(v).or_default().entry(y).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.iter().map(|(k, m)| (*k, m.values().sum())).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(top_n);
    Ok(ranked
        .into_iter()
        .map(|(entity, _)| Series {
            label: entity.to_string(),
            kind: SeriesKind::Evolution,
            points: (lo..=hi).map(|y| (y.to_string(), counts[entity].get(&y).copied().unwrap_or(0) as f64)).collect(),
        })
        .collect())
}

/// Document frequency per value of `element`, descending, truncated.
pub fn treemap_data(corpus: &Corpus, element: Element, top_n: usize) -> Series {
    Series {
        label: format!("Top {top_n} {element}"),
        kind: SeriesKind::Treemap,
        points: ranked_entities(corpus, element, top_n, |_| 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flow {
    pub left: (Element, String),
    pub right: (Element, String),
    pub weight: usize,
}

/// Co-occurrence flows between two element kinds: weight is the number of documents
/// carrying both values.
pub fn sankey_flows(corpus: &Corpus, left: Element, right: Element, top_n: usize) -> Result<Vec<Flow>> {
    if left == right {
        return Err(Error::usage(format!("sankey needs two different elements, got {left} twice")));
    }
    let mut weights: HashMap<(&str, &str), usize> = HashMap::new();
    for d in &corpus.documents {
        let rs = right.values(d);
        for l in left.values(d) {
            for r in &rs {
                *weights.entry((l, r)).or_default() += 1;
            }
        }
    }
    let mut flows: Vec<((&str, &str), usize)> = weights.into_iter().collect();
    flows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    flows.truncate(top_n);
    Ok(flows
        .into_iter()
        .map(|((l, r), weight)| Flow { left: (left, l.to_string()), right: (right, r.to_string()), weight })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductivityRow {
    pub author: String,
    pub total: usize,
    /// Document ids per year, aligned with [`Productivity::years`].
    pub cells: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Productivity {
    pub years: Vec<i32>,
    pub rows: Vec<ProductivityRow>,
}

/// Author × year document matrix for the `top_n` most productive authors.
/// Documents without a year are left out.
pub fn productivity(corpus: &Corpus, top_n: usize) -> Productivity {
    let years = year_axis(corpus);
    let mut per_author: HashMap<&str, BTreeMap<i32, Vec<usize>>> = HashMap::new();
    for d in &corpus.documents {
        let Some(y) = d.year else { continue };
        for a in d.entities(EntityKind::Author) {
            per_author.entry(a).or_default().entry(y).or_default().push(d.id);
        }
    }
    let mut rows: Vec<ProductivityRow> = per_author
        .into_iter()
        .map(|(author, by_year)| ProductivityRow {
            author: author.to_string(),
            total: by_year.values().map(Vec::len).sum(),
            cells: years.iter().map(|y| by_year.get(y).cloned().unwrap_or_default()).collect(),
        })
        .collect();
    rows.sort_by(|a, b| b.total.cmp(&a.total).then_with(|| a.author.cmp(&b.author)));
    rows.truncate(top_n);
    Productivity { years, rows }
}

/// Distinct values of each element across the corpus.
pub fn element_values(corpus: &Corpus, element: Element) -> BTreeSet<String> {
    corpus.documents.iter().flat_map(|d| element.values(d)).map(str::to_string).collect()
}
