//! Documents, entity registries and the `<prefix>_<index>` labeling scheme.
//!
//! A [`Corpus`] is built once by [`assign_ids`] (plus reference resolution in
//! [`crate::fuse`]) and is read-only afterwards.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use unicode_normalization::{char::is_combining_mark, UnicodeNormalization};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Scopus,
    Wos,
    Pubmed,
    Merged,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affiliation {
    pub institution: String,
    /// Canonical (lowercase) country name from the embedded country table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: usize,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub affiliations: Vec<Affiliation>,
    #[serde(default)]
    pub author_keywords: Vec<String>,
    #[serde(default)]
    pub keywords_plus: Vec<String>,
    #[serde(default)]
    pub source: String,
    #[serde(default)]
    pub doc_type: String,
    #[serde(default)]
    pub language: String,
    #[serde(default)]
    pub year: Option<i32>,
    /// `None` when the database does not export references (PubMed).
    #[serde(default)]
    pub references: Option<Vec<String>>,
    #[serde(default)]
    pub times_cited: Option<u64>,
    #[serde(default)]
    pub doi: Option<String>,
    pub origin: Origin,
}

impl Document {
    pub fn new(title: impl Into<String>, origin: Origin) -> Self {
        Document {
            id: 0,
            title: title.into(),
            abstract_text: String::new(),
            authors: Vec::new(),
            affiliations: Vec::new(),
            author_keywords: Vec::new(),
            keywords_plus: Vec::new(),
            source: String::new(),
            doc_type: String::new(),
            language: String::new(),
            year: None,
            references: None,
            times_cited: None,
            doi: None,
            origin,
        }
    }

    /// Distinct institutions in affiliation order.
    pub fn institutions(&self) -> Vec<&str> {
        distinct(self.affiliations.iter().map(|a| a.institution.as_str()))
    }

    /// Distinct countries in affiliation order.
    pub fn countries(&self) -> Vec<&str> {
        distinct(self.affiliations.iter().filter_map(|a| a.country.as_deref()))
    }

    /// Entity values of `kind` carried by this document, deduplicated, in stored order.
    /// References are resolved separately and always yield an empty list here.
    pub fn entities(&self, kind: EntityKind) -> Vec<&str> {
        match kind {
            EntityKind::Author => distinct(self.authors.iter().map(String::as_str)),
            EntityKind::Source => distinct(std::iter::once(self.source.as_str())),
            EntityKind::Institution => self.institutions(),
            EntityKind::Country => self.countries(),
            EntityKind::AuthorKeyword => distinct(self.author_keywords.iter().map(String::as_str)),
            EntityKind::KeywordPlus => distinct(self.keywords_plus.iter().map(String::as_str)),
            EntityKind::Reference => Vec::new(),
        }
    }

    pub fn citations(&self) -> u64 {
        self.times_cited.unwrap_or(0)
    }

    /// Short citation used in tooltips and topic tables: `SURNAME, year`.
    pub fn short_citation(&self) -> String {
        let surname = self
            .authors
            .first()
            .map(|a| a.split(',').next().unwrap_or(a).trim().to_uppercase())
            .unwrap_or_else(|| "ANONYMOUS".to_string());
        match self.year {
            Some(y) => format!("{surname}, {y}"),
            None => format!("{surname}, n.d."),
        }
    }
}

fn distinct<'a>(values: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    values.filter(|v| !v.is_empty() && seen.insert(*v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Author,
    Source,
    Institution,
    Country,
    AuthorKeyword,
    KeywordPlus,
    Reference,
}

impl EntityKind {
    pub const ALL: [EntityKind; 7] = [
        EntityKind::Author,
        EntityKind::Source,
        EntityKind::Institution,
        EntityKind::Country,
        EntityKind::AuthorKeyword,
        EntityKind::KeywordPlus,
        EntityKind::Reference,
    ];

    pub fn prefix(self) -> char {
        match self {
            EntityKind::Author => 'a',
            EntityKind::Source => 'j',
            EntityKind::Institution => 'i',
            EntityKind::Country => 'c',
            EntityKind::AuthorKeyword => 'k',
            EntityKind::KeywordPlus => 'p',
            EntityKind::Reference => 'r',
        }
    }

    pub fn from_prefix(c: char) -> Option<Self> {
        EntityKind::ALL.into_iter().find(|k| k.prefix() == c)
    }

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Author => "author",
            EntityKind::Source => "source",
            EntityKind::Institution => "institution",
            EntityKind::Country => "country",
            EntityKind::AuthorKeyword => "author_keyword",
            EntityKind::KeywordPlus => "keyword_plus",
            EntityKind::Reference => "reference",
        }
    }
}

impl FromStr for EntityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match norm.as_str() {
            "author" | "authors" => EntityKind::Author,
            "source" | "sources" | "journal" => EntityKind::Source,
            "institution" | "institutions" => EntityKind::Institution,
            "country" | "countries" => EntityKind::Country,
            "author_keyword" | "author_keywords" | "kid" => EntityKind::AuthorKeyword,
            "keyword_plus" | "keywords_plus" | "kwp" => EntityKind::KeywordPlus,
            "reference" | "references" => EntityKind::Reference,
            _ => return Err(Error::usage(format!("unknown entity kind `{s}`"))),
        };
        Ok(kind)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `<prefix>_<index>`, e.g. `a_0` or `r_602`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub kind: EntityKind,
    pub index: usize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.prefix(), self.index)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::usage(format!("malformed label `{s}`"));
        let (prefix, index) = s.split_once('_').ok_or_else(bad)?;
        let mut chars = prefix.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(bad());
        };
        let kind = EntityKind::from_prefix(c).ok_or_else(bad)?;
        let index = index.parse().map_err(|_| bad())?;
        Ok(Label { kind, index })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRegistry {
    kind: EntityKind,
    entries: Vec<String>,
    index: HashMap<String, usize>,
}

impl EntityRegistry {
    pub fn new(kind: EntityKind) -> Self {
        EntityRegistry { kind, entries: Vec::new(), index: HashMap::new() }
    }

    pub fn kind(&self) -> EntityKind {
        self.kind
    }

    pub fn label_prefix(&self) -> char {
        self.kind.prefix()
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns the index of `entry`, appending it when new.
    pub fn intern(&mut self, entry: &str) -> usize {
        if let Some(&i) = self.index.get(entry) {
            return i;
        }
        let i = self.entries.len();
        self.entries.push(entry.to_string());
        self.index.insert(entry.to_string(), i);
        i
    }

    pub fn position(&self, entry: &str) -> Option<usize> {
        self.index.get(entry).copied()
    }

    pub fn label_of(&self, entry: &str) -> Option<Label> {
        self.position(entry).map(|index| Label { kind: self.kind, index })
    }

    pub fn get(&self, index: usize) -> Option<&str> {
        self.entries.get(index).map(String::as_str)
    }
}

#[derive(Serialize, Deserialize)]
struct RegistryRepr {
    kind: EntityKind,
    label_prefix: char,
    entries: Vec<String>,
}

impl Serialize for EntityRegistry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RegistryRepr { kind: self.kind, label_prefix: self.kind.prefix(), entries: self.entries.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EntityRegistry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RegistryRepr::deserialize(d)?;
        if repr.label_prefix != repr.kind.prefix() {
            return Err(serde::de::Error::custom(format!(
                "registry {} must use prefix `{}`",
                repr.kind,
                repr.kind.prefix()
            )));
        }
        let mut reg = EntityRegistry::new(repr.kind);
        for e in &repr.entries {
            if reg.position(e).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate {} entry `{e}`", repr.kind)));
            }
            reg.intern(e);
        }
        Ok(reg)
    }
}

/// What a reference resolves to: another document of the corpus, or an `r_#` entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CitationTarget {
    Document(usize),
    Reference(usize),
}

impl fmt::Display for CitationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CitationTarget::Document(id) => write!(f, "{id}"),
            CitationTarget::Reference(i) => write!(f, "r_{i}"),
        }
    }
}

impl Serialize for CitationTarget {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CitationTarget::Document(id) => s.serialize_u64(*id as u64),
            CitationTarget::Reference(_) => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for CitationTarget {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(usize),
            Label(String),
        }
        match Raw::deserialize(d)? {
            Raw::Id(id) => Ok(CitationTarget::Document(id)),
            Raw::Label(s) => match s.parse::<Label>() {
                Ok(Label { kind: EntityKind::Reference, index }) => Ok(CitationTarget::Reference(index)),
                _ => Err(serde::de::Error::custom(format!("expected an r_# label, found `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CitationLink {
    pub citing: usize,
    pub target: CitationTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub registries: BTreeMap<EntityKind, EntityRegistry>,
    #[serde(default)]
    pub citation_links: Vec<CitationLink>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn registry(&self, kind: EntityKind) -> &EntityRegistry {
        self.registries.get(&kind).expect("every entity kind has a registry")
    }

    pub fn label_of(&self, kind: EntityKind, entry: &str) -> Option<Label> {
        self.registry(kind).label_of(entry)
    }

    pub fn resolve(&self, label: Label) -> Option<&str> {
        self.registry(label.kind).get(label.index)
    }

    pub fn document(&self, id: usize) -> Result<&Document> {
        self.documents
            .get(id)
            .ok_or_else(|| Error::usage(format!("document id {id} out of range (corpus has {})", self.len())))
    }

    /// Resolved citation targets per document, sorted and deduplicated.
    pub fn targets_by_document(&self) -> Vec<Vec<CitationTarget>> {
        let mut out = vec![Vec::new(); self.len()];
        for link in &self.citation_links {
            if let Some(v) = out.get_mut(link.citing) {
                v.push(link.target);
            }
        }
        for v in &mut out {
            v.sort();
            v.dedup();
        }
        out
    }

    /// Display label of a citation target: the document id, or `r_#`.
    pub fn target_label(&self, target: CitationTarget) -> String {
        target.to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Replace letters with diacritics by their base letters.
pub fn fold_diacritics(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.nfd() {
        if is_combining_mark(c) {
            continue;
        }
        match c {
            'ø' => out.push('o'),
            'Ø' => out.push('O'),
            'ß' => out.push_str("ss"),
            'ł' => out.push('l'),
            'Ł' => out.push('L'),
            'đ' => out.push('d'),
            'Đ' => out.push('D'),
            'æ' => out.push_str("ae"),
            'Æ' => out.push_str("AE"),
            'œ' => out.push_str("oe"),
            'Œ' => out.push_str("OE"),
            'ı' => out.push('i'),
            'þ' => out.push_str("th"),
            'Þ' => out.push_str("TH"),
            _ => out.push(c),
        }
    }
    out
}

pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical form of an entity string. `None` means "drop this value".
pub fn canonicalize(raw: &str, kind: EntityKind) -> Option<String> {
    let base = collapse_whitespace(&fold_diacritics(raw));
    if base.is_empty() {
        return None;
    }
    let out = match kind {
        EntityKind::AuthorKeyword | EntityKind::KeywordPlus | EntityKind::Country => base.to_lowercase(),
        EntityKind::Source | EntityKind::Institution => base.to_uppercase(),
        EntityKind::Author => canonical_author(&base),
        EntityKind::Reference => base,
    };
    (!out.is_empty()).then_some(out)
}

/// `Surname, I.-I.` form: the surname keeps its spelling (case-fixed when shouted),
/// given names shrink to initials with hyphenation preserved.
fn canonical_author(name: &str) -> String {
    let name = name.trim_matches(|c: char| c == ',' || c == ';' || c.is_whitespace());
    let (surname, given) = match name.split_once(',') {
        Some((s, g)) => (s.trim().to_string(), g.replace(',', " ")),
        None => {
            let tokens: Vec<&str> = name.split_whitespace().collect();
            match tokens.as_slice() {
                [] => return String::new(),
                [single] => (single.to_string(), String::new()),
                [rest @ .., last] if is_initials_token(last) => (rest.join(" "), last.to_string()),
                [first @ .., last] => (last.to_string(), first.join(" ")),
            }
        }
    };
    let surname = fix_case(&surname);
    let initials = initials(&given);
    match (surname.is_empty(), initials.is_empty()) {
        (true, _) => initials,
        (false, true) => surname,
        (false, false) => format!("{surname}, {initials}"),
    }
}

fn is_initials_token(t: &str) -> bool {
    let letters: Vec<char> = t.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return false;
    }
    if t.contains('.') {
        return t.split(['.', '-']).all(|seg| seg.chars().filter(|c| c.is_alphabetic()).count() <= 1);
    }
    letters.len() <= 3 && letters.iter().all(|c| c.is_uppercase())
}

fn fix_case(s: &str) -> String {
    let letters = || s.chars().filter(|c| c.is_alphabetic());
    let shouted = letters().all(|c| c.is_uppercase()) || letters().all(|c| c.is_lowercase());
    if !shouted {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut start = true;
    for c in s.chars() {
        if c.is_alphabetic() {
            if start {
                out.extend(c.to_uppercase());
            } else {
                out.extend(c.to_lowercase());
            }
            start = false;
        } else {
            out.push(c);
            start = matches!(c, ' ' | '-' | '\'');
        }
    }
    out
}

fn initials(given: &str) -> String {
    let mut out = String::new();
    for part in given.split_whitespace() {
        for (i, segment) in part.split('.').enumerate() {
            if segment.is_empty() {
                continue;
            }
            let hyphen_lead = segment.starts_with('-') && (i > 0 || !out.is_empty());
            let segment = segment.trim_start_matches('-');
            let letters: Vec<char> = segment.chars().filter(|c| c.is_alphabetic()).collect();
            if letters.is_empty() {
                continue;
            }
            if hyphen_lead {
                out.push('-');
            }
            let packed = !segment.contains('-') && letters.len() <= 2 && letters.iter().all(|c| c.is_uppercase());
            if packed && letters.len() > 1 {
                for c in letters {
                    out.push(c);
                    out.push('.');
                }
                continue;
            }
            let subs: Vec<String> = segment
                .split('-')
                .filter_map(|sub| sub.chars().find(|c| c.is_alphabetic()))
                .map(|c| format!("{}.", c.to_uppercase()))
                .collect();
            out.push_str(&subs.join("-"));
        }
    }
    out
}

/// Number documents 0..n-1 in input order, canonicalize their entity fields and
/// build first-appearance registries. The reference registry starts empty; it is
/// filled by reference resolution.
pub fn assign_ids(mut documents: Vec<Document>) -> Result<Corpus> {
    if documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut registries: BTreeMap<EntityKind, EntityRegistry> =
        EntityKind::ALL.iter().map(|&k| (k, EntityRegistry::new(k))).collect();

    for (id, doc) in documents.iter_mut().enumerate() {
        doc.id = id;
        canonicalize_document(doc);
        for kind in EntityKind::ALL {
            if kind == EntityKind::Reference {
                continue;
            }
            let reg = registries.get_mut(&kind).expect("registry present");
            for value in doc.entities(kind) {
                reg.intern(value);
            }
        }
    }
    Ok(Corpus { documents, registries, citation_links: Vec::new() })
}

fn canonicalize_list(values: &mut Vec<String>, kind: EntityKind) {
    let mut seen = HashSet::new();
    *values = values.iter().filter_map(|v| canonicalize(v, kind)).filter(|v| seen.insert(v.clone())).collect();
}

/// Bring every entity-bearing field of `doc` into canonical form.
pub fn canonicalize_document(doc: &mut Document) {
    canonicalize_list(&mut doc.authors, EntityKind::Author);
    canonicalize_list(&mut doc.author_keywords, EntityKind::AuthorKeyword);
    canonicalize_list(&mut doc.keywords_plus, EntityKind::KeywordPlus);
    doc.source = canonicalize(&doc.source, EntityKind::Source).unwrap_or_default();
    doc.affiliations = doc
        .affiliations
        .iter()
        .filter_map(|a| {
            let institution = canonicalize(&a.institution, EntityKind::Institution).unwrap_or_default();
            let country = a.country.as_deref().and_then(|c| canonicalize(c, EntityKind::Country));
            (!institution.is_empty() || country.is_some()).then_some(Affiliation { institution, country })
        })
        .collect();
}

/// Every broken corpus invariant, each naming the document and field involved.
pub fn validate(corpus: &Corpus) -> Vec<String> {
    let mut out = Vec::new();
    let n = corpus.len();
    for kind in EntityKind::ALL {
        match corpus.registries.get(&kind) {
            None => out.push(format!("registry {kind}: missing")),
            Some(reg) => {
                let mut seen = HashSet::new();
                for e in reg.entries() {
                    if !seen.insert(e) {
                        out.push(format!("registry {kind}: duplicate entry `{e}`"));
                    }
                }
            }
        }
    }
    for (pos, doc) in corpus.documents.iter().enumerate() {
        if doc.id != pos {
            out.push(format!("doc {pos}: id is {} but position is {pos}", doc.id));
        }
        if let Some(y) = doc.year {
            if !(1000..=3000).contains(&y) {
                out.push(format!("doc {pos}: year out of range"));
            }
        }
        for kind in EntityKind::ALL {
            let Some(reg) = corpus.registries.get(&kind) else {
                continue;
            };
            for value in doc.entities(kind) {
                if reg.position(value).is_none() {
                    out.push(format!("doc {pos}: {kind} `{value}` has no registry entry"));
                }
            }
        }
    }
    let refs = corpus.registries.get(&EntityKind::Reference).map_or(0, EntityRegistry::len);
    for link in &corpus.citation_links {
        if link.citing >= n {
            out.push(format!("doc {}: citation link from a document outside the corpus", link.citing));
        }
        match link.target {
            CitationTarget::Document(t) if t >= n => {
                out.push(format!("doc {}: citation link to document {t} outside the corpus", link.citing))
            }
            CitationTarget::Document(t) if t == link.citing => {
                out.push(format!("doc {}: self-citation link", link.citing))
            }
            CitationTarget::Reference(r) if r >= refs => {
                out.push(format!("doc {}: citation link to unknown reference r_{r}", link.citing))
            }
            _ => {}
        }
    }
    out
}
