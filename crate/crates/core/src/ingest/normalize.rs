use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{RawRecord, SourceDb, Warning};
use crate::corpus::{canonicalize_document, collapse_whitespace, Affiliation, Document};
use crate::countries::CountryTable;

/// Which raw tags feed which document field, per database.
///
/// Each field lists candidate tags in preference order. Fields are resolved in
/// declaration order and a tag claimed by an earlier field is not reused, so a
/// Scopus export with both `author_keywords` and `keywords` maps the latter to
/// Keywords Plus while one with only `keywords` maps it to author keywords.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMap {
    pub title: Vec<String>,
    pub abstract_text: Vec<String>,
    pub authors: Vec<String>,
    pub affiliations: Vec<String>,
    pub author_keywords: Vec<String>,
    pub keywords_plus: Vec<String>,
    pub source: Vec<String>,
    pub doc_type: Vec<String>,
    pub language: Vec<String>,
    pub year: Vec<String>,
    pub references: Vec<String>,
    pub times_cited: Vec<String>,
    pub doi: Vec<String>,
    pub keyword_delimiters: Vec<String>,
    pub reference_delimiters: Vec<String>,
    pub affiliation_delimiters: Vec<String>,
}

fn tags(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl FieldMap {
    pub fn default_for(source: SourceDb) -> Self {
        match source {
            SourceDb::Scopus => FieldMap {
                title: tags(&["TITLE"]),
                abstract_text: tags(&["ABSTRACT"]),
                authors: tags(&["AUTHOR"]),
                affiliations: tags(&["AFFILIATIONS", "AFFILIATION"]),
                author_keywords: tags(&["AUTHOR_KEYWORDS", "AUTHOR-KEYWORDS", "KEYWORDS"]),
                keywords_plus: tags(&["KEYWORDS-PLUS", "KEYWORDS_PLUS", "KEYWORDS"]),
                source: tags(&["JOURNAL", "BOOKTITLE", "SOURCE"]),
                doc_type: tags(&["DOCUMENT_TYPE", "TYPE"]),
                language: tags(&["LANGUAGE"]),
                year: tags(&["YEAR"]),
                references: tags(&["REFERENCES"]),
                times_cited: tags(&["NOTE", "TIMES-CITED", "CITED-BY"]),
                doi: tags(&["DOI"]),
                keyword_delimiters: tags(&[";"]),
                reference_delimiters: tags(&[";"]),
                affiliation_delimiters: tags(&[";"]),
            },
            SourceDb::Wos => FieldMap {
                title: tags(&["TITLE"]),
                abstract_text: tags(&["ABSTRACT"]),
                authors: tags(&["AUTHOR"]),
                affiliations: tags(&["AFFILIATION", "AFFILIATIONS"]),
                author_keywords: tags(&["KEYWORDS", "AUTHOR-KEYWORDS"]),
                keywords_plus: tags(&["KEYWORDS-PLUS", "KEYWORDS_PLUS"]),
                source: tags(&["JOURNAL", "BOOKTITLE", "SERIES"]),
                doc_type: tags(&["TYPE", "DOCUMENT_TYPE"]),
                language: tags(&["LANGUAGE"]),
                year: tags(&["YEAR"]),
                references: tags(&["CITED-REFERENCES", "REFERENCES"]),
                times_cited: tags(&["TIMES-CITED", "NOTE"]),
                doi: tags(&["DOI"]),
                keyword_delimiters: tags(&[";"]),
                reference_delimiters: tags(&[";", "\n"]),
                affiliation_delimiters: tags(&[";", "\n"]),
            },
            SourceDb::Pubmed => FieldMap {
                title: tags(&["TI"]),
                abstract_text: tags(&["AB"]),
                authors: tags(&["FAU", "AU"]),
                affiliations: tags(&["AD"]),
                author_keywords: tags(&["OT"]),
                keywords_plus: tags(&["MH"]),
                source: tags(&["JT", "TA"]),
                doc_type: tags(&["PT"]),
                language: tags(&["LA"]),
                year: tags(&["DP"]),
                references: Vec::new(),
                times_cited: Vec::new(),
                doi: tags(&["LID", "AID"]),
                keyword_delimiters: Vec::new(),
                reference_delimiters: Vec::new(),
                affiliation_delimiters: tags(&[";"]),
            },
        }
    }
}

/// Result of normalizing one record: the document, or `None` when it was dropped.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub document: Option<Document>,
    pub warnings: Vec<Warning>,
}

struct Claims<'a> {
    record: &'a RawRecord,
    used: HashSet<&'a str>,
}

impl<'a> Claims<'a> {
    fn take(&mut self, candidates: &'a [String]) -> Option<&'a [String]> {
        for tag in candidates {
            if self.used.contains(tag.as_str()) {
                continue;
            }
            if let Some(values) = self.record.get(tag) {
                self.used.insert(tag);
                return Some(values);
            }
        }
        None
    }
}

/// Map a raw record onto a [`Document`] using `map`. Entity fields come out canonical.
pub fn normalize(record: &RawRecord, map: &FieldMap) -> Normalized {
    let offset = record.byte_span.0;
    let mut warnings = Vec::new();
    let warn = |warnings: &mut Vec<Warning>, message: String| warnings.push(Warning { offset, message });
    let pubmed = record.source_db == SourceDb::Pubmed;
    let mut claims = Claims { record, used: HashSet::new() };

    let title = claims.take(&map.title).map(|v| clean_text(&v.join(" "))).unwrap_or_default();
    if title.is_empty() {
        warn(&mut warnings, "record has no title; dropped".into());
        return Normalized { document: None, warnings };
    }
    let mut doc = Document::new(title, record.source_db.origin());
    doc.abstract_text = claims.take(&map.abstract_text).map(|v| clean_text(&v.join(" "))).unwrap_or_default();

    doc.authors = match claims.take(&map.authors) {
        Some(values) if pubmed => values.to_vec(),
        Some(values) => values.iter().flat_map(|v| split_authors(v)).collect(),
        None => Vec::new(),
    };

    let table = CountryTable::embedded();
    if let Some(values) = claims.take(&map.affiliations) {
        for v in values {
            for piece in split_on(v, &map.affiliation_delimiters) {
                if let Some(aff) = parse_affiliation(&piece, table) {
                    doc.affiliations.push(aff);
                }
            }
        }
    }

    let keyword_list = |values: &[String]| -> Vec<String> {
        values
            .iter()
            .flat_map(|v| split_on(v, &map.keyword_delimiters))
            .map(|k| clean_keyword(&k))
            .filter(|k| !k.is_empty())
            .collect()
    };
    doc.author_keywords = claims.take(&map.author_keywords).map(keyword_list).unwrap_or_default();
    doc.keywords_plus = claims.take(&map.keywords_plus).map(keyword_list).unwrap_or_default();
    doc.source = claims.take(&map.source).and_then(|v| v.first()).map(|s| clean_text(s)).unwrap_or_default();
    doc.doc_type = claims
        .take(&map.doc_type)
        .and_then(|v| v.first())
        .map(|s| clean_text(s.split(';').next().unwrap_or(s)))
        .unwrap_or_default();
    doc.language =
        claims.take(&map.language).and_then(|v| v.first()).map(|s| language_name(&clean_text(s))).unwrap_or_default();

    if let Some(raw_year) = claims.take(&map.year).and_then(|v| v.first()) {
        match leading_year(raw_year) {
            Some(y) => doc.year = Some(y),
            None => warn(&mut warnings, format!("unparseable year `{}`; left absent", raw_year.trim())),
        }
    }

    if !pubmed {
        doc.references = Some(
            claims
                .take(&map.references)
                .map(|values| {
                    values
                        .iter()
                        .flat_map(|v| split_on(v, &map.reference_delimiters))
                        .map(|r| collapse_whitespace(&r))
                        .filter(|r| !r.is_empty())
                        .collect()
                })
                .unwrap_or_default(),
        );
        doc.times_cited = claims.take(&map.times_cited).and_then(|values| values.iter().find_map(|v| cited_by(v)));
    }

    doc.doi = claims.take(&map.doi).and_then(|values| values.iter().find_map(|v| clean_doi(v, pubmed)));

    canonicalize_document(&mut doc);
    Normalized { document: Some(doc), warnings }
}

/// Strip TeX grouping braces and common escapes, collapse whitespace.
fn clean_text(s: &str) -> String {
    static ACCENT: OnceLock<Regex> = OnceLock::new();
    let accent = ACCENT.get_or_init(|| Regex::new(r#"\\[\x22'`^~=.]\{?([A-Za-z])\}?"#).expect("valid regex"));
    let s = accent.replace_all(s, "$1");
    let s = s.replace("\\&", "&").replace("\\%", "%").replace("\\_", "_").replace("\\$", "$");
    collapse_whitespace(&s.replace(['{', '}'], ""))
}

fn clean_keyword(s: &str) -> String {
    // MeSH headings carry qualifiers after `/` and a `*` major-topic marker.
    let s = s.split('/').next().unwrap_or(s).trim_start_matches('*');
    clean_text(s)
}

/// Split on any delimiter, ignoring delimiters nested inside braces.
fn split_on(value: &str, delimiters: &[String]) -> Vec<String> {
    if delimiters.is_empty() {
        return vec![value.trim().to_string()];
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut rest = value;
    'outer: while let Some(c) = rest.chars().next() {
        if depth == 0 {
            for d in delimiters {
                if rest.starts_with(d.as_str()) {
                    out.push(std::mem::take(&mut current));
                    rest = &rest[d.len()..];
                    continue 'outer;
                }
            }
        }
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        current.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out.push(current);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// Split a BibTeX author list on ` and ` at brace depth zero.
fn split_authors(value: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes = value.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'{' => depth += 1,
            b'}' => depth -= 1,
            b if depth == 0 && b.is_ascii_whitespace() => {
                let tail = &bytes[i + 1..];
                if tail.len() >= 4 && tail[..3].eq_ignore_ascii_case(b"and") && tail[3].is_ascii_whitespace() {
                    out.push(value[start..i].to_string());
                    i += 5;
                    start = i;
                    continue;
                }
            }
            _ => {}
        }
        i += 1;
    }
    out.push(value[start.min(value.len())..].to_string());
    out.into_iter().map(|a| clean_text(&a)).filter(|a| !a.is_empty()).collect()
}

fn institution_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?i)\b(univ\w*|inst\w*|college|school|hosp\w*|ctr|cent(er|re)|acad\w*|lab\w*|polytech\w*|minist\w*|council|fdn|foundation|corp\w*|company|agency|observ\w*)\b",
        )
        .expect("valid regex")
    })
}

/// Institution and country of one affiliation string.
fn parse_affiliation(raw: &str, table: &CountryTable) -> Option<Affiliation> {
    let mut s = clean_text(raw);
    for marker in ["(Corresponding Author),", "(Reprint Author),"] {
        if let Some(i) = s.find(marker) {
            s = s[i + marker.len()..].trim().to_string();
        }
    }
    let s = s.trim_end_matches(['.', ';', ' ']).to_string();
    if s.is_empty() {
        return None;
    }
    let country = table.match_affiliation(&s).map(|c| c.name.clone());
    let segments: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let institution = segments
        .iter()
        .find(|seg| institution_pattern().is_match(seg))
        .or_else(|| segments.first())
        .map(|seg| seg.to_string())
        .unwrap_or_default();
    Some(Affiliation { institution, country })
}

fn leading_year(raw: &str) -> Option<i32> {
    let digits: String = raw.trim().chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.len() != 4 {
        return None;
    }
    digits.parse().ok().filter(|y| (1000..=3000).contains(y))
}

fn cited_by(raw: &str) -> Option<u64> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?i)cited\s+by\s*:?\s*(\d+)").expect("valid regex"));
    if let Some(c) = re.captures(raw) {
        return c[1].parse().ok();
    }
    let t = raw.trim();
    (!t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())).then(|| t.parse().ok()).flatten()
}

fn clean_doi(raw: &str, pubmed: bool) -> Option<String> {
    let mut s = raw.trim();
    if pubmed {
        s = s.strip_suffix("[doi]")?.trim();
    }
    for prefix in ["https://doi.org/", "http://dx.doi.org/", "doi:", "DOI:", "DOI "] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest.trim();
        }
    }
    (s.starts_with("10.")).then(|| s.to_string())
}

fn language_name(raw: &str) -> String {
    let name = match raw.to_ascii_lowercase().as_str() {
        "eng" | "en" => "English",
        "fre" | "fra" | "fr" => "French",
        "ger" | "deu" | "de" => "German",
        "spa" | "es" => "Spanish",
        "por" | "pt" => "Portuguese",
        "ita" | "it" => "Italian",
        "chi" | "zho" | "zh" => "Chinese",
        "jpn" | "ja" => "Japanese",
        "rus" | "ru" => "Russian",
        "kor" | "ko" => "Korean",
        "dut" | "nld" | "nl" => "Dutch",
        "pol" | "pl" => "Polish",
        "tur" | "tr" => "Turkish",
        _ => {
            let mut chars = raw.chars();
            return match chars.next() {
                Some(first) => first.to_uppercase().chain(chars.flat_map(char::to_lowercase)).collect(),
                None => String::new(),
            };
        }
    };
    name.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_bibtex, parse_pubmed};

    fn scopus(src: &str) -> Normalized {
        let r = parse_bibtex(src.as_bytes(), SourceDb::Scopus).unwrap();
        normalize(&r[0], &FieldMap::default_for(SourceDb::Scopus))
    }

    #[test]
    fn pubmed_has_no_references_or_citations() {
        let src = "PMID- 1\nTI  - A title\n      more\nFAU - Chen, Tzu-Yu\nFAU - Lin, Yu-Ling\nAU  - Chen TY\nDP  - 2016 Mar\nMH  - *Decision Making/methods\nLA  - eng\nLID - 10.1000/XYZ [doi]\nAD  - Chang Gung University, Taoyuan, Taiwan. a@b.tw\n";
        let r = parse_pubmed(src.as_bytes()).unwrap();
        let n = normalize(&r[0], &FieldMap::default_for(SourceDb::Pubmed));
        let d = n.document.unwrap();
        assert_eq!(d.title, "A title more");
        assert_eq!(d.references, None);
        assert_eq!(d.times_cited, None);
        assert_eq!(d.authors, vec!["Chen, T.-Y.", "Lin, Y.-L."]);
        assert_eq!(d.year, Some(2016));
        assert_eq!(d.keywords_plus, vec!["decision making"]);
        assert_eq!(d.language, "English");
        assert_eq!(d.doi.as_deref(), Some("10.1000/XYZ"));
        assert_eq!(d.affiliations[0].country.as_deref(), Some("taiwan"));
        assert_eq!(d.affiliations[0].institution, "CHANG GUNG UNIVERSITY");
    }

    #[test]
    fn scopus_cited_by_note() {
        // Shapes of the `note` field seen in Scopus exports.
        let cases = [
            ("cited By 12", Some(12)),
            ("Cited By 0", Some(0)),
            ("cited By 5; Conference of 2019", Some(5)),
            ("Export Date: 1 January 2023; Cited By: 47", Some(47)),
            ("cited by 130", Some(130)),
            ("CITED BY 3", Some(3)),
            ("12", Some(12)),
            ("Export Date: 1 January 2023", None),
            ("", None),
            ("cited By", None),
        ];
        for (note, want) in cases {
            let n = scopus(&format!("@ARTICLE{{k, title={{T}}, note={{{note}}}}}"));
            assert_eq!(n.document.unwrap().times_cited, want, "note {note:?}");
        }
    }

    #[test]
    fn missing_title_drops_with_warning() {
        let n = scopus("@ARTICLE{k, year={2016}}");
        assert!(n.document.is_none());
        assert_eq!(n.warnings.len(), 1);
    }

    #[test]
    fn bad_year_warns_and_stays_absent() {
        let n = scopus("@ARTICLE{k, title={T}, year={forthcoming}}");
        assert_eq!(n.document.unwrap().year, None);
        assert_eq!(n.warnings.len(), 1);
    }

    #[test]
    fn scopus_field_mapping() {
        let n = scopus(
            "@ARTICLE{k,
              author={Chen, T.-Y. and Angelis A. AND M{\\\"u}ller, Klaus},
              title={Interval {Type-2} fuzzy sets},
              journal={Information Sciences},
              year={2016},
              abstract={We study things.},
              affiliations={Department of Industrial Management, Chang Gung University, Taoyuan, Taiwan; London School of Economics, London, United Kingdom},
              author_keywords={Decision making; MCDA},
              keywords={Fuzzy sets; Decision Theory},
              references={Saaty, T.L., The analytic hierarchy process (1980) McGraw-Hill; Keeney, R., Decisions with multiple objectives (1976)},
              document_type={Article},
              language={English},
              doi={10.1016/J.INS.2016.01.001},
              note={cited By 12}}",
        );
        let d = n.document.unwrap();
        assert_eq!(d.title, "Interval Type-2 fuzzy sets");
        assert_eq!(d.authors, vec!["Chen, T.-Y.", "Angelis, A.", "Muller, K."]);
        assert_eq!(d.source, "INFORMATION SCIENCES");
        assert_eq!(d.author_keywords, vec!["decision making", "mcda"]);
        assert_eq!(d.keywords_plus, vec!["fuzzy sets", "decision theory"]);
        assert_eq!(d.references.as_ref().unwrap().len(), 2);
        assert_eq!(d.times_cited, Some(12));
        assert_eq!(d.doc_type, "Article");
        let countries: Vec<_> = d.affiliations.iter().map(|a| a.country.clone().unwrap()).collect();
        assert_eq!(countries, vec!["taiwan", "united kingdom"]);
        assert_eq!(d.affiliations[1].institution, "LONDON SCHOOL OF ECONOMICS");
    }

    #[test]
    fn scopus_keywords_alone_are_author_keywords() {
        let d = scopus("@ARTICLE{k, title={T}, keywords={A; B}}").document.unwrap();
        assert_eq!(d.author_keywords, vec!["a", "b"]);
        assert!(d.keywords_plus.is_empty());
    }

    #[test]
    fn wos_mapping() {
        let src = "@article{ WOS:1,
Author = {Chen, Tzu-Yu and Lin, Yu-Ling},
Title = {{A title}},
Journal = {INFORMATION SCIENCES},
Year = {2016},
Affiliation = {Chen, TY (Corresponding Author), Chang Gung Univ, Dept Ind \\& Business Management, Taoyuan, Taiwan.
   Stanford Univ, Stanford, CA 94305 USA.},
Keywords = {MCDA; TOPSIS},
Keywords-Plus = {DECISION-MAKING; SETS},
Cited-References = {Saaty T. L., 1980, ANAL HIERARCHY PROC.
   Zadeh LA, 1965, INFORM CONTROL, V8, P338},
Type = {Article; Proceedings Paper},
Times-Cited = {21},
DOI = {10.1/ABC},
}";
        let r = parse_bibtex(src.as_bytes(), SourceDb::Wos).unwrap();
        let d = normalize(&r[0], &FieldMap::default_for(SourceDb::Wos)).document.unwrap();
        assert_eq!(d.authors, vec!["Chen, T.-Y.", "Lin, Y.-L."]);
        assert_eq!(d.keywords_plus, vec!["decision-making", "sets"]);
        assert_eq!(d.references.as_ref().unwrap().len(), 2);
        assert_eq!(d.times_cited, Some(21));
        assert_eq!(d.doc_type, "Article");
        assert_eq!(d.affiliations.len(), 2);
        assert_eq!(d.affiliations[0].institution, "CHANG GUNG UNIV");
        assert_eq!(d.affiliations[1].country.as_deref(), Some("united states"));
    }

    #[test]
    fn field_map_is_serializable() {
        let m = FieldMap::default_for(SourceDb::Scopus);
        let back: FieldMap = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
