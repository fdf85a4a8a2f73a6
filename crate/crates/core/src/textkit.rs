//! Tokenization, n-grams, TF-IDF and word frequencies.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextField {
    Abstract,
    Title,
    AuthorKeywords,
    KeywordsPlus,
}

impl TextField {
    pub fn name(self) -> &'static str {
        match self {
            TextField::Abstract => "abstract",
            TextField::Title => "title",
            TextField::AuthorKeywords => "author_keywords",
            TextField::KeywordsPlus => "keywords_plus",
        }
    }

    pub fn is_keyword(self) -> bool {
        matches!(self, TextField::AuthorKeywords | TextField::KeywordsPlus)
    }

    /// The field's text; keyword lists are joined with `; `.
    pub fn text(self, doc: &Document) -> String {
        match self {
            TextField::Abstract => doc.abstract_text.clone(),
            TextField::Title => doc.title.clone(),
            TextField::AuthorKeywords => doc.author_keywords.join("; "),
            TextField::KeywordsPlus => doc.keywords_plus.join("; "),
        }
    }

    pub fn keywords(self, doc: &Document) -> &[String] {
        match self {
            TextField::AuthorKeywords => &doc.author_keywords,
            TextField::KeywordsPlus => &doc.keywords_plus,
            _ => &[],
        }
    }
}

impl fmt::Display for TextField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TextField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().replace('-', "_").as_str() {
            "abstract" | "abstracts" | "abs" => Ok(TextField::Abstract),
            "title" | "titles" => Ok(TextField::Title),
            "author_keywords" | "author_keyword" | "kid" => Ok(TextField::AuthorKeywords),
            "keywords_plus" | "keyword_plus" | "kwp" => Ok(TextField::KeywordsPlus),
            other => Err(Error::usage(format!(
                "unknown text field `{other}` (expected abstract, title, author_keywords or keywords_plus)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn none() -> Self {
        Stopwords(HashSet::new())
    }

    pub fn english() -> &'static Stopwords {
        static EN: OnceLock<Stopwords> = OnceLock::new();
        EN.get_or_init(|| Stopwords::from_text(include_str!("../data/stopwords_en.txt")))
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub field: TextField,
    pub tokens: Vec<String>,
}

/// Lowercase word tokens. Words split on anything that is not alphanumeric,
/// except hyphens inside a word. Stopwords, pure numbers and one-character
/// tokens are dropped.
pub fn tokenize(text: &str, stopwords: &Stopwords) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .map(|w| w.trim_matches('-'))
        .filter(|w| w.chars().count() >= 2 && w.chars().any(char::is_alphabetic))
        .map(str::to_lowercase)
        .filter(|w| !stopwords.contains(w))
        .collect()
}

pub fn token_stream(doc: &Document, field: TextField, stopwords: &Stopwords) -> TokenStream {
    TokenStream { field, tokens: tokenize(&field.text(doc), stopwords) }
}

pub fn corpus_streams(corpus: &Corpus, field: TextField, stopwords: &Stopwords) -> Vec<TokenStream> {
    corpus.documents.iter().map(|d| token_stream(d, field, stopwords)).collect()
}

/// Hyphen-joined n-gram counts, windows never crossing streams. Sorted by
/// descending count, then gram.
pub fn ngrams(streams: &[TokenStream], n: usize) -> Result<Vec<(String, usize)>> {
    if n < 1 {
        return Err(Error::usage("n-gram size must be at least 1"));
    }
    let mut counts: HashMap<String, usize> = HashMap::new();
    for s in streams {
        for w in s.tokens.windows(n) {
            *counts.entry(w.join("-")).or_default() += 1;
        }
    }
    Ok(sorted_counts(counts))
}

fn sorted_counts(counts: HashMap<String, usize>) -> Vec<(String, usize)> {
    let mut out: Vec<_> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Row-major sparse matrix; each row holds `(col, value)` sorted by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub vocabulary: Vec<String>,
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut dense = vec![0.0; self.n_cols];
                for &(c, v) in r {
                    dense[c] = v;
                }
                dense
            })
            .collect()
    }

    /// `rows cols nnz` header, then 0-based `row col value` triplets.
    pub fn to_market(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n_rows, self.n_cols, self.nnz());
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, v) in r {
                out.push_str(&format!("{i} {c} {v}\n"));
            }
        }
        out
    }
}

/// Smoothed TF-IDF: `tf · (ln((1+N)/(1+df)) + 1)`, rows L2-normalized.
/// Needs at least two non-empty streams.
pub fn tfidf_from_streams(streams: &[TokenStream]) -> Result<SparseMatrix> {
    let usable = streams.iter().filter(|s| !s.tokens.is_empty()).count();
    if usable < 2 {
        return Err(Error::unavailable(format!("TF-IDF needs at least 2 non-empty documents, found {usable}")));
    }
    let counts: Vec<BTreeMap<&str, usize>> = streams
        .iter()
        .map(|s| {
            let mut m = BTreeMap::new();
            for t in &s.tokens {
                *m.entry(t.as_str()).or_default() += 1;
            }
            m
        })
        .collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for m in &counts {
        for t in m.keys() {
            *df.entry(t).or_default() += 1;
        }
    }
    let vocabulary: Vec<String> = df.keys().map(|t| t.to_string()).collect();
    let col: HashMap<&str, usize> = df.keys().enumerate().map(|(i, t)| (*t, i)).collect();
    let n = streams.len() as f64;
    let idf: Vec<f64> = df.values().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();

    let rows = counts
        .iter()
        .map(|m| {
            let mut row: Vec<(usize, f64)> = m
                .iter()
                .map(|(t, &tf)| {
                    let c = col[t];
                    (c, tf as f64 * idf[c])
                })
                .collect();
            let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|(_, v)| *v /= norm);
            }
            row
        })
        .collect();
    Ok(SparseMatrix { n_rows: streams.len(), n_cols: vocabulary.len(), vocabulary, rows })
}

/// One row per document of the corpus.
pub fn tfidf(corpus: &Corpus, field: TextField, stopwords: &Stopwords) -> Result<SparseMatrix> {
    tfidf_from_streams(&corpus_streams(corpus, field, stopwords))
}

/// Frequencies for wordclouds. Keyword fields count whole phrases; text fields
/// count tokens.
pub fn word_frequencies(
    corpus: &Corpus,
    field: TextField,
    stopwords: &Stopwords,
    top_n: usize,
) -> Vec<(String, usize)> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for d in &corpus.documents {
        if field.is_keyword() {
            for k in field.keywords(d) {
                let k = k.trim().to_lowercase();
                if !k.is_empty() && !stopwords.contains(&k) {
                    *counts.entry(k).or_default() += 1;
                }
            }
        } else {
            for t in tokenize(&field.text(d), stopwords) {
                *counts.entry(t).or_default() += 1;
            }
        }
    }
    let mut out = sorted_counts(counts);
    out.truncate(top_n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Origin;
    use crate::fuse::{label, MatchConfig};
    use proptest::prelude::*;

    fn stream(text: &str) -> TokenStream {
        TokenStream { field: TextField::Abstract, tokens: tokenize(text, Stopwords::english()) }
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Multiple-Criteria Decision Analysis!", &Stopwords::none()),
            vec!["multiple-criteria", "decision", "analysis"]
        );
        assert!(tokenize("", &Stopwords::none()).is_empty());
        assert!(tokenize("the of and", Stopwords::english()).is_empty());
        assert_eq!(tokenize("In 2016, a -type- AHP x 3.5", &Stopwords::none()), vec!["in", "type", "ahp"]);
        assert_eq!(tokenize("Ünïcode Straße", &Stopwords::none()), vec!["ünïcode", "straße"]);
        assert!(Stopwords::english().len() >= 170);
    }

    #[test]
    fn ngram_examples() {
        let s = [stream("interval type fuzzy sets"), stream("type fuzzy sets theory")];
        let g = ngrams(&s, 3).unwrap();
        assert_eq!(g[0], ("type-fuzzy-sets".to_string(), 2));
        assert_eq!(g.len(), 3);
        assert!(ngrams(&[stream("too short")], 3).unwrap().is_empty());
        assert!(matches!(ngrams(&s, 0), Err(Error::Usage(_))));
        let uni = ngrams(&s, 1).unwrap();
        assert_eq!(uni.iter().map(|g| g.1).sum::<usize>(), 8);
    }

    /// Dense scalar loop over the same definition.
    fn dense_oracle(docs: &[Vec<String>]) -> (Vec<String>, Vec<Vec<f64>>) {
        let mut vocab: Vec<String> = docs.iter().flatten().cloned().collect();
        vocab.sort();
        vocab.dedup();
        let n = docs.len() as f64;
        let mut out = Vec::new();
        for d in docs {
            let mut row = Vec::new();
            for term in &vocab {
                let tf = d.iter().filter(|t| *t == term).count() as f64;
                let df = docs.iter().filter(|o| o.contains(term)).count() as f64;
                row.push(tf * (((1.0 + n) / (1.0 + df)).ln() + 1.0));
            }
            let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for v in &mut row {
                    *v /= norm;
                }
            }
            out.push(row);
        }
        (vocab, out)
    }

    #[test]
    fn three_doc_toy_matches_oracle() {
        let s = [stream("fuzzy sets decision"), stream("decision making decision"), stream("sankey flows")];
        let m = tfidf_from_streams(&s).unwrap();
        let (vocab, dense) = dense_oracle(&s.iter().map(|s| s.tokens.clone()).collect::<Vec<_>>());
        assert_eq!(m.vocabulary, vocab);
        for (a, b) in m.to_dense().iter().flatten().zip(dense.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        let cos = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let d = m.to_dense();
        assert_eq!(cos(&d[0], &d[2]), 0.0);

        let same = tfidf_from_streams(&[stream("alpha beta"), stream("alpha beta")]).unwrap().to_dense();
        assert_eq!(same[0], same[1]);
        assert!((cos(&same[0], &same[1]) - 1.0).abs() < 1e-12);

        assert!(matches!(tfidf_from_streams(&[stream("alone"), stream("")]), Err(Error::Unavailable(_))));
        assert!(m.to_market().starts_with(&format!("3 {} {}\n", m.n_cols, m.nnz())));
    }

    proptest! {
        #[test]
        fn sparse_equals_dense_oracle(docs in prop::collection::vec(prop::collection::vec("[a-e]{2}", 0..8), 2..=10)) {
            let streams: Vec<TokenStream> = docs.iter().map(|d| TokenStream { field: TextField::Abstract, tokens: d.clone() }).collect();
            let Ok(m) = tfidf_from_streams(&streams) else {
                prop_assert!(docs.iter().filter(|d| !d.is_empty()).count() < 2);
                return Ok(());
            };
            let (vocab, dense) = dense_oracle(&docs);
            prop_assert_eq!(&m.vocabulary, &vocab);
            let sorted = m.vocabulary.windows(2).all(|w| w[0] < w[1]);
            prop_assert!(sorted);
            for (i, row) in m.to_dense().iter().enumerate() {
                for (a, b) in row.iter().zip(&dense[i]) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
                let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(docs[i].is_empty() && norm == 0.0 || (norm - 1.0).abs() < 1e-12);
                prop_assert!(m.rows[i].windows(2).all(|w| w[0].0 < w[1].0));
            }
            // idf is monotone in document frequency
            let idf_of = |t: &str| {
                let df = docs.iter().filter(|d| d.iter().any(|x| x == t)).count() as f64;
                ((1.0 + docs.len() as f64) / (1.0 + df)).ln() + 1.0
            };
            let mut by_df: Vec<(usize, f64)> = vocab.iter().map(|t| (docs.iter().filter(|d| d.contains(t)).count(), idf_of(t))).collect();
            by_df.sort_by_key(|a| a.0);
            prop_assert!(by_df.windows(2).all(|w| w[0].1 >= w[1].1));
        }

        #[test]
        fn unigram_conservation(texts in prop::collection::vec("[a-z ]{0,60}", 0..6)) {
            let streams: Vec<_> = texts.iter().map(|t| stream(t)).collect();
            let total: usize = streams.iter().map(|s| s.tokens.len()).sum();
            let counted: usize = ngrams(&streams, 1).unwrap().iter().map(|g| g.1).sum();
            prop_assert_eq!(total, counted);
            for s in &streams {
                prop_assert!(s.tokens.iter().all(|t| !t.is_empty() && !t.contains(char::is_whitespace)));
            }
        }
    }

    #[test]
    fn keyword_frequencies_count_whole_phrases() {
        let mut a = Document::new("a", Origin::Scopus);
        a.keywords_plus = vec!["Decision Making".into(), "fuzzy sets".into()];
        let mut b = Document::new("b", Origin::Scopus);
        b.keywords_plus = vec!["decision making".into()];
        b.abstract_text = "Decision analysis and decision theory".into();
        let c = label(vec![a, b], &MatchConfig::default()).unwrap();
        let f = word_frequencies(&c, TextField::KeywordsPlus, Stopwords::english(), 10);
        assert_eq!(f[0], ("decision making".to_string(), 2));
        assert_eq!(word_frequencies(&c, TextField::KeywordsPlus, Stopwords::english(), 1).len(), 1);
        assert!(word_frequencies(&c, TextField::AuthorKeywords, Stopwords::english(), 10).is_empty());
        let words = word_frequencies(&c, TextField::Abstract, Stopwords::english(), 10);
        assert_eq!(words[0], ("decision".to_string(), 2));
    }
}
