//! Extractive summaries: rank abstract sentences by centrality on their cosine
//! similarity graph and return the best ones in source order.

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::textkit::{tfidf_from_streams, tokenize, Stopwords, TextField, TokenStream};

pub const DAMPING: f64 = 0.85;
pub const ITERATIONS: usize = 50;

const ABBREVIATIONS: &[&str] = &[
    "al", "fig", "figs", "vol", "vols", "no", "nos", "pp", "p", "eq", "eqs", "ref", "refs", "e.g", "i.e", "cf", "etc",
    "vs", "approx", "dr", "mr", "mrs", "ms", "prof", "st", "inc", "ltd", "co", "corp", "jr", "sr", "ed", "eds", "ch",
    "sec", "tab", "resp",
];

fn is_guarded(before: &str) -> bool {
    let word = before.rsplit(|c: char| c.is_whitespace() || c == '(').next().unwrap_or("");
    let word = word.trim_end_matches('.').to_lowercase();
    if word.is_empty() {
        return false;
    }
    // Dotted letter groups such as "U.S" or "e.g".
    if word.contains('.') && word.chars().any(char::is_alphabetic) {
        return true;
    }
    // A lone capital initial ("J. Smith") is not a sentence end.
    let single_initial = word.chars().count() == 1 && before.chars().last().is_some_and(char::is_uppercase);
    single_initial || ABBREVIATIONS.contains(&word.as_str())
}

/// Split on `.`, `!` or `?` (plus any closing quotes) followed by whitespace and an
/// uppercase letter, unless the period closes a known abbreviation or an initial.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &(pos, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let mut close = i + 1;
        while close < chars.len() && matches!(chars[close].1, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}') {
            close += 1;
        }
        let mut j = close;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        if j == close || j >= chars.len() || !chars[j].1.is_uppercase() {
            continue;
        }
        if c == '.' && is_guarded(&text[start..pos]) {
            continue;
        }
        let end = chars[close - 1].0 + chars[close - 1].1.len_utf8();
        push_trimmed(&mut out, &text[start..end]);
        start = chars[j].0;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummarySentence {
    pub text: String,
    pub doc_id: usize,
    /// Position within the concatenated sentence sequence.
    pub position: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub doc_ids: Vec<usize>,
    pub sentences: Vec<SummarySentence>,
}

impl Summary {
    pub fn text(&self) -> String {
        self.sentences.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// Stationary weights of a damped random walk on the similarity graph, starting
/// uniform. Rows without similarity mass jump uniformly.
pub fn centrality(similarity: &[Vec<f64>]) -> Vec<f64> {
    let n = similarity.len();
    if n == 0 {
        return Vec::new();
    }
    let row_sums: Vec<f64> = similarity.iter().map(|r| r.iter().sum()).collect();
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..ITERATIONS {
        let dangling: f64 = (0..n).filter(|&j| row_sums[j] <= 0.0).map(|j| p[j]).sum();
        let mut next = vec![(1.0 - DAMPING) / n as f64 + DAMPING * dangling / n as f64; n];
        for j in 0..n {
            if row_sums[j] > 0.0 {
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot += DAMPING * p[j] * similarity[j][i] / row_sums[j];
                }
            }
        }
        p = next;
    }
    p
}

/// Sentence scores for a sequence of sentences (TF-IDF cosine graph, no self-loops).
pub fn score_sentences(sentences: &[String], stopwords: &Stopwords) -> Vec<f64> {
    let streams: Vec<TokenStream> =
        sentences.iter().map(|s| TokenStream { field: TextField::Abstract, tokens: tokenize(s, stopwords) }).collect();
    let n = sentences.len();
    let mut sim = vec![vec![0.0; n]; n];
    if let Ok(m) = tfidf_from_streams(&streams) {
        let dense = m.to_dense();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sim[i][j] = dense[i].iter().zip(&dense[j]).map(|(a, b)| a * b).sum();
                }
            }
        }
    }
    centrality(&sim)
}

pub fn extractive_summary(
    corpus: &Corpus,
    doc_ids: &[usize],
    n_sentences: usize,
    stopwords: &Stopwords,
) -> Result<Summary> {
    if n_sentences < 1 {
        return Err(Error::usage("the summary needs at least one sentence"));
    }
    let mut texts = Vec::new();
    let mut owners = Vec::new();
    for &id in doc_ids {
        let doc = corpus.document(id)?;
        for s in split_sentences(&doc.abstract_text) {
            texts.push(s);
            owners.push(id);
        }
    }
    if texts.is_empty() {
        return Err(Error::unavailable("none of the selected documents has an abstract"));
    }
    let scores = score_sentences(&texts, stopwords);
    let mut ranked: Vec<usize> = (0..texts.len()).collect();
    ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    ranked.truncate(n_sentences);
    ranked.sort_unstable();
    Ok(Summary {
        doc_ids: doc_ids.to_vec(),
        sentences: ranked
            .into_iter()
            .map(|i| SummarySentence { text: texts[i].clone(), doc_id: owners[i], position: i, score: scores[i] })
            .collect(),
    })
}
