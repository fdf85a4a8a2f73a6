//! Topic extraction: cluster document vectors, then describe each cluster with
//! class-based TF-IDF words and its most central document.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::textkit::{tokenize, Stopwords, TextField};
use crate::vectorlab::{kmeans, silhouette, KMeansConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicCount {
    Fixed(usize),
    /// Smallest k in 2..=10 with the best mean silhouette.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopicConfig {
    pub top_words: usize,
    pub kmeans: KMeansConfig,
}

impl Default for TopicConfig {
    fn default() -> Self {
        TopicConfig { top_words: 10, kmeans: KMeansConfig { n_init: 10, ..KMeansConfig::default() } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topic {
    pub index: usize,
    pub size: usize,
    pub top_words: Vec<String>,
    pub scores: Vec<f64>,
    pub central_doc: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    /// Ordered by descending size.
    pub topics: Vec<Topic>,
    /// Topic index per document.
    pub assignment: Vec<usize>,
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Score of term `t` in class `c`: `tf(t,c) · ln(1 + A / f(t))`, where `A` is the
/// mean class token count and `f(t)` the term's corpus frequency.
pub fn class_tfidf(classes: &[Vec<&str>]) -> Vec<BTreeMap<String, f64>> {
    let tfs: Vec<HashMap<&str, usize>> = classes
        .iter()
        .map(|tokens| {
            let mut m = HashMap::new();
            for t in tokens {
                *m.entry(*t).or_default() += 1;
            }
            m
        })
        .collect();
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for tf in &tfs {
        for (t, n) in tf {
            *freq.entry(t).or_default() += n;
        }
    }
    let total: usize = classes.iter().map(Vec::len).sum();
    let avg = total as f64 / classes.len().max(1) as f64;
    tfs.iter()
        .map(|tf| tf.iter().map(|(t, &n)| (t.to_string(), n as f64 * (1.0 + avg / freq[t] as f64).ln())).collect())
        .collect()
}

/// Cluster `vectors` (one row per document) and describe each cluster by the
/// abstracts of its members. Empty clusters are dropped, so fewer than `k`
/// topics can come back when documents coincide.
pub fn fit_topics(
    corpus: &Corpus,
    vectors: &[Vec<f64>],
    count: TopicCount,
    seed: u64,
    stopwords: &Stopwords,
    cfg: &TopicConfig,
) -> Result<TopicModel> {
    if vectors.len() != corpus.len() {
        return Err(Error::usage(format!("expected {} vectors, found {}", corpus.len(), vectors.len())));
    }
    let tokens: Vec<Vec<String>> =
        corpus.documents.iter().map(|d| tokenize(&TextField::Abstract.text(d), stopwords)).collect();
    let usable = tokens.iter().filter(|t| !t.is_empty()).count();

    let clustering = match count {
        TopicCount::Fixed(k) => {
            if k < 1 || k > usable {
                return Err(Error::usage(format!(
                    "k={k} topics needs at least {k} documents with abstracts, found {usable}"
                )));
            }
            kmeans(vectors, k, seed, &cfg.kmeans)?
        }
        TopicCount::Auto => {
            let max_k = 10.min(usable).min(vectors.len().saturating_sub(1));
            if max_k < 2 {
                return Err(Error::usage(format!(
                    "automatic k needs at least 3 documents with abstracts, found {usable}"
                )));
            }
            let mut best: Option<(f64, crate::vectorlab::Clustering)> = None;
            for k in 2..=max_k {
                let c = kmeans(vectors, k, seed, &cfg.kmeans)?;
                let s = silhouette(vectors, &c.labels);
                if best.as_ref().is_none_or(|(bs, _)| s > *bs) {
                    best = Some((s, c));
                }
            }
            best.expect("at least one candidate").1
        }
    };

    let k = clustering.centroids.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (doc, &l) in clustering.labels.iter().enumerate() {
        members[l].push(doc);
    }
    let mut order: Vec<usize> = (0..k).filter(|&c| !members[c].is_empty()).collect();
    order.sort_by(|&a, &b| members[b].len().cmp(&members[a].len()).then(members[a][0].cmp(&members[b][0])));

    let classes: Vec<Vec<&str>> = order
        .iter()
        .map(|&c| members[c].iter().flat_map(|&d| tokens[d].iter().map(String::as_str)).collect())
        .collect();
    let scores = class_tfidf(&classes);

    let mut assignment = vec![0; corpus.len()];
    let mut topics = Vec::with_capacity(order.len());
    for (index, &c) in order.iter().enumerate() {
        for &d in &members[c] {
            assignment[d] = index;
        }
        let mut words: Vec<(&String, f64)> =
            scores[index].iter().map(|(w, s)| (w, *s)).filter(|(_, s)| *s > 0.0).collect();
        words.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        words.truncate(cfg.top_words);
        let centroid = &clustering.centroids[c];
        let central_doc = members[c]
            .iter()
            .copied()
            .max_by(|&a, &b| cosine(&vectors[a], centroid).total_cmp(&cosine(&vectors[b], centroid)).then(b.cmp(&a)))
            .expect("cluster is non-empty");
        topics.push(Topic {
            index,
            size: members[c].len(),
            top_words: words.iter().map(|w| w.0.clone()).collect(),
            scores: words.iter().map(|w| w.1).collect(),
            central_doc,
        });
    }
    Ok(TopicModel { topics, assignment })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicRow {
    pub index: usize,
    pub size: usize,
    pub words: String,
    pub central: String,
}

impl fmt::Display for TopicRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {} | {}", self.index, self.size, self.words, self.central)
    }
}

pub fn topic_summary(model: &TopicModel, corpus: &Corpus) -> Vec<TopicRow> {
    model
        .topics
        .iter()
        .map(|t| TopicRow {
            index: t.index,
            size: t.size,
            words: t.top_words.join(", "),
            central: match corpus.documents.get(t.central_doc) {
                Some(d) => format!("{} ({})", t.central_doc, d.short_citation()),
                None => t.central_doc.to_string(),
            },
        })
        .collect()
}
