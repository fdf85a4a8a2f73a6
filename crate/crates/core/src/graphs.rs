//! Citation, shared-reference, co-authorship and country collaboration networks.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::{canonicalize, CitationTarget, Corpus, EntityKind};
use crate::countries::CountryTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Document,
    Reference,
    Author,
    Country,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub label: String,
    pub kind: NodeKind,
    #[serde(default)]
    pub attributes: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
    pub directed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn add_node(&mut self, label: impl Into<String>, kind: NodeKind) -> usize {
        self.nodes.push(Node { label: label.into(), kind, attributes: BTreeMap::new() });
        self.nodes.len() - 1
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Undirected adjacency lists (edge direction ignored), sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<u64> {
        let (ia, ib) = (self.node_index(a)?, self.node_index(b)?);
        self.edges
            .iter()
            .find(|e| (e.source == ia && e.target == ib) || (!e.directed && e.source == ib && e.target == ia))
            .map(|e| e.weight)
    }

    /// Connected components, ignoring direction. Numbered by size descending,
    /// then by smallest member index.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.nodes.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                for &n in &adj[members[i]] {
                    if comp[n] == usize::MAX {
                        comp[n] = id;
                        members.push(n);
                    }
                }
                i += 1;
            }
            groups.push(members);
        }
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by(|&a, &b| groups[b].len().cmp(&groups[a].len()).then(groups[a][0].cmp(&groups[b][0])));
        let mut rank = vec![0; groups.len()];
        for (r, &g) in order.iter().enumerate() {
            rank[g] = r;
        }
        comp.into_iter().map(|c| rank[c]).collect()
    }

    /// Keep only `keep` nodes (in their current order) and the edges among them.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut map = vec![None; self.nodes.len()];
        let mut g = Graph::default();
        for &k in keep {
            map[k] = Some(g.nodes.len());
            g.nodes.push(self.nodes[k].clone());
        }
        for e in &self.edges {
            if let (Some(s), Some(t)) = (map[e.source], map[e.target]) {
                g.edges.push(Edge { source: s, target: t, ..*e });
            }
        }
        g
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `source<TAB>target<TAB>weight` per edge, using node labels.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", self.nodes[e.source].label, self.nodes[e.target].label, e.weight))
            .collect()
    }
}

/// Directed document → cited-work graph. A cited work (in-corpus document or
/// `r_#` reference) is kept when at least `min_citations` documents cite it;
/// citing documents without a surviving edge are dropped.
pub fn citation_network(corpus: &Corpus, min_citations: usize) -> Graph {
    let mut cited_by: BTreeMap<CitationTarget, Vec<usize>> = BTreeMap::new();
    for l in &corpus.citation_links {
        cited_by.entry(l.target).or_default().push(l.citing);
    }
    cited_by.retain(|_, v| v.len() >= min_citations.max(1));

    let mut g = Graph::default();
    let mut doc_node: HashMap<usize, usize> = HashMap::new();
    let mut doc = |g: &mut Graph, id: usize| -> usize {
        *doc_node.entry(id).or_insert_with(|| {
            let i = g.add_node(id.to_string(), NodeKind::Document);
            let d = &corpus.documents[id];
            g.nodes[i].attributes.insert("color".into(), json!("blue"));
            g.nodes[i].attributes.insert("citation".into(), json!(d.short_citation()));
            g.nodes[i].attributes.insert("title".into(), json!(d.title));
            i
        })
    };
    let mut edges = Vec::new();
    for (target, citing) in &cited_by {
        let t = match *target {
            CitationTarget::Document(id) => doc(&mut g, id),
            CitationTarget::Reference(idx) => {
                let i = g.add_node(corpus.target_label(*target), NodeKind::Reference);
                g.nodes[i].attributes.insert("color".into(), json!("red"));
                let text = corpus.registry(EntityKind::Reference).get(idx).unwrap_or_default();
                g.nodes[i].attributes.insert("reference".into(), json!(text));
                i
            }
        };
        g.nodes[t].attributes.insert("cited_by".into(), json!(citing.len()));
        for &c in citing {
            let s = doc(&mut g, c);
            edges.push(Edge { source: s, target: t, weight: 1, directed: true });
        }
    }
    edges.sort_by_key(|e| (e.source, e.target));
    g.edges = edges;
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationChain {
    pub focal: usize,
    /// (citing, cited) edges reachable by following citations out of the focal document.
    pub backward: BTreeSet<(usize, usize)>,
    /// (citing, cited) edges along which citations lead into the focal document.
    pub forward: BTreeSet<(usize, usize)>,
}

impl CitationChain {
    pub fn to_graph(&self, corpus: &Corpus) -> Graph {
        let ids: BTreeSet<usize> =
            self.backward.iter().chain(&self.forward).flat_map(|&(a, b)| [a, b]).chain([self.focal]).collect();
        let mut g = Graph::default();
        let mut index = HashMap::new();
        for id in ids {
            let i = g.add_node(id.to_string(), NodeKind::Document);
            g.nodes[i].attributes.insert("citation".into(), json!(corpus.documents[id].short_citation()));
            let role = if id == self.focal {
                "focal"
            } else if self.backward.iter().any(|e| e.1 == id) {
                "backward"
            } else {
                "forward"
            };
            g.nodes[i].attributes.insert("role".into(), json!(role));
            if let Some(y) = corpus.documents[id].year {
                g.nodes[i].attributes.insert("year".into(), json!(y));
            }
            index.insert(id, i);
        }
        for &(a, b) in self.backward.iter().chain(&self.forward) {
            g.edges.push(Edge { source: index[&a], target: index[&b], weight: 1, directed: true });
        }
        g
    }
}

/// Transitive in-corpus citations out of and into `focal`, without a depth limit.
/// Links whose citing document is dated before the cited one are ignored.
pub fn citation_history(corpus: &Corpus, focal: usize) -> Result<CitationChain> {
    corpus.document(focal)?;
    let mut cites: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut cited_by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for l in &corpus.citation_links {
        let CitationTarget::Document(t) = l.target else {
            continue;
        };
        let (yc, yt) = (corpus.documents[l.citing].year, corpus.documents[t].year);
        if l.citing == t || matches!((yc, yt), (Some(a), Some(b)) if a < b) {
            continue;
        }
        cites.entry(l.citing).or_default().push(t);
        cited_by.entry(t).or_default().push(l.citing);
    }
    let walk = |adj: &BTreeMap<usize, Vec<usize>>, forward: bool| {
        let mut edges = BTreeSet::new();
        let mut seen = BTreeSet::from([focal]);
        let mut queue = VecDeque::from([focal]);
        while let Some(n) = queue.pop_front() {
            for &m in adj.get(&n).into_iter().flatten() {
                edges.insert(if forward { (m, n) } else { (n, m) });
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        edges
    };
    Ok(CitationChain { focal, backward: walk(&cites, false), forward: walk(&cited_by, true) })
}

/// Undirected document graph weighted by the number of shared cited works.
/// Only pairs with at least `min_shared` common references are linked; documents
/// left without edges are dropped. Node attribute `cluster` is the component number.
pub fn shared_reference_graph(corpus: &Corpus, min_shared: usize) -> Graph {
    let mut citing: BTreeMap<CitationTarget, Vec<usize>> = BTreeMap::new();
    for l in &corpus.citation_links {
        citing.entry(l.target).or_default().push(l.citing);
    }
    let mut shared: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for docs in citing.values() {
        let mut docs = docs.clone();
        docs.sort_unstable();
        docs.dedup();
        for (i, &a) in docs.iter().enumerate() {
            for &b in &docs[i + 1..] {
                *shared.entry((a, b)).or_default() += 1;
            }
        }
    }
    shared.retain(|_, w| *w >= min_shared.max(1) as u64);
    let ids: BTreeSet<usize> = shared.keys().flat_map(|&(a, b)| [a, b]).collect();
    let mut g = Graph::default();
    let mut index = HashMap::new();
    for id in ids {
        let i = g.add_node(id.to_string(), NodeKind::Document);
        g.nodes[i].attributes.insert("citation".into(), json!(corpus.documents[id].short_citation()));
        index.insert(id, i);
    }
    g.edges = shared
        .into_iter()
        .map(|((a, b), weight)| Edge { source: index[&a], target: index[&b], weight, directed: false })
        .collect();
    for (n, c) in g.components().into_iter().enumerate() {
        g.nodes[n].attributes.insert("cluster".into(), json!(c));
    }
    g
}

/// Undirected author graph weighted by co-authored document count.
pub fn coauthorship(corpus: &Corpus) -> Graph {
    let mut g = Graph::default();
    for a in corpus.registry(EntityKind::Author).entries() {
        g.add_node(a.clone(), NodeKind::Author);
    }
    let mut docs = vec![0u64; g.nodes.len()];
    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let registry = corpus.registry(EntityKind::Author);
    for d in &corpus.documents {
        let mut ids: Vec<usize> = d.entities(EntityKind::Author).iter().filter_map(|a| registry.position(a)).collect();
        ids.sort_unstable();
        for (i, &a) in ids.iter().enumerate() {
            docs[a] += 1;
            for &b in &ids[i + 1..] {
                *pairs.entry((a, b)).or_default() += 1;
            }
        }
    }
    for (n, c) in docs.into_iter().enumerate() {
        g.nodes[n].attributes.insert("documents".into(), json!(c));
    }
    g.edges =
        pairs.into_iter().map(|((a, b), weight)| Edge { source: a, target: b, weight, directed: false }).collect();
    g
}

/// Resolve a user-typed node label: exact, then canonical author form, else an
/// error listing the closest labels.
pub fn find_node(graph: &Graph, name: &str) -> Result<usize> {
    if let Some(i) = graph.node_index(name) {
        return Ok(i);
    }
    if let Some(i) = canonicalize(name, EntityKind::Author).and_then(|c| graph.node_index(&c)) {
        return Ok(i);
    }
    let lower = name.to_lowercase();
    if let Some(i) = graph.nodes.iter().position(|n| n.label.to_lowercase() == lower) {
        return Ok(i);
    }
    let mut scored: Vec<(f64, &str)> =
        graph.nodes.iter().map(|n| (strsim::jaro_winkler(&lower, &n.label.to_lowercase()), n.label.as_str())).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let near: Vec<&str> = scored.iter().take(3).map(|s| s.1).collect();
    Err(Error::usage(if near.is_empty() {
        format!("unknown name `{name}`: the graph is empty")
    } else {
        format!("unknown name `{name}`; did you mean: {}?", near.join("; "))
    }))
}

/// Subgraph within `depth` hops of `seed` (unbounded when `None`). Node attribute
/// `hops` holds each node's distance from the seed.
pub fn ego(graph: &Graph, seed: &str, depth: Option<usize>) -> Result<Graph> {
    let start = find_node(graph, seed)?;
    let adj = graph.adjacency();
    let mut dist = vec![usize::MAX; graph.nodes.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        if depth.is_some_and(|d| dist[n] >= d) {
            continue;
        }
        for &m in &adj[n] {
            if dist[m] == usize::MAX {
                dist[m] = dist[n] + 1;
                queue.push_back(m);
            }
        }
    }
    let keep: Vec<usize> = (0..graph.nodes.len()).filter(|&i| dist[i] != usize::MAX).collect();
    let mut g = graph.induced(&keep);
    for (n, &old) in keep.iter().enumerate() {
        g.nodes[n].attributes.insert("hops".into(), json!(dist[old]));
    }
    Ok(g)
}

/// Undirected country graph: edge weight = documents with affiliations in both
/// countries. Nodes carry `doc_count`, `domestic_docs` and centroid coordinates.
pub fn country_collab(corpus: &Corpus, table: &CountryTable) -> Graph {
    let registry = corpus.registry(EntityKind::Country);
    let mut g = Graph::default();
    for c in registry.entries() {
        let i = g.add_node(c.clone(), NodeKind::Country);
        if let Some(info) = table.lookup(c) {
            g.nodes[i].attributes.insert("iso2".into(), json!(info.iso2));
            g.nodes[i].attributes.insert("lat".into(), json!(info.lat));
            g.nodes[i].attributes.insert("lon".into(), json!(info.lon));
        }
    }
    let mut docs = vec![0u64; g.nodes.len()];
    let mut domestic = vec![0u64; g.nodes.len()];
    let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for d in &corpus.documents {
        let mut ids: Vec<usize> = d.countries().iter().filter_map(|c| registry.position(c)).collect();
        ids.sort_unstable();
        if ids.len() == 1 {
            domestic[ids[0]] += 1;
        }
        for (i, &a) in ids.iter().enumerate() {
            docs[a] += 1;
            for &b in &ids[i + 1..] {
                *pairs.entry((a, b)).or_default() += 1;
            }
        }
    }
    for n in 0..g.nodes.len() {
        g.nodes[n].attributes.insert("doc_count".into(), json!(docs[n]));
        g.nodes[n].attributes.insert("domestic_docs".into(), json!(domestic[n]));
    }
    g.edges =
        pairs.into_iter().map(|((a, b), weight)| Edge { source: a, target: b, weight, directed: false }).collect();
    g
}
