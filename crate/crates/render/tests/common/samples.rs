//! A small labelled corpus and one result of every kind built from it.

use bibx_core::corpus::{Affiliation, Corpus, Document, Origin};
use bibx_core::countries::CountryTable;
use bibx_core::eda::{self, BarKind, EdaConfig, Element};
use bibx_core::fuse::{label, MatchConfig};
use bibx_core::graphs;
use bibx_core::result::{AnalysisResult, GraphKind};
use bibx_core::summarize::extractive_summary;
use bibx_core::textkit::{self, Stopwords, TextField};
use bibx_core::topics::{fit_topics, topic_summary, TopicConfig, TopicCount};
use bibx_core::vectorlab::{project2d, KMeansConfig, ProjectionMethod};

const AUTHORS: [&str; 6] =
    ["Chen, Tzu-Yu", "Silva, Ana", "Müller, Jan", "Okafor, Ngozi", "Tanaka, Hiro", "Garcia, Luis"];
const COUNTRIES: [&str; 5] = ["Taiwan", "Brazil", "Germany", "Nigeria", "Japan"];
const WORDS: [&str; 8] = [
    "decision making",
    "fuzzy sets",
    "multi-criteria",
    "topsis",
    "ahp",
    "ranking",
    "uncertainty",
    "supplier selection",
];

pub fn corpus() -> Corpus {
    let docs: Vec<Document> = (0..12)
        .map(|i| {
            let mut d = Document::new(format!("Study number {i} on fuzzy multi criteria ranking methods"), Origin::Scopus);
            d.abstract_text = format!(
                "We study fuzzy ranking in case {i}. The method uses topsis and ahp weights. Results show stable rankings under uncertainty. Supplier selection benefits from the approach."
            );
            d.authors = vec![AUTHORS[i % 6].into(), AUTHORS[(i + 1) % 6].into()];
            if i % 3 == 0 {
                d.authors.push(AUTHORS[0].into());
            }
            d.affiliations = vec![
                Affiliation { institution: format!("University {}", i % 4), country: Some(COUNTRIES[i % 5].into()) },
                Affiliation { institution: format!("Institute {}", i % 3), country: Some(COUNTRIES[(i + 2) % 5].into()) },
            ];
            d.author_keywords = vec![WORDS[i % 8].into(), WORDS[(i + 3) % 8].into()];
            d.keywords_plus = vec![WORDS[(i + 1) % 8].into(), WORDS[0].into()];
            d.source = ["EXPERT SYSTEMS", "FUZZY SETS AND SYSTEMS", "OMEGA"][i % 3].into();
            d.doc_type = "Article".into();
            d.language = "English".into();
            d.year = Some(2010 + (i as i32) / 2);
            d.times_cited = Some((i * 7 % 30) as u64);
            let mut refs: Vec<String> = (0..4).map(|k| format!("ZADEH L., {}, SHARED FOUNDATION WORK NUMBER {}", 1965 + k, (i + k) % 6)).collect();
            if i > 0 {
                refs.push(format!("X, {}, Study number {} on fuzzy multi criteria ranking methods", 2010 + (i as i32 - 1) / 2, i - 1));
            }
            d.references = Some(refs);
            d
        })
        .collect();
    label(docs, &MatchConfig::default()).unwrap()
}

pub fn all_results(c: &Corpus) -> Vec<AnalysisResult> {
    let cfg = EdaConfig::default();
    let sw = Stopwords::english();
    let streams = textkit::corpus_streams(c, TextField::Abstract, sw);
    let tfidf = textkit::tfidf_from_streams(&streams).unwrap();
    let citations: Vec<String> = c.documents.iter().map(|d| d.short_citation()).collect();
    let dense = tfidf.to_dense();
    let model = fit_topics(c, &dense, TopicCount::Fixed(2), 42, sw, &TopicConfig::default()).unwrap();
    let history_focal = 6;
    let chain = graphs::citation_history(c, history_focal).unwrap();
    vec![
        AnalysisResult::Report(eda::build_report(c, &cfg).unwrap()),
        AnalysisResult::Wordcloud {
            field: TextField::Abstract,
            words: textkit::word_frequencies(c, TextField::Abstract, sw, 30),
        },
        AnalysisResult::Ngrams {
            field: TextField::Abstract,
            n: 2,
            grams: textkit::ngrams(&streams, 2).unwrap().into_iter().take(10).collect(),
        },
        AnalysisResult::Evolution {
            element: Element::KeywordPlus,
            series: eda::evolution(c, Element::KeywordPlus, None, 5).unwrap(),
        },
        AnalysisResult::Treemap(eda::treemap_data(c, Element::KeywordPlus, 15)),
        AnalysisResult::Sankey {
            left: Element::Author,
            right: Element::Country,
            flows: eda::sankey_flows(c, Element::Author, Element::Country, 10).unwrap(),
        },
        AnalysisResult::Productivity(eda::productivity(c, 10)),
        AnalysisResult::Bar(eda::bar_series(c, BarKind::DocumentsPerYear, &cfg).unwrap()),
        AnalysisResult::Graph { graph_kind: GraphKind::Citation, graph: graphs::citation_network(c, 1) },
        AnalysisResult::History { graph: chain.to_graph(c), chain },
        AnalysisResult::Graph { graph_kind: GraphKind::SharedReferences, graph: graphs::shared_reference_graph(c, 2) },
        AnalysisResult::Graph { graph_kind: GraphKind::Collaboration, graph: graphs::coauthorship(c) },
        AnalysisResult::Graph {
            graph_kind: GraphKind::CountryCollaboration,
            graph: graphs::country_collab(c, CountryTable::embedded()),
        },
        AnalysisResult::Projection(
            project2d(&tfidf, ProjectionMethod::Tsvd, &citations, Some(2), 42, &KMeansConfig::default()).unwrap(),
        ),
        AnalysisResult::Topics { rows: topic_summary(&model, c), model },
        AnalysisResult::Summary(extractive_summary(c, &[0, 1, 2], 3, sw).unwrap()),
    ]
}
