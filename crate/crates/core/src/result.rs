//! A tagged union of every analysis output, used as the on-disk data file for
//! figures and as the input of the question-answering layer.

use serde::{Deserialize, Serialize};

use crate::eda::{EdaReport, Element, Flow, Productivity, Series};
use crate::graphs::{CitationChain, Graph};
use crate::summarize::Summary;
use crate::textkit::TextField;
use crate::topics::{TopicModel, TopicRow};
use crate::vectorlab::Projection2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Citation,
    CitationHistory,
    SharedReferences,
    Collaboration,
    CountryCollaboration,
}

impl GraphKind {
    pub fn title(self) -> &'static str {
        match self {
            GraphKind::Citation => "Citation Analysis",
            GraphKind::CitationHistory => "Citation History",
            GraphKind::SharedReferences => "Shared References",
            GraphKind::Collaboration => "Collaboration Analysis",
            GraphKind::CountryCollaboration => "Country Collaboration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AnalysisResult {
    Report(EdaReport),
    Wordcloud { field: TextField, words: Vec<(String, usize)> },
    Ngrams { field: TextField, n: usize, grams: Vec<(String, usize)> },
    Evolution { element: Element, series: Vec<Series> },
    Treemap(Series),
    Sankey { left: Element, right: Element, flows: Vec<Flow> },
    Productivity(Productivity),
    Bar(Series),
    Graph { graph_kind: GraphKind, graph: Graph },
    History { chain: CitationChain, graph: Graph },
    Projection(Projection2D),
    Topics { model: TopicModel, rows: Vec<TopicRow> },
    Summary(Summary),
}

impl AnalysisResult {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AnalysisResult::Report(_) => "report",
            AnalysisResult::Wordcloud { .. } => "wordcloud",
            AnalysisResult::Ngrams { .. } => "ngrams",
            AnalysisResult::Evolution { .. } => "evolution",
            AnalysisResult::Treemap(_) => "treemap",
            AnalysisResult::Sankey { .. } => "sankey",
            AnalysisResult::Productivity(_) => "productivity",
            AnalysisResult::Bar(_) => "bar",
            AnalysisResult::Graph { .. } => "graph",
            AnalysisResult::History { .. } => "history",
            AnalysisResult::Projection(_) => "projection",
            AnalysisResult::Topics { .. } => "topics",
            AnalysisResult::Summary(_) => "summary",
        }
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eda::SeriesKind;

    #[test]
    fn tagged_round_trip() {
        let r = AnalysisResult::Bar(Series {
            label: "Documents per Year".into(),
            kind: SeriesKind::Bar(crate::eda::BarKind::DocumentsPerYear),
            points: vec![("2016".into(), 22.0)],
        });
        let json = r.to_json().unwrap();
        assert!(json.contains("\"result\": \"bar\""));
        assert_eq!(AnalysisResult::from_json(&json).unwrap(), r);
    }
}
