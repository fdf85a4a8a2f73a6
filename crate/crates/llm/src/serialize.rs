//! Plain-text rendering of analysis results for use as a chat context.

use bibx_core::eda::{BarKind, SeriesKind};
use bibx_core::result::AnalysisResult;

/// One output line plus the weight used to decide what survives truncation.
struct Row {
    text: String,
    weight: f64,
}

fn row(text: String, weight: f64) -> Row {
    Row { text, weight }
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn is_year_kind(kind: &SeriesKind) -> bool {
    matches!(
        kind,
        SeriesKind::Bar(BarKind::DocumentsPerYear | BarKind::CitationsPerYear | BarKind::PastCitationsPerYear)
    )
}

fn series_rows(points: &[(String, f64)], by_key: bool) -> Vec<Row> {
    let mut pts: Vec<&(String, f64)> = points.iter().collect();
    if by_key {
        pts.sort_by(|a, b| a.0.cmp(&b.0));
    }
    pts.into_iter().map(|(k, v)| row(format!("{k}\t{}", num(*v)), *v)).collect()
}

fn parts(result: &AnalysisResult) -> (Vec<String>, Vec<Row>) {
    match result {
        AnalysisResult::Report(r) => {
            let rows = r.rows();
            let n = rows.len() as f64;
            // Report rows keep their order: earlier rows weigh more.
            let rows = rows.into_iter().enumerate().map(|(i, (l, v))| row(format!("{l}: {v}"), n - i as f64)).collect();
            (vec!["EDA report".into()], rows)
        }
        AnalysisResult::Wordcloud { field, words } => (
            vec![format!("Word frequencies ({field})"), "word\tcount".into()],
            words.iter().map(|(w, c)| row(format!("{w}\t{c}"), *c as f64)).collect(),
        ),
        AnalysisResult::Ngrams { field, n, grams } => (
            vec![format!("{n}-grams ({field})"), "ngram\tcount".into()],
            grams.iter().map(|(g, c)| row(format!("{g}\t{c}"), *c as f64)).collect(),
        ),
        AnalysisResult::Evolution { element, series } => {
            let mut rows = Vec::new();
            for s in series {
                for (year, v) in &s.points {
                    if *v > 0.0 {
                        rows.push(row(format!("{}\t{year}\t{}", s.label, num(*v)), *v));
                    }
                }
            }
            (vec![format!("Evolution of {element} per year"), format!("{element}\tyear\tdocuments")], rows)
        }
        AnalysisResult::Treemap(s) => {
            (vec![s.label.clone(), "category\tdocuments".into()], series_rows(&s.points, false))
        }
        AnalysisResult::Bar(s) => {
            let year = is_year_kind(&s.kind);
            let head = if year { "year\tcount" } else { "category\tvalue" };
            (vec![s.label.clone(), head.into()], series_rows(&s.points, year))
        }
        AnalysisResult::Sankey { left, right, flows } => (
            vec![format!("Flows {left} -> {right}"), format!("{left}\t{right}\tdocuments")],
            flows.iter().map(|f| row(format!("{}\t{}\t{}", f.left.1, f.right.1, f.weight), f.weight as f64)).collect(),
        ),
        AnalysisResult::Productivity(p) => {
            let mut rows = Vec::new();
            for r in &p.rows {
                for (y, cell) in p.years.iter().zip(&r.cells) {
                    if !cell.is_empty() {
                        rows.push(row(format!("{}\t{y}\t{}", r.author, cell.len()), cell.len() as f64));
                    }
                }
            }
            (vec!["Author productivity".into(), "author\tyear\tdocuments".into()], rows)
        }
        AnalysisResult::Graph { graph_kind, graph } => {
            let rows = graph
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = (&graph.nodes[e.source].label, &graph.nodes[e.target].label);
                    let arrow = if e.directed { "->" } else { "--" };
                    row(format!("{a} {arrow} {b}\t{}", e.weight), e.weight as f64)
                })
                .collect();
            let head = format!("{} ({} nodes, {} edges)", graph_kind.title(), graph.nodes.len(), graph.edges.len());
            (vec![head, "edge\tweight".into()], rows)
        }
        AnalysisResult::History { chain, .. } => {
            let mut rows: Vec<Row> =
                chain.backward.iter().map(|(a, b)| row(format!("backward\t{a} -> {b}"), 1.0)).collect();
            rows.extend(chain.forward.iter().map(|(a, b)| row(format!("forward\t{a} -> {b}"), 1.0)));
            (vec![format!("Citation history of document {}", chain.focal)], rows)
        }
        AnalysisResult::Projection(p) => {
            let rows = p
                .points
                .iter()
                .map(|pt| {
                    let c = pt.cluster.map_or_else(|| "-".to_string(), |c| c.to_string());
                    row(format!("{}\t{}\t{:.4}\t{:.4}\t{c}", pt.doc_id, pt.citation, pt.x, pt.y), pt.x.hypot(pt.y))
                })
                .collect();
            (vec!["Document projection".into(), "doc\tcitation\tx\ty\tcluster".into()], rows)
        }
        AnalysisResult::Topics { rows, .. } => (
            vec!["Topics".into(), "topic | size | words | central document".into()],
            rows.iter().map(|r| row(r.to_string(), r.size as f64)).collect(),
        ),
        AnalysisResult::Summary(s) => (
            vec![format!("Extractive summary of documents {:?}", s.doc_ids)],
            s.sentences.iter().map(|t| row(t.text.clone(), t.score)).collect(),
        ),
    }
}

fn footer(k: usize) -> String {
    format!("… ({k} rows omitted)")
}

/// Deterministic tab-separated text of at most `budget` characters (the header
/// lines are always kept). When rows must be dropped, the highest-weight rows are
/// kept in their original order and an omission footer is appended.
pub fn serialize_result(result: &AnalysisResult, budget: usize) -> String {
    let (header, rows) = parts(result);
    let mut out = header.join("\n");
    let full: usize = out.chars().count() + rows.iter().map(|r| r.text.chars().count() + 1).sum::<usize>();
    if full <= budget {
        for r in &rows {
            out.push('\n');
            out.push_str(&r.text);
        }
        return out;
    }

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[b].weight.total_cmp(&rows[a].weight).then(a.cmp(&b)));
    let reserve = footer(rows.len()).chars().count() + 1;
    let mut used = out.chars().count() + reserve;
    let mut keep = vec![false; rows.len()];
    for i in order {
        let len = rows[i].text.chars().count() + 1;
        if used + len > budget {
            break;
        }
        used += len;
        keep[i] = true;
    }
    let mut omitted = 0;
    for (r, k) in rows.iter().zip(&keep) {
        if *k {
            out.push('\n');
            out.push_str(&r.text);
        } else {
            omitted += 1;
        }
    }
    out.push('\n');
    out.push_str(&footer(omitted));
    out
}
