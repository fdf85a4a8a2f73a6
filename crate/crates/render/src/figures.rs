//! ViewSpec builders for every analysis result.

use std::collections::BTreeMap;

use bibx_core::eda::{Flow, Productivity, Series};
use bibx_core::graphs::{CitationChain, Graph, NodeKind};
use bibx_core::result::{AnalysisResult, GraphKind};
use bibx_core::vectorlab::Projection2D;
use serde_json::Value;

use crate::force::{layout_force, ForceConfig};
use crate::metrics::{fit_text, text_width};
use crate::palette::Palette;
use crate::sankey::{layout_sankey, SankeyFlow};
use crate::treemap::layout_treemap;
use crate::view::{Anchor, Metadata, Primitive, Rect, Shape, Style, ViewSpec};
use crate::wordcloud::{layout_wordcloud, WordcloudConfig};
use crate::worldmap::{arc_path, coastline_path, project};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: f64,
    pub height: f64,
    pub seed: u64,
    pub palette: Palette,
    pub wordcloud: WordcloudConfig,
    pub force: ForceConfig,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 900.0,
            height: 600.0,
            seed: 42,
            palette: Palette::default(),
            wordcloud: WordcloudConfig::default(),
            force: ForceConfig::default(),
        }
    }
}

const AXIS: &str = "#444444";
const GRID: &str = "#dddddd";
const TICK_FONT: f64 = 10.0;
const LABEL_FONT: f64 = 11.0;

fn canvas(opts: &RenderOptions, title: &str) -> ViewSpec {
    let mut v = ViewSpec::new(opts.width, opts.height);
    v.title = Some(title.to_string());
    v.push(Primitive::rect(v.bounds(), "#ffffff"));
    v.push(Primitive::text(opts.width / 2.0, 22.0, 15.0, Anchor::Middle, fit_text(title, 15.0, opts.width - 20.0)));
    v
}

fn plot_area(opts: &RenderOptions) -> Rect {
    Rect::new(60.0, 40.0, (opts.width - 80.0).max(1.0), (opts.height - 100.0).max(1.0))
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v:.2}")
    }
}

/// Round step for about `n` ticks up to `max`.
fn nice_step(max: f64, n: f64) -> f64 {
    let raw = (max / n).max(f64::MIN_POSITIVE);
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let f = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    f * mag
}

fn y_axis(v: &mut ViewSpec, area: Rect, max: f64) -> f64 {
    let top = if max > 0.0 { max } else { 1.0 };
    let step = nice_step(top, 5.0);
    let top = (top / step).ceil() * step;
    let mut t = 0.0;
    while t <= top + 1e-9 {
        let y = area.bottom() - t / top * area.h;
        v.push(Primitive::line(area.x, y, area.right(), y, GRID, 1.0));
        v.push(Primitive::text(area.x - 4.0, y + 3.0, TICK_FONT, Anchor::End, fmt_value((t * 1e6).round() / 1e6)));
        t += step;
    }
    v.push(Primitive::line(area.x, area.y, area.x, area.bottom(), AXIS, 1.0));
    v.push(Primitive::line(area.x, area.bottom(), area.right(), area.bottom(), AXIS, 1.0));
    top
}

/// Every k-th category label so that labels do not collide.
fn label_stride(labels: &[&str], slot: f64) -> usize {
    let widest = labels.iter().map(|l| text_width(l, TICK_FONT)).fold(0.0, f64::max).min(120.0);
    ((widest + 4.0) / slot.max(1e-9)).ceil().max(1.0) as usize
}

pub fn bar_chart(series: &Series, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, &series.label);
    let area = plot_area(opts);
    let max = series.points.iter().map(|p| p.1).fold(0.0, f64::max);
    let top = y_axis(&mut v, area, max);
    let n = series.points.len().max(1) as f64;
    let slot = area.w / n;
    let labels: Vec<&str> = series.points.iter().map(|p| p.0.as_str()).collect();
    let stride = label_stride(&labels, slot);
    for (i, (cat, val)) in series.points.iter().enumerate() {
        let h = val.max(0.0) / top * area.h;
        let x = area.x + i as f64 * slot + slot * 0.1;
        let r = Rect::new(x, area.bottom() - h, slot * 0.8, h);
        v.push(Primitive::rect(r, opts.palette.color(0)).with_meta(Metadata::new(cat.clone()).value(fmt_value(*val))));
        if i % stride == 0 {
            let cx = area.x + (i as f64 + 0.5) * slot;
            v.push(Primitive::text(
                cx,
                area.bottom() + 14.0,
                TICK_FONT,
                Anchor::Middle,
                fit_text(cat, TICK_FONT, 120.0),
            ));
        }
    }
    v
}

pub fn evolution_chart(title: &str, series: &[Series], opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, title);
    let mut area = plot_area(opts);
    let legend_rows = series.len().div_ceil(3) as f64;
    area.y += legend_rows * 14.0;
    area.h = (area.h - legend_rows * 14.0).max(1.0);
    let max = series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).fold(0.0, f64::max);
    let top = y_axis(&mut v, area, max);
    let years: Vec<&str> = series.first().map(|s| s.points.iter().map(|p| p.0.as_str()).collect()).unwrap_or_default();
    let n = years.len().max(1);
    let x_of = |i: usize| {
        if n == 1 {
            area.x + area.w / 2.0
        } else {
            area.x + i as f64 / (n - 1) as f64 * area.w
        }
    };
    let stride = label_stride(&years, area.w / n as f64);
    for (i, y) in years.iter().enumerate() {
        if i % stride == 0 {
            v.push(Primitive::text(x_of(i), area.bottom() + 14.0, TICK_FONT, Anchor::Middle, *y));
        }
    }
    let col_w = (opts.width - 80.0) / 3.0;
    for (k, s) in series.iter().enumerate() {
        let color = opts.palette.color(k).to_string();
        let mut d = String::new();
        for (i, (_, val)) in s.points.iter().enumerate() {
            let (x, y) = (x_of(i), area.bottom() - val / top * area.h);
            d.push_str(&format!("{}{},{} ", if i == 0 { "M" } else { "L" }, crate::svg::num(x), crate::svg::num(y)));
        }
        v.push(Primitive::path(d.trim_end().to_string(), Style::stroke(&color, 2.0)));
        for (i, (year, val)) in s.points.iter().enumerate() {
            let (x, y) = (x_of(i), area.bottom() - val / top * area.h);
            v.push(
                Primitive::circle(x, y, 3.0, &color)
                    .with_meta(Metadata::new(s.label.clone()).value(fmt_value(*val)).extra("year", year)),
            );
        }
        let (lx, ly) = (60.0 + (k % 3) as f64 * col_w, 40.0 + (k / 3) as f64 * 14.0);
        v.push(Primitive::rect(Rect::new(lx, ly, 10.0, 10.0), &color));
        v.push(Primitive::text(
            lx + 14.0,
            ly + 9.0,
            LABEL_FONT,
            Anchor::Start,
            fit_text(&s.label, LABEL_FONT, col_w - 20.0),
        ));
    }
    v
}

pub fn treemap_chart(series: &Series, opts: &RenderOptions) -> Result<ViewSpec> {
    let mut v = canvas(opts, &series.label);
    let area = Rect::new(10.0, 40.0, opts.width - 20.0, opts.height - 50.0);
    let points: Vec<&(String, f64)> = series.points.iter().filter(|p| p.1 > 0.0).collect();
    if points.is_empty() {
        return Ok(v);
    }
    let values: Vec<f64> = points.iter().map(|p| p.1).collect();
    let cells = layout_treemap(&values, area)?;
    for (i, (cell, (label, val))) in cells.iter().zip(points.iter().map(|p| (&p.0, p.1))).enumerate() {
        let mut r =
            Primitive::rect(*cell, opts.palette.color(i)).with_meta(Metadata::new(label.clone()).value(fmt_value(val)));
        r.style = r.style.with_stroke("#ffffff", 1.0);
        v.push(r);
        let size = (cell.h / 3.0).clamp(8.0, 16.0);
        if cell.h > size + 4.0 && cell.w > 3.0 * size {
            let text = fit_text(&format!("{label} ({})", fmt_value(val)), size, cell.w - 6.0);
            v.push(Primitive::text(cell.x + 3.0, cell.y + size + 2.0, size, Anchor::Start, text));
        }
    }
    Ok(v)
}

pub fn wordcloud_chart(title: &str, words: &[(String, usize)], opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, title);
    let area = Rect::new(10.0, 40.0, opts.width - 20.0, opts.height - 50.0);
    let layout = layout_wordcloud(words, area, opts.seed, &opts.wordcloud);
    for (i, w) in layout.words.iter().enumerate() {
        let b = w.bbox;
        let mut t = Primitive::text(b.x + b.w / 2.0, b.y + b.h * 0.78, w.font_size, Anchor::Middle, w.text.clone())
            .with_meta(Metadata::new(w.text.clone()).value(w.frequency));
        t.style = Style::fill(opts.palette.color(i));
        v.push(t);
    }
    v
}

pub fn sankey_chart(flows: &[Flow], opts: &RenderOptions) -> ViewSpec {
    let title = match flows.first() {
        Some(f) => format!("Sankey: {} → {}", f.left.0, f.right.0),
        None => "Sankey".to_string(),
    };
    let mut v = canvas(opts, &title);
    let label_w = (opts.width * 0.22).min(200.0);
    let area = Rect::new(label_w, 40.0, opts.width - 2.0 * label_w, opts.height - 50.0);
    let sf: Vec<SankeyFlow> = flows
        .iter()
        .map(|f| SankeyFlow { left: f.left.1.clone(), right: f.right.1.clone(), weight: f.weight as u64 })
        .collect();
    let layout = layout_sankey(&sf, area, 10.0, 6.0);
    for r in &layout.ribbons {
        let f = &sf[r.flow];
        let style = Style::fill(opts.palette.color(r.left)).with_opacity(0.45);
        v.push(
            Primitive::path(r.path(&layout), style)
                .with_meta(Metadata::new(format!("{} → {}", f.left, f.right)).value(f.weight)),
        );
    }
    for (side, bars) in [(0, &layout.left), (1, &layout.right)] {
        for (i, b) in bars.iter().enumerate() {
            let color = if side == 0 { opts.palette.color(i) } else { AXIS };
            v.push(
                Primitive::rect(Rect::new(b.x, b.y0, layout.bar_width, b.height()), color)
                    .with_meta(Metadata::new(b.label.clone()).value(b.total)),
            );
            let (x, anchor) =
                if side == 0 { (b.x - 4.0, Anchor::End) } else { (b.x + layout.bar_width + 4.0, Anchor::Start) };
            let y = (b.y0 + b.y1) / 2.0 + 3.0;
            v.push(Primitive::text(
                x,
                y.min(opts.height),
                TICK_FONT,
                anchor,
                fit_text(&b.label, TICK_FONT, label_w - 8.0),
            ));
        }
    }
    v
}

pub fn productivity_chart(p: &Productivity, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, "Authors' Production over Time");
    let label_w = (opts.width * 0.25).min(220.0);
    let area = Rect::new(label_w, 40.0, opts.width - label_w - 20.0, opts.height - 70.0);
    let (nx, ny) = (p.years.len().max(1) as f64, p.rows.len().max(1) as f64);
    let (cw, ch) = (area.w / nx, area.h / ny);
    let max = p.rows.iter().flat_map(|r| r.cells.iter().map(Vec::len)).max().unwrap_or(1).max(1) as f64;
    let years: Vec<String> = p.years.iter().map(|y| y.to_string()).collect();
    let yl: Vec<&str> = years.iter().map(String::as_str).collect();
    let stride = label_stride(&yl, cw);
    for (j, y) in years.iter().enumerate() {
        if j % stride == 0 {
            v.push(Primitive::text(
                area.x + (j as f64 + 0.5) * cw,
                area.bottom() + 14.0,
                TICK_FONT,
                Anchor::Middle,
                y.clone(),
            ));
        }
    }
    for (i, row) in p.rows.iter().enumerate() {
        let cy = area.y + (i as f64 + 0.5) * ch;
        v.push(Primitive::line(area.x, cy, area.right(), cy, GRID, 1.0));
        v.push(Primitive::text(
            area.x - 6.0,
            cy + 3.0,
            TICK_FONT,
            Anchor::End,
            fit_text(&row.author, TICK_FONT, label_w - 10.0),
        ));
        for (j, cell) in row.cells.iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let r = (cell.len() as f64 / max).sqrt() * (cw.min(ch) / 2.0 - 1.0).max(1.0);
            let ids: Vec<String> = cell.iter().map(usize::to_string).collect();
            v.push(Primitive::circle(area.x + (j as f64 + 0.5) * cw, cy, r, opts.palette.color(0)).with_meta(
                Metadata::new(format!("{} ({})", row.author, years[j])).value(cell.len()).extra("docs", ids.join(", ")),
            ));
        }
    }
    v
}

fn attr_str(v: Option<&Value>) -> Option<String> {
    v.map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    })
}

fn node_color(graph: &Graph, i: usize, opts: &RenderOptions) -> String {
    let n = &graph.nodes[i];
    if let Some(c) = n.attributes.get("cluster").and_then(Value::as_u64) {
        return opts.palette.color(c as usize).to_string();
    }
    if let Some(h) = n.attributes.get("hops").and_then(Value::as_u64) {
        return opts.palette.color(h as usize).to_string();
    }
    match n.kind {
        NodeKind::Document => opts.palette.document.clone(),
        NodeKind::Reference => opts.palette.reference.clone(),
        _ => opts.palette.color(0).to_string(),
    }
}

fn node_meta(graph: &Graph, i: usize) -> Metadata {
    let n = &graph.nodes[i];
    let mut m = Metadata::new(n.label.clone());
    if n.kind == NodeKind::Document {
        if let Ok(id) = n.label.parse() {
            m = m.doc(id);
        }
    }
    for (k, v) in &n.attributes {
        if k != "color" {
            m = m.extra(k.clone(), attr_str(Some(v)).unwrap_or_default());
        }
    }
    m
}

fn draw_graph(v: &mut ViewSpec, graph: &Graph, pos: &[(f64, f64)], opts: &RenderOptions) {
    let max_w = graph.edges.iter().map(|e| e.weight).max().unwrap_or(1).max(1) as f64;
    for e in &graph.edges {
        let (a, b) = (pos[e.source], pos[e.target]);
        let width = 0.6 + 2.4 * (e.weight as f64 / max_w);
        let (sa, sb) = (&graph.nodes[e.source].label, &graph.nodes[e.target].label);
        let arrow = if e.directed { "->" } else { "--" };
        v.push(
            Primitive::line(a.0, a.1, b.0, b.1, "#999999", width)
                .with_meta(Metadata::new(format!("{sa} {arrow} {sb}")).value(e.weight)),
        );
    }
    let mut degree = vec![0usize; graph.nodes.len()];
    for e in &graph.edges {
        degree[e.source] += 1;
        degree[e.target] += 1;
    }
    let small = graph.nodes.len() <= 60;
    for (i, p) in pos.iter().enumerate() {
        let r = 3.0 + (degree[i] as f64).sqrt() * 1.5;
        v.push(Primitive::circle(p.0, p.1, r, &node_color(graph, i, opts)).with_meta(node_meta(graph, i)));
        if small {
            let label =
                attr_str(graph.nodes[i].attributes.get("citation")).unwrap_or_else(|| graph.nodes[i].label.clone());
            let x = (p.0 + r + 2.0).min(opts.width);
            v.push(Primitive::text(x, p.1 + 3.0, 9.0, Anchor::Start, fit_text(&label, 9.0, (opts.width - x).max(0.0))));
        }
    }
}

pub fn graph_chart(title: &str, graph: &Graph, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, title);
    let area = Rect::new(10.0, 40.0, opts.width - 20.0, opts.height - 50.0);
    let keys: Vec<String> = graph.nodes.iter().map(|n| n.label.clone()).collect();
    let edges: Vec<(usize, usize)> = graph.edges.iter().map(|e| (e.source, e.target)).collect();
    let pos = layout_force(&keys, &edges, area, opts.seed, &opts.force);
    draw_graph(&mut v, graph, &pos, opts);
    v
}

/// Documents in year columns, oldest on the left.
pub fn history_chart(chain: &CitationChain, graph: &Graph, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, &format!("Citation History of Document {}", chain.focal));
    let area = Rect::new(40.0, 50.0, opts.width - 80.0, opts.height - 90.0);
    let year = |i: usize| graph.nodes[i].attributes.get("year").and_then(Value::as_i64);
    let years: Vec<i64> = {
        let mut y: Vec<i64> = (0..graph.nodes.len()).filter_map(year).collect();
        y.sort_unstable();
        y.dedup();
        y
    };
    let mut columns: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..graph.nodes.len() {
        let col = year(i).and_then(|y| years.binary_search(&y).ok()).unwrap_or(0);
        columns.entry(col).or_default().push(i);
    }
    let ncol = years.len().max(1);
    let mut pos = vec![(0.0, 0.0); graph.nodes.len()];
    for (col, members) in &columns {
        let x = if ncol == 1 { area.x + area.w / 2.0 } else { area.x + *col as f64 / (ncol - 1) as f64 * area.w };
        for (k, &i) in members.iter().enumerate() {
            pos[i] = (x, area.y + (k as f64 + 0.5) / members.len() as f64 * area.h);
        }
    }
    for (j, y) in years.iter().enumerate() {
        let x = if ncol == 1 { area.x + area.w / 2.0 } else { area.x + j as f64 / (ncol - 1) as f64 * area.w };
        v.push(Primitive::text(x, area.bottom() + 30.0, TICK_FONT, Anchor::Middle, y.to_string()));
    }
    draw_graph(&mut v, graph, &pos, opts);
    v
}

pub fn worldmap_chart(graph: &Graph, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, "Country Collaboration");
    let area = Rect::new(10.0, 40.0, opts.width - 20.0, opts.height - 50.0);
    v.push(Primitive::path(coastline_path(area), Style::fill("#eeeeee").with_stroke("#bbbbbb", 0.5)));
    let place = |i: usize| -> Option<(f64, f64)> {
        let a = &graph.nodes[i].attributes;
        Some(project(a.get("lon")?.as_f64()?, a.get("lat")?.as_f64()?, area))
    };
    let max_w = graph.edges.iter().map(|e| e.weight).max().unwrap_or(1).max(1) as f64;
    for e in &graph.edges {
        if let (Some(a), Some(b)) = (place(e.source), place(e.target)) {
            let style = Style::stroke(opts.palette.color(3), 0.8 + 2.2 * e.weight as f64 / max_w).with_opacity(0.7);
            let meta = Metadata::new(format!("{} -- {}", graph.nodes[e.source].label, graph.nodes[e.target].label))
                .value(e.weight);
            v.push(Primitive::path(arc_path(a, b, area), style).with_meta(meta));
        }
    }
    let max_docs =
        graph.nodes.iter().filter_map(|n| n.attributes.get("doc_count")?.as_u64()).max().unwrap_or(1).max(1) as f64;
    for i in 0..graph.nodes.len() {
        let Some((x, y)) = place(i) else { continue };
        let docs = graph.nodes[i].attributes.get("doc_count").and_then(Value::as_u64).unwrap_or(0) as f64;
        let r = 2.0 + 14.0 * (docs / max_docs).sqrt();
        v.push(Primitive::circle(x, y, r, opts.palette.color(0)).with_meta(node_meta(graph, i)));
    }
    v
}

pub fn projection_chart(p: &Projection2D, opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, "Document Projection");
    let area = plot_area(opts);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for pt in &p.points {
        x0 = x0.min(pt.x);
        x1 = x1.max(pt.x);
        y0 = y0.min(pt.y);
        y1 = y1.max(pt.y);
    }
    let sx = |x: f64| {
        if x1 > x0 {
            area.x + (x - x0) / (x1 - x0) * area.w
        } else {
            area.x + area.w / 2.0
        }
    };
    let sy = |y: f64| {
        if y1 > y0 {
            area.bottom() - (y - y0) / (y1 - y0) * area.h
        } else {
            area.y + area.h / 2.0
        }
    };
    v.push(Primitive::line(area.x, area.bottom(), area.right(), area.bottom(), AXIS, 1.0));
    v.push(Primitive::line(area.x, area.y, area.x, area.bottom(), AXIS, 1.0));
    for pt in &p.points {
        let color = pt.cluster.map_or(opts.palette.document.as_str(), |c| opts.palette.color(c));
        let mut m = Metadata::new(pt.citation.clone()).doc(pt.doc_id);
        if let Some(c) = pt.cluster {
            m = m.extra("cluster", c);
        }
        v.push(Primitive::circle(sx(pt.x), sy(pt.y), 4.0, color).with_meta(m));
    }
    v
}

/// A plain two-column table for text-like results.
pub fn table_chart(title: &str, rows: &[(String, String)], opts: &RenderOptions) -> ViewSpec {
    let mut v = canvas(opts, title);
    let line = 16.0;
    let fits = ((opts.height - 50.0) / line).max(0.0) as usize;
    let col = opts.width * 0.55;
    for (i, (a, b)) in rows.iter().take(fits).enumerate() {
        let y = 50.0 + (i as f64 + 0.5) * line;
        v.push(Primitive::text(12.0, y, LABEL_FONT, Anchor::Start, fit_text(a, LABEL_FONT, col - 20.0)));
        v.push(Primitive::text(col, y, LABEL_FONT, Anchor::Start, fit_text(b, LABEL_FONT, opts.width - col - 12.0)));
    }
    v
}

pub fn figure(result: &AnalysisResult, opts: &RenderOptions) -> Result<ViewSpec> {
    Ok(match result {
        AnalysisResult::Report(r) => table_chart("Main Information", &r.rows(), opts),
        AnalysisResult::Wordcloud { field, words } => wordcloud_chart(&format!("Word Cloud ({field})"), words, opts),
        AnalysisResult::Ngrams { field, n, grams } => {
            let s = Series {
                label: format!("{n}-grams ({field})"),
                kind: bibx_core::eda::SeriesKind::Treemap,
                points: grams.iter().map(|(g, c)| (g.clone(), *c as f64)).collect(),
            };
            bar_chart(&s, opts)
        }
        AnalysisResult::Evolution { element, series } => {
            evolution_chart(&format!("Evolution per Year ({element})"), series, opts)
        }
        AnalysisResult::Treemap(s) => treemap_chart(s, opts)?,
        AnalysisResult::Sankey { flows, .. } => sankey_chart(flows, opts),
        AnalysisResult::Productivity(p) => productivity_chart(p, opts),
        AnalysisResult::Bar(s) => bar_chart(s, opts),
        AnalysisResult::Graph { graph_kind: GraphKind::CountryCollaboration, graph } => worldmap_chart(graph, opts),
        AnalysisResult::Graph { graph_kind, graph } => graph_chart(graph_kind.title(), graph, opts),
        AnalysisResult::History { chain, graph } => history_chart(chain, graph, opts),
        AnalysisResult::Projection(p) => projection_chart(p, opts),
        AnalysisResult::Topics { rows, .. } => {
            let rows: Vec<(String, String)> =
                rows.iter().map(|r| (format!("Topic {} ({})", r.index, r.size), r.words.clone())).collect();
            table_chart("Topics", &rows, opts)
        }
        AnalysisResult::Summary(s) => {
            let rows: Vec<(String, String)> =
                s.sentences.iter().map(|t| (format!("doc {}", t.doc_id), t.text.clone())).collect();
            table_chart("Extractive Summary", &rows, opts)
        }
    })
}

/// Shapes in `view`, ignoring groups; handy for assertions.
pub fn count_shapes(view: &ViewSpec, pred: impl Fn(&Shape) -> bool) -> usize {
    view.elements.iter().filter(|p| pred(&p.shape)).count()
}
