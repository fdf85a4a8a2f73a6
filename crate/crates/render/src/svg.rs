//! SVG 1.1 and static HTML output.

use std::fmt::Write;

use crate::view::{Anchor, Primitive, Shape, Style, ViewSpec};

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Control characters other than tab/newline are not allowed in XML 1.0.
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' && c != '\r' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

/// Two decimals at most, trailing zeros dropped.
pub fn num(v: f64) -> String {
    let v = if v.is_finite() { v } else { 0.0 };
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn style_attrs(s: &Style) -> String {
    let mut a = String::new();
    match &s.fill {
        Some(f) => write!(a, " fill=\"{}\"", escape(f)).unwrap(),
        None => a.push_str(" fill=\"none\""),
    }
    if let Some(st) = &s.stroke {
        write!(a, " stroke=\"{}\" stroke-width=\"{}\"", escape(st), num(s.stroke_width)).unwrap();
    }
    if s.opacity < 1.0 {
        write!(a, " opacity=\"{}\"", num(s.opacity)).unwrap();
    }
    a
}

fn emit(p: &Primitive, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let style = style_attrs(&p.style);
    let (open, tag) = match &p.shape {
        Shape::Rect(r) => (
            format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"{style}",
                num(r.x),
                num(r.y),
                num(r.w),
                num(r.h)
            ),
            "rect",
        ),
        Shape::Line { x1, y1, x2, y2 } => (
            format!("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{style}", num(*x1), num(*y1), num(*x2), num(*y2)),
            "line",
        ),
        Shape::Path { d } => (format!("<path d=\"{}\"{style}", escape(d)), "path"),
        Shape::Circle { cx, cy, r } => {
            (format!("<circle cx=\"{}\" cy=\"{}\" r=\"{}\"{style}", num(*cx), num(*cy), num(*r)), "circle")
        }
        Shape::Text { x, y, size, anchor, content } => {
            let anchor = match anchor {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            let title = p.meta.as_ref().map(|m| format!("<title>{}</title>", escape(&m.title()))).unwrap_or_default();
            writeln!(
                out,
                "{pad}<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{anchor}\"{style}>{title}{}</text>",
                num(*x),
                num(*y),
                num(*size),
                escape(content)
            )
            .unwrap();
            return;
        }
        Shape::Group(children) => {
            writeln!(out, "{pad}<g{style}>").unwrap();
            if let Some(m) = &p.meta {
                writeln!(out, "{pad}  <title>{}</title>", escape(&m.title())).unwrap();
            }
            for c in children {
                emit(c, depth + 1, out);
            }
            writeln!(out, "{pad}</g>").unwrap();
            return;
        }
    };
    match &p.meta {
        Some(m) => writeln!(out, "{pad}{open}><title>{}</title></{tag}>", escape(&m.title())).unwrap(),
        None => writeln!(out, "{pad}{open}/>").unwrap(),
    }
}

fn svg_body(view: &ViewSpec, out: &mut String) {
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"monospace\">",
        w = num(view.width),
        h = num(view.height)
    )
    .unwrap();
    if let Some(t) = &view.title {
        writeln!(out, "  <title>{}</title>", escape(t)).unwrap();
    }
    for p in &view.elements {
        emit(p, 1, out);
    }
    out.push_str("</svg>\n");
}

pub fn emit_svg(view: &ViewSpec) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg_body(view, &mut out);
    out
}

/// A static page with one heading per view.
pub fn emit_html(title: &str, views: &[(String, ViewSpec)]) -> String {
    let mut out = format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n<title>{t}</title>\n</head>\n<body>\n<h1>{t}</h1>\n",
        t = escape(title)
    );
    for (heading, view) in views {
        writeln!(out, "<h2>{}</h2>", escape(heading)).unwrap();
        svg_body(view, &mut out);
    }
    out.push_str("</body>\n</html>\n");
    out
}
