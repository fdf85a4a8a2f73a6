//! Resolution-independent drawing description.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x < o.right() && o.x < self.right() && self.y < o.bottom() && o.y < self.bottom()
    }

    pub fn contains(&self, o: &Rect, tol: f64) -> bool {
        o.x >= self.x - tol
            && o.y >= self.y - tol
            && o.right() <= self.right() + tol
            && o.bottom() <= self.bottom() + tol
    }

    pub fn inset(&self, m: f64) -> Rect {
        let mx = m.min(self.w / 2.0);
        let my = m.min(self.h / 2.0);
        Rect::new(self.x + mx, self.y + my, self.w - 2.0 * mx, self.h - 2.0 * my)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Anchor {
    #[default]
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub fill: Option<String>,
    pub stroke: Option<String>,
    pub stroke_width: f64,
    pub opacity: f64,
}

impl Style {
    pub fn fill(color: &str) -> Self {
        Style { fill: Some(color.to_string()), stroke: None, stroke_width: 0.0, opacity: 1.0 }
    }

    pub fn stroke(color: &str, width: f64) -> Self {
        Style { fill: None, stroke: Some(color.to_string()), stroke_width: width, opacity: 1.0 }
    }

    pub fn with_opacity(mut self, o: f64) -> Self {
        self.opacity = o;
        self
    }

    pub fn with_stroke(mut self, color: &str, width: f64) -> Self {
        self.stroke = Some(color.to_string());
        self.stroke_width = width;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rect(Rect),
    Line { x1: f64, y1: f64, x2: f64, y2: f64 },
    Path { d: String },
    Circle { cx: f64, cy: f64, r: f64 },
    Text { x: f64, y: f64, size: f64, anchor: Anchor, content: String },
    Group(Vec<Primitive>),
}

/// Hover metadata, emitted as a `<title>` child.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub label: String,
    pub value: Option<String>,
    pub doc_id: Option<usize>,
    pub extra: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(label: impl Into<String>) -> Self {
        Metadata { label: label.into(), ..Metadata::default() }
    }

    pub fn value(mut self, v: impl ToString) -> Self {
        self.value = Some(v.to_string());
        self
    }

    pub fn doc(mut self, id: usize) -> Self {
        self.doc_id = Some(id);
        self
    }

    pub fn extra(mut self, k: impl Into<String>, v: impl ToString) -> Self {
        self.extra.push((k.into(), v.to_string()));
        self
    }

    /// `label: value`, then `doc: id` and extra pairs on following lines.
    pub fn title(&self) -> String {
        let mut t = self.label.clone();
        if let Some(v) = &self.value {
            t.push_str(": ");
            t.push_str(v);
        }
        if let Some(id) = self.doc_id {
            t.push_str(&format!("\ndoc: {id}"));
        }
        for (k, v) in &self.extra {
            t.push_str(&format!("\n{k}: {v}"));
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Primitive {
    pub shape: Shape,
    pub style: Style,
    pub meta: Option<Metadata>,
}

impl Primitive {
    pub fn new(shape: Shape, style: Style) -> Self {
        Primitive { shape, style, meta: None }
    }

    pub fn with_meta(mut self, meta: Metadata) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn rect(r: Rect, fill: &str) -> Self {
        Primitive::new(Shape::Rect(r), Style::fill(fill))
    }

    pub fn line(x1: f64, y1: f64, x2: f64, y2: f64, color: &str, width: f64) -> Self {
        Primitive::new(Shape::Line { x1, y1, x2, y2 }, Style::stroke(color, width))
    }

    pub fn circle(cx: f64, cy: f64, r: f64, fill: &str) -> Self {
        Primitive::new(Shape::Circle { cx, cy, r }, Style::fill(fill))
    }

    pub fn text(x: f64, y: f64, size: f64, anchor: Anchor, content: impl Into<String>) -> Self {
        Primitive::new(Shape::Text { x, y, size, anchor, content: content.into() }, Style::fill("#222222"))
    }

    pub fn path(d: String, style: Style) -> Self {
        Primitive::new(Shape::Path { d }, style)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViewSpec {
    pub width: f64,
    pub height: f64,
    pub title: Option<String>,
    /// Drawn in order; later elements on top.
    pub elements: Vec<Primitive>,
}

impl ViewSpec {
    pub fn new(width: f64, height: f64) -> Self {
        ViewSpec { width, height, title: None, elements: Vec::new() }
    }

    pub fn push(&mut self, p: Primitive) {
        self.elements.push(p);
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0.0, 0.0, self.width, self.height)
    }

    /// Points of every primitive that fall outside the canvas (path data excluded).
    pub fn out_of_bounds(&self) -> Vec<String> {
        fn check(p: &Primitive, w: f64, h: f64, out: &mut Vec<String>) {
            let tol = 1e-6;
            let inside = |x: f64, y: f64| {
                x.is_finite() && y.is_finite() && (-tol..=w + tol).contains(&x) && (-tol..=h + tol).contains(&y)
            };
            let ok = match &p.shape {
                Shape::Rect(r) => inside(r.x, r.y) && inside(r.right(), r.bottom()),
                Shape::Line { x1, y1, x2, y2 } => inside(*x1, *y1) && inside(*x2, *y2),
                Shape::Circle { cx, cy, .. } => inside(*cx, *cy),
                Shape::Text { x, y, .. } => inside(*x, *y),
                Shape::Path { .. } => true,
                Shape::Group(children) => {
                    for c in children {
                        check(c, w, h, out);
                    }
                    true
                }
            };
            if !ok {
                out.push(format!("{:?}", p.shape));
            }
        }
        let mut out = Vec::new();
        for p in &self.elements {
            check(p, self.width, self.height, &mut out);
        }
        out
    }
}
