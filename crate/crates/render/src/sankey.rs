//! Two-column Sankey layout.

use std::collections::HashMap;

use crate::view::Rect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SankeyFlow {
    pub left: String,
    pub right: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeBar {
    pub label: String,
    pub total: u64,
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

impl NodeBar {
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ribbon {
    pub flow: usize,
    pub left: usize,
    pub right: usize,
    /// Vertical extent at the left bar.
    pub left_span: (f64, f64),
    /// Vertical extent at the right bar.
    pub right_span: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SankeyLayout {
    pub left: Vec<NodeBar>,
    pub right: Vec<NodeBar>,
    pub ribbons: Vec<Ribbon>,
    pub bar_width: f64,
}

impl Ribbon {
    /// Closed cubic band from the left bar's right edge to the right bar's left edge.
    pub fn path(&self, layout: &SankeyLayout) -> String {
        let x0 = layout.left[self.left].x + layout.bar_width;
        let x1 = layout.right[self.right].x;
        let xm = (x0 + x1) / 2.0;
        let n = crate::svg::num;
        let (l0, l1) = self.left_span;
        let (r0, r1) = self.right_span;
        format!(
            "M{},{} C{},{} {},{} {},{} L{},{} C{},{} {},{} {},{} Z",
            n(x0),
            n(l0),
            n(xm),
            n(l0),
            n(xm),
            n(r0),
            n(x1),
            n(r0),
            n(x1),
            n(r1),
            n(xm),
            n(r1),
            n(xm),
            n(l1),
            n(x0),
            n(l1)
        )
    }
}

fn column(flows: &[SankeyFlow], side: impl Fn(&SankeyFlow) -> &str) -> Vec<(String, u64)> {
    let mut totals: HashMap<&str, u64> = HashMap::new();
    for f in flows {
        *totals.entry(side(f)).or_default() += f.weight;
    }
    let mut nodes: Vec<(String, u64)> = totals.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    nodes.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    nodes
}

/// Node bars sized by summed flow weight and ordered by weight; ribbons stack
/// inside each bar in the order of the opposite column. Every span endpoint is
/// computed as `top + units · scale` from integer running totals, so the ribbons
/// touching a bar tile it with identical endpoints.
pub fn layout_sankey(flows: &[SankeyFlow], rect: Rect, bar_width: f64, gap: f64) -> SankeyLayout {
    let flows: Vec<(usize, &SankeyFlow)> = flows.iter().enumerate().filter(|(_, f)| f.weight > 0).collect();
    if flows.is_empty() {
        return SankeyLayout { bar_width, ..SankeyLayout::default() };
    }
    let owned: Vec<SankeyFlow> = flows.iter().map(|(_, f)| (*f).clone()).collect();
    let lcol = column(&owned, |f| &f.left);
    let rcol = column(&owned, |f| &f.right);
    let total: u64 = lcol.iter().map(|n| n.1).sum();
    let slots = lcol.len().max(rcol.len()) - 1;
    let gap = if slots == 0 { 0.0 } else { gap.min(rect.h * 0.5 / slots as f64) };
    let scale = (rect.h - gap * slots as f64) / total as f64;

    let place = |col: &[(String, u64)], x: f64| -> Vec<NodeBar> {
        let mut units = 0u64;
        col.iter()
            .enumerate()
            .map(|(i, (label, t))| {
                let top = rect.y + gap * i as f64;
                let bar = NodeBar {
                    label: label.clone(),
                    total: *t,
                    x,
                    y0: top + units as f64 * scale,
                    y1: top + (units + t) as f64 * scale,
                };
                units += t;
                bar
            })
            .collect()
    };
    let left = place(&lcol, rect.x);
    let right = place(&rcol, rect.right() - bar_width);
    let li: HashMap<&str, usize> = left.iter().enumerate().map(|(i, n)| (n.label.as_str(), i)).collect();
    let ri: HashMap<&str, usize> = right.iter().enumerate().map(|(i, n)| (n.label.as_str(), i)).collect();

    // Units consumed before each node, to recover each bar's unit offset.
    let offsets = |col: &[(String, u64)]| -> Vec<u64> {
        col.iter()
            .scan(0u64, |acc, n| {
                let o = *acc;
                *acc += n.1;
                Some(o)
            })
            .collect()
    };
    let (loff, roff) = (offsets(&lcol), offsets(&rcol));

    let mut ribbons: Vec<Ribbon> = flows
        .iter()
        .map(|(k, f)| Ribbon {
            flow: *k,
            left: li[f.left.as_str()],
            right: ri[f.right.as_str()],
            left_span: (0.0, 0.0),
            right_span: (0.0, 0.0),
        })
        .collect();
    let weights: Vec<u64> = flows.iter().map(|(_, f)| f.weight).collect();

    let mut by_left: Vec<usize> = (0..ribbons.len()).collect();
    by_left.sort_by_key(|&i| (ribbons[i].left, ribbons[i].right, ribbons[i].flow));
    let mut used = vec![0u64; left.len()];
    for i in by_left {
        let n = ribbons[i].left;
        let top = rect.y + gap * n as f64;
        let a = loff[n] + used[n];
        used[n] += weights[i];
        ribbons[i].left_span = (top + a as f64 * scale, top + (a + weights[i]) as f64 * scale);
    }
    let mut by_right: Vec<usize> = (0..ribbons.len()).collect();
    by_right.sort_by_key(|&i| (ribbons[i].right, ribbons[i].left, ribbons[i].flow));
    let mut used = vec![0u64; right.len()];
    for i in by_right {
        let n = ribbons[i].right;
        let top = rect.y + gap * n as f64;
        let a = roff[n] + used[n];
        used[n] += weights[i];
        ribbons[i].right_span = (top + a as f64 * scale, top + (a + weights[i]) as f64 * scale);
    }
    SankeyLayout { left, right, ribbons, bar_width }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn flow(l: &str, r: &str, w: u64) -> SankeyFlow {
        SankeyFlow { left: l.into(), right: r.into(), weight: w }
    }

    /// Ribbons touching a bar, sorted by position, tile it exactly.
    fn tiles(bar: &NodeBar, mut spans: Vec<(f64, f64)>) -> bool {
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut y = bar.y0;
        for (a, b) in spans {
            if a != y {
                return false;
            }
            y = b;
        }
        y == bar.y1
    }

    fn conserved(l: &SankeyLayout) -> bool {
        l.left
            .iter()
            .enumerate()
            .all(|(i, bar)| tiles(bar, l.ribbons.iter().filter(|r| r.left == i).map(|r| r.left_span).collect()))
            && l.right
                .iter()
                .enumerate()
                .all(|(i, bar)| tiles(bar, l.ribbons.iter().filter(|r| r.right == i).map(|r| r.right_span).collect()))
    }

    #[test]
    fn single_flow_is_full_height() {
        let l = layout_sankey(&[flow("A", "X", 3)], Rect::new(0.0, 10.0, 100.0, 50.0), 8.0, 5.0);
        assert_eq!(l.ribbons[0].left_span, (10.0, 60.0));
        assert_eq!(l.ribbons[0].right_span, (10.0, 60.0));
    }

    #[test]
    fn right_bar_is_sum_of_inflows() {
        let l = layout_sankey(&[flow("A", "X", 2), flow("B", "X", 1)], Rect::new(0.0, 0.0, 100.0, 90.0), 8.0, 6.0);
        assert_eq!(l.right.len(), 1);
        assert_eq!(l.right[0].total, 3);
        assert!(conserved(&l));
        assert_eq!(l.left[0].label, "A");
        assert!((l.right[0].height() - (l.left[0].height() + l.left[1].height())).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn bars_tile_exactly(raw in prop::collection::vec((0u8..6, 0u8..5, 1u64..50), 1..25)) {
            let flows: Vec<SankeyFlow> = raw.iter().map(|(a, b, w)| flow(&format!("L{a}"), &format!("R{b}"), *w)).collect();
            let l = layout_sankey(&flows, Rect::new(20.0, 20.0, 500.0, 333.3), 10.0, 7.0);
            prop_assert!(conserved(&l));
            prop_assert!(l.left.iter().chain(&l.right).all(|b| b.y0 >= 20.0 - 1e-9 && b.y1 <= 353.3 + 1e-9));
        }
    }
}
