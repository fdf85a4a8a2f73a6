//! Squarified treemap.

use crate::view::Rect;
use crate::{RenderError, Result};

fn worst(row: &[f64], side: f64) -> f64 {
    let s: f64 = row.iter().sum();
    let (mx, mn) = row.iter().fold((f64::MIN, f64::MAX), |(a, b), &v| (a.max(v), b.min(v)));
    let s2 = s * s;
    let side2 = side * side;
    (side2 * mx / s2).max(s2 / (side2 * mn))
}

/// Cells for `values` inside `rect`, returned in input order. Values are packed
/// largest first; a value joins the current row only when that does not worsen
/// the row's worst aspect ratio. Rows run along the shorter side of the space left.
pub fn layout_treemap(values: &[f64], rect: Rect) -> Result<Vec<Rect>> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(RenderError::Usage(format!("treemap values must be positive, got {v}")));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let total: f64 = values.iter().sum();
    let scale = rect.area() / total;
    let areas: Vec<f64> = order.iter().map(|&i| values[i] * scale).collect();

    let mut out = vec![Rect::new(0.0, 0.0, 0.0, 0.0); values.len()];
    let mut space = rect;
    let mut start = 0;
    while start < areas.len() {
        let side = space.w.min(space.h);
        let mut end = start + 1;
        while end < areas.len() && worst(&areas[start..=end], side) <= worst(&areas[start..end], side) {
            end += 1;
        }
        let row = &areas[start..end];
        let row_sum: f64 = row.iter().sum();
        let last_row = end == areas.len();
        if space.w >= space.h {
            // Column on the left, cells stacked downward.
            let thick = if last_row { space.w } else { row_sum / space.h };
            let mut y = space.y;
            for (k, a) in row.iter().enumerate() {
                let h = if k + 1 == row.len() { space.bottom() - y } else { a / thick };
                out[order[start + k]] = Rect::new(space.x, y, thick, h);
                y += h;
            }
            space = Rect::new(space.x + thick, space.y, space.w - thick, space.h);
        } else {
            // Row along the top, cells left to right.
            let thick = if last_row { space.h } else { row_sum / space.w };
            let mut x = space.x;
            for (k, a) in row.iter().enumerate() {
                let w = if k + 1 == row.len() { space.right() - x } else { a / thick };
                out[order[start + k]] = Rect::new(x, space.y, w, thick);
                x += w;
            }
            space = Rect::new(space.x, space.y + thick, space.w, space.h - thick);
        }
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_value_fills_rect() {
        let r = Rect::new(1.0, 2.0, 30.0, 20.0);
        assert_eq!(layout_treemap(&[5.0], r).unwrap(), vec![r]);
    }

    #[test]
    fn four_equal_in_square() {
        let cells = layout_treemap(&[1.0; 4], Rect::new(0.0, 0.0, 10.0, 10.0)).unwrap();
        for c in &cells {
            assert!((c.area() - 25.0).abs() < 1e-9);
            assert!(c.w.max(c.h) / c.w.min(c.h) <= 2.0);
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(layout_treemap(&[1.0, 0.0], Rect::new(0.0, 0.0, 1.0, 1.0)).is_err());
        assert!(layout_treemap(&[-2.0], Rect::new(0.0, 0.0, 1.0, 1.0)).is_err());
    }

    /// Row-packing trace for [6,6,4,3,2,2,1] in a 6×4 rect, worked by hand:
    /// side 4: {6}=2.67, {6,6}=1.5, {6,6,4}=2.67 → column of width 3;
    /// side 3: {4}=2.25, {4,3}=1.81, {4,3,2}=4.5 → row of height 7/3;
    /// side 5/3: {2}=1.39, {2,2}=2.88 → column of width 1.2 (twice);
    /// side 0.6: {1} closes the last strip.
    #[test]
    fn reference_trace() {
        let cells = layout_treemap(&[6.0, 6.0, 4.0, 3.0, 2.0, 2.0, 1.0], Rect::new(0.0, 0.0, 6.0, 4.0)).unwrap();
        let h2 = 7.0 / 3.0;
        let expected = [
            (0.0, 0.0, 3.0, 2.0),
            (0.0, 2.0, 3.0, 2.0),
            (3.0, 0.0, 12.0 / 7.0, h2),
            (3.0 + 12.0 / 7.0, 0.0, 9.0 / 7.0, h2),
            (3.0, h2, 1.2, 4.0 - h2),
            (4.2, h2, 1.2, 4.0 - h2),
            (5.4, h2, 0.6, 4.0 - h2),
        ];
        for (c, e) in cells.iter().zip(expected) {
            for (a, b) in [(c.x, e.0), (c.y, e.1), (c.w, e.2), (c.h, e.3)] {
                assert!((a - b).abs() < 1e-9, "{c:?} vs {e:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn areas_conserved_and_inside(values in prop::collection::vec(0.01f64..100.0, 1..40), w in 10.0f64..800.0, h in 10.0f64..800.0) {
            let rect = Rect::new(5.0, 7.0, w, h);
            let cells = layout_treemap(&values, rect).unwrap();
            let total: f64 = values.iter().sum();
            let area: f64 = cells.iter().map(Rect::area).sum();
            prop_assert!((area - rect.area()).abs() <= rect.area() * 1e-3);
            for (c, v) in cells.iter().zip(&values) {
                prop_assert!(rect.contains(c, 0.5));
                prop_assert!((c.area() - v / total * rect.area()).abs() <= rect.area() * 1e-3);
            }
        }
    }
}
