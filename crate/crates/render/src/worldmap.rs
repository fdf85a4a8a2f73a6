//! Equirectangular world outline and country-collaboration overlay.

use crate::svg::num;
use crate::view::Rect;

/// Coarse continent outlines as (lon, lat) rings.
const OUTLINES: &[&[(f64, f64)]] = &[
    &[
        (-168.0, 66.0),
        (-156.0, 71.0),
        (-128.0, 70.0),
        (-95.0, 72.0),
        (-80.0, 73.0),
        (-62.0, 60.0),
        (-55.0, 52.0),
        (-67.0, 45.0),
        (-76.0, 35.0),
        (-81.0, 25.0),
        (-97.0, 26.0),
        (-97.0, 19.0),
        (-87.0, 21.0),
        (-83.0, 9.0),
        (-78.0, 8.0),
        (-92.0, 15.0),
        (-105.0, 20.0),
        (-117.0, 32.0),
        (-124.0, 40.0),
        (-124.0, 48.0),
        (-135.0, 58.0),
        (-152.0, 60.0),
        (-165.0, 61.0),
    ],
    &[(-73.0, 78.0), (-40.0, 83.0), (-20.0, 81.0), (-20.0, 70.0), (-43.0, 60.0), (-52.0, 64.0), (-60.0, 76.0)],
    &[
        (-78.0, 8.0),
        (-60.0, 10.0),
        (-50.0, 0.0),
        (-35.0, -6.0),
        (-40.0, -22.0),
        (-48.0, -28.0),
        (-58.0, -38.0),
        (-65.0, -42.0),
        (-68.0, -53.0),
        (-72.0, -52.0),
        (-74.0, -40.0),
        (-71.0, -20.0),
        (-77.0, -12.0),
        (-81.0, -5.0),
        (-80.0, 1.0),
    ],
    &[
        (-10.0, 36.0),
        (-9.0, 43.0),
        (-2.0, 44.0),
        (-5.0, 48.0),
        (2.0, 51.0),
        (5.0, 54.0),
        (8.0, 57.0),
        (5.0, 62.0),
        (15.0, 69.0),
        (28.0, 71.0),
        (40.0, 67.0),
        (40.0, 60.0),
        (30.0, 47.0),
        (40.0, 42.0),
        (28.0, 41.0),
        (22.0, 37.0),
        (15.0, 40.0),
        (12.0, 44.0),
        (3.0, 43.0),
    ],
    &[
        (-17.0, 21.0),
        (-10.0, 36.0),
        (10.0, 37.0),
        (20.0, 32.0),
        (32.0, 31.0),
        (35.0, 28.0),
        (43.0, 12.0),
        (51.0, 12.0),
        (40.0, -3.0),
        (40.0, -15.0),
        (33.0, -26.0),
        (20.0, -35.0),
        (12.0, -18.0),
        (13.0, -5.0),
        (9.0, 4.0),
        (-8.0, 4.0),
        (-17.0, 14.0),
    ],
    &[
        (28.0, 41.0),
        (36.0, 36.0),
        (35.0, 28.0),
        (43.0, 12.0),
        (59.0, 22.0),
        (66.0, 25.0),
        (72.0, 20.0),
        (77.0, 8.0),
        (80.0, 15.0),
        (88.0, 22.0),
        (94.0, 16.0),
        (98.0, 8.0),
        (104.0, 1.0),
        (109.0, 11.0),
        (107.0, 21.0),
        (122.0, 30.0),
        (121.0, 40.0),
        (130.0, 43.0),
        (142.0, 53.0),
        (140.0, 60.0),
        (160.0, 62.0),
        (180.0, 66.0),
        (180.0, 70.0),
        (140.0, 73.0),
        (110.0, 77.0),
        (80.0, 73.0),
        (68.0, 70.0),
        (50.0, 68.0),
        (40.0, 67.0),
        (40.0, 60.0),
        (30.0, 47.0),
        (40.0, 42.0),
    ],
    &[
        (114.0, -22.0),
        (122.0, -18.0),
        (131.0, -12.0),
        (137.0, -12.0),
        (142.0, -11.0),
        (146.0, -19.0),
        (153.0, -26.0),
        (150.0, -37.0),
        (141.0, -38.0),
        (132.0, -31.0),
        (115.0, -34.0),
    ],
    &[(-5.0, 50.0), (1.0, 51.0), (1.0, 53.0), (-3.0, 56.0), (-6.0, 58.0), (-5.0, 55.0)],
    &[(130.0, 31.0), (135.0, 34.0), (141.0, 36.0), (142.0, 43.0), (140.0, 41.0), (133.0, 34.0)],
    &[(95.0, 5.0), (106.0, -6.0), (115.0, -8.0), (120.0, -9.0), (118.0, 1.0), (109.0, 2.0), (100.0, 0.0)],
    &[(166.0, -46.0), (174.0, -41.0), (178.0, -38.0), (173.0, -35.0), (171.0, -44.0)],
];

pub fn project(lon: f64, lat: f64, rect: Rect) -> (f64, f64) {
    let lon = lon.clamp(-180.0, 180.0);
    let lat = lat.clamp(-90.0, 90.0);
    (rect.x + (lon + 180.0) / 360.0 * rect.w, rect.y + (90.0 - lat) / 180.0 * rect.h)
}

/// SVG path data for every outline.
pub fn coastline_path(rect: Rect) -> String {
    let mut d = String::new();
    for ring in OUTLINES {
        for (i, &(lon, lat)) in ring.iter().enumerate() {
            let (x, y) = project(lon, lat, rect);
            d.push_str(if i == 0 { "M" } else { " L" });
            d.push_str(&format!("{},{}", num(x), num(y)));
        }
        d.push_str(" Z ");
    }
    d.trim_end().to_string()
}

/// A quadratic curve bowed toward the top of the map, standing in for a great-circle arc.
pub fn arc_path(a: (f64, f64), b: (f64, f64), rect: Rect) -> String {
    let (mx, my) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let lift = ((b.0 - a.0).hypot(b.1 - a.1) * 0.25).min(my - rect.y);
    format!("M{},{} Q{},{} {},{}", num(a.0), num(a.1), num(mx), num(my - lift), num(b.0), num(b.1))
}
