//! Spiral-placement word cloud.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metrics::text_width;
use crate::view::Rect;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordcloudConfig {
    pub min_font: f64,
    pub max_font: f64,
    /// Pixels the spiral radius grows per radian.
    pub spiral_step: f64,
    pub padding: f64,
}

impl Default for WordcloudConfig {
    fn default() -> Self {
        WordcloudConfig { min_font: 10.0, max_font: 48.0, spiral_step: 1.5, padding: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedWord {
    pub text: String,
    pub frequency: usize,
    pub font_size: f64,
    /// Bounding box; the text is centered in it.
    pub bbox: Rect,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordcloudLayout {
    pub words: Vec<PlacedWord>,
    pub dropped: Vec<String>,
}

fn font_size(f: usize, lo: usize, hi: usize, cfg: &WordcloudConfig) -> f64 {
    if hi == lo {
        return cfg.max_font;
    }
    cfg.min_font + (f - lo) as f64 / (hi - lo) as f64 * (cfg.max_font - cfg.min_font)
}

/// Places words in descending frequency along an Archimedean spiral from the
/// center. The seed picks the spiral's starting angle. Words that find no free
/// spot inside `rect` are reported in `dropped`.
pub fn layout_wordcloud(
    frequencies: &[(String, usize)],
    rect: Rect,
    seed: u64,
    cfg: &WordcloudConfig,
) -> WordcloudLayout {
    let mut out = WordcloudLayout::default();
    if frequencies.is_empty() {
        return out;
    }
    let mut order: Vec<usize> = (0..frequencies.len()).collect();
    order.sort_by(|&a, &b| frequencies[b].1.cmp(&frequencies[a].1).then(a.cmp(&b)));
    let lo = frequencies.iter().map(|f| f.1).min().unwrap_or(0);
    let hi = frequencies.iter().map(|f| f.1).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (rect.x + rect.w / 2.0, rect.y + rect.h / 2.0);
    let max_r = rect.w.hypot(rect.h) / 2.0;
    let step = cfg.spiral_step.max(0.05);

    for i in order {
        let (text, freq) = &frequencies[i];
        let mut size = font_size(*freq, lo, hi, cfg);
        // A word wider than the canvas is shrunk to fit, never below the minimum.
        let w0 = text_width(text, size);
        if w0 > rect.w {
            size = (size * rect.w / w0).max(cfg.min_font);
        }
        let (w, h) = (text_width(text, size) + 2.0 * cfg.padding, size * 1.2 + 2.0 * cfg.padding);
        let start = rng.random_range(0.0..std::f64::consts::TAU);
        let mut theta = 0.0f64;
        let mut placed = None;
        loop {
            let r = step * theta;
            if r > max_r {
                break;
            }
            let a = start + theta;
            let b = Rect::new(cx + r * a.cos() - w / 2.0, cy + r * a.sin() - h / 2.0, w, h);
            if rect.contains(&b, 0.0) && out.words.iter().all(|p| !p.bbox.intersects(&b)) {
                placed = Some(b);
                break;
            }
            // Roughly constant arc length between probes.
            theta += (1.0 / (1.0 + r)).clamp(0.02, 0.5);
        }
        match placed {
            Some(bbox) => out.words.push(PlacedWord { text: text.clone(), frequency: *freq, font_size: size, bbox }),
            None => out.dropped.push(text.clone()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::distr::Alphanumeric;

    fn canvas() -> Rect {
        Rect::new(0.0, 0.0, 600.0, 400.0)
    }

    #[test]
    fn one_word_is_centered() {
        let l = layout_wordcloud(&[("decision".into(), 5)], canvas(), 3, &WordcloudConfig::default());
        let b = l.words[0].bbox;
        assert!((b.x + b.w / 2.0 - 300.0).abs() < 1e-9 && (b.y + b.h / 2.0 - 200.0).abs() < 1e-9);
    }

    #[test]
    fn equal_frequencies_equal_sizes() {
        let l = layout_wordcloud(&[("alpha".into(), 4), ("beta".into(), 4)], canvas(), 1, &WordcloudConfig::default());
        assert_eq!(l.words[0].font_size, l.words[1].font_size);
    }

    #[test]
    fn fifty_random_words_never_overlap() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
            let words: Vec<(String, usize)> = (0..50)
                .map(|_| {
                    let len = rng.random_range(3..12);
                    (
                        (&mut rng).sample_iter(&Alphanumeric).take(len).map(char::from).collect(),
                        rng.random_range(1..100),
                    )
                })
                .collect();
            let l = layout_wordcloud(&words, canvas(), seed, &WordcloudConfig::default());
            assert_eq!(l.words.len() + l.dropped.len(), 50);
            for (i, a) in l.words.iter().enumerate() {
                assert!(canvas().contains(&a.bbox, 1e-9));
                for b in &l.words[i + 1..] {
                    assert!(!a.bbox.intersects(&b.bbox), "seed {seed}: {a:?} overlaps {b:?}");
                }
            }
        }
    }
}
