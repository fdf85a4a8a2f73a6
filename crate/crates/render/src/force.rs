//! Fruchterman–Reingold force-directed layout.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::view::Rect;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceConfig {
    pub iterations: usize,
    /// Distance kept from each band's border.
    pub margin: f64,
}

impl Default for ForceConfig {
    fn default() -> Self {
        ForceConfig { iterations: 300, margin: 10.0 }
    }
}

fn key_hash(key: &str, seed: u64) -> u64 {
    // FNV-1a, mixed with the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in key.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn components(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &u in &adj[comp[i]] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
}

fn layout_component(
    nodes: &[usize],
    edges: &[(usize, usize)],
    band: Rect,
    cfg: &ForceConfig,
    start: &[(f64, f64)],
) -> Vec<(f64, f64)> {
    let inner = band.inset(cfg.margin);
    let n = nodes.len();
    if n == 1 {
        return vec![(inner.x + inner.w / 2.0, inner.y + inner.h / 2.0)];
    }
    let k = (inner.area() / n as f64).sqrt().max(1e-6);
    let mut pos: Vec<(f64, f64)> = start.iter().map(|(u, v)| (inner.x + u * inner.w, inner.y + v * inner.h)).collect();
    let t0 = inner.w.max(inner.h) / 10.0;
    for it in 0..cfg.iterations {
        let t = t0 * (1.0 - it as f64 / cfg.iterations as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let d = dx.hypot(dy).max(0.01);
                let f = k * k / d;
                disp[i].0 += dx / d * f;
                disp[i].1 += dy / d * f;
            }
        }
        for &(a, b) in edges {
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let d = dx.hypot(dy).max(0.01);
            let f = d * d / k;
            disp[a].0 -= dx / d * f;
            disp[a].1 -= dy / d * f;
            disp[b].0 += dx / d * f;
            disp[b].1 += dy / d * f;
        }
        for (p, (dx, dy)) in pos.iter_mut().zip(&disp) {
            let len = dx.hypot(*dy);
            if len > 0.0 {
                let step = len.min(t);
                p.0 = (p.0 + dx / len * step).clamp(inner.x, inner.right());
                p.1 = (p.1 + dy / len * step).clamp(inner.y, inner.bottom());
            }
        }
    }
    pos
}

/// Positions for nodes identified by unique `keys`. Initial positions derive
/// from each key and the seed, and all sums run in key order, so permuting the
/// input permutes the output and nothing else. Connected components get their
/// own horizontal band, largest first, with height proportional to node count.
pub fn layout_force(
    keys: &[String],
    edges: &[(usize, usize)],
    rect: Rect,
    seed: u64,
    cfg: &ForceConfig,
) -> Vec<(f64, f64)> {
    let n = keys.len();
    if n == 0 {
        return Vec::new();
    }
    // Canonical order: by key.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let edges: BTreeSet<(usize, usize)> = edges
        .iter()
        .filter(|(a, b)| a != b && *a < n && *b < n)
        .map(|&(a, b)| (rank[a].min(rank[b]), rank[a].max(rank[b])))
        .collect();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let comps = components(n, &adj);

    let mut out_canon = vec![(0.0, 0.0); n];
    let mut y = rect.y;
    for comp in &comps {
        let h = rect.h * comp.len() as f64 / n as f64;
        let band = Rect::new(rect.x, y, rect.w, h);
        y += h;
        let local: std::collections::HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let local_edges: Vec<(usize, usize)> =
            edges.iter().filter(|(a, _)| local.contains_key(a)).map(|(a, b)| (local[a], local[b])).collect();
        let start: Vec<(f64, f64)> = comp
            .iter()
            .map(|&g| {
                let mut rng = ChaCha8Rng::seed_from_u64(key_hash(&keys[order[g]], seed));
                (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))
            })
            .collect();
        for (i, p) in layout_component(comp, &local_edges, band, cfg, &start).into_iter().enumerate() {
            out_canon[comp[i]] = p;
        }
    }
    (0..n).map(|i| out_canon[rank[i]]).collect()
}
