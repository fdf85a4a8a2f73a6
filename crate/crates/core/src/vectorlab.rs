//! Randomized truncated SVD, k-means and 2-D projections.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::SparseMatrix;

/// Oversampling columns added to the random range finder.
pub const OVERSAMPLING: usize = 10;
/// Subspace power iterations.
pub const POWER_ITERATIONS: usize = 7;

/// Anything that can multiply dense blocks from the left, plain or transposed.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `A · X`
    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64>;
    /// `Aᵗ · Y`
    fn apply_t(&self, y: &DMatrix<f64>) -> DMatrix<f64>;
    fn frobenius(&self) -> f64;
}

impl LinearOperator for DMatrix<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }
    fn ncols(&self) -> usize {
        self.ncols()
    }
    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self * x
    }
    fn apply_t(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        self.tr_mul(y)
    }
    fn frobenius(&self) -> f64 {
        self.norm()
    }
}

impl LinearOperator for SparseMatrix {
    fn nrows(&self) -> usize {
        self.n_rows
    }
    fn ncols(&self) -> usize {
        self.n_cols
    }
    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_rows, x.ncols());
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..x.ncols() {
                out[(i, j)] = row.iter().map(|&(c, v)| v * x[(c, j)]).sum();
            }
        }
        out
    }
    fn apply_t(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_cols, y.ncols());
        for (i, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                for j in 0..y.ncols() {
                    out[(c, j)] += v * y[(i, j)];
                }
            }
        }
        out
    }
    fn frobenius(&self) -> f64 {
        self.rows.iter().flatten().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// n × k
    pub u: DMatrix<f64>,
    /// Descending, non-negative.
    pub s: Vec<f64>,
    /// k × m
    pub vt: DMatrix<f64>,
    pub k: usize,
}

impl Factorization {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.s.clone())) * &self.vt
    }
}

fn orthonormal_basis(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

/// Rank-`k` truncated SVD by randomized subspace iteration. Each left singular
/// vector is flipped so that its largest-magnitude entry is positive (the right
/// vector follows), which makes the output unique for a given seed.
pub fn tsvd<A: LinearOperator + ?Sized>(a: &A, k: usize, seed: u64) -> Result<Factorization> {
    let (n, m) = (a.nrows(), a.ncols());
    let max_k = n.min(m);
    if k < 1 || k > max_k {
        return Err(Error::usage(format!("rank k={k} must be between 1 and {max_k}")));
    }
    let l = (k + OVERSAMPLING).min(max_k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = DMatrix::from_fn(m, l, |_, _| rng.sample::<f64, _>(StandardNormal));

    let mut q = orthonormal_basis(a.apply(&omega));
    for _ in 0..POWER_ITERATIONS {
        let z = orthonormal_basis(a.apply_t(&q));
        q = orthonormal_basis(a.apply(&z));
    }
    // B = Qᵗ A, held transposed as Aᵗ Q (m × l).
    let bt = a.apply_t(&q);
    let svd = bt.transpose().svd(true, true);
    let (ub, vtb) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]).then(i.cmp(&j)));
    order.truncate(k);

    let mut u = DMatrix::zeros(n, k);
    let mut vt = DMatrix::zeros(k, m);
    let mut s = Vec::with_capacity(k);
    for (out, &idx) in order.iter().enumerate() {
        let ucol = &q * ub.column(idx);
        let vrow = vtb.row(idx);
        let largest = |it: &mut dyn Iterator<Item = f64>| it.max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap_or(0.0);
        let mut pivot = largest(&mut ucol.iter().copied());
        if pivot == 0.0 {
            pivot = largest(&mut vrow.iter().copied());
        }
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        u.set_column(out, &(ucol * sign));
        vt.set_row(out, &(vrow * sign));
        s.push(svd.singular_values[idx].max(0.0));
    }
    Ok(Factorization { u, s, vt, k })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansConfig {
    pub max_iter: usize,
    pub tol: f64,
    /// Independent k-means++ restarts; the lowest final inertia wins.
    pub n_init: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig { max_iter: 300, tol: 1e-6, n_init: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub seed: u64,
    /// Inertia after every assignment step of the winning run.
    pub inertia_trace: Vec<f64>,
}

impl Clustering {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.len()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(p, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| squared_distance(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = d2.iter().rposition(|&d| d > 0.0).unwrap_or(0);
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        centroids.push(points[pick].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(squared_distance(p, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

fn lloyd(
    points: &[Vec<f64>],
    mut centroids: Vec<Vec<f64>>,
    cfg: &KMeansConfig,
) -> (Vec<usize>, Vec<Vec<f64>>, f64, Vec<f64>) {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![0; points.len()];
    let mut trace = Vec::new();
    for _ in 0..cfg.max_iter {
        let mut inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            labels[i] = c;
            inertia += d;
        }
        debug_assert!(trace.last().is_none_or(|&prev: &f64| inertia <= prev + 1e-9 * prev.max(1.0)));
        trace.push(inertia);

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            let next = if counts[c] == 0 {
                // Reseed an empty cluster at the point worst served by its centroid.
                let far = (0..points.len())
                    .max_by(|&a, &b| {
                        squared_distance(&points[a], &centroids[labels[a]])
                            .total_cmp(&squared_distance(&points[b], &centroids[labels[b]]))
                            .then(b.cmp(&a))
                    })
                    .expect("points are non-empty");
                points[far].clone()
            } else {
                sums[c].iter().map(|s| s / counts[c] as f64).collect()
            };
            shift = shift.max(squared_distance(&next, &centroids[c]).sqrt());
            centroids[c] = next;
        }
        if shift < cfg.tol {
            break;
        }
    }
    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let (c, d) = nearest(p, &centroids);
        labels[i] = c;
        inertia += d;
    }
    trace.push(inertia);
    (labels, centroids, inertia, trace)
}

/// k-means++ seeding followed by Lloyd iterations; deterministic for a fixed seed.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, cfg: &KMeansConfig) -> Result<Clustering> {
    if k < 1 || k > points.len() {
        return Err(Error::usage(format!("k={k} must be between 1 and the number of points ({})", points.len())));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::usage("points have inconsistent dimensions"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Clustering> = None;
    for _ in 0..cfg.n_init.max(1) {
        let init = plus_plus_init(points, k, &mut rng);
        let (labels, centroids, inertia, inertia_trace) = lloyd(points, init, cfg);
        if best.as_ref().is_none_or(|b| inertia < b.inertia) {
            best = Some(Clustering { labels, centroids, inertia, seed, inertia_trace });
        }
    }
    Ok(best.expect("at least one run"))
}

/// Mean silhouette coefficient; 0 when every point shares one cluster.
pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    if k < 2 || points.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        let mut sum = vec![0.0; k];
        let mut count = vec![0usize; k];
        for (j, q) in points.iter().enumerate() {
            if i != j {
                sum[labels[j]] += squared_distance(p, q).sqrt();
                count[labels[j]] += 1;
            }
        }
        let own = labels[i];
        if count[own] == 0 {
            continue;
        }
        let a = sum[own] / count[own] as f64;
        let b = (0..k)
            .filter(|&c| c != own && count[c] > 0)
            .map(|c| sum[c] / count[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if b.is_finite() {
            let s = (b - a) / a.max(b);
            if s.is_finite() {
                total += s;
            }
        }
    }
    total / points.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMethod {
    Tsvd,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedPoint {
    pub doc_id: usize,
    pub x: f64,
    pub y: f64,
    pub cluster: Option<usize>,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection2D {
    pub method: ProjectionMethod,
    pub points: Vec<ProjectedPoint>,
}

/// Rank-2 TSVD coordinates (rows of `U·diag(S)`, computed as `A·V`), optionally clustered by k-means
/// on those coordinates. `citations[i]` labels row `i`.
pub fn project2d<A: LinearOperator + ?Sized>(
    a: &A,
    method: ProjectionMethod,
    citations: &[String],
    cluster_k: Option<usize>,
    seed: u64,
    kcfg: &KMeansConfig,
) -> Result<Projection2D> {
    if citations.len() != a.nrows() {
        return Err(Error::usage(format!("expected {} citation strings, found {}", a.nrows(), citations.len())));
    }
    if a.nrows().min(a.ncols()) < 2 {
        return Err(Error::unavailable("a 2-D projection needs at least 2 documents and 2 features"));
    }
    let f = tsvd(a, 2, seed)?;
    // A·V equals U·diag(S) and maps identical rows to identical points exactly.
    let av = a.apply(&f.vt.transpose());
    let coords: Vec<Vec<f64>> = (0..a.nrows()).map(|i| vec![av[(i, 0)], av[(i, 1)]]).collect();
    let labels = match cluster_k {
        Some(k) => Some(kmeans(&coords, k, seed, kcfg)?.labels),
        None => None,
    };
    let points = coords
        .iter()
        .enumerate()
        .map(|(i, c)| ProjectedPoint {
            doc_id: i,
            x: c[0],
            y: c[1],
            cluster: labels.as_ref().map(|l| l[i]),
            citation: citations[i].clone(),
        })
        .collect();
    Ok(Projection2D { method, points })
}

/// Parse one vector per line (comma or whitespace separated). A non-numeric first
/// line is treated as a header.
pub fn load_vectors(text: &str, expected_rows: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if rows.is_empty() && dim.is_none() && idx == 0 => continue,
            Err(_) => return Err(Error::usage(format!("line {}: non-numeric value", idx + 1))),
        };
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::usage(format!("line {}: expected {d} values, found {}", idx + 1, values.len())))
            }
            _ => {}
        }
        rows.push(values);
    }
    if rows.len() != expected_rows {
        return Err(Error::usage(format!("expected {expected_rows} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn to_dense(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let ncols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    /// One-sided Jacobi SVD: orthogonalize column pairs until converged and
    /// return the column norms, sorted descending.
    fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
        let mut w: Vec<Vec<f64>> = (0..a.ncols()).map(|j| a.column(j).iter().copied().collect()).collect();
        if a.nrows() < a.ncols() {
            w = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
        }
        for _ in 0..100 {
            let mut off = 0.0f64;
            for p in 0..w.len() {
                for q in p + 1..w.len() {
                    let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                    let beta: f64 = w[q].iter().map(|x| x * x).sum();
                    let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                    if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                        continue;
                    }
                    off = off.max(gamma.abs() / (alpha * beta).sqrt());
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..w[p].len() {
                        let (x, y) = (w[p][i], w[q][i]);
                        w[p][i] = c * x - s * y;
                        w[q][i] = s * x + c * y;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
        }
        let mut s: Vec<f64> = w.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn identity_spectrum() {
        let f = tsvd(&DMatrix::<f64>::identity(5, 5), 3, 1).unwrap();
        for s in &f.s {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_reconstructs() {
        let u = nalgebra::DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let v = nalgebra::DVector::from_vec(vec![0.3, 1.0, -1.0]);
        let a = &u * v.transpose();
        let f = tsvd(&a, 1, 9).unwrap();
        assert!((f.reconstruct() - &a).norm() < 1e-8);
        // sign convention: largest-magnitude entry of u is positive
        let col: Vec<f64> = f.u.column(0).iter().copied().collect();
        let pivot = col.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
        assert!(pivot > 0.0);
    }

    #[test]
    fn random_dense_matches_jacobi() {
        let a = random_matrix(12, 9, 3);
        let oracle = jacobi_singular_values(&a);
        let f = tsvd(&a, 4, 42).unwrap();
        for (s, o) in f.s.iter().zip(&oracle) {
            assert!((s - o).abs() < 1e-6, "{s} vs {o}");
        }
        let utu = f.u.tr_mul(&f.u);
        let vvt = &f.vt * f.vt.transpose();
        assert!((utu - DMatrix::identity(4, 4)).norm() < 1e-8);
        assert!((vvt - DMatrix::identity(4, 4)).norm() < 1e-8);
    }

    #[test]
    fn zero_matrix_and_bad_rank() {
        let f = tsvd(&DMatrix::<f64>::zeros(4, 3), 2, 0).unwrap();
        assert_eq!(f.s, vec![0.0, 0.0]);
        assert!(matches!(tsvd(&DMatrix::<f64>::zeros(4, 3), 4, 0), Err(Error::Usage(_))));
        assert!(matches!(tsvd(&DMatrix::<f64>::zeros(4, 3), 0, 0), Err(Error::Usage(_))));
    }

    #[test]
    fn sparse_and_dense_agree_and_are_deterministic() {
        let dense = random_matrix(10, 15, 5).map(|x| if x.abs() < 0.5 { 0.0 } else { x });
        let sparse = SparseMatrix {
            n_rows: 10,
            n_cols: 15,
            vocabulary: (0..15).map(|i| i.to_string()).collect(),
            rows: (0..10)
                .map(|i| (0..15).filter(|&j| dense[(i, j)] != 0.0).map(|j| (j, dense[(i, j)])).collect())
                .collect(),
        };
        let a = tsvd(&dense, 3, 7).unwrap();
        let b = tsvd(&sparse, 3, 7).unwrap();
        for (x, y) in a.s.iter().zip(&b.s) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!((a.u.clone() - b.u.clone()).norm() < 1e-6);
        assert_eq!(tsvd(&sparse, 3, 7).unwrap(), b);
    }

    #[test]
    fn residual_near_optimal() {
        let a = random_matrix(30, 20, 11);
        let k = 5;
        let f = tsvd(&a, k, 1).unwrap();
        let oracle = jacobi_singular_values(&a);
        let optimal = oracle[k..].iter().map(|s| s * s).sum::<f64>().sqrt();
        let got = (a.clone() - f.reconstruct()).norm();
        assert!(got <= 1.05 * optimal, "{got} vs {optimal}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn singular_values_match_oracle(rows in 1usize..=20, cols in 1usize..=20, seed in any::<u64>(), kfrac in 0.0f64..1.0) {
            let a = random_matrix(rows, cols, seed);
            let k = 1 + ((rows.min(cols) - 1) as f64 * kfrac) as usize;
            let f = tsvd(&a, k, seed ^ 0x5eed).unwrap();
            let oracle = jacobi_singular_values(&a);
            prop_assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
            for (s, o) in f.s.iter().zip(&oracle) {
                prop_assert!((s - o).abs() < 1e-6, "{} vs {}", s, o);
            }
        }
    }

    fn blobs(seed: u64, per: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        for center in [0.0, 10.0] {
            for _ in 0..per {
                let ang: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let r: f64 = rng.random_range(0.0..0.1);
                pts.push(vec![center + r * ang.cos(), center + r * ang.sin()]);
            }
        }
        pts
    }

    #[test]
    fn kmeans_k1_is_mean() {
        let pts = blobs(1, 5);
        let c = kmeans(&pts, 1, 3, &KMeansConfig::default()).unwrap();
        let n = pts.len() as f64;
        let mean: Vec<f64> = (0..2).map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / n).collect();
        assert!(squared_distance(&c.centroids[0], &mean) < 1e-20);
        let expected: f64 = pts.iter().map(|p| squared_distance(p, &mean)).sum();
        assert!((c.inertia - expected).abs() < 1e-9);
    }

    #[test]
    fn kmeans_k_equals_n() {
        let pts = blobs(2, 3);
        let c = kmeans(&pts, pts.len(), 0, &KMeansConfig::default()).unwrap();
        assert!(c.inertia < 1e-20);
        let mut labels = c.labels.clone();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), pts.len());
        assert!(kmeans(&pts, pts.len() + 1, 0, &KMeansConfig::default()).is_err());
    }

    /// Best 2-partition by exhaustive search.
    fn best_partition(points: &[Vec<f64>]) -> Vec<bool> {
        let n = points.len();
        let cost = |mask: u32| {
            let mut total = 0.0;
            for side in [false, true] {
                let members: Vec<&Vec<f64>> =
                    (0..n).filter(|&i| ((mask >> i) & 1 == 1) == side).map(|i| &points[i]).collect();
                if members.is_empty() {
                    return f64::INFINITY;
                }
                let mean: Vec<f64> =
                    (0..2).map(|j| members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64).collect();
                total += members.iter().map(|p| squared_distance(p, &mean)).sum::<f64>();
            }
            total
        };
        let best = (1..(1u32 << n) - 1).min_by(|&a, &b| cost(a).total_cmp(&cost(b))).unwrap();
        (0..n).map(|i| (best >> i) & 1 == 1).collect()
    }

    #[test]
    fn two_blobs_separate_for_every_seed() {
        let pts = blobs(7, 6);
        let oracle = best_partition(&pts);
        for seed in 0..20 {
            let c = kmeans(&pts, 2, seed, &KMeansConfig::default()).unwrap();
            let same = |i: usize, j: usize| c.labels[i] == c.labels[j];
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    assert_eq!(same(i, j), oracle[i] == oracle[j]);
                }
            }
            assert!(c.inertia_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        }
    }

    proptest! {
        #[test]
        fn inertia_is_monotone_and_matches_definition(
            pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..40),
            k in 1usize..6,
            seed in any::<u64>(),
        ) {
            let k = k.min(pts.len());
            let c = kmeans(&pts, k, seed, &KMeansConfig::default()).unwrap();
            prop_assert!(c.inertia_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].max(1.0)));
            let def: f64 = pts.iter().zip(&c.labels).map(|(p, &l)| squared_distance(p, &c.centroids[l])).sum();
            prop_assert!((def - c.inertia).abs() < 1e-9);
            prop_assert!(c.labels.iter().all(|&l| l < k));
            prop_assert_eq!(kmeans(&pts, k, seed, &KMeansConfig::default()).unwrap(), c);
        }
    }

    #[test]
    fn projection_preserves_rank_two_distances() {
        let b = random_matrix(6, 2, 4);
        let c = random_matrix(2, 8, 5);
        let a = &b * &c;
        let cites: Vec<String> = (0..6).map(|i| format!("doc {i}")).collect();
        let p = project2d(&a, ProjectionMethod::Tsvd, &cites, Some(2), 1, &KMeansConfig::default()).unwrap();
        assert_eq!(p.points.len(), 6);
        for i in 0..6 {
            for j in 0..6 {
                let orig = (a.row(i) - a.row(j)).norm();
                let (pi, pj) = (&p.points[i], &p.points[j]);
                let proj = ((pi.x - pj.x).powi(2) + (pi.y - pj.y).powi(2)).sqrt();
                assert!((orig - proj).abs() < 1e-6, "{i},{j}: {orig} vs {proj}");
            }
        }
        let same = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 0.0, 1.0]);
        let p = project2d(&same, ProjectionMethod::Tsvd, &cites[..3], None, 0, &KMeansConfig::default()).unwrap();
        assert_eq!((p.points[0].x, p.points[0].y), (p.points[1].x, p.points[1].y));
    }

    #[test]
    fn vector_files() {
        let ok = "d0,d1\n1,2\n3,4\n5,6\n";
        assert_eq!(load_vectors(ok, 3).unwrap()[2], vec![5.0, 6.0]);
        let wide = (0..3).map(|_| vec!["0.5"; 384].join(" ")).collect::<Vec<_>>().join("\n");
        assert_eq!(load_vectors(&wide, 3).unwrap()[0].len(), 384);
        assert_eq!(load_vectors("1 2\n3 4\n", 3).unwrap_err().to_string(), "expected 3 rows, found 2");
        let ragged = load_vectors("1 2\n3 4 5\n6 7\n", 3).unwrap_err().to_string();
        assert!(ragged.starts_with("line 2:"), "{ragged}");
    }

    #[test]
    fn silhouette_prefers_true_split() {
        let pts = blobs(3, 5);
        let truth: Vec<usize> = (0..10).map(|i| i / 5).collect();
        let wrong: Vec<usize> = (0..10).map(|i| i % 2).collect();
        assert!(silhouette(&pts, &truth) > 0.9);
        assert!(silhouette(&pts, &wrong) < silhouette(&pts, &truth));
    }
}
