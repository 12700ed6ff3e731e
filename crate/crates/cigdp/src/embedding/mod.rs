//! Vertex embeddings and their 2-D projections.
//!
//! Three providers ship in-repo: a normalized-Laplacian spectral
//! embedding, a Katz-similarity factorization ([`hope`]), and a biased
//! random-walk skip-gram model ([`node2vec`]). Externally computed
//! embeddings can be imported from a simple text format. Downstream the
//! guided construction only consumes *arc distances*: Euclidean distances
//! between adjacent vertices after a PCA projection to the plane.

pub mod hope;
pub mod node2vec;
pub mod spectral;

use crate::graph::{IncrementalGraph, VertexId};
use crate::linalg::{symmetric_eigen, Matrix};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

pub use node2vec::Node2VecConfig;

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("embedding dimension {k} exceeds the maximum {max} for {n} vertices")]
    DimensionTooLarge { k: usize, n: usize, max: usize },
    #[error("embedding dimension must be at least {min}")]
    DimensionTooSmall { min: usize },
    #[error("beta must be positive, got {0}")]
    BadBeta(f64),
    #[error("similarity solve failed; adjacency is not layered-nilpotent")]
    Singular,
    #[error("invalid walk parameter: {0}")]
    BadWalkParameter(&'static str),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Dense per-vertex embedding; row `i` belongs to vertex id `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    matrix: Matrix,
}

impl Embedding {
    pub fn new(matrix: Matrix) -> Self {
        Embedding { matrix }
    }

    pub fn dimensions(&self) -> usize {
        self.matrix.cols()
    }

    pub fn num_vertices(&self) -> usize {
        self.matrix.rows()
    }

    pub fn row(&self, v: VertexId) -> &[f64] {
        self.matrix.row(v.index())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// `Auto` resolves to the provider's documented default: `n − 1` for the
/// spectral embedding, `2n − 1` for the Katz factorization, 128 for the
/// walk model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionSpec {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingConfig {
    Spectral { dimensions: DimensionSpec },
    Hope { dimensions: DimensionSpec, beta: f64 },
    Node2Vec(Node2VecConfig),
}

impl EmbeddingConfig {
    pub fn spectral() -> Self {
        EmbeddingConfig::Spectral {
            dimensions: DimensionSpec::Auto,
        }
    }

    pub fn hope() -> Self {
        EmbeddingConfig::Hope {
            dimensions: DimensionSpec::Auto,
            beta: 0.01,
        }
    }

    pub fn node2vec() -> Self {
        EmbeddingConfig::Node2Vec(Node2VecConfig::default())
    }

    /// Whether recomputing under a fresh RNG can change the result.
    pub fn is_stochastic(&self) -> bool {
        matches!(self, EmbeddingConfig::Node2Vec(_))
    }

    pub fn method_name(&self) -> &'static str {
        match self {
            EmbeddingConfig::Spectral { .. } => "spectral",
            EmbeddingConfig::Hope { .. } => "hope",
            EmbeddingConfig::Node2Vec(_) => "node2vec",
        }
    }
}

/// Compute an embedding; `rng` is consumed only by stochastic providers.
pub fn compute(
    graph: &IncrementalGraph,
    config: &EmbeddingConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Embedding, EmbedError> {
    let n = graph.num_vertices();
    match config {
        EmbeddingConfig::Spectral { dimensions } => {
            let k = match dimensions {
                DimensionSpec::Auto => n.saturating_sub(1).max(1),
                DimensionSpec::Fixed(k) => *k,
            };
            spectral::spectral_embedding(graph, k)
        }
        EmbeddingConfig::Hope { dimensions, beta } => {
            let k = match dimensions {
                DimensionSpec::Auto => 2 * n - 1,
                DimensionSpec::Fixed(k) => *k,
            };
            hope::hope_embedding(graph, k, *beta)
        }
        EmbeddingConfig::Node2Vec(cfg) => node2vec::node2vec_embedding(graph, cfg, rng),
    }
}

/// Project to the top-2 principal components. Columns are mean-centered;
/// each component's sign is fixed so its largest-magnitude loading is
/// positive. When the embedding is wider than the vertex count the
/// scores come from the vertex-side Gram matrix instead of the k×k
/// covariance — same components, smaller eigenproblem.
pub fn project_2d(embedding: &Embedding) -> Matrix {
    let x = embedding.matrix();
    let (n, k) = (x.rows(), x.cols());
    let mut centered = Matrix::zeros(n, k);
    for j in 0..k {
        let mean: f64 = (0..n).map(|i| x[(i, j)]).sum::<f64>() / n.max(1) as f64;
        for i in 0..n {
            centered[(i, j)] = x[(i, j)] - mean;
        }
    }
    if n < 2 {
        return Matrix::zeros(n, 2);
    }
    let denom = (n - 1) as f64;

    let mut scores = Matrix::zeros(n, 2);
    if k <= n {
        let cov = centered.transpose().matmul(&centered).scale(1.0 / denom);
        let (vals, vecs) = symmetric_eigen(&cov);
        for comp in 0..2.min(k) {
            let col = k - 1 - comp; // eigenvalues ascend; take from the top
            if vals[col] <= 1e-300 {
                continue;
            }
            let mut loading: Vec<f64> = vecs.column(col);
            let flip = sign_flip(&loading);
            if flip {
                loading.iter_mut().for_each(|v| *v = -*v);
            }
            for i in 0..n {
                scores[(i, comp)] = centered
                    .row(i)
                    .iter()
                    .zip(&loading)
                    .map(|(a, b)| a * b)
                    .sum();
            }
        }
    } else {
        let gram = centered.matmul(&centered.transpose()).scale(1.0 / denom);
        let (vals, vecs) = symmetric_eigen(&gram);
        for comp in 0..2 {
            let col = n - 1 - comp;
            let val = vals[col];
            if val <= 1e-300 {
                continue;
            }
            let u = vecs.column(col);
            // Loadings v = Xᵀ u / √(λ (n−1)) give the sign reference.
            let scale = (val * denom).sqrt();
            let mut loading = vec![0.0; k];
            for j in 0..k {
                loading[j] = (0..n).map(|i| centered[(i, j)] * u[i]).sum::<f64>() / scale;
            }
            let flip = sign_flip(&loading);
            for i in 0..n {
                let s = u[i] * scale;
                scores[(i, comp)] = if flip { -s } else { s };
            }
        }
    }
    scores
}

/// True when the largest-magnitude entry is negative (first such entry on
/// exact ties).
fn sign_flip(loading: &[f64]) -> bool {
    let mut best = 0usize;
    for (i, v) in loading.iter().enumerate() {
        if v.abs() > loading[best].abs() {
            best = i;
        }
    }
    loading[best] < 0.0
}

/// Euclidean distances between the projected endpoints of every arc.
/// Non-adjacent pairs are simply absent (`get` returns `None`).
#[derive(Debug, Clone)]
pub struct ArcDistances {
    map: HashMap<(u32, u32), f64>,
}

impl ArcDistances {
    pub fn get(&self, a: VertexId, b: VertexId) -> Option<f64> {
        let key = (a.0.min(b.0), a.0.max(b.0));
        self.map.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub fn arc_distances(graph: &IncrementalGraph, points: &Matrix) -> ArcDistances {
    assert_eq!(points.rows(), graph.num_vertices());
    let mut map = HashMap::new();
    for arc in graph.all_arcs() {
        let (t, h) = (arc.tail.index(), arc.head.index());
        let dx = points[(t, 0)] - points[(h, 0)];
        let dy = points[(t, 1)] - points[(h, 1)];
        let key = (arc.tail.0.min(arc.head.0), arc.tail.0.max(arc.head.0));
        map.insert(key, (dx * dx + dy * dy).sqrt());
    }
    ArcDistances { map }
}

/// Import the external embedding format: one line per vertex,
/// `<id> <x1> <x2> ... <xk>`, every vertex exactly once, consistent
/// width.
pub fn parse_external(text: &str, num_vertices: usize) -> Result<Embedding, EmbedError> {
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; num_vertices];
    let mut k: Option<usize> = None;
    for (lno, line) in text.lines().enumerate() {
        let lno = lno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let id: u32 = toks
            .next()
            .unwrap()
            .parse()
            .map_err(|_| EmbedError::Parse {
                line: lno,
                msg: "bad vertex id".into(),
            })?;
        if id == 0 || id as usize > num_vertices {
            return Err(EmbedError::Parse {
                line: lno,
                msg: format!("vertex id {id} out of range 1..={num_vertices}"),
            });
        }
        let values: Vec<f64> = toks
            .map(|t| {
                t.parse().map_err(|_| EmbedError::Parse {
                    line: lno,
                    msg: format!("bad number `{t}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(EmbedError::Parse {
                line: lno,
                msg: "vertex line has no coordinates".into(),
            });
        }
        match k {
            None => k = Some(values.len()),
            Some(k) if k != values.len() => {
                return Err(EmbedError::Parse {
                    line: lno,
                    msg: format!("expected {k} coordinates, got {}", values.len()),
                })
            }
            _ => {}
        }
        if rows[id as usize - 1].replace(values).is_some() {
            return Err(EmbedError::Parse {
                line: lno,
                msg: format!("vertex {id} listed twice"),
            });
        }
    }
    let k = k.ok_or(EmbedError::Parse {
        line: 0,
        msg: "empty embedding file".into(),
    })?;
    for (i, row) in rows.iter().enumerate() {
        if row.is_none() {
            return Err(EmbedError::Parse {
                line: 0,
                msg: format!("vertex {} missing", i + 1),
            });
        }
    }
    let matrix = Matrix::from_fn(num_vertices, k, |i, j| rows[i].as_ref().unwrap()[j]);
    Ok(Embedding::new(matrix))
}

pub fn write_external(embedding: &Embedding) -> String {
    let mut out = String::new();
    let m = embedding.matrix();
    for i in 0..m.rows() {
        let _ = write!(out, "{}", i + 1);
        for v in m.row(i) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Arc, Layer};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    #[test]
    fn pca_centers_projects_and_fixes_signs() {
        // Points on a line y = 2x: rank-1 data, second component vanishes.
        let pts = [(0.0, 0.0), (1.0, 2.0), (2.0, 4.0), (3.0, 6.0)];
        let m = Matrix::from_fn(4, 2, |i, j| if j == 0 { pts[i].0 } else { pts[i].1 });
        let emb = Embedding::new(m);
        let proj = project_2d(&emb);
        for i in 0..4 {
            assert!(proj[(i, 1)].abs() < 1e-10, "rank-1 second coordinate");
        }
        // Largest loading is on y (2 vs 1), fixed positive -> scores
        // increase along the line.
        assert!(proj[(3, 0)] > proj[(0, 0)]);
        // Centered: scores sum to ~0.
        let s: f64 = (0..4).map(|i| proj[(i, 0)]).sum();
        assert!(s.abs() < 1e-10);
    }

    #[test]
    fn pca_gram_route_matches_covariance_route() {
        // k > n forces the Gram route; truncating columns to k <= n with
        // identical leading structure lets the covariance route serve as
        // the oracle on the same data.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 6;
        let wide = Matrix::from_fn(n, 11, |_, _| rng.random_range(-1.0..1.0));
        let gram_scores = project_2d(&Embedding::new(wide.clone()));

        // Oracle: covariance eigenvalues of the wide data computed
        // directly (k×k), then projected.
        let mut centered = wide.clone();
        for j in 0..11 {
            let mean: f64 = (0..n).map(|i| wide[(i, j)]).sum::<f64>() / n as f64;
            for i in 0..n {
                centered[(i, j)] -= mean;
            }
        }
        let cov = centered
            .transpose()
            .matmul(&centered)
            .scale(1.0 / (n as f64 - 1.0));
        let (vals, vecs) = symmetric_eigen(&cov);
        for comp in 0..2 {
            let col = 11 - 1 - comp;
            let mut loading = vecs.column(col);
            if sign_flip(&loading) {
                loading.iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..n {
                let want: f64 = centered
                    .row(i)
                    .iter()
                    .zip(&loading)
                    .map(|(a, b)| a * b)
                    .sum();
                assert!(
                    (gram_scores[(i, comp)] - want).abs() < 1e-8,
                    "component {comp}, row {i}: {} vs {want}",
                    gram_scores[(i, comp)]
                );
            }
            // Explained variance agrees between the two routes.
            let var: f64 = (0..n).map(|i| gram_scores[(i, comp)].powi(2)).sum::<f64>()
                / (n as f64 - 1.0);
            assert!((var - vals[col]).abs() < 1e-8);
        }
    }

    #[test]
    fn distances_cover_arcs_exactly() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![],
                },
                Layer {
                    originals: vec![v(3)],
                    incrementals: vec![],
                },
            ],
            vec![Arc::new(v(1), v(3)), Arc::new(v(2), v(3))],
        )
        .unwrap();
        let pts = Matrix::from_fn(3, 2, |i, j| if j == 0 { i as f64 } else { 0.0 });
        let d = arc_distances(&graph, &pts);
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(v(1), v(3)), Some(2.0));
        assert_eq!(d.get(v(3), v(2)), Some(1.0), "symmetric lookup");
        assert_eq!(d.get(v(1), v(2)), None, "non-adjacent pair");
    }

    #[test]
    fn external_round_trip_and_errors() {
        let m = Matrix::from_fn(3, 2, |i, j| (i * 2 + j) as f64 * 0.25 - 0.4);
        let emb = Embedding::new(m);
        let text = write_external(&emb);
        let back = parse_external(&text, 3).unwrap();
        assert_eq!(back, emb);

        assert!(matches!(
            parse_external("1 0.5\n1 0.25\n", 2),
            Err(EmbedError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_external("1 0.5\n2 0.25 0.5\n", 2),
            Err(EmbedError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_external("1 0.5\n", 2),
            Err(EmbedError::Parse { .. })
        ));
        assert!(matches!(
            parse_external("5 0.5\n", 2),
            Err(EmbedError::Parse { line: 1, .. })
        ));
    }
}
