//! Biased random walks plus skip-gram with negative sampling.
//!
//! Walks are second-order: stepping from `t` to `v`, the next vertex `x`
//! is drawn with weight `1/p` if `x = t` (backtrack), `1` if `x` is
//! adjacent to `t`, and `1/q` otherwise. `p = q = 1` degenerates to a
//! plain first-order walk. The walk corpus is generated once and the
//! skip-gram model is trained over it for `epochs` passes with a full
//! (non-shrinking) context window, negative samples drawn from the
//! unigram distribution raised to 3/4, and a learning rate that decays
//! linearly to 10⁻⁴ of its start value.
//!
//! Vertices that never appear in any walk pair — isolated vertices —
//! keep no information from their random init; their rows are zeroed.

use super::{EmbedError, Embedding};
use crate::graph::IncrementalGraph;
use crate::linalg::Matrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Node2VecConfig {
    pub dimensions: usize,
    pub walk_length: usize,
    pub walks_per_vertex: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub p: f64,
    pub q: f64,
    pub learning_rate: f64,
}

impl Default for Node2VecConfig {
    fn default() -> Self {
        Node2VecConfig {
            dimensions: 128,
            walk_length: 80,
            walks_per_vertex: 10,
            window: 5,
            negatives: 5,
            epochs: 1,
            p: 1.0,
            q: 1.0,
            learning_rate: 0.025,
        }
    }
}

impl Node2VecConfig {
    fn validate(&self) -> Result<(), EmbedError> {
        if self.dimensions == 0 {
            return Err(EmbedError::DimensionTooSmall { min: 1 });
        }
        if !(self.p > 0.0) {
            return Err(EmbedError::BadWalkParameter("p must be positive"));
        }
        if !(self.q > 0.0) {
            return Err(EmbedError::BadWalkParameter("q must be positive"));
        }
        if !(self.learning_rate > 0.0) {
            return Err(EmbedError::BadWalkParameter(
                "learning rate must be positive",
            ));
        }
        if self.walk_length == 0 || self.window == 0 || self.epochs == 0 {
            return Err(EmbedError::BadWalkParameter(
                "walk length, window and epochs must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Per-epoch mean loss (−log σ over positive and negative targets,
/// averaged over all processed pairs).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainStats {
    pub epoch_losses: Vec<f64>,
}

/// Sorted, deduplicated undirected neighbor lists (multi-arcs collapse:
/// walk biases only care about adjacency, not multiplicity).
fn neighbor_lists(graph: &IncrementalGraph) -> Vec<Vec<u32>> {
    let n = graph.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for arc in graph.all_arcs() {
        adj[arc.tail.index()].push(arc.head.0);
        adj[arc.head.index()].push(arc.tail.0);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn is_adjacent(adj: &[Vec<u32>], a: u32, b: u32) -> bool {
    adj[a as usize - 1].binary_search(&b).is_ok()
}

/// One biased walk of up to `walk_length` vertices (shorter only from an
/// isolated start). Vertices are 1-based ids.
fn biased_walk(
    adj: &[Vec<u32>],
    start: u32,
    cfg: &Node2VecConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<u32> {
    let mut walk = Vec::with_capacity(cfg.walk_length);
    walk.push(start);
    if adj[start as usize - 1].is_empty() {
        return walk;
    }
    while walk.len() < cfg.walk_length {
        let cur = *walk.last().unwrap();
        let candidates = &adj[cur as usize - 1];
        let next = if walk.len() == 1 {
            candidates[rng.random_range(0..candidates.len())]
        } else {
            let prev = walk[walk.len() - 2];
            let weight = |x: u32| -> f64 {
                if x == prev {
                    1.0 / cfg.p
                } else if is_adjacent(adj, prev, x) {
                    1.0
                } else {
                    1.0 / cfg.q
                }
            };
            let total: f64 = candidates.iter().map(|&x| weight(x)).sum();
            let mut draw = rng.random_range(0.0..total);
            let mut chosen = candidates[candidates.len() - 1];
            for &x in candidates {
                draw -= weight(x);
                if draw < 0.0 {
                    chosen = x;
                    break;
                }
            }
            chosen
        };
        walk.push(next);
    }
    walk
}

/// Full corpus: `walks_per_vertex` rounds, start order reshuffled each
/// round.
fn generate_walks(
    graph: &IncrementalGraph,
    cfg: &Node2VecConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<u32>> {
    let adj = neighbor_lists(graph);
    let mut starts: Vec<u32> = (1..=graph.num_vertices() as u32).collect();
    let mut corpus = Vec::with_capacity(graph.num_vertices() * cfg.walks_per_vertex);
    for _ in 0..cfg.walks_per_vertex {
        starts.shuffle(rng);
        for &s in &starts {
            corpus.push(biased_walk(&adj, s, cfg, rng));
        }
    }
    corpus
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// −ln σ(x), computed stably.
fn softplus_neg(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Cumulative sampling table over the corpus unigram distribution^(3/4).
fn negative_table(corpus: &[Vec<u32>], n: usize) -> (Vec<u32>, Vec<f64>) {
    let mut freq = vec![0u64; n];
    for walk in corpus {
        for &v in walk {
            freq[v as usize - 1] += 1;
        }
    }
    let mut ids = Vec::new();
    let mut weights = Vec::new();
    for (i, &f) in freq.iter().enumerate() {
        if f > 0 {
            ids.push(i as u32 + 1);
            weights.push((f as f64).powf(0.75));
        }
    }
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    let cumulative = weights
        .iter()
        .map(|w| {
            cum += w / total;
            cum
        })
        .collect();
    (ids, cumulative)
}

fn sample_negative(ids: &[u32], cumulative: &[f64], rng: &mut ChaCha8Rng) -> u32 {
    let u: f64 = rng.random();
    let idx = cumulative.partition_point(|&c| c <= u).min(ids.len() - 1);
    ids[idx]
}

pub fn node2vec_embedding(
    graph: &IncrementalGraph,
    cfg: &Node2VecConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Embedding, EmbedError> {
    node2vec_with_stats(graph, cfg, rng).map(|(emb, _)| emb)
}

pub fn node2vec_with_stats(
    graph: &IncrementalGraph,
    cfg: &Node2VecConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Embedding, TrainStats), EmbedError> {
    cfg.validate()?;
    let n = graph.num_vertices();
    let k = cfg.dimensions;
    let corpus = generate_walks(graph, cfg, rng);
    let (neg_ids, neg_cum) = negative_table(&corpus, n);

    let mut input = Matrix::from_fn(n, k, |_, _| (rng.random::<f64>() - 0.5) / k as f64);
    let mut context = Matrix::zeros(n, k);

    let pairs_per_epoch: usize = corpus
        .iter()
        .map(|w| {
            (0..w.len())
                .map(|i| {
                    let lo = i.saturating_sub(cfg.window);
                    let hi = (i + cfg.window).min(w.len() - 1);
                    hi - lo
                })
                .sum::<usize>()
        })
        .sum();
    let total_pairs = (pairs_per_epoch * cfg.epochs).max(1);
    let lr0 = cfg.learning_rate;
    let mut processed = 0usize;
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);

    for _ in 0..cfg.epochs {
        let mut loss_sum = 0.0;
        let mut loss_pairs = 0u64;
        for walk in &corpus {
            for i in 0..walk.len() {
                let center = walk[i] as usize - 1;
                let lo = i.saturating_sub(cfg.window);
                let hi = (i + cfg.window).min(walk.len() - 1);
                for j in lo..=hi {
                    if j == i {
                        continue;
                    }
                    let positive = walk[j];
                    let lr = (lr0 * (1.0 - processed as f64 / total_pairs as f64))
                        .max(lr0 * 1e-4);
                    processed += 1;
                    loss_pairs += 1;

                    let mut accum = vec![0.0; k];
                    let train = |target: usize,
                                     label: f64,
                                     input: &Matrix,
                                     context: &mut Matrix,
                                     accum: &mut [f64]| {
                        let score: f64 = (0..k)
                            .map(|d| input[(center, d)] * context[(target, d)])
                            .sum();
                        let g = lr * (label - sigmoid(score));
                        for d in 0..k {
                            accum[d] += g * context[(target, d)];
                            context[(target, d)] += g * input[(center, d)];
                        }
                        if label > 0.5 {
                            softplus_neg(score)
                        } else {
                            softplus_neg(-score)
                        }
                    };

                    loss_sum +=
                        train(positive as usize - 1, 1.0, &input, &mut context, &mut accum);
                    for _ in 0..cfg.negatives {
                        let neg = sample_negative(&neg_ids, &neg_cum, rng);
                        if neg == positive {
                            continue;
                        }
                        loss_sum +=
                            train(neg as usize - 1, 0.0, &input, &mut context, &mut accum);
                    }
                    for d in 0..k {
                        input[(center, d)] += accum[d];
                    }
                }
            }
        }
        epoch_losses.push(if loss_pairs == 0 {
            0.0
        } else {
            loss_sum / loss_pairs as f64
        });
    }

    // Isolated vertices never trained; drop their random init.
    for i in 0..n {
        if graph.degree(crate::graph::VertexId(i as u32 + 1)) == 0 {
            for d in 0..k {
                input[(i, d)] = 0.0;
            }
        }
    }
    Ok((Embedding::new(input), TrainStats { epoch_losses }))
}
