//! Katz-similarity factorization on the directed view.
//!
//! Similarity `S = (I − βA)^{-1} βA = Σ_{i≥1} βⁱ Aⁱ`. Because arcs only
//! run from each layer to the next, `A` is nilpotent, the series is
//! finite, and `I − βA` is always invertible — the usual requirement
//! `β < 1/ρ(A)` is vacuous here (`ρ(A) = 0`), so any positive `β` is
//! accepted as given.
//!
//! With `sv = ⌊k/2⌋` the embedding concatenates source and target
//! factors `U√Σ | V√Σ` from the rank-`sv` truncated SVD of `S`. Odd `k`
//! (the default `2n − 1` is odd) appends one extra σ-weighted left
//! singular vector so the width still comes out to `k`.

use super::{EmbedError, Embedding};
use crate::graph::IncrementalGraph;
use crate::linalg::{lu_solve, thin_svd, Matrix};

/// Directed adjacency (multi-arcs add weight).
fn adjacency(graph: &IncrementalGraph) -> Matrix {
    let n = graph.num_vertices();
    let mut a = Matrix::zeros(n, n);
    for arc in graph.all_arcs() {
        a[(arc.tail.index(), arc.head.index())] += 1.0;
    }
    a
}

/// Dense Katz similarity matrix.
pub fn katz_matrix(graph: &IncrementalGraph, beta: f64) -> Result<Matrix, EmbedError> {
    if !(beta > 0.0) {
        return Err(EmbedError::BadBeta(beta));
    }
    let n = graph.num_vertices();
    let a = adjacency(graph);
    let beta_a = a.scale(beta);
    let lhs = Matrix::identity(n).sub(&beta_a);
    lu_solve(&lhs, &beta_a).ok_or(EmbedError::Singular)
}

pub fn hope_embedding(
    graph: &IncrementalGraph,
    k: usize,
    beta: f64,
) -> Result<Embedding, EmbedError> {
    let n = graph.num_vertices();
    if k < 2 {
        return Err(EmbedError::DimensionTooSmall { min: 2 });
    }
    if k > 2 * n {
        return Err(EmbedError::DimensionTooLarge { k, n, max: 2 * n });
    }
    let s = katz_matrix(graph, beta)?;
    let svd = thin_svd(&s);
    let sv = k / 2;
    let weighted = |idx: usize, side_u: bool, i: usize| -> f64 {
        if idx >= svd.sigma.len() {
            return 0.0;
        }
        let w = svd.sigma[idx].sqrt();
        let m = if side_u { &svd.u } else { &svd.v };
        m[(i, idx)] * w
    };
    let m = Matrix::from_fn(n, k, |i, j| {
        if j < sv {
            weighted(j, true, i)
        } else if j < 2 * sv {
            weighted(j - sv, false, i)
        } else {
            // Odd k: one extra left factor keeps the width at k.
            weighted(sv, true, i)
        }
    });
    Ok(Embedding::new(m))
}
