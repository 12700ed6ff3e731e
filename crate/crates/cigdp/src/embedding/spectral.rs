//! Normalized-Laplacian spectral embedding.
//!
//! Works on the undirected view of the graph. `L = I − D^{-1/2} W
//! D^{-1/2}` with isolated vertices contributing an all-zero row/column
//! (so each of them is its own connected component at eigenvalue 0).
//! The embedding takes eigenvectors of the `k` smallest eigenvalues,
//! skipping one trivial kernel vector per connected component as long as
//! enough non-trivial pairs remain. Kernel vectors are built analytically
//! (`√deg` restricted to the component, normalized), which keeps the
//! 0-eigenspace basis component-aligned instead of an arbitrary rotation.
//! Every column's sign is fixed so its first non-negligible entry is
//! positive.

use super::{EmbedError, Embedding};
use crate::graph::IncrementalGraph;
use crate::linalg::{symmetric_eigen, Matrix};

/// Undirected weighted adjacency (multi-arcs add weight).
fn undirected_adjacency(graph: &IncrementalGraph) -> Matrix {
    let n = graph.num_vertices();
    let mut w = Matrix::zeros(n, n);
    for arc in graph.all_arcs() {
        w[(arc.tail.index(), arc.head.index())] += 1.0;
        w[(arc.head.index(), arc.tail.index())] += 1.0;
    }
    w
}

pub fn normalized_laplacian(graph: &IncrementalGraph) -> Matrix {
    let n = graph.num_vertices();
    let w = undirected_adjacency(graph);
    let deg: Vec<f64> = (0..n).map(|i| w.row(i).iter().sum()).collect();
    let inv_sqrt: Vec<f64> = deg
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    Matrix::from_fn(n, n, |i, j| {
        let off = -w[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
        if i == j {
            if deg[i] > 0.0 {
                1.0 + off
            } else {
                0.0
            }
        } else {
            off
        }
    })
}

/// Connected components of the undirected view; returns a component id
/// per vertex and the component count.
fn components(graph: &IncrementalGraph) -> (Vec<usize>, usize) {
    let n = graph.num_vertices();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = count;
        count += 1;
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(u) = stack.pop() {
            for nb in graph.neighbors(crate::graph::VertexId(u as u32 + 1)) {
                let j = nb.index();
                if comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
    }
    (comp, count)
}

fn fix_sign(col: &mut [f64]) {
    for &v in col.iter() {
        if v.abs() > 1e-9 {
            if v < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            return;
        }
    }
}

/// Embedding plus the eigenvalue of each returned column.
pub fn spectral_embedding_with_values(
    graph: &IncrementalGraph,
    k: usize,
) -> Result<(Embedding, Vec<f64>), EmbedError> {
    let n = graph.num_vertices();
    if k == 0 {
        return Err(EmbedError::DimensionTooSmall { min: 1 });
    }
    if k > n.saturating_sub(1) {
        return Err(EmbedError::DimensionTooLarge {
            k,
            n,
            max: n.saturating_sub(1),
        });
    }
    let lap = normalized_laplacian(graph);
    let (vals, vecs) = symmetric_eigen(&lap);
    let (comp, comp_count) = components(graph);

    // Analytic kernel basis: one vector per component.
    let deg: Vec<f64> = (0..n)
        .map(|i| graph.degree(crate::graph::VertexId(i as u32 + 1)) as f64)
        .collect();
    let mut kernel: Vec<Vec<f64>> = Vec::with_capacity(comp_count);
    for c in 0..comp_count {
        let mut v = vec![0.0; n];
        let mut norm2 = 0.0;
        for i in 0..n {
            if comp[i] == c {
                let entry = if deg[i] > 0.0 { deg[i].sqrt() } else { 1.0 };
                v[i] = entry;
                norm2 += entry * entry;
            }
        }
        let norm = norm2.sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        kernel.push(v);
    }

    // Non-trivial spectrum: everything past the kernel multiplicity.
    let nontrivial = comp_count..n;
    let mut columns: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for idx in nontrivial {
        if columns.len() == k {
            break;
        }
        columns.push((vals[idx], vecs.column(idx)));
    }
    // Only when k exceeds the non-trivial count do kernel vectors enter.
    let mut kernel_iter = kernel.into_iter();
    while columns.len() < k {
        columns.push((0.0, kernel_iter.next().expect("k ≤ n − 1 < n")));
    }

    let mut eigenvalues = Vec::with_capacity(k);
    let mut m = Matrix::zeros(n, k);
    for (j, (val, mut col)) in columns.into_iter().enumerate() {
        fix_sign(&mut col);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
        eigenvalues.push(val);
    }
    Ok((Embedding::new(m), eigenvalues))
}

pub fn spectral_embedding(graph: &IncrementalGraph, k: usize) -> Result<Embedding, EmbedError> {
    spectral_embedding_with_values(graph, k).map(|(e, _)| e)
}
