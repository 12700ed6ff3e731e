//! Random instance generators.
//!
//! Two schemes share [`InstanceSpec`] but read its `density` differently:
//!
//! * [`generate_benchmark`] — sparse multi-layer instances. `density` is
//!   the target *average number of arcs per vertex*: each layer pair gets
//!   `⌈density · (|IVλ| + |IVλ+1|)⌉` arcs. Every incremental vertex first
//!   receives one arc (so none is isolated); random arcs then top the
//!   pair up to the target.
//! * [`generate_dense`] — few layers, heavy original backbone. `density`
//!   is the *fill fraction* of the complete bipartite arc set between
//!   consecutive original vertex sets; incremental vertices then draw a
//!   degree toward each neighboring layer uniformly from
//!   `incremental_degree` (as a fraction of that layer's size, minimum 1).
//!
//! Generation is a pure function of `(spec, seed)`: equal inputs yield
//! byte-identical instances.

use crate::graph::{Arc, IncrementalGraph, Layer, VertexId};
use crate::instance::Instance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    /// Number of layers (≥ 2).
    pub layers: usize,
    /// Inclusive range for the original-vertex count of each layer.
    pub originals_per_layer: (u32, u32),
    /// See the module docs — arcs per vertex (benchmark) or bipartite
    /// fill fraction (dense).
    pub density: f64,
    /// Incremental count per layer = round(fraction · originals).
    pub incremental_fraction: f64,
    /// Dislocation bound `d`; every layer must get at least `d`
    /// incremental vertices or the draw is rejected.
    pub dislocation: u32,
    /// Per-neighboring-layer degree range for dense incrementals, as
    /// fractions of the neighbor layer's size.
    pub incremental_degree: (f64, f64),
    pub seed: u64,
}

impl InstanceSpec {
    /// Sparse benchmark scheme defaults (layer sizes 5..=30).
    pub fn benchmark(layers: usize, density: f64, inc: f64, d: u32, seed: u64) -> Self {
        InstanceSpec {
            layers,
            originals_per_layer: (5, 30),
            density,
            incremental_fraction: inc,
            dislocation: d,
            incremental_degree: (0.01, 0.10),
            seed,
        }
    }

    /// Dense scheme defaults (layer sizes 60..=80, fill 0.5, Inc 0.6).
    pub fn dense(layers: usize, d: u32, seed: u64) -> Self {
        InstanceSpec {
            layers,
            originals_per_layer: (60, 80),
            density: 0.5,
            incremental_fraction: 0.6,
            dislocation: d,
            incremental_degree: (0.01, 0.10),
            seed,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("arc target {target} exceeds the {available} possible arcs between layers {pair} and {}", pair + 1)]
    DensityTooHigh {
        pair: usize,
        target: usize,
        available: usize,
    },
    #[error(
        "no layer-size draw gave every layer at least d = {d} incremental vertices \
         ({attempts} attempts)"
    )]
    ValidityUnsatisfiable { d: u32, attempts: usize },
}

const SIZE_ATTEMPTS: usize = 100;

fn validate(spec: &InstanceSpec) -> Result<(), GenerateError> {
    if spec.layers < 2 {
        return Err(GenerateError::Invalid("need at least 2 layers".into()));
    }
    let (lo, hi) = spec.originals_per_layer;
    if lo == 0 || lo > hi {
        return Err(GenerateError::Invalid(format!(
            "bad originals-per-layer range {lo}..={hi}"
        )));
    }
    if !(spec.density > 0.0) {
        return Err(GenerateError::Invalid("density must be positive".into()));
    }
    if !(spec.incremental_fraction > 0.0) {
        return Err(GenerateError::Invalid(
            "incremental fraction must be positive".into(),
        ));
    }
    let (dlo, dhi) = spec.incremental_degree;
    if !(dlo >= 0.0 && dlo <= dhi && dhi <= 1.0) {
        return Err(GenerateError::Invalid(format!(
            "bad incremental-degree range {dlo}..{dhi}"
        )));
    }
    Ok(())
}

/// Sizes per layer: originals drawn from the configured range, incremental
/// counts `round(Inc · originals)`. Draws where some layer receives fewer
/// than `d` incrementals are rejected and redrawn.
fn draw_sizes(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>, GenerateError> {
    let (lo, hi) = spec.originals_per_layer;
    for _ in 0..SIZE_ATTEMPTS {
        let sizes: Vec<(u32, u32)> = (0..spec.layers)
            .map(|_| {
                let orig = rng.random_range(lo..=hi);
                let inc = (spec.incremental_fraction * orig as f64).round() as u32;
                (orig, inc)
            })
            .collect();
        if sizes.iter().all(|&(_, inc)| inc >= spec.dislocation) {
            return Ok(sizes);
        }
    }
    Err(GenerateError::ValidityUnsatisfiable {
        d: spec.dislocation,
        attempts: SIZE_ATTEMPTS,
    })
}

/// Assign dense ids layer by layer, originals first.
fn build_layers(sizes: &[(u32, u32)]) -> Vec<Layer> {
    let mut next = 1u32;
    sizes
        .iter()
        .map(|&(orig, inc)| {
            let originals: Vec<VertexId> = (next..next + orig).map(VertexId).collect();
            next += orig;
            let incrementals: Vec<VertexId> = (next..next + inc).map(VertexId).collect();
            next += inc;
            Layer {
                originals,
                incrementals,
            }
        })
        .collect()
}

pub fn generate_benchmark(spec: &InstanceSpec) -> Result<Instance, GenerateError> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = draw_sizes(spec, &mut rng)?;
    let layers = build_layers(&sizes);

    let mut arcs: Vec<Arc> = Vec::new();
    let mut present: HashSet<(u32, u32)> = HashSet::new();
    let mut pair_count = vec![0usize; spec.layers - 1];

    // Connectivity first: one arc per incremental vertex, toward a
    // uniformly chosen neighboring layer.
    for (li, layer) in layers.iter().enumerate() {
        for &v in &layer.incrementals {
            let to_next = if li == 0 {
                true
            } else if li == spec.layers - 1 {
                false
            } else {
                rng.random_bool(0.5)
            };
            let other_layer = if to_next { li + 1 } else { li - 1 };
            let candidates: Vec<VertexId> = layers[other_layer].vertices().collect();
            let mut tries = 0;
            loop {
                tries += 1;
                let u = if tries <= 8 * candidates.len() {
                    candidates[rng.random_range(0..candidates.len())]
                } else {
                    // Everything sampled collided; fall back to the first
                    // free endpoint (or give up — v is then already
                    // fully connected and in particular not isolated).
                    match candidates.iter().find(|&&u| {
                        let key = if to_next { (v.0, u.0) } else { (u.0, v.0) };
                        !present.contains(&key)
                    }) {
                        Some(&u) => u,
                        None => break,
                    }
                };
                let arc = if to_next { Arc::new(v, u) } else { Arc::new(u, v) };
                if present.insert((arc.tail.0, arc.head.0)) {
                    arcs.push(arc);
                    pair_count[if to_next { li } else { li - 1 }] += 1;
                    break;
                }
            }
        }
    }

    // Top each layer pair up to the density target.
    for pair in 0..spec.layers - 1 {
        let lo_vs: Vec<VertexId> = layers[pair].vertices().collect();
        let hi_vs: Vec<VertexId> = layers[pair + 1].vertices().collect();
        let available = lo_vs.len() * hi_vs.len();
        let target = (spec.density * (lo_vs.len() + hi_vs.len()) as f64).ceil() as usize;
        if target > available {
            return Err(GenerateError::DensityTooHigh {
                pair: pair + 1,
                target,
                available,
            });
        }
        if target <= pair_count[pair] {
            continue;
        }
        let need = target - pair_count[pair];
        if target * 5 >= available * 4 {
            // Dense target: enumerate the free pairs and take a sample.
            let mut free: Vec<(VertexId, VertexId)> = Vec::new();
            for &t in &lo_vs {
                for &h in &hi_vs {
                    if !present.contains(&(t.0, h.0)) {
                        free.push((t, h));
                    }
                }
            }
            let (chosen, _) = free.partial_shuffle(&mut rng, need);
            for &(t, h) in chosen.iter() {
                present.insert((t.0, h.0));
                arcs.push(Arc::new(t, h));
            }
        } else {
            let mut added = 0;
            while added < need {
                let t = lo_vs[rng.random_range(0..lo_vs.len())];
                let h = hi_vs[rng.random_range(0..hi_vs.len())];
                if present.insert((t.0, h.0)) {
                    arcs.push(Arc::new(t, h));
                    added += 1;
                }
            }
        }
    }

    let graph = IncrementalGraph::new(layers, arcs).expect("generated graph is well formed");
    Ok(Instance {
        graph,
        dislocation: spec.dislocation,
    })
}

pub fn generate_dense(spec: &InstanceSpec) -> Result<Instance, GenerateError> {
    validate(spec)?;
    if spec.density > 1.0 {
        return Err(GenerateError::Invalid(
            "dense scheme density is a fill fraction and must be ≤ 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = draw_sizes(spec, &mut rng)?;
    let layers = build_layers(&sizes);

    let mut arcs: Vec<Arc> = Vec::new();
    let mut present: HashSet<(u32, u32)> = HashSet::new();

    // Original backbone: a `density` fraction of each complete bipartite
    // original×original arc set.
    for pair in 0..spec.layers - 1 {
        let mut all: Vec<(VertexId, VertexId)> = Vec::new();
        for &t in &layers[pair].originals {
            for &h in &layers[pair + 1].originals {
                all.push((t, h));
            }
        }
        let take = (spec.density * all.len() as f64).round() as usize;
        let (chosen, _) = all.partial_shuffle(&mut rng, take);
        for &(t, h) in chosen.iter() {
            present.insert((t.0, h.0));
            arcs.push(Arc::new(t, h));
        }
    }

    // Incremental degrees: per (vertex, neighboring layer) a degree drawn
    // from the configured fraction range of that layer's size. Arcs
    // between two incrementals count toward both quotas, and draws skip
    // incremental targets already at their own cap so the audited bounds
    // hold exactly.
    let n: usize = layers.iter().map(Layer::size).sum();
    // Degree toward the previous / next layer, per vertex.
    let mut deg_prev = vec![0u32; n];
    let mut deg_next = vec![0u32; n];
    let cap = |layer_size: usize| -> u32 {
        ((spec.incremental_degree.1 * layer_size as f64).floor() as u32).max(1)
    };
    let floor_deg = |layer_size: usize| -> u32 {
        ((spec.incremental_degree.0 * layer_size as f64).floor() as u32).max(1)
    };

    for (li, layer) in layers.iter().enumerate() {
        for &v in &layer.incrementals {
            for (other_layer, to_next) in
                [(li.wrapping_sub(1), false), (li + 1, true)]
            {
                if (to_next && other_layer >= spec.layers) || (!to_next && li == 0) {
                    continue;
                }
                let other = &layers[other_layer];
                let size = other.size();
                let lo_g = floor_deg(size);
                let hi_g = cap(size).max(lo_g);
                let goal = rng.random_range(lo_g..=hi_g);
                let (own_deg, toward_me) = if to_next {
                    (&mut deg_next, &deg_prev)
                } else {
                    (&mut deg_prev, &deg_next)
                };
                if own_deg[v.index()] >= goal {
                    continue;
                }
                let need = (goal - own_deg[v.index()]) as usize;
                // Eligible targets: not already adjacent, and incremental
                // targets must have headroom under their own cap.
                let my_layer_cap = cap(layer.size());
                let mut pool: Vec<VertexId> = other
                    .vertices()
                    .filter(|&u| {
                        let arc_key = if to_next { (v.0, u.0) } else { (u.0, v.0) };
                        if present.contains(&arc_key) {
                            return false;
                        }
                        layers[other_layer]
                            .originals
                            .binary_search(&u)
                            .is_ok()
                            || toward_me[u.index()] < my_layer_cap
                    })
                    .collect();
                let take = need.min(pool.len());
                let (chosen, _) = pool.partial_shuffle(&mut rng, take);
                for &u in chosen.iter() {
                    let arc = if to_next { Arc::new(v, u) } else { Arc::new(u, v) };
                    present.insert((arc.tail.0, arc.head.0));
                    arcs.push(arc);
                    if to_next {
                        deg_next[v.index()] += 1;
                        deg_prev[u.index()] += 1;
                    } else {
                        deg_prev[v.index()] += 1;
                        deg_next[u.index()] += 1;
                    }
                }
            }
        }
    }

    let graph = IncrementalGraph::new(layers, arcs).expect("generated graph is well formed");
    Ok(Instance {
        graph,
        dislocation: spec.dislocation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::write_instance;

    #[test]
    fn deterministic_per_seed() {
        let spec = InstanceSpec::benchmark(3, 0.175, 0.2, 1, 42);
        let a = write_instance(&generate_benchmark(&spec).unwrap());
        let b = write_instance(&generate_benchmark(&spec).unwrap());
        assert_eq!(a, b);
        let other = InstanceSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(a, write_instance(&generate_benchmark(&other).unwrap()));

        let dense = InstanceSpec::dense(2, 2, 7);
        assert_eq!(
            write_instance(&generate_dense(&dense).unwrap()),
            write_instance(&generate_dense(&dense).unwrap())
        );
    }

    #[test]
    fn incremental_count_rounds_from_fraction() {
        let mut spec = InstanceSpec::benchmark(2, 0.175, 0.2, 1, 5);
        spec.originals_per_layer = (5, 5);
        let inst = generate_benchmark(&spec).unwrap();
        for layer in inst.graph.layers() {
            assert_eq!(layer.originals.len(), 5);
            assert_eq!(layer.incrementals.len(), 1); // round(0.2 * 5)
        }
    }

    #[test]
    fn rejects_when_incrementals_cannot_reach_dislocation() {
        let mut spec = InstanceSpec::benchmark(2, 0.175, 0.2, 3, 5);
        spec.originals_per_layer = (5, 5); // round(0.2*5) = 1 < d = 3, always
        assert_eq!(
            generate_benchmark(&spec).unwrap_err(),
            GenerateError::ValidityUnsatisfiable {
                d: 3,
                attempts: SIZE_ATTEMPTS
            }
        );
    }

    #[test]
    fn rejects_density_above_complete_bipartite() {
        let mut spec = InstanceSpec::benchmark(2, 50.0, 0.2, 1, 5);
        spec.originals_per_layer = (5, 5);
        assert!(matches!(
            generate_benchmark(&spec).unwrap_err(),
            GenerateError::DensityTooHigh { .. }
        ));
    }

    #[test]
    fn benchmark_density_tracks_target_and_no_isolated_incrementals() {
        let mut ratios = Vec::new();
        for seed in 0..20 {
            let spec = InstanceSpec::benchmark(2, 0.175, 0.2, 1, seed);
            let inst = generate_benchmark(&spec).unwrap();
            let g = &inst.graph;
            ratios.push(g.num_arcs() as f64 / g.num_vertices() as f64);
            for v in g.incremental_vertices() {
                assert!(g.degree(v) >= 1, "seed {seed}: isolated incremental {v}");
            }
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!(
            (mean - 0.175).abs() <= 0.1 * 0.175,
            "mean arcs/vertex {mean} strays more than 10% from 0.175"
        );
    }

    #[test]
    fn dense_shape_and_degree_audit() {
        for seed in 0..10 {
            let spec = InstanceSpec::dense(2, 2, seed);
            let inst = generate_dense(&spec).unwrap();
            let g = &inst.graph;
            assert_eq!(g.num_layers(), 2);
            for layer in g.layers() {
                let orig = layer.originals.len() as u32;
                assert!((60..=80).contains(&orig), "seed {seed}: {orig} originals");
                assert_eq!(
                    layer.incrementals.len() as u32,
                    (0.6 * orig as f64).round() as u32
                );
            }
            // Original backbone fill fraction = 0.5 exactly (by count).
            let orig_arcs = g
                .all_arcs()
                .filter(|a| !g.is_incremental_arc(*a))
                .count();
            let complete = g.layer(0).originals.len() * g.layer(1).originals.len();
            assert_eq!(orig_arcs, (0.5 * complete as f64).round() as usize);
            // Every incremental vertex's side degree within [1, 10% of
            // the neighboring layer size].
            for v in g.incremental_vertices() {
                let li = g.layer_of(v);
                let toward_next = g.successors(v).len();
                let toward_prev = g.predecessors(v).len();
                for (deg, other) in [(toward_next, li + 1), (toward_prev, li.wrapping_sub(1))] {
                    if other >= g.num_layers() {
                        assert_eq!(deg, 0);
                        continue;
                    }
                    let size = g.layer(other).size();
                    let cap = ((0.10 * size as f64).floor() as usize).max(1);
                    assert!(
                        deg >= 1 && deg <= cap,
                        "seed {seed}: vertex {v} degree {deg} outside 1..={cap}"
                    );
                }
            }
        }
    }
}
