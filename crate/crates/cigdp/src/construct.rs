//! Constructive heuristics: two semi-greedy baselines and the
//! embedding-guided builder.
//!
//! All three start from the frozen original layout and insert the
//! incremental vertices one at a time, always into feasible slots, so
//! every result is complete and feasible by construction (appending at
//! the end of a layer shifts nobody and is always allowed).
//!
//! `phi` ∈ [0,1] controls greediness and is expected to be drawn fresh
//! by the caller for every construction (the GRASP driver does).

use crate::drawing::Drawing;
use crate::embedding::ArcDistances;
use crate::graph::VertexId;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Unplaced incremental vertices in ascending id order.
fn candidates(d: &Drawing) -> Vec<VertexId> {
    let mut cl: Vec<VertexId> = d
        .graph()
        .incremental_vertices()
        .filter(|&v| !d.is_placed(v))
        .collect();
    cl.sort_unstable_by_key(|v| v.0);
    cl
}

/// Midpoint of the occupied ranks of a layer (slot 1 when empty).
fn layer_midpoint(d: &Drawing, layer: usize) -> f64 {
    (d.placed_count(layer) as f64 + 1.0) / 2.0
}

/// Mean current rank of the placed neighbors, `None` when there are
/// none. Multi-arcs weigh a neighbor once per arc.
fn placed_neighbor_mean(d: &Drawing, v: VertexId) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for w in d.graph().neighbors(v) {
        if let Some(r) = d.rank(w) {
            sum += r as f64;
            count += 1;
        }
    }
    (count > 0).then(|| sum / count as f64)
}

/// Degree rule: keep vertices whose degree reaches `phi` times the
/// highest remaining degree. Never empty — the max-degree vertex always
/// qualifies.
fn rcl_by_degree(cl: &[VertexId], deg: impl Fn(VertexId) -> usize, phi: f64) -> Vec<VertexId> {
    let max = cl.iter().map(|&v| deg(v)).max().unwrap_or(0);
    cl.iter()
        .copied()
        .filter(|&v| deg(v) as f64 >= phi * max as f64)
        .collect()
}

/// Threshold rule ξ = min + φ(max − min) over the *finite* scores; keep
/// scores ≤ ξ. Vertices with infinite score are excluded while any
/// finite score exists; if every score is infinite the whole list
/// qualifies. Never empty — an argmin vertex always qualifies.
fn rcl_by_threshold(cl: &[VertexId], score: impl Fn(VertexId) -> f64, phi: f64) -> Vec<VertexId> {
    let finite: Vec<f64> = cl.iter().map(|&v| score(v)).filter(|s| s.is_finite()).collect();
    if finite.is_empty() {
        return cl.to_vec();
    }
    let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let xi = min + phi * (max - min);
    cl.iter().copied().filter(|&v| score(v) <= xi).collect()
}

fn pick<'a, T: Copy>(items: &'a [T], rng: &mut ChaCha8Rng) -> T {
    items[rng.random_range(0..items.len())]
}

/// Barycenter semi-greedy: candidates enter the restricted list by
/// degree (≥ φ·max); the chosen vertex goes to the feasible slot nearest
/// the mean rank of its placed neighbors. The very first vertex, when it
/// has no placed neighbors, lands uniformly on a feasible slot; later
/// neighborless vertices target the layer midpoint.
pub fn construct_c2<'g>(base: &Drawing<'g>, phi: f64, rng: &mut ChaCha8Rng) -> Drawing<'g> {
    let mut d = base.clone();
    let graph = d.graph();
    let mut cl = candidates(&d);
    let mut first = true;
    while !cl.is_empty() {
        let chosen = if first {
            // Initial step: the highest-degree vertex itself (lowest id
            // on ties).
            *cl.iter().max_by_key(|&&v| (graph.degree(v), std::cmp::Reverse(v.0))).unwrap()
        } else {
            let rcl = rcl_by_degree(&cl, |v| graph.degree(v), phi);
            pick(&rcl, rng)
        };
        cl.retain(|&v| v != chosen);
        let layer = graph.layer_of(chosen);
        let slot = match placed_neighbor_mean(&d, chosen) {
            Some(mean) => d.closest_feasible_slot(layer, mean),
            None if first => {
                let range = d.feasible_slots(layer);
                rng.random_range(*range.start()..=*range.end())
            }
            None => d.closest_feasible_slot(layer, layer_midpoint(&d, layer)),
        };
        d.insert(chosen, slot).expect("constructed slot is feasible");
        first = false;
    }
    d
}

/// Cheapest insertion cost of `v` over its feasible slots and the lowest
/// slot attaining it.
fn insertion_score(d: &Drawing, v: VertexId) -> (u64, u32) {
    let layer = d.graph().layer_of(v);
    let mut best: Option<(u64, u32)> = None;
    for slot in d.feasible_slots(layer) {
        let cost = d.insertion_cost_unchecked(v, slot);
        if best.map_or(true, |(c, _)| cost < c) {
            best = Some((cost, slot));
        }
    }
    best.expect("at least one feasible slot")
}

/// Crossing-cost semi-greedy: each candidate is scored by the fewest
/// crossings its insertion can add; the restricted list keeps scores
/// within ξ = min + φ(max − min); the chosen vertex is inserted at its
/// own cheapest slot.
///
/// Scores are cached: inserting into layer λ can only change the score
/// of candidates in layers λ−1..λ+1 (their arc endpoints and slot space
/// are untouched elsewhere), so only those are recomputed.
pub fn construct_c3<'g>(base: &Drawing<'g>, phi: f64, rng: &mut ChaCha8Rng) -> Drawing<'g> {
    let mut d = base.clone();
    let graph = d.graph();
    let mut cl = candidates(&d);
    let mut score: Vec<Option<(u64, u32)>> = vec![None; graph.num_vertices()];
    for &v in &cl {
        score[v.index()] = Some(insertion_score(&d, v));
    }
    while !cl.is_empty() {
        let rho = |v: VertexId| score[v.index()].unwrap().0 as f64;
        let rcl = rcl_by_threshold(&cl, rho, phi);
        let chosen = pick(&rcl, rng);
        cl.retain(|&v| v != chosen);
        let (_, slot) = score[chosen.index()].unwrap();
        let layer = graph.layer_of(chosen);
        d.insert(chosen, slot).expect("scored slot is feasible");
        for &v in &cl {
            let l = graph.layer_of(v);
            if l + 1 >= layer && l <= layer + 1 {
                score[v.index()] = Some(insertion_score(&d, v));
            }
        }
    }
    d
}

/// Minimum embedding distance from `v` to any *placed* neighbor;
/// infinite when no neighbor is placed.
fn guide_score(d: &Drawing, distances: &ArcDistances, v: VertexId) -> f64 {
    let mut best = f64::INFINITY;
    for w in d.graph().neighbors(v) {
        if d.is_placed(w) {
            let dist = distances
                .get(v, w)
                .expect("distances cover every arc of the graph");
            best = best.min(dist);
        }
    }
    best
}

/// After placing `u`, only its own neighbors can gain a newly placed
/// neighbor, so only their scores need refreshing.
fn update_guide_scores(
    d: &Drawing,
    distances: &ArcDistances,
    u: VertexId,
    score: &mut [f64],
) {
    for w in d.graph().neighbors(u) {
        if !d.is_placed(w) {
            let dist = distances
                .get(w, u)
                .expect("distances cover every arc of the graph");
            let s = &mut score[w.index()];
            *s = s.min(dist);
        }
    }
}

/// Candidate slots for `v`: per neighboring layer with a placed
/// neighbor, the feasible slot nearest either the closest or the
/// farthest such neighbor (coin flip), plus the slot nearest the mean of
/// those; deduplicated.
fn position_pool(
    d: &Drawing,
    distances: &ArcDistances,
    v: VertexId,
    rng: &mut ChaCha8Rng,
) -> Vec<u32> {
    let graph = d.graph();
    let layer = graph.layer_of(v);
    let mut pool: Vec<u32> = Vec::new();
    for side in [layer.checked_sub(1), Some(layer + 1)] {
        let Some(side) = side else { continue };
        if side >= graph.num_layers() {
            continue;
        }
        // Placed neighbors living on this side, as (distance, rank),
        // in ascending (distance, id) order.
        let mut placed: Vec<(f64, u32, u32)> = graph
            .neighbors(v)
            .filter(|&w| graph.layer_of(w) == side)
            .filter_map(|w| {
                d.rank(w).map(|r| {
                    (
                        distances.get(v, w).expect("distances cover every arc"),
                        w.0,
                        r,
                    )
                })
            })
            .collect();
        if placed.is_empty() {
            continue;
        }
        placed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (_, _, nearest_rank) = placed[0];
        let (_, _, farthest_rank) = placed[placed.len() - 1];
        let target = if rng.random_range(0..2) == 0 {
            nearest_rank
        } else {
            farthest_rank
        };
        pool.push(d.closest_feasible_slot(layer, target as f64));
    }
    if !pool.is_empty() {
        let mean = pool.iter().map(|&s| s as f64).sum::<f64>() / pool.len() as f64;
        pool.push(d.closest_feasible_slot(layer, mean));
    }
    pool.sort_unstable();
    pool.dedup();
    pool
}

/// Embedding-guided construction: candidates are scored by their
/// minimum embedding distance to a placed neighbor; the restricted list
/// keeps scores within ξ = min + φ(max − min); the chosen vertex picks
/// uniformly from its candidate-slot pool. Vertices with no placed
/// neighbor only enter once every score is infinite, and then target the
/// layer midpoint.
pub fn construct_gl<'g>(
    base: &Drawing<'g>,
    distances: &ArcDistances,
    phi: f64,
    rng: &mut ChaCha8Rng,
) -> Drawing<'g> {
    let mut d = base.clone();
    let graph = d.graph();
    let mut cl = candidates(&d);
    let mut score: Vec<f64> = vec![f64::INFINITY; graph.num_vertices()];
    for &v in &cl {
        score[v.index()] = guide_score(&d, distances, v);
    }
    while !cl.is_empty() {
        let rcl = rcl_by_threshold(&cl, |v| score[v.index()], phi);
        let chosen = pick(&rcl, rng);
        cl.retain(|&v| v != chosen);
        let layer = graph.layer_of(chosen);
        let slot = if score[chosen.index()].is_finite() {
            let pool = position_pool(&d, distances, chosen, rng);
            pick(&pool, rng)
        } else {
            d.closest_feasible_slot(layer, layer_midpoint(&d, layer))
        };
        d.insert(chosen, slot).expect("pooled slot is feasible");
        update_guide_scores(&d, distances, chosen, &mut score);
    }
    d
}
