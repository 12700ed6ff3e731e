//! Best-improvement local search: swaps of incremental vertices within a
//! layer, then single-vertex relocations.
//!
//! Both passes sweep the incremental vertices layer by layer in
//! ascending id order, apply each vertex's best strictly improving move
//! immediately, and repeat until a full sweep applies nothing. Since
//! every applied move lowers the integer crossing count, termination is
//! guaranteed. Equal-cost moves are never taken, so no cycle-breaking
//! memory is needed.

use crate::drawing::Drawing;
use crate::graph::VertexId;

/// One applied move, with its (strictly negative) crossing delta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveOutcome {
    Swap {
        a: VertexId,
        b: VertexId,
        delta: i64,
    },
    Insert {
        vertex: VertexId,
        from_rank: u32,
        to_rank: u32,
        delta: i64,
    },
}

impl MoveOutcome {
    pub fn delta(&self) -> i64 {
        match *self {
            MoveOutcome::Swap { delta, .. } | MoveOutcome::Insert { delta, .. } => delta,
        }
    }
}

/// Incremental vertices in sweep order: layers ascending, ids ascending
/// within a layer.
fn sweep_order(d: &Drawing) -> Vec<VertexId> {
    let g = d.graph();
    let mut out = Vec::new();
    for layer in 0..g.num_layers() {
        let mut incs: Vec<VertexId> = g.layer(layer).incrementals.clone();
        incs.sort_unstable_by_key(|v| v.0);
        out.extend(incs);
    }
    out
}

/// Crossings of all placed arc pairs in `pair` where at least one arc
/// satisfies `member`; each unordered pair is counted once. Only these
/// pairs can change when the members' endpoints move, so the difference
/// of two such counts is the exact crossing delta of the move.
fn member_crossings(d: &Drawing, pair: usize, member: impl Fn(VertexId, VertexId) -> bool) -> u64 {
    let arcs = d.graph().arcs_between(pair);
    let placed: Vec<(bool, u32, u32)> = arcs
        .iter()
        .filter_map(|a| match (d.rank(a.tail), d.rank(a.head)) {
            (Some(t), Some(h)) => Some((member(a.tail, a.head), t, h)),
            _ => None,
        })
        .collect();
    let mut count = 0;
    for (i, &(mi, ti, hi)) in placed.iter().enumerate() {
        if !mi {
            continue;
        }
        for (j, &(mj, tj, hj)) in placed.iter().enumerate() {
            if mj && j <= i {
                continue; // member-member pairs counted once
            }
            if j == i {
                continue;
            }
            if (ti < tj && hi > hj) || (ti > tj && hi < hj) {
                count += 1;
            }
        }
    }
    count
}

/// Crossings involving arcs incident to `v` or `w` (same layer).
fn incident_crossings(d: &Drawing, v: VertexId, w: VertexId) -> u64 {
    let g = d.graph();
    let layer = g.layer_of(v);
    let member = |t: VertexId, h: VertexId| t == v || t == w || h == v || h == w;
    let mut total = 0;
    if layer > 0 {
        total += member_crossings(d, layer - 1, member);
    }
    if layer + 1 < g.num_layers() {
        total += member_crossings(d, layer, member);
    }
    total
}

/// One full sweep of best-improvement swaps; returns the applied moves.
fn swap_sweep(d: &mut Drawing) -> Vec<MoveOutcome> {
    let g = d.graph();
    let mut applied = Vec::new();
    for v in sweep_order(d) {
        if !d.is_placed(v) {
            continue;
        }
        let layer = g.layer_of(v);
        let mut partners: Vec<VertexId> = g.layer(layer)
            .incrementals
            .iter()
            .copied()
            .filter(|&w| w != v && d.is_placed(w))
            .collect();
        partners.sort_unstable_by_key(|w| w.0);
        let mut best: Option<(i64, VertexId)> = None;
        for w in partners {
            let before = incident_crossings(d, v, w) as i64;
            d.swap_incrementals(v, w).expect("same-layer incrementals");
            let after = incident_crossings(d, v, w) as i64;
            d.swap_incrementals(v, w).expect("undo swap");
            let delta = after - before;
            if delta < 0 && best.map_or(true, |(b, _)| delta < b) {
                best = Some((delta, w));
            }
        }
        if let Some((delta, w)) = best {
            d.swap_incrementals(v, w).expect("apply best swap");
            applied.push(MoveOutcome::Swap { a: v, b: w, delta });
        }
    }
    applied
}

/// Swap moves to fixpoint.
pub fn swap_pass(d: &mut Drawing) -> Vec<MoveOutcome> {
    let mut all = Vec::new();
    loop {
        let applied = swap_sweep(d);
        if applied.is_empty() {
            return all;
        }
        all.extend(applied);
    }
}

/// One full sweep of best-improvement relocations.
fn insert_sweep(d: &mut Drawing) -> Vec<MoveOutcome> {
    let g = d.graph();
    let mut applied = Vec::new();
    for v in sweep_order(d) {
        let Some(old_rank) = d.rank(v) else { continue };
        let layer = g.layer_of(v);
        d.remove(v).expect("placed incremental");
        // With v taken out, re-inserting at its old rank restores the
        // layout exactly, so that slot's cost is the baseline.
        let baseline = d.insertion_cost_unchecked(v, old_rank) as i64;
        let mut best: Option<(i64, u32)> = None;
        for slot in d.feasible_slots(layer) {
            if slot == old_rank {
                continue;
            }
            let delta = d.insertion_cost_unchecked(v, slot) as i64 - baseline;
            if delta < 0 && best.map_or(true, |(b, _)| delta < b) {
                best = Some((delta, slot));
            }
        }
        match best {
            Some((delta, slot)) => {
                d.insert(v, slot).expect("feasible relocation");
                applied.push(MoveOutcome::Insert {
                    vertex: v,
                    from_rank: old_rank,
                    to_rank: slot,
                    delta,
                });
            }
            None => d.insert(v, old_rank).expect("restore original slot"),
        }
    }
    applied
}

/// Relocation moves to fixpoint.
pub fn insert_pass(d: &mut Drawing) -> Vec<MoveOutcome> {
    let mut all = Vec::new();
    loop {
        let applied = insert_sweep(d);
        if applied.is_empty() {
            return all;
        }
        all.extend(applied);
    }
}

/// Full local search: exhaust swaps first, then relocations.
pub fn local_search(d: &mut Drawing) -> Vec<MoveOutcome> {
    let mut moves = swap_pass(d);
    moves.extend(insert_pass(d));
    moves
}
