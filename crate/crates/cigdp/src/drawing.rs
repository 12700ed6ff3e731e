//! Layouts over an [`IncrementalGraph`] and the crossing machinery.
//!
//! A drawing assigns each placed vertex a 1-based rank inside its layer.
//! Original vertices start at their frozen ranks; placements must keep
//! their relative order and may not move any original more than `d`
//! positions from its initial rank. Incremental vertices carry no
//! constraints of their own — inserting one shifts every rank at or above
//! the insertion slot up by one, which is also why a feasible drawing can
//! only ever move originals upward.

use crate::fenwick::FenwickTree;
use crate::graph::{Arc, IncrementalGraph, VertexId};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlacementError {
    #[error("vertex {0} is already placed")]
    AlreadyPlaced(u32),
    #[error("vertex {0} is not placed")]
    NotPlaced(u32),
    #[error("slot {slot} outside valid range 1..={max}")]
    SlotOutOfRange { slot: u32, max: u32 },
    #[error("slot {slot} would push original vertex {vertex} beyond its dislocation bound")]
    PushesOriginalPastBound { slot: u32, vertex: u32 },
    #[error("slot {slot} violates the dislocation bound of vertex {vertex}")]
    OutsideOwnBound { slot: u32, vertex: u32 },
    #[error("slot {slot} breaks the frozen order around original vertex {vertex}")]
    BreaksFrozenOrder { slot: u32, vertex: u32 },
    #[error("original vertex {0} cannot be moved or removed")]
    OriginalImmovable(u32),
    #[error("vertices {0} and {1} are in different layers")]
    DifferentLayers(u32, u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrossingQueryError {
    #[error("arcs span different layer pairs")]
    DifferentLayerPairs,
    #[error("arc endpoint {0} is not placed")]
    UnplacedEndpoint(u32),
}

/// A single feasibility defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Stored rank disagrees with the vertex's position in the layer order,
    /// i.e. ranks in the layer are not a bijection onto `1..=k`.
    RankConflict {
        vertex: VertexId,
        stored: u32,
        expected: u32,
    },
    /// `first` precedes `second` in the frozen layout but not in this one.
    OrderInversion { first: VertexId, second: VertexId },
    /// Original vertex sits more than `bound` positions from its frozen rank.
    DislocationExceeded {
        vertex: VertexId,
        initial: u32,
        current: u32,
        bound: u32,
    },
}

#[derive(Debug, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Mutable layout: per-layer orderings plus a rank map.
#[derive(Clone)]
pub struct Drawing<'g> {
    graph: &'g IncrementalGraph,
    dislocation_bound: u32,
    /// Placed vertices per layer, index = rank − 1.
    order: Vec<Vec<VertexId>>,
    /// Current rank per vertex, `None` while unplaced.
    rank: Vec<Option<u32>>,
}

impl fmt::Debug for Drawing<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Drawing")
            .field("dislocation_bound", &self.dislocation_bound)
            .field("order", &self.order)
            .finish()
    }
}

impl<'g> Drawing<'g> {
    /// Frozen starting layout: originals at their initial ranks, all
    /// incremental vertices unplaced.
    pub fn original(graph: &'g IncrementalGraph, dislocation_bound: u32) -> Self {
        let mut rank = vec![None; graph.num_vertices()];
        let mut order = Vec::with_capacity(graph.num_layers());
        for layer in graph.layers() {
            for (pos, &v) in layer.originals.iter().enumerate() {
                rank[v.index()] = Some(pos as u32 + 1);
            }
            order.push(layer.originals.clone());
        }
        Drawing {
            graph,
            dislocation_bound,
            order,
            rank,
        }
    }

    /// Rebuild a drawing from externally supplied ranks (e.g. a decoded
    /// solution). The layer orders sort by `(rank, id)`; conflicting or
    /// gapped ranks survive into [`Drawing::check_feasibility`] as
    /// [`Violation::RankConflict`]s instead of being silently repaired.
    pub fn from_ranks(
        graph: &'g IncrementalGraph,
        dislocation_bound: u32,
        ranks: &[(VertexId, u32)],
    ) -> Self {
        let mut rank = vec![None; graph.num_vertices()];
        for &(v, r) in ranks {
            rank[v.index()] = Some(r);
        }
        let mut order: Vec<Vec<VertexId>> = vec![Vec::new(); graph.num_layers()];
        for (layer_index, layer) in graph.layers().iter().enumerate() {
            let mut placed: Vec<VertexId> = layer
                .vertices()
                .filter(|v| rank[v.index()].is_some())
                .collect();
            placed.sort_by_key(|v| (rank[v.index()].unwrap(), v.0));
            order[layer_index] = placed;
        }
        Drawing {
            graph,
            dislocation_bound,
            order,
            rank,
        }
    }

    pub fn graph(&self) -> &'g IncrementalGraph {
        self.graph
    }

    pub fn dislocation_bound(&self) -> u32 {
        self.dislocation_bound
    }

    /// Current rank of `v`, 1-based within its layer.
    #[inline]
    pub fn rank(&self, v: VertexId) -> Option<u32> {
        self.rank[v.index()]
    }

    pub fn is_placed(&self, v: VertexId) -> bool {
        self.rank[v.index()].is_some()
    }

    /// Placed vertices of a layer in rank order.
    pub fn layer_order(&self, layer_index: usize) -> &[VertexId] {
        &self.order[layer_index]
    }

    pub fn placed_count(&self, layer_index: usize) -> usize {
        self.order[layer_index].len()
    }

    pub fn is_complete(&self) -> bool {
        self.rank.iter().all(Option::is_some)
    }

    /// All placements as `(vertex, rank)` pairs, layers in order.
    pub fn placements(&self) -> Vec<(VertexId, u32)> {
        self.order
            .iter()
            .flatten()
            .map(|&v| (v, self.rank[v.index()].unwrap()))
            .collect()
    }

    /// Displacement of a placed original from its frozen rank.
    fn displacement(&self, v: VertexId) -> Option<i64> {
        match (self.rank(v), self.graph.original_rank(v)) {
            (Some(r), Some(r0)) => Some(r as i64 - r0 as i64),
            _ => None,
        }
    }

    /// Smallest slot at which an *incremental* vertex may be inserted into
    /// `layer_index`. Inserting at slot `p` shifts every rank `≥ p` up by
    /// one, so slots at or below an original already sitting at its upper
    /// dislocation bound are ruled out; feasible slots form the contiguous
    /// range returned by [`Drawing::feasible_slots`].
    pub fn min_feasible_slot(&self, layer_index: usize) -> u32 {
        let d = self.dislocation_bound as i64;
        let mut min_slot = 1;
        for (pos, &v) in self.order[layer_index].iter().enumerate() {
            if let Some(disp) = self.displacement(v) {
                if disp >= d {
                    min_slot = pos as u32 + 2;
                }
            }
        }
        min_slot
    }

    /// Feasible insertion slots for an incremental vertex, as an inclusive
    /// range ending at `placed_count + 1`.
    pub fn feasible_slots(&self, layer_index: usize) -> std::ops::RangeInclusive<u32> {
        self.min_feasible_slot(layer_index)..=(self.order[layer_index].len() as u32 + 1)
    }

    /// Feasible slot closest to `target`; feasible slots are contiguous, so
    /// the outward below-first scan reduces to clamping into the range.
    pub fn closest_feasible_slot(&self, layer_index: usize, target: f64) -> u32 {
        let lo = self.min_feasible_slot(layer_index);
        let hi = self.order[layer_index].len() as u32 + 1;
        let rounded = target.round().max(1.0).min(hi as f64) as u32;
        rounded.clamp(lo, hi)
    }

    fn validate_insert(&self, v: VertexId, slot: u32) -> Result<(), PlacementError> {
        if self.is_placed(v) {
            return Err(PlacementError::AlreadyPlaced(v.0));
        }
        let layer_index = self.graph.layer_of(v);
        let max = self.order[layer_index].len() as u32 + 1;
        if slot < 1 || slot > max {
            return Err(PlacementError::SlotOutOfRange { slot, max });
        }
        let d = self.dislocation_bound as i64;
        // Shifted originals (current rank >= slot) must have room to move up.
        for &w in &self.order[layer_index][(slot as usize - 1)..] {
            if let Some(disp) = self.displacement(w) {
                if disp + 1 > d {
                    return Err(PlacementError::PushesOriginalPastBound { slot, vertex: w.0 });
                }
            }
        }
        if let Some(r0) = self.graph.original_rank(v) {
            if (slot as i64 - r0 as i64).abs() > d {
                return Err(PlacementError::OutsideOwnBound { slot, vertex: v.0 });
            }
            for (pos, &w) in self.order[layer_index].iter().enumerate() {
                if let Some(w0) = self.graph.original_rank(w) {
                    let w_before = (pos as u32 + 1) < slot;
                    if w_before != (w0 < r0) {
                        return Err(PlacementError::BreaksFrozenOrder { slot, vertex: w.0 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Insert an unplaced vertex at `slot`, shifting ranks `≥ slot` up by
    /// one. Rejected without side effects if the slot is invalid or the
    /// resulting layout would be infeasible.
    pub fn insert(&mut self, v: VertexId, slot: u32) -> Result<(), PlacementError> {
        self.validate_insert(v, slot)?;
        let layer_index = self.graph.layer_of(v);
        let order = &mut self.order[layer_index];
        order.insert(slot as usize - 1, v);
        for (pos, &w) in order.iter().enumerate().skip(slot as usize - 1) {
            self.rank[w.index()] = Some(pos as u32 + 1);
        }
        Ok(())
    }

    /// Remove a placed incremental vertex, shifting higher ranks down.
    pub fn remove(&mut self, v: VertexId) -> Result<(), PlacementError> {
        let r = self.rank(v).ok_or(PlacementError::NotPlaced(v.0))?;
        if self.graph.is_original(v) {
            return Err(PlacementError::OriginalImmovable(v.0));
        }
        let layer_index = self.graph.layer_of(v);
        let order = &mut self.order[layer_index];
        order.remove(r as usize - 1);
        self.rank[v.index()] = None;
        for (pos, &w) in order.iter().enumerate().skip(r as usize - 1) {
            self.rank[w.index()] = Some(pos as u32 + 1);
        }
        Ok(())
    }

    /// Exchange the ranks of two placed incremental vertices of one layer.
    /// All other ranks are untouched, so such a swap is always feasible.
    pub fn swap_incrementals(&mut self, v: VertexId, w: VertexId) -> Result<(), PlacementError> {
        for x in [v, w] {
            if self.graph.is_original(x) {
                return Err(PlacementError::OriginalImmovable(x.0));
            }
        }
        let rv = self.rank(v).ok_or(PlacementError::NotPlaced(v.0))?;
        let rw = self.rank(w).ok_or(PlacementError::NotPlaced(w.0))?;
        let layer_index = self.graph.layer_of(v);
        if self.graph.layer_of(w) != layer_index {
            return Err(PlacementError::DifferentLayers(v.0, w.0));
        }
        let order = &mut self.order[layer_index];
        order.swap(rv as usize - 1, rw as usize - 1);
        self.rank[v.index()] = Some(rw);
        self.rank[w.index()] = Some(rv);
        Ok(())
    }

    /// Move a placed incremental vertex to `slot`, where `slot` addresses
    /// the layer with `v` already taken out (remove-then-insert
    /// semantics). The drawing is left untouched on error.
    pub fn relocate(&mut self, v: VertexId, slot: u32) -> Result<(), PlacementError> {
        let old = self.rank(v).ok_or(PlacementError::NotPlaced(v.0))?;
        self.remove(v)?;
        match self.insert(v, slot) {
            Ok(()) => Ok(()),
            Err(e) => {
                self.insert(v, old).expect("restoring a removed vertex");
                Err(e)
            }
        }
    }

    /// Whether two arcs of the same layer pair cross: their tails and heads
    /// appear in opposite relative orders. Arcs sharing an endpoint never
    /// cross.
    pub fn arcs_cross(&self, a: Arc, b: Arc) -> Result<bool, CrossingQueryError> {
        if self.graph.layer_of(a.tail) != self.graph.layer_of(b.tail) {
            return Err(CrossingQueryError::DifferentLayerPairs);
        }
        let r = |v: VertexId| {
            self.rank(v)
                .ok_or(CrossingQueryError::UnplacedEndpoint(v.0))
        };
        let (ta, ha, tb, hb) = (r(a.tail)?, r(a.head)?, r(b.tail)?, r(b.head)?);
        Ok((ta < tb && ha > hb) || (ta > tb && ha < hb))
    }

    /// Crossings between layers `pair` and `pair + 1`, counting only arcs
    /// with both endpoints placed. Arcs are sorted by (tail rank, head
    /// rank); a binary indexed tree then counts, for each arc, the earlier
    /// arcs whose head lies strictly above its own.
    pub fn count_crossings_between(&self, pair: usize) -> u64 {
        let mut pts: Vec<(u32, u32)> = self
            .graph
            .arcs_between(pair)
            .iter()
            .filter_map(|a| match (self.rank(a.tail), self.rank(a.head)) {
                (Some(t), Some(h)) => Some((t, h)),
                _ => None,
            })
            .collect();
        pts.sort_unstable();
        let max_head = self.order[pair + 1].len();
        let mut tree = FenwickTree::new(max_head);
        let mut crossings = 0;
        for &(_, h) in &pts {
            crossings += tree.range_sum(h as usize + 1, max_head);
            tree.add(h as usize, 1);
        }
        crossings
    }

    /// Total crossings over all layer pairs.
    pub fn count_crossings(&self) -> u64 {
        (0..self.graph.num_layers().saturating_sub(1))
            .map(|p| self.count_crossings_between(p))
            .sum()
    }

    /// Crossings that inserting unplaced `v` at `slot` would add: only
    /// pairs between an arc incident to `v` and an already placed arc can
    /// change, because the insertion preserves the relative order of
    /// everything else.
    pub fn crossing_delta_insert(&self, v: VertexId, slot: u32) -> Result<u64, PlacementError> {
        self.validate_insert(v, slot)?;
        Ok(self.insertion_cost_unchecked(v, slot))
    }

    /// Like [`Drawing::crossing_delta_insert`] but assumes the slot was
    /// already validated; used by hot construction loops.
    pub(crate) fn insertion_cost_unchecked(&self, v: VertexId, slot: u32) -> u64 {
        let layer_index = self.graph.layer_of(v);
        let mut added = 0u64;
        // Arcs v -> u against placed arcs of the pair (layer, layer + 1).
        for &u in self.graph.successors(v) {
            let Some(hu) = self.rank(u) else { continue };
            for arc in self.graph.arcs_between(layer_index) {
                let (Some(t), Some(h)) = (self.rank(arc.tail), self.rank(arc.head)) else {
                    continue;
                };
                // Tail below the new slot stays below v; tail at or above
                // it shifts past v.
                if (t < slot && h > hu) || (t >= slot && h < hu) {
                    added += 1;
                }
            }
        }
        // Arcs t -> v against placed arcs of the pair (layer - 1, layer).
        if layer_index > 0 {
            for &t in self.graph.predecessors(v) {
                let Some(tv) = self.rank(t) else { continue };
                for arc in self.graph.arcs_between(layer_index - 1) {
                    let (Some(ta), Some(ha)) = (self.rank(arc.tail), self.rank(arc.head)) else {
                        continue;
                    };
                    if (ta < tv && ha >= slot) || (ta > tv && ha < slot) {
                        added += 1;
                    }
                }
            }
        }
        added
    }

    /// Every feasibility defect of the current layout: rank/bijection
    /// conflicts, frozen-order inversions among placed originals, and
    /// dislocation-bound violations. Unplaced vertices are skipped.
    pub fn check_feasibility(&self) -> FeasibilityReport {
        let mut violations = Vec::new();
        for layer_order in &self.order {
            for (pos, &v) in layer_order.iter().enumerate() {
                let stored = self.rank[v.index()].unwrap();
                let expected = pos as u32 + 1;
                if stored != expected {
                    violations.push(Violation::RankConflict {
                        vertex: v,
                        stored,
                        expected,
                    });
                }
            }
            let placed_originals: Vec<VertexId> = layer_order
                .iter()
                .copied()
                .filter(|&v| self.graph.is_original(v))
                .collect();
            for i in 0..placed_originals.len() {
                for j in (i + 1)..placed_originals.len() {
                    let (a, b) = (placed_originals[i], placed_originals[j]);
                    if self.graph.original_rank(a) > self.graph.original_rank(b) {
                        violations.push(Violation::OrderInversion { first: b, second: a });
                    }
                }
            }
            for &v in layer_order {
                if let (Some(r0), Some(r)) = (self.graph.original_rank(v), self.rank(v)) {
                    if (r as i64 - r0 as i64).abs() > self.dislocation_bound as i64 {
                        violations.push(Violation::DislocationExceeded {
                            vertex: v,
                            initial: r0,
                            current: r,
                            bound: self.dislocation_bound,
                        });
                    }
                }
            }
        }
        FeasibilityReport { violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Layer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    /// Reference count: sum the pairwise predicate over all placed arc
    /// pairs of each layer pair.
    fn naive_crossings(d: &Drawing) -> u64 {
        let g = d.graph();
        let mut total = 0;
        for pair in 0..g.num_layers().saturating_sub(1) {
            let arcs: Vec<Arc> = g
                .arcs_between(pair)
                .iter()
                .copied()
                .filter(|a| d.is_placed(a.tail) && d.is_placed(a.head))
                .collect();
            for i in 0..arcs.len() {
                for j in (i + 1)..arcs.len() {
                    if d.arcs_cross(arcs[i], arcs[j]).unwrap() {
                        total += 1;
                    }
                }
            }
        }
        total
    }

    /// Two layers; ranks chosen to replay the worked predicate example:
    /// tails at ranks 5 and 6, heads at ranks 5 and 3.
    fn worked_example() -> (IncrementalGraph, Vec<(VertexId, u32)>) {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: (1..=6).map(v).collect(),
                    incrementals: vec![],
                },
                Layer {
                    originals: (7..=11).map(v).collect(),
                    incrementals: vec![],
                },
            ],
            vec![Arc::new(v(5), v(11)), Arc::new(v(6), v(9))],
        )
        .unwrap();
        let ranks = (1..=6)
            .map(|i| (v(i), i))
            .chain((7..=11).map(|i| (v(i), i - 6)))
            .collect();
        (graph, ranks)
    }

    #[test]
    fn predicate_on_worked_ranks() {
        let (graph, ranks) = worked_example();
        let d = Drawing::from_ranks(&graph, 1, &ranks);
        // tails 5 < 6, heads 5 > 3 -> the arcs cross
        let a = Arc::new(v(5), v(11));
        let b = Arc::new(v(6), v(9));
        assert!(d.arcs_cross(a, b).unwrap());
        assert!(d.arcs_cross(b, a).unwrap());
        assert_eq!(d.count_crossings(), 1);
    }

    #[test]
    fn shared_endpoints_never_cross() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![],
                },
                Layer {
                    originals: vec![v(3), v(4)],
                    incrementals: vec![],
                },
            ],
            vec![
                Arc::new(v(1), v(3)),
                Arc::new(v(1), v(4)),
                Arc::new(v(2), v(3)),
            ],
        )
        .unwrap();
        let d = Drawing::original(&graph, 0);
        assert!(!d
            .arcs_cross(Arc::new(v(1), v(3)), Arc::new(v(1), v(4)))
            .unwrap());
        assert!(!d
            .arcs_cross(Arc::new(v(1), v(3)), Arc::new(v(2), v(3)))
            .unwrap());
        // (1,4) and (2,3) do cross
        assert_eq!(d.count_crossings(), 1);
    }

    #[test]
    fn cross_layer_query_is_rejected() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1)],
                    incrementals: vec![],
                },
                Layer {
                    originals: vec![v(2)],
                    incrementals: vec![],
                },
                Layer {
                    originals: vec![v(3)],
                    incrementals: vec![],
                },
            ],
            vec![Arc::new(v(1), v(2)), Arc::new(v(2), v(3))],
        )
        .unwrap();
        let d = Drawing::original(&graph, 0);
        assert_eq!(
            d.arcs_cross(Arc::new(v(1), v(2)), Arc::new(v(2), v(3))),
            Err(CrossingQueryError::DifferentLayerPairs)
        );
    }

    fn random_complete_drawing(seed: u64) -> (IncrementalGraph, u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = rng.random_range(2..=4usize);
        let mut specs = Vec::new();
        let mut next = 1u32;
        for _ in 0..layers {
            let orig = rng.random_range(2..=6u32);
            let inc = rng.random_range(0..=3u32);
            let originals: Vec<VertexId> = (next..next + orig).map(v).collect();
            next += orig;
            let incrementals: Vec<VertexId> = (next..next + inc).map(v).collect();
            next += inc;
            specs.push(Layer {
                originals,
                incrementals,
            });
        }
        let mut arcs = Vec::new();
        for p in 0..layers - 1 {
            let lo: Vec<VertexId> = specs[p].vertices().collect();
            let hi: Vec<VertexId> = specs[p + 1].vertices().collect();
            for &t in &lo {
                for &h in &hi {
                    if rng.random_bool(0.4) {
                        arcs.push(Arc::new(t, h));
                    }
                }
            }
        }
        (IncrementalGraph::new(specs, arcs).unwrap(), seed as u32)
    }

    fn place_all(d: &mut Drawing, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
        let unplaced: Vec<VertexId> = d
            .graph()
            .incremental_vertices()
            .filter(|&x| !d.is_placed(x))
            .collect();
        for x in unplaced {
            let layer = d.graph().layer_of(x);
            let slots = d.feasible_slots(layer);
            let slot = rng.random_range(*slots.start()..=*slots.end());
            d.insert(x, slot).unwrap();
        }
    }

    #[test]
    fn tree_count_matches_pairwise_predicate() {
        for seed in 0..60 {
            let (graph, _) = random_complete_drawing(seed);
            let mut d = Drawing::original(&graph, 2);
            place_all(&mut d, seed);
            assert!(d.check_feasibility().is_feasible());
            assert_eq!(d.count_crossings(), naive_crossings(&d), "seed {seed}");
        }
    }

    #[test]
    fn insert_shifts_ranks_up() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2), v(3)],
                    incrementals: vec![v(4)],
                },
                Layer {
                    originals: vec![v(5)],
                    incrementals: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        let mut d = Drawing::original(&graph, 2);
        d.insert(v(4), 2).unwrap();
        assert_eq!(d.rank(v(1)), Some(1));
        assert_eq!(d.rank(v(4)), Some(2));
        assert_eq!(d.rank(v(2)), Some(3));
        assert_eq!(d.rank(v(3)), Some(4));
        assert_eq!(d.layer_order(0), &[v(1), v(4), v(2), v(3)]);
    }

    #[test]
    fn insert_respects_dislocation_bound_boundary() {
        // d = 1: one incremental may pass below the originals, a second
        // one may not push them further.
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![v(3), v(4)],
                },
                Layer {
                    originals: vec![v(5)],
                    incrementals: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        let mut d = Drawing::original(&graph, 1);
        d.insert(v(3), 1).unwrap(); // originals now at ranks 2, 3 = bound
        assert_eq!(
            d.insert(v(4), 1),
            Err(PlacementError::PushesOriginalPastBound { slot: 1, vertex: 1 })
        );
        assert_eq!(
            d.insert(v(4), 3),
            Err(PlacementError::PushesOriginalPastBound { slot: 3, vertex: 2 })
        );
        // Above the last original every slot works.
        assert_eq!(d.min_feasible_slot(0), 4);
        d.insert(v(4), 4).unwrap();
        assert!(d.check_feasibility().is_feasible());
    }

    #[test]
    fn delta_matches_recount_oracle() {
        for seed in 100..140 {
            let (graph, _) = random_complete_drawing(seed);
            let mut d = Drawing::original(&graph, 2);
            // Place all but one incremental vertex.
            let mut pending: Vec<VertexId> = graph.incremental_vertices().collect();
            if pending.is_empty() {
                continue;
            }
            let last = pending.pop().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for x in pending {
                let layer = d.graph().layer_of(x);
                let slots = d.feasible_slots(layer);
                let slot = rng.random_range(*slots.start()..=*slots.end());
                d.insert(x, slot).unwrap();
            }
            let before = d.count_crossings();
            let layer = graph.layer_of(last);
            for slot in d.feasible_slots(layer) {
                let delta = d.crossing_delta_insert(last, slot).unwrap();
                let mut trial = d.clone();
                trial.insert(last, slot).unwrap();
                assert_eq!(
                    trial.count_crossings(),
                    before + delta,
                    "seed {seed} slot {slot}"
                );
            }
        }
    }

    #[test]
    fn swap_and_remove_and_relocate() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![v(3), v(4)],
                },
                Layer {
                    originals: vec![v(5)],
                    incrementals: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        let mut d = Drawing::original(&graph, 2);
        d.insert(v(3), 1).unwrap();
        d.insert(v(4), 4).unwrap();
        assert_eq!(d.layer_order(0), &[v(3), v(1), v(2), v(4)]);
        d.swap_incrementals(v(3), v(4)).unwrap();
        assert_eq!(d.layer_order(0), &[v(4), v(1), v(2), v(3)]);
        assert_eq!(d.rank(v(3)), Some(4));
        assert_eq!(
            d.swap_incrementals(v(3), v(1)),
            Err(PlacementError::OriginalImmovable(1))
        );
        d.relocate(v(4), 3).unwrap();
        assert_eq!(d.layer_order(0), &[v(1), v(2), v(4), v(3)]);
        assert!(d.check_feasibility().is_feasible());
        d.remove(v(4)).unwrap();
        assert_eq!(d.layer_order(0), &[v(1), v(2), v(3)]);
        assert_eq!(d.rank(v(3)), Some(3));
        assert_eq!(d.remove(v(1)), Err(PlacementError::OriginalImmovable(1)));
    }

    #[test]
    fn relocate_restores_on_error() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![v(3), v(4)],
                },
                Layer {
                    originals: vec![v(5)],
                    incrementals: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        let mut d = Drawing::original(&graph, 1);
        d.insert(v(3), 1).unwrap();
        d.insert(v(4), 4).unwrap();
        let before = d.layer_order(0).to_vec();
        // Moving 4 below the originals would push 1 and 2 past the bound
        // (3 already used the single slack position).
        let err = d.relocate(v(4), 1).unwrap_err();
        assert!(matches!(err, PlacementError::PushesOriginalPastBound { .. }));
        assert_eq!(d.layer_order(0), &before[..]);
    }

    #[test]
    fn feasibility_report_flags_each_rule() {
        let graph = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![v(3)],
                },
                Layer {
                    originals: vec![v(4)],
                    incrementals: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        // Frozen order inverted and vertex 1 dislocated beyond d = 1.
        let d = Drawing::from_ranks(&graph, 1, &[(v(1), 3), (v(2), 1), (v(3), 2), (v(4), 1)]);
        let report = d.check_feasibility();
        assert!(report.violations.contains(&Violation::OrderInversion {
            first: v(1),
            second: v(2)
        }));
        assert!(report
            .violations
            .contains(&Violation::DislocationExceeded {
                vertex: v(1),
                initial: 1,
                current: 3,
                bound: 1
            }));
        // Duplicate ranks surface as rank conflicts.
        let dup = Drawing::from_ranks(&graph, 1, &[(v(1), 1), (v(2), 1), (v(4), 1)]);
        assert!(dup
            .check_feasibility()
            .violations
            .iter()
            .any(|x| matches!(x, Violation::RankConflict { .. })));
    }
}
