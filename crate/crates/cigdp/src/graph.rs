//! Layered graph with frozen original vertices and unplaced incremental ones.

use std::fmt;
use thiserror::Error;

/// Dense 1-based vertex label, matching the text format.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    /// 0-based index for array storage.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Directed arc from a vertex in layer `λ` to one in layer `λ+1`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Arc { tail, head }
    }
}

/// One layer: originals in their frozen order, then the incremental vertices.
#[derive(Clone, Debug)]
pub struct Layer {
    /// Original vertices, listed in initial-layout order (rank 1, 2, ...).
    pub originals: Vec<VertexId>,
    /// Incremental vertices awaiting placement.
    pub incrementals: Vec<VertexId>,
}

impl Layer {
    pub fn size(&self) -> usize {
        self.originals.len() + self.incrementals.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.originals.iter().chain(&self.incrementals).copied()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexIdDisplay),
    #[error("vertex ids must be exactly 1..={expected}, id {got} out of range")]
    IdOutOfRange { got: u32, expected: usize },
    #[error("vertex ids must be dense: {missing} of 1..={expected} missing")]
    MissingIds { missing: usize, expected: usize },
    #[error("arc {tail} -> {head} does not join consecutive layers ({tail_layer} -> {head_layer})")]
    ArcNotConsecutive {
        tail: VertexIdDisplay,
        head: VertexIdDisplay,
        tail_layer: usize,
        head_layer: usize,
    },
    #[error("graph needs at least one layer")]
    NoLayers,
}

/// Plain u32 wrapper so error values stay `Eq` and display as ids.
#[derive(Debug, PartialEq, Eq)]
pub struct VertexIdDisplay(pub u32);

impl fmt::Display for VertexIdDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<VertexId> for VertexIdDisplay {
    fn from(v: VertexId) -> Self {
        VertexIdDisplay(v.0)
    }
}

/// Layered graph over original and incremental vertices.
///
/// Vertex ids are dense (`1..=n`); layers are numbered `1..=Λ` externally
/// and indexed `0..Λ` internally. Arcs always point from layer `λ` to
/// `λ+1`. Multi-arcs are kept as given.
#[derive(Debug)]
pub struct IncrementalGraph {
    layers: Vec<Layer>,
    /// `arcs[p]` joins layer `p` and layer `p+1` (0-based pair index).
    arcs: Vec<Vec<Arc>>,
    vertex_layer: Vec<u32>,
    /// Frozen rank among originals (1-based); `None` for incrementals.
    original_rank: Vec<Option<u32>>,
    /// Heads of arcs leaving `v` (next layer), multi-arcs repeated.
    succ: Vec<Vec<VertexId>>,
    /// Tails of arcs entering `v` (previous layer).
    pred: Vec<Vec<VertexId>>,
}

impl IncrementalGraph {
    pub fn new(layers: Vec<Layer>, arcs: Vec<Arc>) -> Result<Self, GraphError> {
        if layers.is_empty() {
            return Err(GraphError::NoLayers);
        }
        let n: usize = layers.iter().map(Layer::size).sum();
        let mut vertex_layer = vec![u32::MAX; n];
        let mut original_rank = vec![None; n];
        let mut seen = vec![false; n];
        for (li, layer) in layers.iter().enumerate() {
            for (pos, &v) in layer.originals.iter().enumerate() {
                claim(v, n, li, &mut seen, &mut vertex_layer)?;
                original_rank[v.index()] = Some(pos as u32 + 1);
            }
            for &v in &layer.incrementals {
                claim(v, n, li, &mut seen, &mut vertex_layer)?;
            }
        }
        let missing = seen.iter().filter(|s| !**s).count();
        if missing > 0 {
            return Err(GraphError::MissingIds {
                missing,
                expected: n,
            });
        }

        let pairs = layers.len().saturating_sub(1);
        let mut per_pair: Vec<Vec<Arc>> = vec![Vec::new(); pairs];
        let mut succ: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        let mut pred: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for arc in arcs {
            for v in [arc.tail, arc.head] {
                if v.0 == 0 || v.0 as usize > n {
                    return Err(GraphError::IdOutOfRange {
                        got: v.0,
                        expected: n,
                    });
                }
            }
            let tl = vertex_layer[arc.tail.index()] as usize;
            let hl = vertex_layer[arc.head.index()] as usize;
            if hl != tl + 1 {
                return Err(GraphError::ArcNotConsecutive {
                    tail: arc.tail.into(),
                    head: arc.head.into(),
                    tail_layer: tl + 1,
                    head_layer: hl + 1,
                });
            }
            succ[arc.tail.index()].push(arc.head);
            pred[arc.head.index()].push(arc.tail);
            per_pair[tl].push(arc);
        }

        Ok(IncrementalGraph {
            layers,
            arcs: per_pair,
            vertex_layer,
            original_rank,
            succ,
            pred,
        })
    }

    /// Total vertex count over all layers.
    pub fn num_vertices(&self) -> usize {
        self.vertex_layer.len()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn layer(&self, layer_index: usize) -> &Layer {
        &self.layers[layer_index]
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// 0-based layer index of `v`.
    pub fn layer_of(&self, v: VertexId) -> usize {
        self.vertex_layer[v.index()] as usize
    }

    pub fn is_original(&self, v: VertexId) -> bool {
        self.original_rank[v.index()].is_some()
    }

    /// Frozen rank of an original vertex among the originals of its layer.
    pub fn original_rank(&self, v: VertexId) -> Option<u32> {
        self.original_rank[v.index()]
    }

    /// Arcs joining layer `pair` and `pair + 1` (0-based pair index).
    pub fn arcs_between(&self, pair: usize) -> &[Arc] {
        &self.arcs[pair]
    }

    pub fn all_arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().flatten().copied()
    }

    /// An arc is incremental when either endpoint is incremental.
    pub fn is_incremental_arc(&self, arc: Arc) -> bool {
        !self.is_original(arc.tail) || !self.is_original(arc.head)
    }

    /// Arc heads in the next layer (multi-arcs repeated).
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v.index()]
    }

    /// Arc tails in the previous layer.
    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[v.index()]
    }

    /// Total degree, counting both directions.
    pub fn degree(&self, v: VertexId) -> usize {
        self.succ[v.index()].len() + self.pred[v.index()].len()
    }

    /// Undirected neighbor view (successors then predecessors).
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.succ[v.index()]
            .iter()
            .chain(&self.pred[v.index()])
            .copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.num_vertices() as u32).map(VertexId)
    }

    pub fn incremental_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.layers.iter().flat_map(|l| l.incrementals.iter().copied())
    }
}

fn claim(
    v: VertexId,
    n: usize,
    layer: usize,
    seen: &mut [bool],
    vertex_layer: &mut [u32],
) -> Result<(), GraphError> {
    if v.0 == 0 || v.0 as usize > n {
        return Err(GraphError::IdOutOfRange {
            got: v.0,
            expected: n,
        });
    }
    if seen[v.index()] {
        return Err(GraphError::DuplicateVertex(v.into()));
    }
    seen[v.index()] = true;
    vertex_layer[v.index()] = layer as u32;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    fn two_layer() -> IncrementalGraph {
        IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1), v(2)],
                    incrementals: vec![v(3)],
                },
                Layer {
                    originals: vec![v(4)],
                    incrementals: vec![v(5)],
                },
            ],
            vec![Arc::new(v(1), v(4)), Arc::new(v(3), v(5)), Arc::new(v(2), v(4))],
        )
        .unwrap()
    }

    #[test]
    fn builds_and_answers_queries() {
        let g = two_layer();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_layers(), 2);
        assert_eq!(g.num_arcs(), 3);
        assert_eq!(g.layer_of(v(3)), 0);
        assert_eq!(g.layer_of(v(5)), 1);
        assert!(g.is_original(v(2)));
        assert!(!g.is_original(v(3)));
        assert_eq!(g.original_rank(v(2)), Some(2));
        assert_eq!(g.original_rank(v(3)), None);
        assert_eq!(g.degree(v(4)), 2);
        assert_eq!(g.successors(v(1)), &[v(4)]);
        assert_eq!(g.predecessors(v(5)), &[v(3)]);
        assert!(g.is_incremental_arc(Arc::new(v(3), v(5))));
        assert!(!g.is_incremental_arc(Arc::new(v(1), v(4))));
        let mut nb: Vec<_> = g.neighbors(v(4)).collect();
        nb.sort();
        assert_eq!(nb, vec![v(1), v(2)]);
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = IncrementalGraph::new(
            vec![Layer {
                originals: vec![v(1), v(1)],
                incrementals: vec![],
            }],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateVertex(VertexIdDisplay(1)));
    }

    #[test]
    fn rejects_non_dense_ids() {
        let err = IncrementalGraph::new(
            vec![Layer {
                originals: vec![v(1), v(3)],
                incrementals: vec![],
            }],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::IdOutOfRange { got: 3, .. }));
    }

    #[test]
    fn rejects_non_consecutive_arcs() {
        let err = IncrementalGraph::new(
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
            vec![Arc::new(v(1), v(3))],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::ArcNotConsecutive { .. }));
    }

    #[test]
    fn keeps_multi_arcs() {
        let g = IncrementalGraph::new(
            vec![
                Layer {
                    originals: vec![v(1)],
                    incrementals: vec![],
                },
                Layer {
                    originals: vec![v(2)],
                    incrementals: vec![],
                },
            ],
            vec![Arc::new(v(1), v(2)), Arc::new(v(1), v(2))],
        )
        .unwrap();
        assert_eq!(g.num_arcs(), 2);
        assert_eq!(g.degree(v(1)), 2);
    }
}
