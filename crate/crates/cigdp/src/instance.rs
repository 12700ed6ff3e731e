//! Text formats: instances and solution records.
//!
//! Instance files are line oriented, UTF-8 with LF endings:
//!
//! ```text
//! layers 2 1
//! layer 1: 1 2 3 | 4 5
//! layer 2: 6 7 |
//! arc 1 6
//! arc 4 7
//! ```
//!
//! `layers Λ d` gives the layer count and the dislocation bound. Each
//! `layer` line lists original vertex ids in their frozen order, then a
//! `|`, then the incremental ids. Arcs point from layer `λ` to `λ+1`.
//! The writer is canonical — layers ascending, incrementals and arcs
//! sorted — so equal instances serialize to identical bytes.
//!
//! Solution files carry one `solution <instance> <heuristic> <seed>
//! <crossings>` header, per-layer `layer λ: id@rank ...` lines in rank
//! order, and `trace <value> <seconds>` lines with strictly decreasing
//! values and non-decreasing times.

use crate::drawing::Drawing;
use crate::graph::{Arc, GraphError, IncrementalGraph, Layer, VertexId};
use std::fmt::Write as _;
use thiserror::Error;

/// A problem instance: the graph plus the dislocation bound `d`.
#[derive(Debug)]
pub struct Instance {
    pub graph: IncrementalGraph,
    pub dislocation: u32,
}

impl Instance {
    /// Frozen starting layout (originals only).
    pub fn original_drawing(&self) -> Drawing<'_> {
        Drawing::original(&self.graph, self.dislocation)
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("expected header `layers <count> <d>`")]
    BadHeader,
    #[error("expected `layer {expected}: ... | ...`")]
    BadLayerLine { expected: usize },
    #[error("layer line must contain a `|` separating originals from incrementals")]
    MissingSeparator,
    #[error("expected `arc <tail> <head>`")]
    BadArc,
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("unexpected directive `{0}`")]
    UnknownDirective(String),
    #[error("file ends before all {0} layers are listed")]
    MissingLayers(usize),
    #[error("{0}")]
    Graph(GraphError),
    #[error("expected `solution <instance> <heuristic> <seed> <crossings>`")]
    BadSolutionHeader,
    #[error("expected `<id>@<rank>` placement")]
    BadPlacement,
    #[error("placements must be listed in rank order 1..k")]
    PlacementOrder,
    #[error("expected `trace <value> <seconds>`")]
    BadTrace,
    #[error("trace values must strictly decrease")]
    TraceNotDecreasing,
    #[error("trace times must not decrease")]
    TraceTimeRegression,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| err(line, ParseErrorKind::BadNumber(tok.to_string())))
}

/// Parse the instance text format. Blank lines are ignored; everything
/// else is strict and errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(err(0, ParseErrorKind::BadHeader))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "layers" {
        return Err(err(hline, ParseErrorKind::BadHeader));
    }
    let layer_count: usize = parse_num(toks[1], hline)?;
    let dislocation: u32 = parse_num(toks[2], hline)?;
    if layer_count == 0 {
        return Err(err(hline, ParseErrorKind::BadHeader));
    }

    let mut layers = Vec::with_capacity(layer_count);
    let mut last_line = hline;
    for expected in 1..=layer_count {
        let (lno, line) = lines
            .next()
            .ok_or(err(last_line, ParseErrorKind::MissingLayers(layer_count)))?;
        last_line = lno;
        let bad = || err(lno, ParseErrorKind::BadLayerLine { expected });
        let rest = line
            .strip_prefix("layer")
            .ok_or_else(bad)?
            .trim_start();
        let (idx_tok, rest) = rest.split_once(':').ok_or_else(bad)?;
        let idx: usize = parse_num(idx_tok.trim(), lno)?;
        if idx != expected {
            return Err(bad());
        }
        let (orig_part, inc_part) = rest
            .split_once('|')
            .ok_or(err(lno, ParseErrorKind::MissingSeparator))?;
        let parse_ids = |part: &str| -> Result<Vec<VertexId>, ParseError> {
            part.split_whitespace()
                .map(|t| parse_num::<u32>(t, lno).map(VertexId))
                .collect()
        };
        layers.push(Layer {
            originals: parse_ids(orig_part)?,
            incrementals: parse_ids(inc_part)?,
        });
    }

    let mut arcs = Vec::new();
    let mut graph_line = last_line;
    for (lno, line) in lines {
        graph_line = lno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] != "arc" {
            return Err(err(lno, ParseErrorKind::UnknownDirective(toks[0].into())));
        }
        if toks.len() != 3 {
            return Err(err(lno, ParseErrorKind::BadArc));
        }
        let tail: u32 = parse_num(toks[1], lno)?;
        let head: u32 = parse_num(toks[2], lno)?;
        arcs.push(Arc::new(VertexId(tail), VertexId(head)));
    }

    let graph = IncrementalGraph::new(layers, arcs)
        .map_err(|e| err(graph_line, ParseErrorKind::Graph(e)))?;
    Ok(Instance {
        graph,
        dislocation,
    })
}

/// Canonical serialization: byte-reproducible for equal instances.
pub fn write_instance(instance: &Instance) -> String {
    let g = &instance.graph;
    let mut out = String::new();
    let _ = writeln!(out, "layers {} {}", g.num_layers(), instance.dislocation);
    for (i, layer) in g.layers().iter().enumerate() {
        let _ = write!(out, "layer {}:", i + 1);
        for v in &layer.originals {
            let _ = write!(out, " {v}");
        }
        let _ = write!(out, " |");
        let mut inc = layer.incrementals.clone();
        inc.sort();
        for v in inc {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let mut arcs: Vec<Arc> = g.all_arcs().collect();
    arcs.sort_by_key(|a| (a.tail, a.head));
    for a in arcs {
        let _ = writeln!(out, "arc {} {}", a.tail, a.head);
    }
    out
}

/// One incumbent discovered during a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub value: u64,
    pub seconds: f64,
}

/// A finished run: final placements plus the incumbent trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub instance: String,
    pub heuristic: String,
    pub seed: u64,
    pub crossings: u64,
    /// Per layer, `(vertex, rank)` in rank order.
    pub layers: Vec<Vec<(VertexId, u32)>>,
    pub trace: Vec<TracePoint>,
}

impl SolutionRecord {
    /// Capture the state of a complete drawing.
    pub fn from_drawing(
        instance: &str,
        heuristic: &str,
        seed: u64,
        drawing: &Drawing,
        trace: Vec<TracePoint>,
    ) -> Self {
        let layers = (0..drawing.graph().num_layers())
            .map(|l| {
                drawing
                    .layer_order(l)
                    .iter()
                    .enumerate()
                    .map(|(pos, &v)| (v, pos as u32 + 1))
                    .collect()
            })
            .collect();
        SolutionRecord {
            instance: instance.to_string(),
            heuristic: heuristic.to_string(),
            seed,
            crossings: drawing.count_crossings(),
            layers,
            trace,
        }
    }

    /// Bind the record back to an instance as a drawing; feasibility and
    /// the stored crossing count are the caller's to verify.
    pub fn to_drawing<'g>(&self, instance: &'g Instance) -> Drawing<'g> {
        let ranks: Vec<(VertexId, u32)> = self.layers.iter().flatten().copied().collect();
        Drawing::from_ranks(&instance.graph, instance.dislocation, &ranks)
    }
}

pub fn write_solution(record: &SolutionRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "solution {} {} {} {}",
        record.instance, record.heuristic, record.seed, record.crossings
    );
    for (i, layer) in record.layers.iter().enumerate() {
        let _ = write!(out, "layer {}:", i + 1);
        for (v, r) in layer {
            let _ = write!(out, " {v}@{r}");
        }
        out.push('\n');
    }
    for p in &record.trace {
        let _ = writeln!(out, "trace {} {:.6}", p.value, p.seconds);
    }
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionRecord, ParseError> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut record: Option<SolutionRecord> = None;
    for (lno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (toks[0], &mut record) {
            ("solution", None) => {
                if toks.len() != 5 {
                    return Err(err(lno, ParseErrorKind::BadSolutionHeader));
                }
                record = Some(SolutionRecord {
                    instance: toks[1].to_string(),
                    heuristic: toks[2].to_string(),
                    seed: parse_num(toks[3], lno)?,
                    crossings: parse_num(toks[4], lno)?,
                    layers: Vec::new(),
                    trace: Vec::new(),
                });
            }
            ("layer", Some(rec)) => {
                let body = line
                    .split_once(':')
                    .ok_or(err(lno, ParseErrorKind::BadPlacement))?
                    .1;
                let mut placements = Vec::new();
                for (i, tok) in body.split_whitespace().enumerate() {
                    let (id, rank) = tok
                        .split_once('@')
                        .ok_or(err(lno, ParseErrorKind::BadPlacement))?;
                    let id: u32 = parse_num(id, lno)?;
                    let rank: u32 = parse_num(rank, lno)?;
                    if rank as usize != i + 1 {
                        return Err(err(lno, ParseErrorKind::PlacementOrder));
                    }
                    placements.push((VertexId(id), rank));
                }
                rec.layers.push(placements);
            }
            ("trace", Some(rec)) => {
                if toks.len() != 3 {
                    return Err(err(lno, ParseErrorKind::BadTrace));
                }
                let value: u64 = parse_num(toks[1], lno)?;
                let seconds: f64 = parse_num(toks[2], lno)?;
                if let Some(last) = rec.trace.last() {
                    if value >= last.value {
                        return Err(err(lno, ParseErrorKind::TraceNotDecreasing));
                    }
                    if seconds < last.seconds {
                        return Err(err(lno, ParseErrorKind::TraceTimeRegression));
                    }
                }
                rec.trace.push(TracePoint { value, seconds });
            }
            (other, _) => return Err(err(lno, ParseErrorKind::UnknownDirective(other.into()))),
        }
    }
    record.ok_or(err(0, ParseErrorKind::BadSolutionHeader))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "layers 2 1\nlayer 1: 1 2 3 | 4 5\nlayer 2: 6 7 |\narc 1 6\narc 4 7\n";

    #[test]
    fn parses_and_round_trips() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.graph.num_layers(), 2);
        assert_eq!(inst.dislocation, 1);
        assert_eq!(inst.graph.num_vertices(), 7);
        assert_eq!(inst.graph.num_arcs(), 2);
        assert!(!inst.graph.is_original(VertexId(4)));
        assert_eq!(write_instance(&inst), SAMPLE);
    }

    #[test]
    fn writer_is_canonical_and_stable() {
        // Unsorted arcs and incrementals normalize on the first write.
        let messy = "layers 2 1\nlayer 1: 1 2 3 | 5 4\nlayer 2: 6 7 |\narc 4 7\narc 1 6\n";
        let first = write_instance(&parse_instance(messy).unwrap());
        assert_eq!(first, SAMPLE);
        let second = write_instance(&parse_instance(&first).unwrap());
        assert_eq!(first, second);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_instance("layers x 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(matches!(e.kind, ParseErrorKind::BadNumber(_)));

        let e = parse_instance("layers 2 1\nlayer 1: 1 | \nlayer 2: 2 |\narc 1 9\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(
            e.kind,
            ParseErrorKind::Graph(GraphError::IdOutOfRange { got: 9, .. })
        ));

        let e = parse_instance("layers 2 1\nlayer 1: 1 1 | \nlayer 2: 2 |\n").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Graph(GraphError::DuplicateVertex(_))
        ));

        let e = parse_instance("layers 2 1\nlayer 1: 1 2\nlayer 2: 3 |\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::MissingSeparator);

        let e = parse_instance("layers 2 1\nlayer 2: 1 | \nlayer 1: 2 |\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadLayerLine { expected: 1 }));
    }

    #[test]
    fn solution_round_trip_and_validation() {
        let inst = parse_instance(SAMPLE).unwrap();
        let mut d = inst.original_drawing();
        d.insert(VertexId(4), 1).unwrap();
        d.insert(VertexId(5), 5).unwrap();
        let rec = SolutionRecord::from_drawing(
            "sample",
            "grasp2",
            7,
            &d,
            vec![
                TracePoint {
                    value: 5,
                    seconds: 0.001,
                },
                TracePoint {
                    value: 2,
                    seconds: 0.003,
                },
            ],
        );
        let text = write_solution(&rec);
        let back = parse_solution(&text).unwrap();
        assert_eq!(back, rec);
        let bound = back.to_drawing(&inst);
        assert!(bound.check_feasibility().is_feasible());
        assert_eq!(bound.rank(VertexId(4)), Some(1));
        assert_eq!(bound.count_crossings(), rec.crossings);

        let bad = text.replace("trace 2", "trace 9");
        let e = parse_solution(&bad).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::TraceNotDecreasing);
    }
}
