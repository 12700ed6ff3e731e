//! Exact integer program for the drawing problem, exported in CPLEX-LP
//! text for any external solver, plus a capped brute-force oracle.
//!
//! Variables: `x_l_i_j` = 1 when vertex `i` sits above `j` in layer `l`,
//! `c_l_i_w_j_z` = 1 when arcs `(i,w)` and `(j,z)` cross, and `p_l_i` =
//! the final position of `i`. Crossing variables exist exactly for
//! same-layer-pair arc pairs with distinct tails and distinct heads —
//! pairs sharing an endpoint cannot cross. Pair enumeration orders by
//! vertex id; the original-order fixings use the frozen layout ranks.

use crate::drawing::Drawing;
use crate::graph::{IncrementalGraph, VertexId};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Variable and row counts of an exported model, grouped by what each
/// family enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelStats {
    pub crossing_vars: usize,
    pub order_vars: usize,
    pub position_vars: usize,
    /// Crossing-linking rows for arc pairs whose heads are id-ordered
    /// the same way as their tails (each two-sided row counted once).
    pub link_rows_aligned: usize,
    /// Crossing-linking rows for arc pairs whose heads are id-ordered
    /// opposite to their tails.
    pub link_rows_opposed: usize,
    pub transitivity_rows: usize,
    pub exclusivity_rows: usize,
    /// Order variables fixed to 1 to freeze the original layout.
    pub original_order_fixings: usize,
    pub position_lower_bounds: usize,
    pub position_upper_bounds: usize,
    pub position_link_rows: usize,
    pub binary_vars: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum MilpError {
    #[error("feasible orderings ({found}) exceed the enumeration cap ({cap})")]
    TooLarge { found: u128, cap: u64 },
    #[error("bad solution text: {0}")]
    BadSolution(String),
    #[error("imported solution violates the drawing constraints")]
    InfeasibleSolution,
}

fn xname(l: usize, i: VertexId, j: VertexId) -> String {
    format!("x_{}_{}_{}", l, i, j)
}

fn pname(l: usize, i: VertexId) -> String {
    format!("p_{}_{}", l, i)
}

/// Append terms after `head`, wrapping near 200 columns; continuation
/// lines are indented deeper than row starts so the stream stays
/// token-splittable.
fn emit_wrapped(out: &mut String, head: &str, terms: &[String]) {
    let mut line = String::from(head);
    for t in terms {
        if line.len() + t.len() + 1 > 200 {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
        }
        line.push(' ');
        line.push_str(t);
    }
    out.push_str(&line);
    out.push('\n');
}

/// Emit the integer program for the instance in CPLEX-LP format.
/// Returns the text and the model-size tally. Original-order fixings
/// are emitted as variable bounds rather than equality rows.
pub fn export_lp(graph: &IncrementalGraph, dislocation: u32) -> (String, ModelStats) {
    let d = dislocation as i64;
    let mut stats = ModelStats::default();
    let mut rows = String::new();
    let mut bounds = String::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut generals: Vec<String> = Vec::new();
    // name -> objective coefficient (multiplicity under parallel arcs)
    let mut crossing_terms: BTreeMap<String, u64> = BTreeMap::new();

    for (li, layer) in graph.layers().iter().enumerate() {
        let l = li + 1;
        let mut vs: Vec<VertexId> = layer.vertices().collect();
        vs.sort();
        let n = vs.len();

        for &i in &vs {
            for &j in &vs {
                if i != j {
                    binaries.push(xname(l, i, j));
                    stats.order_vars += 1;
                }
            }
        }

        for a in 0..n {
            for b in a + 1..n {
                let (i, j) = (vs[a], vs[b]);
                let _ = writeln!(
                    rows,
                    " m_{}_{}_{}: {} + {} = 1",
                    l,
                    i,
                    j,
                    xname(l, i, j),
                    xname(l, j, i)
                );
                stats.exclusivity_rows += 1;
            }
        }

        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (i, j, k) = (vs[a], vs[b], vs[c]);
                    let expr = format!(
                        "{} + {} - {}",
                        xname(l, i, j),
                        xname(l, j, k),
                        xname(l, i, k)
                    );
                    let _ = writeln!(rows, " t_{}_{}_{}_{}_a: {} >= 0", l, i, j, k, expr);
                    let _ = writeln!(rows, " t_{}_{}_{}_{}_b: {} <= 1", l, i, j, k, expr);
                    stats.transitivity_rows += 1;
                }
            }
        }

        for &i in &vs {
            let terms: Vec<String> = vs
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| format!("+ {}", xname(l, i, j)))
                .collect();
            emit_wrapped(
                &mut rows,
                &format!(" q_{}_{}: {}", l, i, pname(l, i)),
                &[terms, vec![format!("= {n}")]].concat(),
            );
            stats.position_link_rows += 1;
            generals.push(pname(l, i));
            stats.position_vars += 1;
        }

        // Frozen layout: relative order of originals as fixings,
        // absolute positions as dislocation bounds.
        for (a, &i) in layer.originals.iter().enumerate() {
            for &j in layer.originals.iter().skip(a + 1) {
                let _ = writeln!(bounds, " {} = 1", xname(l, i, j));
                stats.original_order_fixings += 1;
            }
            let r0 = a as i64 + 1;
            let lo = (r0 - d).max(1);
            let hi = (r0 + d).min(n as i64);
            let _ = writeln!(bounds, " {} <= {} <= {}", lo, pname(l, i), hi);
            stats.position_lower_bounds += 1;
            stats.position_upper_bounds += 1;
        }
        for &i in &layer.incrementals {
            let _ = writeln!(bounds, " 1 <= {} <= {}", pname(l, i), n);
        }
    }

    for pair in 0..graph.num_layers().saturating_sub(1) {
        let l = pair + 1;
        let arcs = graph.arcs_between(pair);
        let mut pairs: BTreeMap<(VertexId, VertexId, VertexId, VertexId), u64> = BTreeMap::new();
        for (a, one) in arcs.iter().enumerate() {
            for two in arcs.iter().skip(a + 1) {
                if one.tail == two.tail || one.head == two.head {
                    continue;
                }
                let (first, second) = if one.tail < two.tail {
                    (one, two)
                } else {
                    (two, one)
                };
                *pairs
                    .entry((first.tail, first.head, second.tail, second.head))
                    .or_insert(0) += 1;
            }
        }
        for (&(i, w, j, z), &count) in &pairs {
            let cvar = format!("c_{}_{}_{}_{}_{}", l, i, w, j, z);
            if w < z {
                let expr = format!("{} - {}", xname(l + 1, w, z), xname(l, i, j));
                let _ = writeln!(rows, " s_{}_{}_{}_{}_{}_a: {} + {} >= 0", l, i, w, j, z, expr, cvar);
                let _ = writeln!(rows, " s_{}_{}_{}_{}_{}_b: {} - {} <= 0", l, i, w, j, z, expr, cvar);
                stats.link_rows_aligned += 1;
            } else {
                let expr = format!("{} + {}", xname(l + 1, z, w), xname(l, i, j));
                let _ = writeln!(rows, " o_{}_{}_{}_{}_{}_a: {} + {} >= 1", l, i, w, j, z, expr, cvar);
                let _ = writeln!(rows, " o_{}_{}_{}_{}_{}_b: {} - {} <= 1", l, i, w, j, z, expr, cvar);
                stats.link_rows_opposed += 1;
            }
            crossing_terms.insert(cvar, count);
        }
    }
    stats.crossing_vars = crossing_terms.len();
    binaries.extend(crossing_terms.keys().cloned());
    stats.binary_vars = stats.order_vars + stats.crossing_vars;

    let mut out = String::from("\\ crossing-minimization model\nMinimize\n");
    if crossing_terms.is_empty() {
        // Constant objective; anchor it on a position variable so every
        // reader sees a well-formed expression.
        let anchor = generals.first().cloned().unwrap_or_else(|| "p_1_1".into());
        let _ = writeln!(out, " obj: 0 {anchor}");
    } else {
        let terms: Vec<String> = crossing_terms
            .iter()
            .map(|(name, &k)| {
                if k == 1 {
                    format!("+ {name}")
                } else {
                    format!("+ {k} {name}")
                }
            })
            .collect();
        emit_wrapped(&mut out, " obj:", &terms);
    }
    out.push_str("Subject To\n");
    out.push_str(&rows);
    out.push_str("Bounds\n");
    out.push_str(&bounds);
    out.push_str("Binaries\n");
    emit_wrapped(&mut out, "", &binaries);
    out.push_str("Generals\n");
    emit_wrapped(&mut out, "", &generals);
    out.push_str("End\n");
    (out, stats)
}

/// Read a `name value` solution listing (as printed by most solvers or
/// by the bundled bridge script), take the position variables, and
/// rebuild the drawing. Feasibility is re-checked here; the objective
/// should be recounted from the returned drawing rather than trusted
/// from the solver.
pub fn import_solution<'g>(
    graph: &'g IncrementalGraph,
    dislocation: u32,
    text: &str,
) -> Result<Drawing<'g>, MilpError> {
    let mut ranks: Vec<(VertexId, u32)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (name, value) = match (parts.next(), parts.next(), parts.next()) {
            (Some(n), Some(v), None) => (n, v),
            _ => {
                return Err(MilpError::BadSolution(format!(
                    "line {}: expected `name value`",
                    lineno + 1
                )))
            }
        };
        if !name.starts_with("p_") {
            continue;
        }
        let mut it = name[2..].splitn(2, '_');
        let (layer, id) = match (
            it.next().and_then(|s| s.parse::<usize>().ok()),
            it.next().and_then(|s| s.parse::<u32>().ok()),
        ) {
            (Some(l), Some(v)) => (l, v),
            _ => {
                return Err(MilpError::BadSolution(format!(
                    "line {}: malformed position variable `{name}`",
                    lineno + 1
                )))
            }
        };
        let v = VertexId(id);
        if id == 0 || id as usize > graph.num_vertices() {
            return Err(MilpError::BadSolution(format!("unknown vertex {id}")));
        }
        if layer == 0 || layer - 1 != graph.layer_of(v) {
            return Err(MilpError::BadSolution(format!(
                "vertex {id} is not in layer {layer}"
            )));
        }
        let x: f64 = value
            .parse()
            .map_err(|_| MilpError::BadSolution(format!("bad value `{value}` for {name}")))?;
        let rounded = x.round();
        if (x - rounded).abs() > 1e-4 || rounded < 1.0 {
            return Err(MilpError::BadSolution(format!(
                "non-integral position {x} for {name}"
            )));
        }
        ranks.push((v, rounded as u32));
    }
    if ranks.len() != graph.num_vertices() {
        return Err(MilpError::BadSolution(format!(
            "{} of {} positions present",
            ranks.len(),
            graph.num_vertices()
        )));
    }
    let drawing = Drawing::from_ranks(graph, dislocation, &ranks);
    if !drawing.check_feasibility().is_feasible() {
        return Err(MilpError::InfeasibleSolution);
    }
    Ok(drawing)
}

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug)]
pub struct BruteForceResult<'g> {
    pub crossings: u64,
    pub drawing: Drawing<'g>,
}

/// Every feasible ordering of one layer: incrementals interleaved into
/// the frozen original sequence, no original pushed down more than `d`
/// slots. Fails once more than `limit` orderings exist.
fn layer_orderings(
    graph: &IncrementalGraph,
    layer_index: usize,
    d: u32,
    limit: u64,
) -> Result<Vec<Vec<VertexId>>, MilpError> {
    let layer = graph.layer(layer_index);
    let originals = &layer.originals;
    let incs = &layer.incrementals;
    let n = layer.size();
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    let mut cur: Vec<VertexId> = Vec::with_capacity(n);
    let mut used = vec![false; incs.len()];

    fn dfs(
        originals: &[VertexId],
        incs: &[VertexId],
        d: usize,
        n: usize,
        oi: usize,
        cur: &mut Vec<VertexId>,
        used: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
        limit: u64,
    ) -> bool {
        if cur.len() == n {
            if out.len() as u64 >= limit {
                return false;
            }
            out.push(cur.clone());
            return true;
        }
        let shift = cur.len() - oi; // incrementals placed so far
        if oi < originals.len() && shift <= d {
            cur.push(originals[oi]);
            if !dfs(originals, incs, d, n, oi + 1, cur, used, out, limit) {
                return false;
            }
            cur.pop();
        }
        // Another incremental is only allowed while every remaining
        // original can still absorb the extra downward shift.
        if oi == originals.len() || shift + 1 <= d {
            for t in 0..incs.len() {
                if used[t] {
                    continue;
                }
                used[t] = true;
                cur.push(incs[t]);
                let ok = dfs(originals, incs, d, n, oi, cur, used, out, limit);
                used[t] = false;
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    if dfs(
        originals,
        incs,
        d as usize,
        n,
        0,
        &mut cur,
        &mut used,
        &mut out,
        limit,
    ) {
        Ok(out)
    } else {
        Err(MilpError::TooLarge {
            found: limit as u128 + 1,
            cap: limit,
        })
    }
}

/// Crossings contributed by each ordered pair of next-layer vertices:
/// `k[u][v]` counts arc pairs that cross when `u` sits above `v`,
/// independent of where the rest of the layer goes.
fn pair_cost_table(
    graph: &IncrementalGraph,
    pair: usize,
    left_rank: &[u32],
    right_index: &[usize],
    nright: usize,
) -> Vec<Vec<u64>> {
    let mut tails: Vec<Vec<u32>> = vec![Vec::new(); nright];
    for arc in graph.arcs_between(pair) {
        tails[right_index[arc.head.index()]].push(left_rank[arc.tail.index()]);
    }
    let mut k = vec![vec![0u64; nright]; nright];
    for u in 0..nright {
        for v in 0..nright {
            if u == v {
                continue;
            }
            let mut c = 0u64;
            for &s in &tails[u] {
                for &t in &tails[v] {
                    if s > t {
                        c += 1;
                    }
                }
            }
            k[u][v] = c;
        }
    }
    k
}

/// Exact optimum by enumerating the feasible orderings of every layer
/// and sweeping a shortest-path recursion across consecutive layers.
/// Errors out once the product of per-layer ordering counts exceeds
/// `cap`. The returned value is recounted on the rebuilt drawing, never
/// taken from the recursion's own arithmetic.
pub fn brute_force_optimum<'g>(
    graph: &'g IncrementalGraph,
    dislocation: u32,
    cap: u64,
) -> Result<BruteForceResult<'g>, MilpError> {
    let nl = graph.num_layers();
    let mut orderings: Vec<Vec<Vec<VertexId>>> = Vec::with_capacity(nl);
    let mut product: u128 = 1;
    for l in 0..nl {
        let os = layer_orderings(graph, l, dislocation, cap)?;
        product = product.saturating_mul(os.len() as u128);
        if product > cap as u128 {
            return Err(MilpError::TooLarge {
                found: product,
                cap,
            });
        }
        orderings.push(os);
    }

    let rank_of = |order: &[VertexId]| {
        let mut r = vec![0u32; graph.num_vertices()];
        for (pos, &v) in order.iter().enumerate() {
            r[v.index()] = pos as u32 + 1;
        }
        r
    };

    let mut cost: Vec<u64> = vec![0; orderings[0].len()];
    let mut preds: Vec<Vec<usize>> = Vec::with_capacity(nl);
    preds.push(vec![usize::MAX; orderings[0].len()]);
    for pair in 0..nl - 1 {
        let right = &orderings[pair + 1];
        let mut right_index = vec![usize::MAX; graph.num_vertices()];
        let rverts: Vec<VertexId> = graph.layer(pair + 1).vertices().collect();
        for (idx, &v) in rverts.iter().enumerate() {
            right_index[v.index()] = idx;
        }
        let mut next = vec![u64::MAX; right.len()];
        let mut pred = vec![usize::MAX; right.len()];
        for (li, left) in orderings[pair].iter().enumerate() {
            let k = pair_cost_table(graph, pair, &rank_of(left), &right_index, rverts.len());
            for (ri, r) in right.iter().enumerate() {
                let mut between = 0u64;
                for a in 0..r.len() {
                    let ua = right_index[r[a].index()];
                    for &vb in &r[a + 1..] {
                        between += k[ua][right_index[vb.index()]];
                    }
                }
                let total = cost[li] + between;
                if total < next[ri] {
                    next[ri] = total;
                    pred[ri] = li;
                }
            }
        }
        cost = next;
        preds.push(pred);
    }

    let best = (0..cost.len())
        .min_by_key(|&i| cost[i])
        .expect("every layer admits the trivial all-suffix ordering");
    let mut chosen = vec![0usize; nl];
    chosen[nl - 1] = best;
    for l in (1..nl).rev() {
        chosen[l - 1] = preds[l][chosen[l]];
    }
    let mut ranks: Vec<(VertexId, u32)> = Vec::new();
    for l in 0..nl {
        for (pos, &v) in orderings[l][chosen[l]].iter().enumerate() {
            ranks.push((v, pos as u32 + 1));
        }
    }
    let drawing = Drawing::from_ranks(graph, dislocation, &ranks);
    assert!(
        drawing.check_feasibility().is_feasible(),
        "enumerated orderings must be feasible"
    );
    let crossings = drawing.count_crossings();
    assert_eq!(
        crossings, cost[best],
        "recount must agree with the sweep arithmetic"
    );
    Ok(BruteForceResult { crossings, drawing })
}
