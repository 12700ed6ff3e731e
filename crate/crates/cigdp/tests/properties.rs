//! Randomized invariants over the whole pipeline: generated instances
//! stay feasible, text formats round-trip, the tree-based crossing count
//! agrees with the quadratic definition, local search is monotone, and
//! the scoring functions respect their documented ranges.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use cigdp::embedding::{parse_external, write_external, Embedding};
use cigdp::eval::{npi, performance_profile, tau_grid};
use cigdp::generate::{generate_benchmark, InstanceSpec};
use cigdp::instance::{
    parse_instance, parse_solution, write_instance, write_solution, SolutionRecord, TracePoint,
};
use cigdp::linalg::Matrix;
use cigdp::search::local_search;
use cigdp::{construct, Instance};

/// Layer sizes grow with `d` so that `round(inc · originals) ≥ d` holds
/// for every `inc ≥ 0.2`; smaller layers make the generator reject the
/// draw as unable to host `d` incrementals.
fn small_instance(layers: usize, density: f64, inc: f64, d: u32, seed: u64) -> Instance {
    let spec = InstanceSpec {
        originals_per_layer: (4 * d + 4, 4 * d + 10),
        ..InstanceSpec::benchmark(layers, density, inc, d, seed)
    };
    generate_benchmark(&spec).expect("parameters are kept in the valid range")
}

/// Quadratic reference count: every placed arc pair, tested one by one.
fn pairwise_crossings(instance: &Instance, drawing: &cigdp::Drawing) -> u64 {
    let g = &instance.graph;
    let arcs: Vec<_> = g.all_arcs().collect();
    let mut total = 0;
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if g.layer_of(arcs[i].tail) != g.layer_of(arcs[j].tail) {
                continue;
            }
            if drawing.arcs_cross(arcs[i], arcs[j]).unwrap_or(false) {
                total += 1;
            }
        }
    }
    total
}

proptest! {
    #[test]
    fn generated_instances_round_trip_and_start_feasible(
        layers in 2usize..5,
        density in 0.2f64..1.5,
        inc in 0.2f64..0.5,
        d in 1u32..4,
        seed in any::<u64>(),
    ) {
        let instance = small_instance(layers, density, inc, d, seed);
        let text = write_instance(&instance);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&parsed), text);
        prop_assert!(instance.original_drawing().check_feasibility().is_feasible());
    }

    #[test]
    fn construction_is_feasible_and_counts_agree(
        density in 0.2f64..1.5,
        inc in 0.2f64..0.5,
        phi in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let instance = small_instance(2, density, inc, 1, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drawing = construct::construct_c2(&instance.original_drawing(), phi, &mut rng);
        prop_assert!(drawing.check_feasibility().is_feasible());
        prop_assert_eq!(drawing.count_crossings(), pairwise_crossings(&instance, &drawing));
    }

    #[test]
    fn local_search_never_increases_crossings(
        density in 0.2f64..1.5,
        inc in 0.2f64..0.5,
        phi in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let instance = small_instance(3, density, inc, 2, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut drawing = construct::construct_c3(&instance.original_drawing(), phi, &mut rng);
        let before = drawing.count_crossings();
        let moves = local_search(&mut drawing);
        let after = drawing.count_crossings();
        prop_assert!(after <= before);
        prop_assert!(drawing.check_feasibility().is_feasible());
        // Every applied move improves strictly, and the deltas add up.
        let total: i64 = moves.iter().map(|m| m.delta()).sum();
        prop_assert!(moves.iter().all(|m| m.delta() < 0));
        prop_assert_eq!(before as i64 + total, after as i64);
    }

    #[test]
    fn solution_text_round_trips(
        density in 0.2f64..1.5,
        inc in 0.2f64..0.5,
        seed in any::<u64>(),
        trace_seed in any::<u32>(),
    ) {
        let instance = small_instance(2, density, inc, 1, seed);
        let drawing = instance.original_drawing();
        // A short synthetic trace: strictly decreasing values, weakly
        // increasing times.
        let mut trace = Vec::new();
        let mut value = 50 + (trace_seed % 100) as u64;
        let mut t = 0.0;
        for step in 0..(trace_seed % 4) {
            trace.push(TracePoint { value, seconds: t });
            value = value.saturating_sub(1 + (step as u64 % 3));
            t += 0.25;
        }
        let record =
            SolutionRecord::from_drawing("inst", "h", seed, &drawing, trace);
        let text = write_solution(&record);
        let parsed = parse_solution(&text).unwrap();
        prop_assert_eq!(write_solution(&parsed), text);
    }

    #[test]
    fn npi_stays_in_its_unit_band(
        f_star in 1u64..50,
        extra in prop::collection::vec(1u64..10, 0..6),
        t_max in 0.5f64..20.0,
    ) {
        // Build a decreasing trace ending somewhere at or above f_star.
        let mut value: u64 = f_star + extra.iter().sum::<u64>();
        let n = extra.len();
        let mut trace = Vec::new();
        for (i, step) in extra.iter().enumerate() {
            let seconds = t_max * (i as f64 + 0.5) / (n as f64 + 1.0);
            trace.push(TracePoint { value, seconds });
            value -= step;
        }
        let mut warnings = Vec::new();
        let score = npi(&trace, f_star, t_max, &mut warnings).unwrap();
        prop_assert!((1.0..=1.1 + 1e-12).contains(&score), "score {score}");
    }

    #[test]
    fn profile_fractions_are_monotone_and_bounded(
        values in prop::collection::vec(1.0f64..100.0, 6),
    ) {
        let mut cells = BTreeMap::new();
        for (i, v) in values.iter().enumerate() {
            let inst = format!("i{}", i / 2);
            let heur = format!("h{}", i % 2);
            cells.insert((inst, heur), *v);
        }
        // One grid point strictly past the worst ratio, where every
        // curve must have reached 1 (the grid's own endpoint can fall an
        // ulp short of the worst ratio).
        let mut best = BTreeMap::new();
        for ((inst, _), &v) in &cells {
            let e = best.entry(inst.clone()).or_insert(f64::INFINITY);
            *e = e.min(v);
        }
        let worst = cells
            .iter()
            .map(|((inst, _), &v)| v / best[inst])
            .fold(1.0f64, f64::max);
        let mut taus = tau_grid(&cells, 17);
        taus.push(worst.max(*taus.last().unwrap()) * (1.0 + 1e-9));
        let mut warnings = Vec::new();
        let curves = performance_profile(&cells, &taus, &mut warnings);
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(curves.len(), 2);
        for curve in &curves {
            prop_assert!(curve
                .points
                .windows(2)
                .all(|w| w[0].1 <= w[1].1 && w[0].0 < w[1].0));
            prop_assert!(curve.points.iter().all(|&(_, f)| (0.0..=1.0).contains(&f)));
            prop_assert_eq!(curve.points.last().unwrap().1, 1.0);
        }
    }

    #[test]
    fn external_embedding_text_round_trips(
        rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 1..8),
    ) {
        let mut m = Matrix::zeros(rows.len(), 3);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        let emb = Embedding::new(m);
        let text = write_external(&emb);
        let parsed = parse_external(&text, rows.len()).unwrap();
        prop_assert_eq!(parsed.matrix(), emb.matrix());
    }
}
