//! Multi-start driver around the constructive heuristics and the local
//! search: construct, improve, keep the best, repeat.
//!
//! Each run derives three independent RNG streams from the master seed —
//! φ draws, construction choices, and embedding stochasticity — so
//! toggling the re-embedding flag never perturbs the construction
//! randomness of otherwise identical runs.

use crate::construct::{construct_c2, construct_c3, construct_gl};
use crate::drawing::Drawing;
use crate::embedding::{self, ArcDistances, EmbedError, EmbeddingConfig};
use crate::instance::{Instance, SolutionRecord, TracePoint};
use crate::search::local_search;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    /// Degree-selected, barycenter-placed construction.
    Grasp2,
    /// Insertion-cost-selected construction.
    Grasp3,
    /// Embedding-guided construction.
    Gl,
}

impl HeuristicKind {
    pub fn name(&self) -> &'static str {
        match self {
            HeuristicKind::Grasp2 => "grasp2",
            HeuristicKind::Grasp3 => "grasp3",
            HeuristicKind::Gl => "gl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub heuristic: HeuristicKind,
    /// Required for [`HeuristicKind::Gl`], ignored otherwise.
    pub embedding: Option<EmbeddingConfig>,
    /// Recompute the embedding before every construction instead of once
    /// up front. Only meaningful for stochastic embedding methods.
    pub stochastic_reembedding: bool,
    /// Iteration budget η.
    pub max_iterations: u32,
    /// Stop after this many consecutive iterations without a strict
    /// improvement.
    pub max_stale_iterations: u32,
    pub seed: u64,
    /// Wall-clock budget in seconds; an iteration in flight when the
    /// budget runs out is finished, not aborted.
    pub time_limit: Option<f64>,
}

impl SolverConfig {
    pub fn new(heuristic: HeuristicKind, seed: u64) -> Self {
        SolverConfig {
            heuristic,
            embedding: match heuristic {
                HeuristicKind::Gl => Some(EmbeddingConfig::hope()),
                _ => None,
            },
            stochastic_reembedding: false,
            max_iterations: 100,
            max_stale_iterations: 20,
            seed,
            time_limit: None,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.max_iterations < 1 {
            return Err(SolverError::BadConfig("iteration budget must be at least 1"));
        }
        if self.max_stale_iterations < 1 {
            return Err(SolverError::BadConfig(
                "stale-iteration budget must be at least 1",
            ));
        }
        match (self.heuristic, &self.embedding) {
            (HeuristicKind::Gl, None) => {
                return Err(SolverError::BadConfig(
                    "the guided heuristic needs an embedding config",
                ))
            }
            (HeuristicKind::Gl, Some(cfg)) => {
                if self.stochastic_reembedding && !cfg.is_stochastic() {
                    return Err(SolverError::BadConfig(
                        "stochastic re-embedding needs a stochastic embedding method",
                    ));
                }
            }
            _ => {
                if self.stochastic_reembedding {
                    return Err(SolverError::BadConfig(
                        "stochastic re-embedding only applies to the guided heuristic",
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("the starting drawing is infeasible")]
    InfeasibleInput,
    #[error("bad solver config: {0}")]
    BadConfig(&'static str),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// Everything a finished run reports. Incumbent values decrease
/// strictly; timestamps are seconds since the run started and include
/// any embedding time.
pub struct RunTrace<'g> {
    pub incumbents: Vec<TracePoint>,
    pub iterations: u32,
    pub seconds: f64,
    pub best: Drawing<'g>,
}

impl RunTrace<'_> {
    pub fn best_value(&self) -> u64 {
        self.incumbents.last().expect("at least one incumbent").value
    }
}

fn stream(seed: u64, n: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n);
    rng
}

/// Core loop, generic over the construction so tests can inject a
/// scripted builder. `construct` gets the iteration number (1-based),
/// the base drawing, this iteration's φ, and the construction stream.
fn run_loop<'g, F>(
    base: &Drawing<'g>,
    config: &SolverConfig,
    mut construct: F,
) -> Result<RunTrace<'g>, SolverError>
where
    F: FnMut(u32, &Drawing<'g>, f64, &mut ChaCha8Rng) -> Result<Drawing<'g>, SolverError>,
{
    let start = Instant::now();
    let mut phi_rng = stream(config.seed, 0);
    let mut build_rng = stream(config.seed, 1);

    let mut best: Option<Drawing<'g>> = None;
    let mut incumbents: Vec<TracePoint> = Vec::new();
    let mut it = 0u32;
    let mut stale = 0u32;
    loop {
        it += 1;
        let phi = phi_rng.random_range(0.0..=1.0);
        let mut candidate = construct(it, base, phi, &mut build_rng)?;
        local_search(&mut candidate);
        let value = candidate.count_crossings();
        if incumbents.last().map_or(true, |p| value < p.value) {
            incumbents.push(TracePoint {
                value,
                seconds: start.elapsed().as_secs_f64(),
            });
            best = Some(candidate);
            stale = 0;
        } else {
            stale += 1;
        }
        if it >= config.max_iterations || stale >= config.max_stale_iterations {
            break;
        }
        if let Some(limit) = config.time_limit {
            if start.elapsed().as_secs_f64() >= limit {
                break;
            }
        }
    }
    Ok(RunTrace {
        incumbents,
        iterations: it,
        seconds: start.elapsed().as_secs_f64(),
        best: best.expect("first iteration always records an incumbent"),
    })
}

/// Guided run over externally supplied arc distances (e.g. an embedding
/// trained outside this crate). The distances stay fixed for the whole
/// run, so stochastic re-embedding is rejected.
pub fn run_with_distances<'g>(
    base: &Drawing<'g>,
    config: &SolverConfig,
    distances: &ArcDistances,
) -> Result<RunTrace<'g>, SolverError> {
    if config.heuristic != HeuristicKind::Gl {
        return Err(SolverError::BadConfig(
            "external distances only drive the guided heuristic",
        ));
    }
    if config.stochastic_reembedding {
        return Err(SolverError::BadConfig(
            "an external embedding cannot be re-sampled",
        ));
    }
    if config.max_iterations < 1 || config.max_stale_iterations < 1 {
        return Err(SolverError::BadConfig("iteration budgets must be at least 1"));
    }
    if !base.check_feasibility().is_feasible() {
        return Err(SolverError::InfeasibleInput);
    }
    run_loop(base, config, |_, b, phi, rng| {
        Ok(construct_gl(b, distances, phi, rng))
    })
}

/// One full heuristic run on a feasible starting drawing.
pub fn run<'g>(base: &Drawing<'g>, config: &SolverConfig) -> Result<RunTrace<'g>, SolverError> {
    config.validate()?;
    if !base.check_feasibility().is_feasible() {
        return Err(SolverError::InfeasibleInput);
    }
    let graph = base.graph();
    match config.heuristic {
        HeuristicKind::Grasp2 => {
            run_loop(base, config, |_, b, phi, rng| Ok(construct_c2(b, phi, rng)))
        }
        HeuristicKind::Grasp3 => {
            run_loop(base, config, |_, b, phi, rng| Ok(construct_c3(b, phi, rng)))
        }
        HeuristicKind::Gl => {
            let cfg = config.embedding.as_ref().expect("validated above");
            let mut embed_rng = stream(config.seed, 2);
            let compute = |rng: &mut ChaCha8Rng| -> Result<ArcDistances, EmbedError> {
                let emb = embedding::compute(graph, cfg, rng)?;
                Ok(embedding::arc_distances(graph, &embedding::project_2d(&emb)))
            };
            // The first embedding is always computed up front; the
            // stochastic variant refreshes it before every later
            // construction.
            let mut distances = compute(&mut embed_rng)?;
            let stochastic = config.stochastic_reembedding;
            run_loop(base, config, move |it, b, phi, rng| {
                if stochastic && it > 1 {
                    distances = compute(&mut embed_rng)?;
                }
                Ok(construct_gl(b, &distances, phi, rng))
            })
        }
    }
}

/// One unit of batch work: an instance, a name for the records, and the
/// solver configuration whose seed serves as the repetition base.
pub struct BatchJob<'a> {
    pub instance: &'a Instance,
    pub instance_name: String,
    pub config: SolverConfig,
}

#[derive(Debug)]
pub struct BatchResult {
    pub instance_name: String,
    pub heuristic: HeuristicKind,
    pub repetition: u32,
    pub seed: u64,
    pub outcome: Result<SolutionRecord, SolverError>,
    pub seconds: f64,
    pub iterations: u32,
}

/// Run every job `repetitions` times in parallel; repetition `r` uses
/// seed `base + r`. Failures are recorded per run, never abort the
/// batch, and values depend only on seeds — parallelism changes
/// wall-clock alone.
pub fn run_batch(jobs: &[BatchJob], repetitions: u32) -> Vec<BatchResult> {
    let units: Vec<(usize, u32)> = (0..jobs.len())
        .flat_map(|j| (0..repetitions).map(move |r| (j, r)))
        .collect();
    units
        .into_par_iter()
        .map(|(j, r)| {
            let job = &jobs[j];
            let mut config = job.config.clone();
            config.seed = job.config.seed + r as u64;
            let base = job.instance.original_drawing();
            let (outcome, seconds, iterations) = match run(&base, &config) {
                Ok(trace) => {
                    let record = SolutionRecord::from_drawing(
                        &job.instance_name,
                        config.heuristic.name(),
                        config.seed,
                        &trace.best,
                        trace.incumbents.clone(),
                    );
                    (Ok(record), trace.seconds, trace.iterations)
                }
                Err(e) => (Err(e), 0.0, 0),
            };
            BatchResult {
                instance_name: job.instance_name.clone(),
                heuristic: config.heuristic,
                repetition: r,
                seed: config.seed,
                outcome,
                seconds,
                iterations,
            }
        })
        .collect()
}

/// Manifest line per run: `instance,heuristic,rep,seed,crossings,seconds,iterations`
/// with `error:<message>` in the crossings column for failed runs.
pub fn batch_manifest(results: &[BatchResult]) -> String {
    let mut out = String::from("instance,heuristic,rep,seed,crossings,seconds,iterations\n");
    for r in results {
        let value = match &r.outcome {
            Ok(rec) => rec.crossings.to_string(),
            Err(e) => format!("error:{e}"),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{}\n",
            r.instance_name,
            r.heuristic.name(),
            r.repetition,
            r.seed,
            value,
            r.seconds,
            r.iterations
        ));
    }
    out
}
