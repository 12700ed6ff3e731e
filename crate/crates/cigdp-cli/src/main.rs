//! `cigdp` — generate, solve, embed, export, brute-force, evaluate and
//! render incremental graph drawing instances from the command line.
//!
//! Exit codes: 0 success, 1 domain failure (unreadable or infeasible
//! input, solver error), 2 usage error, 3 evaluation finished but
//! produced warnings.

use std::collections::{BTreeMap, BTreeSet};
use std::env;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cigdp::embedding::{
    self, ArcDistances, DimensionSpec, EmbeddingConfig, Node2VecConfig,
};
use cigdp::eval::{
    self, metric_table_csv, profile_csv, profile_svg, run_metrics_csv, tau_grid, Observation,
    WilcoxonOutcome,
};
use cigdp::generate::{generate_benchmark, generate_dense, InstanceSpec};
use cigdp::grasp::{self, HeuristicKind, SolverConfig, SolverError};
use cigdp::instance::{
    parse_instance, parse_solution, write_instance, write_solution, SolutionRecord,
};
use cigdp::milp::{brute_force_optimum, export_lp, DEFAULT_ENUMERATION_CAP};
use cigdp::svg::{render_svg, RenderOptions};
use cigdp::{Instance, VertexId};

#[derive(Parser)]
#[command(name = "cigdp", version, about = "Incremental graph drawing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Generate(GenerateArgs),
    /// Run a heuristic on an instance and write solution files.
    Solve(SolveArgs),
    /// Compute a vertex embedding and write it in the external format.
    Embed(EmbedArgs),
    /// Export the exact model as an LP file.
    ExportMilp(ExportMilpArgs),
    /// Find a proven optimum by exhaustive enumeration.
    Bruteforce(BruteforceArgs),
    /// Score a directory of solution files.
    Evaluate(EvaluateArgs),
    /// Render an instance or a solution as SVG.
    Render(RenderArgs),
}

/// A failed command: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::ExportMilp(a) => cmd_export_milp(&a),
        Command::Bruteforce(a) => cmd_bruteforce(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Render(a) => cmd_render(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------- helpers

/// Resolve a single output file: explicit `--out` wins, otherwise the
/// default name goes into `$CIGDP_OUT_DIR` (or the working directory).
fn out_file(out: &Option<PathBuf>, default_name: &str) -> PathBuf {
    match out {
        Some(p) => p.clone(),
        None => out_root().join(default_name),
    }
}

fn out_dir(out: &Option<PathBuf>) -> PathBuf {
    out.clone().unwrap_or_else(out_root)
}

fn out_root() -> PathBuf {
    env::var_os("CIGDP_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("cannot read {}: {e}", path.display())))
}

/// Write via a temporary file in the same directory so readers never
/// observe a half-written file.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::domain(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| Failure::domain(format!("cannot write in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes())
        .and_then(|_| tmp.flush())
        .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string())
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_text(path)?;
    parse_instance(&text)
        .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn solver_failure(err: SolverError) -> Failure {
    match err {
        SolverError::BadConfig(_) => Failure::usage(err.to_string()),
        _ => Failure::domain(err.to_string()),
    }
}

// --------------------------------------------------------------- generate

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SchemeArg {
    /// Sparse layers of 5–30 originals, arcs-per-vertex density.
    Benchmark,
    /// Large layers of 60–80 originals, bipartite fill density.
    Dense,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of layers.
    #[arg(long, default_value_t = 2)]
    layers: usize,
    /// Arcs per vertex (benchmark) or bipartite fill fraction (dense).
    #[arg(long)]
    density: Option<f64>,
    /// Incremental vertices per layer, as a fraction of its originals.
    #[arg(long)]
    inc: Option<f64>,
    /// Dislocation bound: how far an original may move from its frozen
    /// position.
    #[arg(long, default_value_t = 1)]
    dislocation: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Benchmark)]
    scheme: SchemeArg,
    /// Override the per-layer original-count range.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    originals: Option<Vec<u32>>,
    /// Output file (default: a descriptive name in the output directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a machine-readable summary on stdout.
    #[arg(long)]
    json: bool,
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8, Failure> {
    let (density, inc) = match args.scheme {
        SchemeArg::Benchmark => (args.density.unwrap_or(0.065), args.inc.unwrap_or(0.2)),
        SchemeArg::Dense => (args.density.unwrap_or(0.5), args.inc.unwrap_or(0.6)),
    };
    let mut spec = match args.scheme {
        SchemeArg::Benchmark => {
            InstanceSpec::benchmark(args.layers, density, inc, args.dislocation, args.seed)
        }
        SchemeArg::Dense => InstanceSpec::dense(args.layers, args.dislocation, args.seed),
    };
    spec.density = density;
    spec.incremental_fraction = inc;
    if let Some(range) = &args.originals {
        spec.originals_per_layer = (range[0], range[1]);
    }

    let prefix = match args.scheme {
        SchemeArg::Benchmark => "bench",
        SchemeArg::Dense => "dense",
    };
    let name = format!(
        "{prefix}_L{}_r{density}_i{inc}_d{}_s{}.graph",
        args.layers, args.dislocation, args.seed
    );
    let path = out_file(&args.out, &name);
    eprintln!(
        "cigdp generate: scheme={prefix} layers={} density={density} inc={inc} \
         dislocation={} originals={}..{} seed={} out={}",
        args.layers,
        args.dislocation,
        spec.originals_per_layer.0,
        spec.originals_per_layer.1,
        args.seed,
        path.display()
    );

    let instance = match args.scheme {
        SchemeArg::Benchmark => generate_benchmark(&spec),
        SchemeArg::Dense => generate_dense(&spec),
    }
    .map_err(|e| Failure::domain(e.to_string()))?;
    write_atomic(&path, &write_instance(&instance))?;

    let g = &instance.graph;
    let incrementals: usize = (0..g.num_layers())
        .map(|l| g.layer(l).incrementals.len())
        .sum();
    if args.json {
        let summary = serde_json::json!({
            "path": path.to_string_lossy(),
            "layers": g.num_layers(),
            "vertices": g.num_vertices(),
            "incrementals": incrementals,
            "arcs": g.all_arcs().count(),
            "dislocation": instance.dislocation,
        });
        println!("{summary}");
    } else {
        println!(
            "wrote {} ({} layers, {} vertices, {} incremental, {} arcs)",
            path.display(),
            g.num_layers(),
            g.num_vertices(),
            incrementals,
            g.all_arcs().count()
        );
    }
    Ok(0)
}

// ------------------------------------------------------------------ solve

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum HeuristicArg {
    /// Semi-greedy barycenter construction plus local search.
    Grasp2,
    /// Semi-greedy insertion-cost construction plus local search.
    Grasp3,
    /// Embedding-guided construction plus local search.
    Gl,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EmbeddingArg {
    Spectral,
    Hope,
    Node2vec,
    /// Read vertex coordinates from `--embedding-file`.
    External,
}

impl EmbeddingArg {
    fn name(self) -> &'static str {
        match self {
            EmbeddingArg::Spectral => "spectral",
            EmbeddingArg::Hope => "hope",
            EmbeddingArg::Node2vec => "node2vec",
            EmbeddingArg::External => "external",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    heuristic: HeuristicArg,
    /// Embedding provider for the guided heuristic.
    #[arg(long, value_enum, default_value_t = EmbeddingArg::Hope)]
    embedding: EmbeddingArg,
    /// Coordinate file for `--embedding external`.
    #[arg(long)]
    embedding_file: Option<PathBuf>,
    /// Embedding dimensions (default: provider-specific).
    #[arg(long)]
    dims: Option<usize>,
    /// Decay factor of the similarity embedding.
    #[arg(long, default_value_t = 0.01)]
    beta: f64,
    /// Recompute the embedding before every construction (sampling
    /// providers only).
    #[arg(long)]
    stochastic_reembedding: bool,
    /// Iteration budget.
    #[arg(long, default_value_t = 100)]
    eta: u32,
    /// Stop after this many consecutive non-improving iterations.
    #[arg(long, default_value_t = 20)]
    eta_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds, checked after each iteration.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Independent repetitions; repetition r uses seed + r.
    #[arg(long, default_value_t = 1)]
    reps: u32,
    /// Worker threads for repetitions.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for solutions and the run manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a machine-readable summary on stdout.
    #[arg(long)]
    json: bool,
}

fn embedding_config(args: &SolveArgs) -> Result<Option<EmbeddingConfig>, Failure> {
    let dims = match args.dims {
        Some(k) => DimensionSpec::Fixed(k),
        None => DimensionSpec::Auto,
    };
    Ok(Some(match args.embedding {
        EmbeddingArg::Spectral => EmbeddingConfig::Spectral { dimensions: dims },
        EmbeddingArg::Hope => EmbeddingConfig::Hope { dimensions: dims, beta: args.beta },
        EmbeddingArg::Node2vec => {
            let mut cfg = Node2VecConfig::default();
            if let Some(k) = args.dims {
                cfg.dimensions = k;
            }
            EmbeddingConfig::Node2Vec(cfg)
        }
        EmbeddingArg::External => return Ok(None),
    }))
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    if args.reps < 1 {
        return Err(Failure::usage("--reps must be at least 1"));
    }
    if args.jobs < 1 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let instance = load_instance(&args.instance)?;
    let name = stem(&args.instance);

    let kind = match args.heuristic {
        HeuristicArg::Grasp2 => HeuristicKind::Grasp2,
        HeuristicArg::Grasp3 => HeuristicKind::Grasp3,
        HeuristicArg::Gl => HeuristicKind::Gl,
    };
    let mut config = SolverConfig::new(kind, args.seed);
    config.max_iterations = args.eta;
    config.max_stale_iterations = args.eta_max;
    config.time_limit = args.time_limit;
    config.stochastic_reembedding = args.stochastic_reembedding;

    // The guided heuristic gets its provider from the flags; an external
    // file is projected into arc distances once, up front.
    let mut external: Option<ArcDistances> = None;
    let label = if kind == HeuristicKind::Gl {
        if args.embedding == EmbeddingArg::External {
            let path = args.embedding_file.as_ref().ok_or_else(|| {
                Failure::usage("--embedding external needs --embedding-file")
            })?;
            let text = read_text(path)?;
            let emb = embedding::parse_external(&text, instance.graph.num_vertices())
                .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
            let points = embedding::project_2d(&emb);
            external = Some(embedding::arc_distances(&instance.graph, &points));
            config.embedding = None;
        } else {
            config.embedding = embedding_config(args)?;
        }
        let re = if args.stochastic_reembedding { "-re" } else { "" };
        format!("gl-{}{re}", args.embedding.name())
    } else {
        kind.name().to_string()
    };

    let dir = out_dir(&args.out);
    eprintln!(
        "cigdp solve: instance={name} heuristic={label} eta={} eta-max={} seed={} \
         time-limit={} reps={} jobs={} out={}",
        args.eta,
        args.eta_max,
        args.seed,
        args.time_limit.map_or("-".to_string(), |t| t.to_string()),
        args.reps,
        args.jobs,
        dir.display()
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Failure::domain(format!("cannot start worker pool: {e}")))?;
    let runs: Vec<(u32, Result<(SolutionRecord, f64, u32), SolverError>)> = pool.install(|| {
        use rayon::prelude::*;
        (0..args.reps)
            .into_par_iter()
            .map(|rep| {
                let mut cfg = config.clone();
                cfg.seed = args.seed + rep as u64;
                let base = instance.original_drawing();
                let outcome = match &external {
                    Some(d) => grasp::run_with_distances(&base, &cfg, d),
                    None => grasp::run(&base, &cfg),
                };
                let outcome = outcome.map(|trace| {
                    let record = SolutionRecord::from_drawing(
                        &name,
                        &label,
                        cfg.seed,
                        &trace.best,
                        trace.incumbents,
                    );
                    (record, trace.seconds, trace.iterations)
                });
                (rep, outcome)
            })
            .collect()
    });

    let mut manifest =
        String::from("instance,heuristic,rep,seed,crossings,seconds,iterations\n");
    let mut summaries = Vec::new();
    let mut best: Option<u64> = None;
    for (rep, outcome) in runs {
        let (record, seconds, iterations) = outcome.map_err(solver_failure)?;
        let sol_path = dir.join(format!("{name}_{label}_s{}.sol", record.seed));
        write_atomic(&sol_path, &write_solution(&record))?;
        manifest.push_str(&format!(
            "{name},{label},{rep},{},{},{seconds:.6},{iterations}\n",
            record.seed, record.crossings
        ));
        best = Some(best.map_or(record.crossings, |b| b.min(record.crossings)));
        summaries.push((rep, record.seed, record.crossings, iterations, seconds, sol_path));
    }
    let manifest_path = dir.join(format!("{name}_{label}_s{}_runs.csv", args.seed));
    write_atomic(&manifest_path, &manifest)?;

    let best = best.expect("at least one repetition");
    if args.json {
        let runs: Vec<_> = summaries
            .iter()
            .map(|(rep, seed, crossings, iterations, seconds, path)| {
                serde_json::json!({
                    "rep": rep,
                    "seed": seed,
                    "crossings": crossings,
                    "iterations": iterations,
                    "seconds": seconds,
                    "solution": path.to_string_lossy(),
                })
            })
            .collect();
        let summary = serde_json::json!({
            "instance": name,
            "heuristic": label,
            "best": best,
            "runs": runs,
            "manifest": manifest_path.to_string_lossy(),
        });
        println!("{summary}");
    } else {
        for (rep, seed, crossings, iterations, seconds, path) in &summaries {
            println!(
                "rep={rep} seed={seed} crossings={crossings} iterations={iterations} \
                 seconds={seconds:.6} solution={}",
                path.display()
            );
        }
        println!("best={best}");
    }
    Ok(0)
}

// ------------------------------------------------------------------ embed

#[derive(Args)]
struct EmbedArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = EmbeddingArg::Hope)]
    method: EmbeddingArg,
    /// Embedding dimensions (default: provider-specific).
    #[arg(long)]
    dims: Option<usize>,
    /// Decay factor of the similarity embedding.
    #[arg(long, default_value_t = 0.01)]
    beta: f64,
    /// Seed; `embed --seed S` writes exactly the embedding a guided
    /// `solve --seed S` computes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: `<instance>_<method>.emb`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a machine-readable summary on stdout.
    #[arg(long)]
    json: bool,
}

fn cmd_embed(args: &EmbedArgs) -> Result<u8, Failure> {
    if args.method == EmbeddingArg::External {
        return Err(Failure::usage(
            "embed computes embeddings; external is only a solve provider",
        ));
    }
    let instance = load_instance(&args.instance)?;
    let name = stem(&args.instance);
    let dims = match args.dims {
        Some(k) => DimensionSpec::Fixed(k),
        None => DimensionSpec::Auto,
    };
    let cfg = match args.method {
        EmbeddingArg::Spectral => EmbeddingConfig::Spectral { dimensions: dims },
        EmbeddingArg::Hope => EmbeddingConfig::Hope { dimensions: dims, beta: args.beta },
        EmbeddingArg::Node2vec => {
            let mut c = Node2VecConfig::default();
            if let Some(k) = args.dims {
                c.dimensions = k;
            }
            EmbeddingConfig::Node2Vec(c)
        }
        EmbeddingArg::External => unreachable!(),
    };
    let path = out_file(&args.out, &format!("{name}_{}.emb", args.method.name()));
    eprintln!(
        "cigdp embed: instance={name} method={} dims={} beta={} seed={} out={}",
        args.method.name(),
        args.dims.map_or("auto".to_string(), |k| k.to_string()),
        args.beta,
        args.seed,
        path.display()
    );

    // Stream 2 is the solver's embedding stream.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(2);
    let emb = embedding::compute(&instance.graph, &cfg, &mut rng)
        .map_err(|e| Failure::domain(e.to_string()))?;
    write_atomic(&path, &embedding::write_external(&emb))?;

    if args.json {
        let summary = serde_json::json!({
            "path": path.to_string_lossy(),
            "method": args.method.name(),
            "vertices": emb.num_vertices(),
            "dimensions": emb.dimensions(),
        });
        println!("{summary}");
    } else {
        println!(
            "wrote {} ({} vertices x {} dimensions)",
            path.display(),
            emb.num_vertices(),
            emb.dimensions()
        );
    }
    Ok(0)
}

// ------------------------------------------------------------ export-milp

#[derive(Args)]
struct ExportMilpArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Output file (default: `<instance>.lp`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the model statistics as JSON on stdout.
    #[arg(long)]
    json: bool,
}

fn cmd_export_milp(args: &ExportMilpArgs) -> Result<u8, Failure> {
    let instance = load_instance(&args.instance)?;
    let name = stem(&args.instance);
    let path = out_file(&args.out, &format!("{name}.lp"));
    eprintln!("cigdp export-milp: instance={name} out={}", path.display());

    let (lp, stats) = export_lp(&instance.graph, instance.dislocation);
    write_atomic(&path, &lp)?;

    if args.json {
        let summary = serde_json::json!({
            "path": path.to_string_lossy(),
            "crossing_vars": stats.crossing_vars,
            "order_vars": stats.order_vars,
            "position_vars": stats.position_vars,
            "binary_vars": stats.binary_vars,
            "exclusivity_rows": stats.exclusivity_rows,
            "transitivity_rows": stats.transitivity_rows,
            "link_rows_aligned": stats.link_rows_aligned,
            "link_rows_opposed": stats.link_rows_opposed,
            "position_link_rows": stats.position_link_rows,
            "original_order_fixings": stats.original_order_fixings,
        });
        println!("{summary}");
    } else {
        println!(
            "wrote {} ({} binary vars, {} crossing vars, {} rows)",
            path.display(),
            stats.binary_vars,
            stats.crossing_vars,
            stats.exclusivity_rows
                + stats.transitivity_rows
                + stats.link_rows_aligned
                + stats.link_rows_opposed
                + stats.position_link_rows
        );
    }
    Ok(0)
}

// ------------------------------------------------------------- bruteforce

#[derive(Args)]
struct BruteforceArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Abort when the product of per-layer ordering counts exceeds this.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Also write the optimal drawing as a solution file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Insert or update `instance,optimum` in this CSV.
    #[arg(long)]
    optima: Option<PathBuf>,
    /// Print a machine-readable summary on stdout.
    #[arg(long)]
    json: bool,
}

fn cmd_bruteforce(args: &BruteforceArgs) -> Result<u8, Failure> {
    let instance = load_instance(&args.instance)?;
    let name = stem(&args.instance);
    eprintln!("cigdp bruteforce: instance={name} cap={}", args.cap);

    let result = brute_force_optimum(&instance.graph, instance.dislocation, args.cap)
        .map_err(|e| Failure::domain(e.to_string()))?;

    let sol_path = match &args.out {
        Some(_) => {
            let record =
                SolutionRecord::from_drawing(&name, "bruteforce", 0, &result.drawing, Vec::new());
            let path = out_file(&args.out, "");
            write_atomic(&path, &write_solution(&record))?;
            Some(path)
        }
        None => None,
    };
    if let Some(csv) = &args.optima {
        let mut table: BTreeMap<String, String> = BTreeMap::new();
        if csv.exists() {
            for line in read_text(csv)?.lines().skip(1) {
                if let Some((inst, value)) = line.split_once(',') {
                    table.insert(inst.to_string(), value.to_string());
                }
            }
        }
        table.insert(name.clone(), result.crossings.to_string());
        let mut out = String::from("instance,optimum\n");
        for (inst, value) in &table {
            out.push_str(&format!("{inst},{value}\n"));
        }
        write_atomic(csv, &out)?;
    }

    if args.json {
        let summary = serde_json::json!({
            "instance": name,
            "optimum": result.crossings,
            "solution": sol_path.as_ref().map(|p| p.to_string_lossy().into_owned()),
        });
        println!("{summary}");
    } else {
        println!("optimum={} instance={name}", result.crossings);
    }
    Ok(0)
}

// --------------------------------------------------------------- evaluate

#[derive(Args)]
struct EvaluateArgs {
    /// Directory of `.sol` files plus optional `*_runs.csv` manifests.
    #[arg(long)]
    solutions: PathBuf,
    /// CSV of proven optima (`instance,optimum`).
    #[arg(long)]
    optima: Option<PathBuf>,
    /// Output directory (default: the solutions directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points on the profile threshold axis.
    #[arg(long, default_value_t = 50)]
    profile_steps: usize,
    /// Print a machine-readable summary on stdout.
    #[arg(long)]
    json: bool,
}

/// Mean of the values attached to each `(instance, heuristic)` cell.
fn cell_means(
    values: &BTreeMap<(String, String), Vec<f64>>,
) -> BTreeMap<(String, String), f64> {
    values
        .iter()
        .map(|(k, v)| (k.clone(), v.iter().sum::<f64>() / v.len() as f64))
        .collect()
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<u8, Failure> {
    let dir = &args.solutions;
    let out = args.out.clone().unwrap_or_else(|| dir.clone());
    eprintln!(
        "cigdp evaluate: solutions={} optima={} profile-steps={} out={}",
        dir.display(),
        args.optima
            .as_ref()
            .map_or("-".to_string(), |p| p.display().to_string()),
        args.profile_steps,
        out.display()
    );

    // Gather solution files and any run manifests with wall-clock totals.
    let mut sol_paths = Vec::new();
    let mut manifest_paths = Vec::new();
    let entries = fs::read_dir(dir)
        .map_err(|e| Failure::domain(format!("cannot read {}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::domain(format!("cannot read {}: {e}", dir.display())))?
            .path();
        let file = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        if file.ends_with(".sol") {
            sol_paths.push(path);
        } else if file.ends_with("_runs.csv") {
            manifest_paths.push(path);
        }
    }
    sol_paths.sort();
    manifest_paths.sort();
    if sol_paths.is_empty() {
        return Err(Failure::domain(format!(
            "no .sol files in {}",
            dir.display()
        )));
    }

    let mut seconds_by_run: BTreeMap<(String, String, u64), f64> = BTreeMap::new();
    for path in &manifest_paths {
        for (lno, line) in read_text(path)?.lines().enumerate().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Failure::domain(format!(
                    "{} line {}: expected 7 fields",
                    path.display(),
                    lno + 1
                )));
            }
            if fields[4].starts_with("error:") {
                continue;
            }
            let seed: u64 = fields[3].parse().map_err(|_| {
                Failure::domain(format!("{} line {}: bad seed", path.display(), lno + 1))
            })?;
            let secs: f64 = fields[5].parse().map_err(|_| {
                Failure::domain(format!("{} line {}: bad seconds", path.display(), lno + 1))
            })?;
            seconds_by_run.insert((fields[0].to_string(), fields[1].to_string(), seed), secs);
        }
    }

    let mut observations = Vec::new();
    for path in &sol_paths {
        let record = parse_solution(&read_text(path)?)
            .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
        let key = (record.instance.clone(), record.heuristic.clone(), record.seed);
        let seconds = seconds_by_run
            .get(&key)
            .copied()
            .or_else(|| record.trace.last().map(|p| p.seconds))
            .unwrap_or(0.0);
        observations.push(Observation {
            instance: record.instance,
            heuristic: record.heuristic,
            crossings: record.crossings,
            seconds,
            trace: record.trace,
        });
    }

    let mut optima = BTreeMap::new();
    if let Some(csv) = &args.optima {
        for (lno, line) in read_text(csv)?.lines().enumerate().skip(1) {
            let (inst, value) = line.split_once(',').ok_or_else(|| {
                Failure::domain(format!("{} line {}: expected 2 fields", csv.display(), lno + 1))
            })?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Failure::domain(format!("{} line {}: bad optimum", csv.display(), lno + 1))
            })?;
            optima.insert(inst.to_string(), value);
        }
    }

    let mut warnings = Vec::new();
    let (metrics, table) = eval::evaluate_observations(&observations, &optima, &mut warnings);
    write_atomic(&out.join("runs_metrics.csv"), &run_metrics_csv(&metrics))?;
    write_atomic(&out.join("summary.csv"), &metric_table_csv(&table))?;

    // Profiles: solution quality per cell, and the trace integral where
    // it exists.
    let mut gap_cells: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    let mut npi_cells: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for m in &metrics {
        let key = (m.instance.clone(), m.heuristic.clone());
        gap_cells.entry(key.clone()).or_default().push(m.crossings as f64);
        if let Some(v) = m.npi {
            npi_cells.entry(key).or_default().push(v);
        }
    }
    let mut outputs = vec![out.join("runs_metrics.csv"), out.join("summary.csv")];
    for (file, cells, title) in [
        ("profile_crossings", cell_means(&gap_cells), "crossings"),
        ("profile_npi", cell_means(&npi_cells), "normalized trace integral"),
    ] {
        if cells.is_empty() {
            continue;
        }
        let taus = tau_grid(&cells, args.profile_steps);
        let curves = eval::performance_profile(&cells, &taus, &mut warnings);
        write_atomic(&out.join(format!("{file}.csv")), &profile_csv(&curves))?;
        write_atomic(&out.join(format!("{file}.svg")), &profile_svg(&curves, title))?;
        outputs.push(out.join(format!("{file}.csv")));
        outputs.push(out.join(format!("{file}.svg")));
    }

    // Pairwise signed-rank tests over per-instance mean crossings.
    let crossings_means = cell_means(&gap_cells);
    let heuristics: BTreeSet<String> =
        crossings_means.keys().map(|(_, h)| h.clone()).collect();
    let heuristics: Vec<String> = heuristics.into_iter().collect();
    let mut wilcoxon = String::from("a,b,pairs,statistic,p_value,significant,method\n");
    for i in 0..heuristics.len() {
        for j in i + 1..heuristics.len() {
            let (a, b) = (&heuristics[i], &heuristics[j]);
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for ((inst, h), v) in &crossings_means {
                if h == a {
                    if let Some(w) = crossings_means.get(&(inst.clone(), b.clone())) {
                        xs.push(*v);
                        ys.push(*w);
                    }
                }
            }
            let row = match eval::wilcoxon_signed_rank(&xs, &ys) {
                Ok(WilcoxonOutcome::Tested {
                    statistic,
                    p_value,
                    significant,
                    pairs_used,
                    method,
                }) => format!(
                    "{a},{b},{pairs_used},{statistic},{p_value:.6},{significant},{method:?}\n"
                ),
                Ok(WilcoxonOutcome::NoTest) => format!("{a},{b},0,-,-,-,-\n"),
                Err(e) => return Err(Failure::domain(e.to_string())),
            };
            wilcoxon.push_str(&row);
        }
    }
    if heuristics.len() > 1 {
        write_atomic(&out.join("wilcoxon.csv"), &wilcoxon)?;
        outputs.push(out.join("wilcoxon.csv"));
    }

    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if args.json {
        let summary = serde_json::json!({
            "solutions": sol_paths.len(),
            "instances": observations
                .iter()
                .map(|o| o.instance.as_str())
                .collect::<BTreeSet<_>>()
                .len(),
            "heuristics": heuristics,
            "warnings": warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "outputs": outputs
                .iter()
                .map(|p| p.to_string_lossy().into_owned())
                .collect::<Vec<_>>(),
        });
        println!("{summary}");
    } else {
        println!(
            "scored {} runs across {} files; wrote {} outputs to {}",
            metrics.len(),
            sol_paths.len(),
            outputs.len(),
            out.display()
        );
    }
    Ok(if warnings.is_empty() { 0 } else { 3 })
}

// ------------------------------------------------------------------ render

#[derive(Args)]
struct RenderArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Solution to draw (default: the frozen original layout).
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Label every vertex with its id.
    #[arg(long)]
    labels: bool,
    #[arg(long, default_value_t = 90)]
    column_gap: u32,
    #[arg(long, default_value_t = 28)]
    row_gap: u32,
    /// Output file (default: `<instance>.svg` or `<solution>.svg`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_render(args: &RenderArgs) -> Result<u8, Failure> {
    let instance = load_instance(&args.instance)?;
    let name = stem(&args.instance);
    let default_name = match &args.solution {
        Some(p) => format!("{}.svg", stem(p)),
        None => format!("{name}.svg"),
    };
    let path = out_file(&args.out, &default_name);
    eprintln!(
        "cigdp render: instance={name} solution={} out={}",
        args.solution
            .as_ref()
            .map_or("-".to_string(), |p| p.display().to_string()),
        path.display()
    );

    let record = match &args.solution {
        Some(p) => {
            let record = parse_solution(&read_text(p)?)
                .map_err(|e| Failure::domain(format!("{}: {e}", p.display())))?;
            // The record must place exactly the instance's vertices.
            let g = &instance.graph;
            if record.layers.len() != g.num_layers() {
                return Err(Failure::domain(format!(
                    "{}: solution has {} layers, instance has {}",
                    p.display(),
                    record.layers.len(),
                    g.num_layers()
                )));
            }
            for (l, placed) in record.layers.iter().enumerate() {
                let got: BTreeSet<VertexId> = placed.iter().map(|&(v, _)| v).collect();
                let want: BTreeSet<VertexId> = g.layer(l).vertices().collect();
                if got != want {
                    return Err(Failure::domain(format!(
                        "{}: layer {} places the wrong vertex set",
                        p.display(),
                        l + 1
                    )));
                }
            }
            Some(record)
        }
        None => None,
    };
    let drawing = match &record {
        Some(r) => {
            let d = r.to_drawing(&instance);
            let report = d.check_feasibility();
            if !report.is_feasible() {
                return Err(Failure::domain(format!(
                    "solution violates the instance constraints: {report:?}"
                )));
            }
            if d.count_crossings() != r.crossings {
                eprintln!(
                    "warning: stored crossing count {} disagrees with the recount {}",
                    r.crossings,
                    d.count_crossings()
                );
            }
            d
        }
        None => instance.original_drawing(),
    };

    let opts = RenderOptions {
        column_gap: args.column_gap,
        row_gap: args.row_gap,
        labels: args.labels,
        ..RenderOptions::default()
    };
    write_atomic(&path, &render_svg(&drawing, &opts))?;
    println!("wrote {} ({} crossings)", path.display(), drawing.count_crossings());
    Ok(0)
}
