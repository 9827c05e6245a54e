//! Command-line front end: `varadhan`, `slope`, `metrics`, `connectivity`
//! and `sample`.
//!
//! Every command prints a JSON summary on stdout and writes its artifacts
//! into `--out`. Exit codes: 0 success, 1 a `--expect` check failed, 2 bad
//! input, 3 math-domain failure, 4 I/O.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::connectivity::{
    block_distance_matrix, connectivity_report, default_epsilon, laplacian_kernel_dim,
    support_graph, Hops, KernelDim,
};
use crate::error::{Error, Result};
use crate::graphon::Graphon;
use crate::io::{load_spec, write_csv, write_matrix_csv, write_pgm, Metadata};
use crate::linalg::TaylorFamily;
use crate::metrics::{communicability_matrix, cut_norm, Embedder};
use crate::partition::IntervalSet;
use crate::sampler::{
    compare_with_varadhan, empirical_distance_profile, sample_graph, RNG_ALGORITHM,
};
use crate::varadhan::{
    delta_sets_with, distance_field_with, general_varadhan_slope, varadhan_slope, TimeGrid,
    SLOPE_TOLERANCE,
};

/// Exit code for a failed `--expect` check.
pub const EXPECT_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "graphon",
    version,
    about = "Shortest-path and communicability distances on graphons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointwise Varadhan distance field: CSV, PGM heatmap and summary.
    Varadhan(VaradhanArgs),
    /// Heat-kernel slope between two sets, or per block pair for a
    /// weighted transform.
    Slope(SlopeArgs),
    /// Communicability distances and embedding, cut norm.
    Metrics(MetricsArgs),
    /// Connectedness, diameter and Laplacian kernel.
    Connectivity(ConnectivityArgs),
    /// Sample W-random graphs and compare their distances with d_W.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Graphon spec (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Grid resolution for analytic builtins and heatmaps.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Support threshold; defaults to 1e-12 for step and 1e-9 for grid graphons.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Omit timestamps so that identical runs produce identical files.
    #[arg(long)]
    pub reproducible: bool,
    /// Proceed on disconnected graphons instead of failing.
    #[arg(long)]
    pub allow_disconnected: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VaradhanArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Transform {
    Exp,
    Resolvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Weights {
    Unit,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct SlopeArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// First set, e.g. `0..0.25,0.5..0.6`.
    #[arg(long, required_unless_present = "transform")]
    pub u: Option<String>,
    /// Second set.
    #[arg(long, required_unless_present = "transform")]
    pub v: Option<String>,
    /// Log-spaced times `hi:lo:k`.
    #[arg(long, default_value = "1e-3:1e-5:8")]
    pub tgrid: String,
    /// Fail with exit code 1 unless the slope is within `--tolerance` of this.
    #[arg(long)]
    pub expect: Option<f64>,
    #[arg(long, default_value_t = SLOPE_TOLERANCE)]
    pub tolerance: f64,
    /// Fit `log |f(Lt)_ij|` for every block pair, `L` a weighted adjacency.
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
    #[arg(long, value_enum, default_value = "unit")]
    pub weights: Weights,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Sets for the communicability matrix and embedding; repeatable.
    /// Defaults to the blocks of the partition.
    #[arg(long = "set")]
    pub sets: Vec<String>,
    /// Embedding truncation; defaults to all eigenpairs.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConnectivityArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Vertices per sampled graph.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Number of graphs; trial `k` uses seed `seed + k`.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Varadhan(a) => cmd_varadhan(a),
        Command::Slope(a) => cmd_slope(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Connectivity(a) => cmd_connectivity(a),
        Command::Sample(a) => cmd_sample(a),
    }
}

struct Context {
    graphon: Graphon,
    epsilon: f64,
    sha256: String,
    out: PathBuf,
}

impl Context {
    fn load(run: &RunConfig) -> Result<Self> {
        if run.grid == 0 {
            return Err(Error::invalid("--grid must be positive"));
        }
        if let Some(e) = run.epsilon {
            if !(0.0..1.0).contains(&e) {
                return Err(Error::invalid(format!("--epsilon {e} must lie in [0, 1)")));
            }
        }
        let loaded = load_spec(&run.input)?;
        let graphon = loaded.spec.build(run.grid)?;
        let epsilon = run.epsilon.unwrap_or_else(|| default_epsilon(&graphon));
        std::fs::create_dir_all(&run.out)?;
        Ok(Context {
            graphon,
            epsilon,
            sha256: loaded.sha256,
            out: run.out.clone(),
        })
    }

    fn metadata(&self, command: &str, args: &impl Serialize, run: &RunConfig) -> Result<Metadata> {
        Ok(Metadata::new(
            command,
            Some(self.sha256.clone()),
            serde_json::to_value(args)?,
            run.reproducible,
        ))
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    fn write_json(&self, name: &str, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(self.out.join(name), text)?;
        Ok(())
    }

    fn labels(&self) -> Vec<String> {
        let n = self.graphon.values().nrows();
        match &self.graphon {
            Graphon::Step(_) => (0..n).map(|i| i.to_string()).collect(),
            Graphon::Grid(_) => (0..n)
                .map(|i| ((i as f64 + 0.5) / n as f64).to_string())
                .collect(),
        }
    }

    fn require_connected(&self, run: &RunConfig, connected: bool) -> Result<()> {
        if connected || run.allow_disconnected {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }
}

fn emit(summary: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(summary)?);
    Ok(())
}

fn parse_set(s: &str) -> Result<IntervalSet> {
    s.parse()
}

fn cmd_varadhan(args: &VaradhanArgs) -> Result<i32> {
    let run = &args.run;
    let ctx = Context::load(run)?;
    let field = distance_field_with(&ctx.graphon, ctx.epsilon);
    ctx.require_connected(run, field.is_connected())?;
    let meta = ctx.metadata("varadhan", args, run)?;
    let d = field.distances();
    let n = d.len();
    let rows: Vec<Vec<String>> = d
        .rows()
        .map(|r| r.iter().map(Hops::to_string).collect())
        .collect();
    write_csv(
        ctx.create("distance.csv")?,
        Some(&meta),
        "index",
        &ctx.labels(),
        &rows,
    )?;

    // heatmap: block fields are rendered at --grid pixels, grids natively
    let pixels = if ctx.graphon.is_grid() { n } else { run.grid };
    let cell: Vec<usize> = (0..pixels)
        .map(|a| field.partition().block_of((a as f64 + 0.5) / pixels as f64))
        .collect::<Result<_>>()?;
    let top = d
        .rows()
        .flatten()
        .filter_map(|h| h.finite())
        .max()
        .unwrap_or(0);
    let unreachable_level = top + 1;
    let maxval = if d.max().is_finite() {
        top
    } else {
        unreachable_level
    };
    let mut levels = Vec::with_capacity(pixels * pixels);
    for &i in &cell {
        for &j in &cell {
            levels.push(d.get(i, j).finite().unwrap_or(unreachable_level));
        }
    }
    let comment = format!(
        "{}\nlevel = walk distance; {unreachable_level} marks unreachable pairs",
        serde_json::to_string(&meta)?
    );
    write_pgm(
        ctx.create("distance.pgm")?,
        Some(&comment),
        pixels,
        pixels,
        maxval,
        &levels,
    )?;

    let summary = json!({
        "metadata": meta,
        "representation": field.representation(),
        "blocks": n,
        "epsilon": ctx.epsilon,
        "connected": field.is_connected(),
        "diameter": field.layer_count(),
        "layer_measures": field.layer_measures(),
    });
    ctx.write_json("summary.json", &summary)?;
    emit(&summary)?;
    Ok(0)
}

fn cmd_slope(args: &SlopeArgs) -> Result<i32> {
    let run = &args.run;
    let ctx = Context::load(run)?;
    let grid: TimeGrid = args.tgrid.parse()?;
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(Error::invalid("--tolerance must be positive"));
    }
    let meta = ctx.metadata("slope", args, run)?;
    if let Some(transform) = args.transform {
        return slope_transform(args, &ctx, meta, transform, &grid);
    }
    let (u, v) = (
        parse_set(args.u.as_deref().unwrap_or_default())?,
        parse_set(args.v.as_deref().unwrap_or_default())?,
    );
    let field = distance_field_with(&ctx.graphon, ctx.epsilon);
    let delta = delta_sets_with(&field, &u, &v)?;
    let estimate = varadhan_slope(&ctx.graphon, &u, &v, &grid)?;
    let pass = args
        .expect
        .map(|x| (estimate.slope - x).abs() <= args.tolerance);
    let summary = json!({
        "metadata": meta,
        "u": u.to_string(),
        "v": v.to_string(),
        "estimate": estimate,
        "integral": estimate.is_integral(),
        "delta": delta,
        "expect": args.expect,
        "pass": pass,
    });
    ctx.write_json("slope.json", &summary)?;
    emit(&summary)?;
    Ok(if pass == Some(false) {
        EXPECT_FAILED
    } else {
        0
    })
}

#[derive(Serialize)]
struct PairSlope {
    i: usize,
    j: usize,
    distance: Hops,
    slope: Option<f64>,
    residual: Option<f64>,
    pass: bool,
}

fn slope_transform(
    args: &SlopeArgs,
    ctx: &Context,
    meta: Metadata,
    transform: Transform,
    grid: &TimeGrid,
) -> Result<i32> {
    let s = support_graph(&ctx.graphon, ctx.epsilon);
    let n = s.len();
    let adjacency = DMatrix::from_fn(n, n, |i, j| if s.has_edge(i, j) { 1.0 } else { 0.0 });
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (weights, diagonal) = match args.weights {
        Weights::Unit => (adjacency.clone(), vec![0.0; n]),
        Weights::Random => {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    if adjacency[(i, j)] != 0.0 {
                        let x = rng.random_range(0.5..1.5);
                        m[(i, j)] = x;
                        m[(j, i)] = x;
                    }
                }
            }
            let d = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            (m, d)
        }
    };
    let family = match transform {
        Transform::Exp => TaylorFamily::exp(),
        Transform::Resolvent => TaylorFamily::resolvent(),
    };
    let distances = block_distance_matrix(&s);
    let mut pairs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let distance = if i == j {
                Hops::Finite(0)
            } else {
                distances.get(i, j)
            };
            let fit = general_varadhan_slope(&adjacency, &weights, &diagonal, &family, i, j, grid);
            let pair = match (fit, distance) {
                (Ok(e), Hops::Finite(d)) => PairSlope {
                    i,
                    j,
                    distance,
                    slope: Some(e.slope),
                    residual: Some(e.residual),
                    pass: (e.slope - d as f64).abs() < args.tolerance,
                },
                (Ok(e), Hops::Unreachable) => PairSlope {
                    i,
                    j,
                    distance,
                    slope: Some(e.slope),
                    residual: Some(e.residual),
                    pass: false,
                },
                (Err(Error::NonPositive { .. }), _) => PairSlope {
                    i,
                    j,
                    distance,
                    slope: None,
                    residual: None,
                    pass: distance == Hops::Unreachable,
                },
                (Err(e), _) => return Err(e),
            };
            pairs.push(pair);
        }
    }
    let pass = pairs.iter().all(|p| p.pass);
    let summary = json!({
        "metadata": meta,
        "transform": family.name(),
        "weights": args.weights,
        "rng": RNG_ALGORITHM,
        "pairs": pairs,
        "pass": pass,
    });
    ctx.write_json("slope.json", &summary)?;
    emit(&summary)?;
    Ok(if pass { 0 } else { EXPECT_FAILED })
}

fn cmd_metrics(args: &MetricsArgs) -> Result<i32> {
    let run = &args.run;
    let ctx = Context::load(run)?;
    let meta = ctx.metadata("metrics", args, run)?;
    let step = ctx.graphon.to_step();
    let sets: Vec<IntervalSet> = if args.sets.is_empty() {
        (0..step.len())
            .map(|i| IntervalSet::block(step.partition(), i))
            .collect()
    } else {
        args.sets
            .iter()
            .map(|s| parse_set(s))
            .collect::<Result<_>>()?
    };
    let labels: Vec<String> = sets.iter().map(IntervalSet::to_string).collect();
    let dc = communicability_matrix(&step, &sets)?;
    write_matrix_csv(
        ctx.create("communicability.csv")?,
        Some(&meta),
        &labels,
        &dc,
    )?;

    let embedder = Embedder::new(&step, args.k.unwrap_or(step.len()))?;
    let embeddings: Vec<Value> = sets
        .iter()
        .zip(&labels)
        .map(|(s, l)| json!({ "set": l, "embedding": embedder.embed(s) }))
        .collect();
    ctx.write_json(
        "embedding.json",
        &json!({ "metadata": meta, "sets": embeddings }),
    )?;

    let cut = match cut_norm(&step) {
        Ok(v) => json!({ "cut_norm": v }),
        Err(e @ Error::TooManyBlocks { .. }) => json!({ "cut_norm": null, "error": e.to_string() }),
        Err(e) => return Err(e),
    };
    ctx.write_json("cut.json", &json!({ "metadata": meta, "report": cut }))?;

    let summary = json!({
        "metadata": meta,
        "sets": labels,
        "communicability": dc.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
        "cut": cut,
    });
    emit(&summary)?;
    Ok(0)
}

fn cmd_connectivity(args: &ConnectivityArgs) -> Result<i32> {
    let run = &args.run;
    let ctx = Context::load(run)?;
    let meta = ctx.metadata("connectivity", args, run)?;
    let report = connectivity_report(&ctx.graphon, ctx.epsilon);
    let kernel = match &ctx.graphon {
        Graphon::Step(s) => Some(laplacian_kernel_dim(s, 1e-9)),
        Graphon::Grid(_) => None,
    };
    let summary = json!({
        "metadata": meta,
        "connected": report.connected,
        "diameter": report.diameter,
        "components": report.components,
        "epsilon": report.epsilon,
        "approximate": report.approximate,
        "laplacian_kernel_dim": kernel.map(|k| match k {
            KernelDim::Finite(d) => json!(d),
            KernelDim::Infinite => json!("infinite"),
        }),
    });
    ctx.write_json("connectivity.json", &summary)?;
    emit(&summary)?;
    Ok(0)
}

fn cmd_sample(args: &SampleArgs) -> Result<i32> {
    let run = &args.run;
    let ctx = Context::load(run)?;
    if args.trials == 0 {
        return Err(Error::invalid("--trials must be positive"));
    }
    let meta = ctx.metadata("sample", args, run)?;
    let g = sample_graph(&ctx.graphon, args.n, args.seed)?;
    g.write_edge_list(ctx.create("edges.txt")?)?;
    let profile = empirical_distance_profile(&g);
    let comparison = match compare_with_varadhan(&ctx.graphon, args.n, args.trials, args.seed) {
        Ok(c) => Some(c),
        Err(Error::Disconnected) if run.allow_disconnected => None,
        Err(e) => return Err(e),
    };
    let summary = json!({
        "metadata": meta,
        "rng": RNG_ALGORITHM,
        "edges": g.edge_count(),
        "profile": profile,
        "comparison": comparison,
    });
    ctx.write_json("report.json", &summary)?;
    emit(&summary)?;
    Ok(0)
}

/// Convenience for tests and examples: runs a command line and returns the
/// exit code.
pub fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut full: Vec<OsString> = vec!["graphon".into()];
    full.extend(args.iter().map(OsString::from));
    full.push("--out".into());
    full.push(dir.as_os_str().to_owned());
    run(full)
}
