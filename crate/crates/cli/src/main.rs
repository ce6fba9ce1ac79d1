//! `hcwalk`: classical and quantum hitting times on embedded hypercubes,
//! single points, sweeps and figure data, as CSV.

mod figure;
mod plan;
mod run;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use figure::{FigureName, Scale};
use plan::{Engine, Kind, Mode, Point, SweepPlan, Template, Values};

#[derive(Parser)]
#[command(name = "hcwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact classical hitting time.
    Classical(PointArgs),
    /// Measured quantum walk on the reduced subspace.
    Quantum(PointArgs),
    /// Sweep one parameter (d, n, q, m or eps).
    Sweep(SweepArgs),
    /// Plot data for one of the figures, one CSV per curve.
    Figure(FigureArgs),
}

#[derive(Args, Debug, Clone)]
struct TopologyArgs {
    /// File of structured-text topologies, one per line
    /// (`kind=tails d=3 n=1 q=1 loops=false`).
    #[arg(long, conflicts_with_all = ["kind", "d", "n", "q", "m", "dims", "dims_equal", "mode"])]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Central cube dimension; a list or range when swept.
    #[arg(long)]
    d: Option<Values<usize>>,
    #[arg(long)]
    n: Option<Values<usize>>,
    #[arg(long)]
    q: Option<Values<usize>>,
    /// Concatenation levels, with all cubes of dimension --dims-equal.
    #[arg(long)]
    m: Option<Values<usize>>,
    /// Cube dimensions per level, e.g. 3,1,2.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Common cube dimension for --m (same as --d).
    #[arg(long, conflicts_with = "d")]
    dims_equal: Option<Values<usize>>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Pad with self-loops in the classical walk too (the quantum walk is
    /// always padded).
    #[arg(long)]
    loops: bool,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Quantum error threshold: stop at cumulative probability 1 - eps.
    #[arg(long, default_value = "1e-4")]
    eps: Values<f64>,
    /// Also run at eps/2 and require a log-gap below 0.1.
    #[arg(long)]
    verify_convergence: bool,
    /// Check each point against the explicit-graph oracles.
    #[arg(long)]
    oracle: bool,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Write the per-step hit probabilities of a single quantum point here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value = "both")]
    engine: Engine,
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[arg(value_enum)]
    name: FigureName,
    #[arg(long, value_enum, default_value = "desk")]
    scale: Scale,
    /// Directory for the curve files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
}

fn template(args: &TopologyArgs) -> Template {
    Template {
        kind: args.kind,
        d: args.d.clone().or_else(|| args.dims_equal.clone()),
        n: args.n.clone(),
        q: args.q.clone(),
        m: args.m.clone(),
        dims: args.dims.clone(),
        mode: args.mode,
        loops: args.loops,
    }
}

fn build_plan(topology: &TopologyArgs, run: &RunArgs, engine: Engine) -> Result<SweepPlan> {
    let (points, swept) = match &topology.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let mut points = Vec::new();
            for t in plan::read_config(&text)? {
                for &eps in &run.eps.0 {
                    points.push(Point {
                        topology: t.clone().with_self_loops(t.self_loops() || topology.loops),
                        eps,
                    });
                }
            }
            (points, None)
        }
        None => template(topology).expand(&run.eps)?,
    };
    Ok(SweepPlan {
        points,
        swept,
        engine,
        verify_convergence: run.verify_convergence,
        oracle: run.oracle,
    })
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        b = b.num_threads(j);
    }
    Ok(b.build()?)
}

fn execute(plan: &SweepPlan, run: &RunArgs) -> Result<bool> {
    let rows = thread_pool(run.jobs)?.install(|| run::evaluate_all(&plan.points, plan.into()));
    match &run.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            run::write_rows(BufWriter::new(file), &rows)?
        }
        None => run::write_rows(io::stdout().lock(), &rows)?,
    }
    for row in rows.iter().filter(|r| !r.ok()) {
        eprintln!("point failed: {}: {}", row.topology, row.error.as_deref().unwrap_or(""));
    }
    Ok(rows.iter().all(run::Row::ok))
}

fn single(args: &PointArgs, engine: Engine) -> Result<bool> {
    let plan = build_plan(&args.topology, &args.run, engine)?;
    if plan.swept.is_some() {
        bail!("{} takes a single point; use `hcwalk sweep` for lists", match engine {
            Engine::Classical => "classical",
            _ => "quantum",
        });
    }
    if let Some(path) = &args.trace {
        if engine != Engine::Quantum || plan.points.len() != 1 {
            bail!("--trace needs exactly one quantum point");
        }
        let p = &plan.points[0];
        run::write_trace(path, &p.topology, p.eps)?;
    }
    execute(&plan, &args.run)
}

fn figure(args: &FigureArgs) -> Result<bool> {
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let pool = thread_pool(args.jobs)?;
    let mut all_ok = true;
    for curve in figure::curves(args.name, args.scale) {
        let (path, ok) = pool.install(|| curve.write(&args.out))?;
        eprintln!("wrote {} ({} points)", path.display(), curve.len());
        all_ok &= ok;
    }
    Ok(all_ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classical(a) => single(a, Engine::Classical),
        Command::Quantum(a) => single(a, Engine::Quantum),
        Command::Sweep(a) => build_plan(&a.topology, &a.run, a.engine).and_then(|p| execute(&p, &a.run)),
        Command::Figure(a) => figure(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
