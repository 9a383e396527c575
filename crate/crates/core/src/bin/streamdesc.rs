use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use streamdesc::compare::{
    descriptor_distance, load_descriptors, write_descriptors, Descriptor, Format, Method,
};
use streamdesc::harness::{
    compute_descriptors, cross_validate, error_vs_budget, exact_descriptors,
    load_benchmark_dataset, write_error_table, BatchConfig, BudgetSpec, CvConfig, Dataset,
};
use streamdesc::oracle::{Oracle, DEFAULT_ORACLE_LIMIT};
use streamdesc::{Error, Result};

/// Streaming graph descriptors under a fixed edge budget.
#[derive(Parser, Debug)]
#[command(name = "streamdesc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate descriptors in one pass over each graph's edge stream.
    Descriptor(DescriptorArgs),
    /// Exact descriptors from full subgraph enumeration.
    Exact(ExactArgs),
    /// Pairwise Canberra distances between two descriptor files.
    Distance(DistanceArgs),
    /// 1-NN cross-validated accuracy on a labelled dataset.
    Classify(ClassifyArgs),
    /// Experiments over a dataset.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Mean Canberra error against exact descriptors per budget fraction.
    ErrorVsBudget(ErrorVsBudgetArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Edge list file, one `u v` pair per line.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Directory with `<name>_A.txt`, `<name>_graph_indicator.txt` and
    /// `<name>_graph_labels.txt`.
    #[arg(long)]
    dataset: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BudgetArgs {
    /// Budget as a fraction of each graph's edge count, in (0, 1].
    #[arg(long)]
    budget: Option<f64>,

    /// Budget as a fixed number of edges.
    #[arg(long)]
    budget_abs: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Output format; inferred from the output extension when omitted.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct DescriptorArgs {
    #[arg(long)]
    method: Method,

    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    budget: BudgetArgs,

    /// Independent estimator replicas averaged per graph.
    #[arg(long, default_value_t = 1)]
    workers: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    method: Method,

    #[command(flatten)]
    input: InputArgs,

    /// Seed for stream preprocessing.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Largest vertex count accepted by exact enumeration.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: usize,

    #[arg(long)]
    threads: Option<usize>,

    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    a: PathBuf,
    b: PathBuf,

    /// Format of both inputs; inferred from each extension when omitted.
    #[arg(long)]
    format: Option<Format>,

    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    method: Method,

    /// Labelled dataset directory.
    #[arg(long)]
    dataset: PathBuf,

    #[command(flatten)]
    budget: BudgetArgs,

    #[arg(long, default_value_t = 1)]
    workers: usize,

    #[arg(long, default_value_t = 10)]
    folds: usize,

    #[arg(long, default_value_t = 10)]
    repeats: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long)]
    threads: Option<usize>,

    /// Report output file (default: stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ErrorVsBudgetArgs {
    #[arg(long)]
    method: Method,

    #[command(flatten)]
    input: InputArgs,

    /// Comma-separated budget fractions.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5")]
    budgets: Vec<f64>,

    #[arg(long, default_value_t = 20)]
    trials: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: usize,

    #[arg(long)]
    threads: Option<usize>,

    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self, seed: u64) -> Result<Dataset> {
        match (&self.input, &self.dataset) {
            (Some(path), _) => Dataset::from_edge_list(path, seed),
            (_, Some(dir)) => load_benchmark_dataset(dir, seed),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

impl BudgetArgs {
    fn spec(&self) -> Result<BudgetSpec> {
        match (self.budget, self.budget_abs) {
            (Some(f), _) if f > 0.0 && f <= 1.0 => Ok(BudgetSpec::Fraction(f)),
            (Some(f), _) => Err(Error::InvalidArgument(format!(
                "--budget {f} outside (0, 1]"
            ))),
            (_, Some(b)) => Ok(BudgetSpec::Absolute(b)),
            (None, None) => unreachable!("clap requires one budget"),
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn output_format(out: &OutputArgs) -> Format {
    out.format
        .or_else(|| out.output.as_deref().map(Format::from_path))
        .unwrap_or(Format::Csv)
}

/// Writes the successful descriptors and fails if any graph failed.
fn emit(results: Vec<Result<Descriptor>>, method: Method, out: &OutputArgs) -> Result<()> {
    let mut descs = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(d) => descs.push(d),
            Err(e) => {
                log::error!("graph {i}: {e}");
                failed += 1;
            }
        }
    }
    let w = open_output(out.output.as_deref())?;
    write_descriptors(w, method, &descs, output_format(out))?;
    if failed > 0 {
        return Err(Error::Dataset(format!("{failed} graph(s) failed")));
    }
    Ok(())
}

fn descriptor(args: DescriptorArgs) -> Result<()> {
    let ds = args.input.load(args.seed)?;
    let cfg = BatchConfig {
        method: args.method,
        budget: args.budget.spec()?,
        replicas: args.workers,
        seed: args.seed,
        threads: args.threads,
    };
    log::info!("{}: {} graph(s), {:?}", ds.name, ds.len(), cfg.budget);
    emit(compute_descriptors(&ds, &cfg), args.method, &args.out)
}

fn exact(args: ExactArgs) -> Result<()> {
    let ds = args.input.load(args.seed)?;
    let oracle = Oracle::new(args.oracle_limit);
    emit(
        exact_descriptors(&ds, args.method, &oracle, args.threads),
        args.method,
        &args.out,
    )
}

fn distance(args: DistanceArgs) -> Result<()> {
    let load = |p: &Path| load_descriptors(p, args.format.unwrap_or_else(|| Format::from_path(p)));
    let (a, b) = (load(&args.a)?, load(&args.b)?);
    let mut w = csv::Writer::from_writer(open_output(args.output.as_deref())?);
    let csv_err = |e: csv::Error| Error::io("<output>", e.into());
    w.write_record(["a_graph_id", "b_graph_id", "distance"])
        .map_err(csv_err)?;
    for x in &a {
        for y in &b {
            let d = descriptor_distance(x, y)?;
            w.write_record([
                x.graph_id.to_string(),
                y.graph_id.to_string(),
                d.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let ds = load_benchmark_dataset(&args.dataset, args.seed)?;
    let cfg = BatchConfig {
        method: args.method,
        budget: args.budget.spec()?,
        replicas: args.workers,
        seed: args.seed,
        threads: args.threads,
    };
    let descs = compute_descriptors(&ds, &cfg)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let cv = CvConfig {
        folds: args.folds,
        repeats: args.repeats,
        seed: args.seed,
    };
    let report = cross_validate(&descs, &ds.labels, cv)?;
    log::info!(
        "{} {}: accuracy {:.4} ± {:.4}",
        ds.name,
        args.method,
        report.mean_accuracy,
        report.std_accuracy
    );
    let mut w = open_output(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Error::io("<output>", e.into()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io("<output>", e))
}

fn error_vs_budget_cmd(args: ErrorVsBudgetArgs) -> Result<()> {
    let ds = args.input.load(args.seed)?;
    let rows = error_vs_budget(
        &ds,
        args.method,
        &args.budgets,
        args.trials,
        args.seed,
        &Oracle::new(args.oracle_limit),
        args.threads,
    )?;
    write_error_table(open_output(args.output.as_deref())?, &rows)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Descriptor(a) => descriptor(a),
        Command::Exact(a) => exact(a),
        Command::Distance(a) => distance(a),
        Command::Classify(a) => classify(a),
        Command::Experiment(Experiment::ErrorVsBudget(a)) => error_vs_budget_cmd(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 1 })
        }
    }
}
