use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polya_contact::battery::{run_validation_battery, Scale, CHECK_IDS, DEFAULT_SEED};
use polya_contact::config::{ExperimentConfig, ExperimentKind, TimeSpec};
use polya_contact::experiments::{self, simulate_graph, write_report, SimulateSpec};
use polya_contact::formats::{
    format_graph, format_tree, format_weights, histogram_csv, read_graph, write_text, Header, TreeHeader,
};
use polya_contact::rng::{replica_rng, tag};
use polya_contact::{Error, Result};
use polya_contact_core::graphgen::{build_polya_graph, build_sequential_graph, sample_weights};
use polya_contact_core::locallimit::{sample_ppt, DEFAULT_DEGREE_CAP};
use polya_contact_core::Constants;

#[derive(Parser)]
#[command(name = "polya-contact", version, about = "Preferential attachment graphs and the contact process")]
struct Cli {
    /// Master seed; every replica stream is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// JSON experiment config; command-line options override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it in PAGRAPH format.
    Gen(GenArgs),
    /// Run the contact process on a graph file.
    Simulate(SimulateArgs),
    /// Density experiment at one or more lambdas.
    Density(ExperimentArgs),
    /// Lambda sweep with scaling fits.
    Sweep(ExperimentArgs),
    /// Sample Pólya-point trees and write them in PPTREE format.
    Tree(TreeArgs),
    /// Escape-probability sweep on Pólya-point trees.
    Escape(ExperimentArgs),
    /// Star survival scaling.
    Star(ExperimentArgs),
    /// Lit transfer between two stars joined by a path.
    Lit(ExperimentArgs),
    /// Run the validation battery.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Urn,
    Sequential,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "urn")]
    method: Method,
    /// Also write the urn weights (urn method only).
    #[arg(long)]
    weights: bool,
    /// Also write the degree histogram as CSV.
    #[arg(long)]
    histogram: bool,
    /// Output file (default: <out-dir>/graph.pagraph).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Graph file in PAGRAPH format.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lambda: f64,
    /// Time horizon.
    #[arg(long)]
    t: f64,
    /// `full`, `single:<v>` or `set:<v>,<v>,...` with 0-based vertices.
    #[arg(long, default_value = "full")]
    init: String,
    #[arg(long, default_value_t = 1)]
    replicas: usize,
    #[arg(long, default_value_t = 2_000_000_000)]
    event_cap: u64,
    /// Comma-separated observation times; `t` is always observed.
    #[arg(long, value_delimiter = ',')]
    observe: Vec<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Graph size (density and sweep).
    #[arg(long)]
    n: Option<usize>,
    /// Ball radius (escape).
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    degree_cap: Option<u64>,
    /// Comma-separated lambda grid.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Fixed observation time or horizon.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    event_cap: Option<u64>,
    /// Comma-separated star sizes (star and lit).
    #[arg(long, value_delimiter = ',')]
    leaf_counts: Option<Vec<u64>>,
    /// Path length between the two star centres (lit).
    #[arg(long)]
    distance: Option<usize>,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Smaller sample sizes; verdicts are indicative only.
    #[arg(long)]
    quick: bool,
    /// Comma-separated check ids (default: all).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Gen(args) => gen(cli, args, seed),
        Command::Simulate(args) => simulate(cli, args, seed),
        Command::Tree(args) => tree(cli, args, seed),
        Command::Check(args) => check(cli, args, seed),
        Command::Density(args) => experiment(cli, args, ExperimentKind::Density),
        Command::Sweep(args) => experiment(cli, args, ExperimentKind::LambdaSweep),
        Command::Escape(args) => experiment(cli, args, ExperimentKind::EscapeSweep),
        Command::Star(args) => experiment(cli, args, ExperimentKind::StarScaling),
        Command::Lit(args) => experiment(cli, args, ExperimentKind::LitTransfer),
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn gen(cli: &Cli, args: &GenArgs, seed: u64) -> Result<ExitCode> {
    let c = Constants::new(args.m, args.alpha)?;
    let mut rng = replica_rng(seed, tag("gen"), 0);
    let header = Header { n: args.n, m: Some(args.m), alpha: Some(args.alpha), seed: Some(seed) };
    let output = args.output.clone().unwrap_or_else(|| cli.out_dir.join("graph.pagraph"));
    let mut written = vec![output.clone()];
    let graph = match args.method {
        Method::Urn => {
            let w = sample_weights(args.n, &c, &mut rng)?;
            if args.weights {
                let path = output.with_extension("paweights");
                write_text(&path, &format_weights(&w, &header))?;
                written.push(path);
            }
            build_polya_graph(&w, &c, &mut rng)
        }
        Method::Sequential => {
            if args.weights {
                return Err(Error::Config("--weights needs --method urn".into()));
            }
            build_sequential_graph(args.n, &c, &mut rng)?
        }
    };
    write_text(&output, &format_graph(&graph, &header))?;
    if args.histogram {
        let path = output.with_extension("degrees.csv");
        write_text(&path, &histogram_csv(&graph.degree_histogram()))?;
        written.push(path);
    }
    report_written(&written);
    Ok(ExitCode::SUCCESS)
}

fn simulate(cli: &Cli, args: &SimulateArgs, seed: u64) -> Result<ExitCode> {
    let (_, graph) = read_graph(&args.graph)?;
    let mut observe = args.observe.clone();
    if observe.last() != Some(&args.t) {
        observe.push(args.t);
    }
    let spec = SimulateSpec {
        lambda: args.lambda,
        t_max: args.t,
        event_cap: args.event_cap,
        observe_times: observe,
        init: args.init.clone(),
        replicas: args.replicas,
        seed,
    };
    let report = simulate_graph(&graph, &spec)?;
    println!(
        "survival at t={}: {:.4} (s.e. {:.4}), density {:.5}, capped {}",
        args.t, report.survival.mean, report.survival.std_error, report.density.mean, report.capped_runs
    );
    report_written(&write_report(&cli.out_dir, &report)?);
    Ok(ExitCode::SUCCESS)
}

fn tree(cli: &Cli, args: &TreeArgs, seed: u64) -> Result<ExitCode> {
    let c = Constants::new(args.m, args.alpha)?;
    let header = TreeHeader { m: args.m, alpha: args.alpha, depth: args.depth, degree_cap: args.degree_cap, seed: Some(seed) };
    let mut written = Vec::new();
    let mut truncated = 0;
    for i in 0..args.count {
        let t = sample_ppt(&c, args.depth, args.degree_cap, &mut replica_rng(seed, tag("tree"), i as u64))?;
        truncated += usize::from(t.truncated_nodes() > 0);
        let path = cli.out_dir.join(format!("tree_{i}.pptree"));
        write_text(&path, &format_tree(&t, &header))?;
        written.push(path);
    }
    println!("{} trees, {truncated} truncated at the degree cap", args.count);
    report_written(&written);
    Ok(ExitCode::SUCCESS)
}

fn check(cli: &Cli, args: &CheckArgs, seed: u64) -> Result<ExitCode> {
    let ids: Vec<u32> = args.only.clone().unwrap_or_else(|| CHECK_IDS.collect());
    if let Some(bad) = ids.iter().find(|id| !CHECK_IDS.contains(id)) {
        return Err(Error::Config(format!("no check with id {bad}")));
    }
    let scale = if args.quick { Scale::Quick } else { Scale::Full };
    let scratch = cli.out_dir.join("battery_scratch");
    let report = run_validation_battery(seed, scale, &ids, Some(&scratch));
    for c in &report.checks {
        println!("{}", c.summary_line());
    }
    let path = cli.out_dir.join("battery.json");
    write_text(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    println!("wrote {}", path.display());
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_config(path: Option<&Path>, kind: ExperimentKind) -> Result<ExperimentConfig> {
    match path {
        None => Ok(ExperimentConfig::preset(kind)),
        Some(p) => {
            let text = polya_contact::formats::read_text(p)?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            if cfg.kind != kind {
                return Err(Error::Config(format!("{}: config kind {:?} does not match the subcommand", p.display(), cfg.kind)));
            }
            Ok(cfg)
        }
    }
}

fn experiment(cli: &Cli, args: &ExperimentArgs, kind: ExperimentKind) -> Result<ExitCode> {
    let mut cfg = load_config(cli.config.as_deref(), kind)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    macro_rules! apply {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                cfg.$field = v;
            }
        )*};
    }
    apply!(m, alpha, n, radius, degree_cap, lambdas, replicas, event_cap, leaf_counts, distance);
    if let Some(t) = args.t {
        cfg.time = TimeSpec::Fixed { t };
    }
    cfg.validate()?;
    if args.print_config {
        println!("{}", cfg.to_json());
        return Ok(ExitCode::SUCCESS);
    }
    report_written(&experiments::run_and_write(&cfg, &cli.out_dir)?);
    Ok(ExitCode::SUCCESS)
}
