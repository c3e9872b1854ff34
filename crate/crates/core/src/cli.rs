//! Command-line driver. Effective configuration goes to stderr as `# key=value`
//! lines; results go to stdout or the requested files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::check::{self, CheckOptions};
use crate::error::{Error, Result};
use crate::exec;
use crate::experiments::{self, table_csv, ExperimentConfig, ExperimentKind, RunRecord};
use crate::graphs::{self, PartSizes, PartitionSpec, Seed};
use crate::laws::{self, MpLaw, SemicircleLaw};
use crate::matrix::SymMatrix;
use crate::spectra;

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "graph-energy",
    version,
    about = "Random graph spectra and graph energy"
)]
pub struct Cli {
    /// Print numbers with full precision instead of 10 significant digits.
    #[arg(long, global = true)]
    pub full_precision: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a random graph and write it as a matrix or edge list.
    Gen(GenArgs),
    /// Print the eigenvalues of a graph, one per line.
    Spectrum(SpectrumArgs),
    /// Print the energy of a graph.
    Energy(EnergyArgs),
    /// Evaluate limiting laws and energy coefficients.
    Law(LawArgs),
    /// Print the bipartite energy table as CSV.
    Table(TableArgs),
    /// Run a Monte Carlo experiment and write its record.
    Experiment(ExperimentArgs),
    /// Run the fast deterministic property suite.
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability [default: 0.5 when sampling].
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated part fractions; omit for an Erdős–Rényi graph.
    #[arg(long)]
    pub parts: Option<String>,
    /// Random seed [default: a fresh random value, printed].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphFormat {
    Matrix,
    Edges,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "edges")]
    pub format: GraphFormat,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Read a matrix file instead of sampling.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Use the centered matrix A - p(J - I_nm).
    #[arg(long)]
    pub centered: bool,
    /// Divide eigenvalues by sqrt(n).
    #[arg(long)]
    pub scaled: bool,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnergyArgs {
    /// Read a matrix file instead of sampling.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Use the centered matrix A - p(J - I_nm).
    #[arg(long)]
    pub centered: bool,
    /// Also print energy / n^{3/2}.
    #[arg(long)]
    pub coeff: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LawName {
    Semicircle,
    Mp,
    Psi,
}

#[derive(Args, Debug)]
pub struct LawArgs {
    #[arg(long, value_enum, default_value = "semicircle")]
    pub law: LawName,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Number of equal parts (psi law).
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Within-part standard deviation (psi law).
    #[arg(long, default_value_t = 0.0)]
    pub sigma1: f64,
    /// Aspect ratio nu2 / nu1 (mp law, Lambda).
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    /// Print density and CDF at this point.
    #[arg(long)]
    pub at: Option<f64>,
    /// Print the energy coefficient of the matching graph family.
    #[arg(long)]
    pub coeff: bool,
    /// Print the bipartite constant Lambda(y, p).
    #[arg(long)]
    pub lambda: bool,
    /// Print the atom at the origin.
    #[arg(long)]
    pub pointmass: bool,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Largest integer ratio y; rows are y = 1..=ymax.
    #[arg(long, default_value_t = 10)]
    pub ymax: u32,
    /// Write the CSV here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// JSON config file; inline flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub parts: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub y: Option<f64>,
    /// Use floor(sqrt n) equal parts.
    #[arg(long)]
    pub vanishing_parts: bool,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated ladder of sizes for convergence runs.
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Skip the centered-matrix solve in each trial.
    #[arg(long)]
    pub no_centered: bool,
    /// Write the run record (JSON) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-trial CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = CheckOptions::default().seed)]
    pub seed: u64,
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb_eigensolver: f64,
}

/// Formats `x` with 10 significant digits, trailing zeros trimmed, or in
/// shortest round-trip form when `full` is set.
pub fn format_number(x: f64, full: bool) -> String {
    if full || !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.9e}");
    }
    let decimals = (9 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        use std::hash::{BuildHasher, Hasher};
        let mut h = std::collections::hash_map::RandomState::new().build_hasher();
        h.write_u128(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or(0),
        );
        h.finish()
    })
}

fn echo(key: &str, value: impl std::fmt::Display) {
    eprintln!("# {key}={value}");
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Loaded {
    matrix: SymMatrix,
    parts: PartSizes,
    p: Option<f64>,
}

fn sample_graph(args: &GraphArgs) -> Result<Loaded> {
    let n = args
        .n
        .ok_or_else(|| Error::Parameter("--n is required when sampling".into()))?;
    let p = args.p.unwrap_or(0.5);
    let seed = resolve_seed(args.seed);
    echo("n", n);
    echo("p", p);
    echo("seed", seed);
    let (matrix, parts) = match &args.parts {
        Some(text) => {
            let spec: PartitionSpec = text.parse()?;
            echo("parts", text);
            graphs::sample_multipartite(n, &spec, p, Seed(seed))?
        }
        None => (
            graphs::sample_er(n, p, Seed(seed))?,
            PartSizes::singletons(n),
        ),
    };
    Ok(Loaded {
        matrix,
        parts,
        p: Some(p),
    })
}

fn load_graph(input: Option<&Path>, args: &GraphArgs) -> Result<Loaded> {
    let Some(path) = input else {
        return sample_graph(args);
    };
    echo("in", path.display());
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let matrix = SymMatrix::parse_text(&text).map_err(|e| Error::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let n = matrix.order();
    let parts = match &args.parts {
        Some(text) => graphs::partition_sizes(n, &text.parse()?)?,
        None => PartSizes::singletons(n),
    };
    Ok(Loaded {
        matrix,
        parts,
        p: args.p,
    })
}

fn centered(loaded: &Loaded) -> Result<SymMatrix> {
    let p = loaded
        .p
        .ok_or_else(|| Error::Parameter("--centered needs --p for an input matrix".into()))?;
    graphs::center(&loaded.matrix, p, &loaded.parts)
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let loaded = sample_graph(&args.graph)?;
    let text = match args.format {
        GraphFormat::Matrix => loaded.matrix.to_text(),
        GraphFormat::Edges => loaded.matrix.to_edge_list(),
    };
    write_output(args.out.as_deref(), &text)?;
    let edges = loaded.matrix.edge_count();
    if args.out.is_some() {
        println!("edges={edges}");
    } else {
        echo("edges", edges);
    }
    Ok(EXIT_OK)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8> {
    let loaded = load_graph(args.input.as_deref(), &args.graph)?;
    let m = if args.centered {
        centered(&loaded)?
    } else {
        loaded.matrix
    };
    let s = if args.scaled {
        spectra::scaled_spectrum(&m)?
    } else {
        spectra::eigenvalues_sym(&m)?
    };
    write_output(args.out.as_deref(), &s.to_text())?;
    Ok(EXIT_OK)
}

fn cmd_energy(args: &EnergyArgs, full: bool) -> Result<u8> {
    let loaded = load_graph(args.input.as_deref(), &args.graph)?;
    let m = if args.centered {
        centered(&loaded)?
    } else {
        loaded.matrix
    };
    let energy = spectra::energy(&m)?;
    println!("energy={}", format_number(energy, full));
    if args.coeff {
        let n = m.order() as f64;
        println!("coefficient={}", format_number(energy / n.powf(1.5), full));
    }
    Ok(EXIT_OK)
}

fn cmd_law(args: &LawArgs, full: bool) -> Result<u8> {
    let f = |x: f64| format_number(x, full);
    echo("p", args.p);
    let mut printed = false;
    if args.lambda {
        echo("y", args.y);
        println!("lambda={}", f(laws::lambda_coeff(args.y, args.p)?));
        printed = true;
    }
    match args.law {
        LawName::Semicircle | LawName::Psi => {
            let law = match args.law {
                LawName::Psi => {
                    echo("m", args.m);
                    let sigma2 = (args.p * (1.0 - args.p)).sqrt();
                    SemicircleLaw::multipartite(args.sigma1, sigma2, args.m)?
                }
                _ => SemicircleLaw::for_adjacency(args.p)?,
            };
            if let Some(x) = args.at {
                println!("density={}", f(law.density(x)));
                println!("cdf={}", f(law.cdf(x)));
                printed = true;
            }
            if args.coeff {
                println!("coefficient={}", f(law.mean_abs()));
                printed = true;
            }
            if args.pointmass {
                println!("point_mass=0");
                printed = true;
            }
            if !printed {
                println!("sigma={}", f(law.sigma()));
            }
        }
        LawName::Mp => {
            echo("y", args.y);
            let law = MpLaw::new(args.y, args.p)?;
            if let Some(x) = args.at {
                println!("density={}", f(law.density(x)));
                println!("cdf={}", f(law.cdf(x)));
                printed = true;
            }
            if args.pointmass {
                println!("point_mass={}", f(law.point_mass()));
                printed = true;
            }
            if args.coeff {
                let (nu1, nu2) = laws::fractions_for_ratio(args.y)?;
                println!(
                    "coefficient={}",
                    f(laws::bipartite_coeff(nu1, nu2, args.p)?)
                );
                printed = true;
            }
            if !printed {
                println!("lower_edge={}", f(law.lower_edge()));
                println!("upper_edge={}", f(law.upper_edge()));
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(args: &TableArgs, full: bool) -> Result<u8> {
    echo("p", args.p);
    echo("ymax", args.ymax);
    let ys: Vec<f64> = (1..=args.ymax).map(f64::from).collect();
    let rows = experiments::reproduce_table(args.p, &ys)?;
    let csv = table_csv(&rows, |x| format_number(x, full));
    print!("{csv}");
    if let Some(path) = &args.out {
        write_output(Some(path), &csv)?;
    }
    Ok(EXIT_OK)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|e| Error::Parameter(format!("bad {what} entry {t:?}: {e}")))
        })
        .collect()
}

/// Builds the effective config from a file (if any) overlaid with flags.
pub fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut config = match (&args.config, &args.kind) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(kind)) => ExperimentConfig::new(kind.parse()?),
        (None, None) => {
            return Err(Error::Parameter("need --config or --kind".into()));
        }
    };
    if let (Some(_), Some(kind)) = (&args.config, &args.kind) {
        config.kind = kind.parse::<ExperimentKind>()?;
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(p) = args.p {
        config.p = p;
    }
    if let Some(parts) = &args.parts {
        config.parts = Some(parts.parse()?);
    }
    if args.m.is_some() {
        config.m = args.m;
    }
    if args.y.is_some() {
        config.y = args.y;
    }
    if args.vanishing_parts {
        config.vanishing_parts = true;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if args.config.is_none() || args.seed.is_some() {
        config.seed = resolve_seed(args.seed);
    }
    if args.tolerance.is_some() {
        config.tolerance = args.tolerance;
    }
    if let Some(list) = &args.n_list {
        config.n_list = Some(parse_list(list, "n-list")?);
    }
    if args.count.is_some() {
        config.count = args.count;
    }
    if args.max_n.is_some() {
        config.max_n = args.max_n;
    }
    if args.no_centered {
        config.centered = false;
    }
    experiments::validate(&config)?;
    Ok(config)
}

fn summarize(record: &RunRecord, full: bool) {
    let f = |x: f64| format_number(x, full);
    if let Some(agg) = &record.aggregate {
        println!(
            "trials={} mean={} std={} min={} max={}",
            agg.count,
            f(agg.mean),
            f(agg.std),
            f(agg.min),
            f(agg.max)
        );
    }
    if let Some(theory) = &record.theory {
        match theory.value {
            Some(v) => println!("theory={} ({})", f(v), theory.formula),
            None => println!("theory=({})", theory.formula),
        }
    }
    if let Some(rel) = record.relative_error {
        println!("relative_error={}", f(rel));
    }
    for point in &record.ladder {
        println!("n={} ks={}", point.n, f(point.mean_ks));
    }
    for row in &record.table {
        println!(
            "y={} theory_coeff={} lower_bound={}",
            row.y,
            f(row.theory_coeff),
            f(row.lower_bound)
        );
    }
    if let Some(k) = &record.kyfan {
        println!(
            "pairs={} min_gap={} mean_gap={}",
            k.pairs,
            f(k.min_gap),
            f(k.mean_gap)
        );
    }
    for failure in &record.failures {
        println!("FAILED trial {}: {}", failure.trial, failure.message);
    }
    for check in &record.checks {
        let tag = if check.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", check.name, check.detail);
    }
    println!("passed={}", record.passed);
}

fn cmd_experiment(args: &ExperimentArgs, full: bool) -> Result<u8> {
    let config = experiment_config(args)?;
    echo(
        "config",
        serde_json::to_string(&config).expect("config serializes"),
    );
    echo("threads", exec::configure_threads_from_env());
    let record = experiments::run(&config)?;
    summarize(&record, full);
    if let Some(path) = &args.out {
        experiments::save_record(&record, path)?;
    }
    if let Some(path) = &args.csv {
        write_output(Some(path), &record.trials_csv())?;
    }
    Ok(if !record.failures.is_empty() {
        EXIT_NUMERICAL
    } else if record.passed {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    })
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    echo("seed", args.seed);
    echo("threads", exec::configure_threads_from_env());
    let opts = CheckOptions {
        seed: args.seed,
        eigen_perturbation: args.perturb_eigensolver,
    };
    let results = check::run_all(&opts);
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", r.name, r.detail);
    }
    Ok(if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    })
}

pub fn run(cli: &Cli) -> Result<u8> {
    let full = cli.full_precision;
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Energy(a) => cmd_energy(a, full),
        Command::Law(a) => cmd_law(a, full),
        Command::Table(a) => cmd_table(a, full),
        Command::Experiment(a) => cmd_experiment(a, full),
        Command::Check(a) => cmd_check(a),
    }
}

/// Parses `std::env::args` and runs; clap reports usage errors with exit 2.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
