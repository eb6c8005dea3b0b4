//! Command-line surface. Exit codes: 0 success (or "covering" for
//! `verify`), 1 not covering / construction failure, 2 usage or input
//! error. The enumeration work bound can be overridden with the
//! TILECOV_WORK_BOUND environment variable.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use tilecov::bounds::{
    coefficient_baseline, gamma_k, paper_table, sufficient_n, CoveringParams, DegreeMode,
};
use tilecov::construct::construct;
use tilecov::model::{sample_array, sample_iid_array, ArrayMatrix};
use tilecov::montecarlo::{
    empirical_min_n, enumerate_gamma, estimate_gamma, estimate_lambda, DEFAULT_WORK_BOUND,
};
use tilecov::verify::{coverage_stats, is_covering, is_covering_naive, missing_tuples};
use tilecov::Error;

#[derive(Parser)]
#[command(name = "tilecov", about = "Covering-array bounds, sampling, verification and construction", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Paper,
}

impl From<Mode> for DegreeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => DegreeMode::Exact,
            Mode::Paper => DegreeMode::Paper,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// LLL bound report for (m, t, alpha, k); k=0 gives the i.i.d. baseline coefficient
    Bound(BoundArgs),
    /// Exact tile-stack hit probability gamma_k
    Gamma {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// The reference coefficient table (32 rows)
    Table,
    /// Sample a random matrix and write it in the text format
    Generate(GenerateArgs),
    /// Check the covering property of a matrix file (exit 0 covering, 1 not, 2 error)
    Verify(VerifyArgs),
    /// Build a covering array by tiled sampling with resampling
    Construct(ConstructArgs),
    /// Stochastic and exhaustive oracles (CSV output)
    Montecarlo(MontecarloArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    alpha: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    alpha: u32,
    /// Tile multiplicity; ignored for --model iid
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Core width (must be a multiple of k*alpha for the tiled model)
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "tiled")]
    model: String,
    /// Append the alpha constant columns (tiled model only)
    #[arg(long, default_value_t = false)]
    augment: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix file; stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    t: usize,
    /// Use the naive differential scan instead of the bitset path
    #[arg(long, default_value_t = false)]
    naive: bool,
    /// Print every missing (row set, vector) pair as JSON lines
    #[arg(long, default_value_t = false)]
    report: bool,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    alpha: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Total width including augmentation columns; LLL sufficient width when omitted
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_resamples: Option<u64>,
    /// Output matrix file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON construction-log side file
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct MontecarloArgs {
    #[command(subcommand)]
    which: MontecarloCommand,
}

#[derive(Subcommand)]
enum MontecarloCommand {
    /// Estimate gamma_k by sampling tile stacks; compares to the exact value
    Gamma {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustively enumerate gamma_k (exact oracle)
    Enumerate {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
    },
    /// Estimate lambda = P(vector missing from t rows of width n)
    Lambda {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Empirical minimal covering width distribution
    MinN {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn work_bound() -> u64 {
    std::env::var("TILECOV_WORK_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_WORK_BOUND)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Error::Construction(f)) => {
            eprintln!("error: {f}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Bound(args) => cmd_bound(args),
        Command::Gamma { alpha, t, k, format } => cmd_gamma(alpha, t, k, format),
        Command::Table => cmd_table(),
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Montecarlo(args) => cmd_montecarlo(args.which),
    }
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, Error> {
    if args.k == 0 {
        // k=0 is the i.i.d. baseline: only the coefficient is defined
        let coefficient = coefficient_baseline(args.alpha, args.t)?;
        match args.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "m": args.m, "t": args.t, "alpha": args.alpha, "k": 0,
                    "coefficient": coefficient,
                })
            ),
            Format::Human => {
                println!("baseline coefficient (k=0): {coefficient:.4} * log2(m)");
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let params = CoveringParams::new(args.m, args.t, args.alpha)?;
    let report = sufficient_n(params, args.k, args.mode.into())?;
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Human => {
            println!(
                "m={} t={} alpha={} k={} mode={:?}",
                args.m, args.t, args.alpha, args.k, report.mode
            );
            println!("  gamma_k          = {}", report.gamma);
            println!("  coefficient      = {:.4} * log2(m)", report.coefficient);
            println!(
                "  sufficient n     = {} ({} core + {} augmentation columns)",
                report.sufficient_n, report.n_core, report.augmentation_columns
            );
            println!("  d+1 (exact)      = {}", report.dependency_degree_plus_one);
            println!("  e*p*(d+1)        = {:.6e}", report.lll_product);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gamma(alpha: u32, t: u32, k: u32, format: Format) -> Result<ExitCode, Error> {
    let g = gamma_k(alpha, t, k)?;
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "alpha": alpha, "t": t, "k": k,
                "gamma": {"num": g.numer().to_string(), "den": g.denom().to_string()},
                "value": g.to_f64(),
            })
        ),
        Format::Human => println!("gamma_{k}({alpha},{t}) = {g} = {}", g.to_f64().unwrap()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table() -> Result<ExitCode, Error> {
    println!("alpha t k N(m,t,alpha)/log2(m)");
    for (alpha, t, k, coeff) in paper_table() {
        println!("{alpha} {t} {k} {coeff:.2}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, Error> {
    let params = CoveringParams::new(args.m, args.t, args.alpha)?;
    let matrix = match args.model.as_str() {
        "tiled" => sample_array(params, args.n, args.k, args.augment, args.seed)?,
        "iid" => sample_iid_array(params, args.n, args.seed)?,
        other => return Err(Error::InvalidInput(format!("unknown model '{other}'"))),
    };
    write_matrix(&matrix, args.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let matrix = match args.input {
        Some(path) => ArrayMatrix::load(BufReader::new(File::open(path)?))?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            ArrayMatrix::load(buf.as_bytes())?
        }
    };
    let covering = if args.report {
        let report = missing_tuples(&matrix, args.t)?;
        for (rows, vector) in &report.missing {
            println!(
                "{}",
                serde_json::json!({"rows": rows, "missing_vector": vector})
            );
        }
        report.is_covering
    } else if args.naive {
        is_covering_naive(&matrix, args.t)?
    } else {
        is_covering(&matrix, args.t)?
    };
    let stats = coverage_stats(&matrix, args.t)?;
    eprintln!(
        "covered {}/{} (min witness count {}) -> {}",
        stats.covered,
        stats.total,
        stats.min_witness_count,
        if covering { "covering" } else { "NOT covering" }
    );
    Ok(if covering { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_construct(args: ConstructArgs) -> Result<ExitCode, Error> {
    let params = CoveringParams::new(args.m, args.t, args.alpha)?;
    let (matrix, log) = construct(params, args.k, args.n, args.seed, args.max_resamples, false)?;
    write_matrix(&matrix, args.output.as_deref())?;
    let log_json = serde_json::to_string_pretty(&log).expect("log serializes");
    match args.log {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            writeln!(f, "{log_json}")?;
        }
        None => eprintln!("{log_json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_montecarlo(which: MontecarloCommand) -> Result<ExitCode, Error> {
    match which {
        MontecarloCommand::Gamma { alpha, t, k, trials, seed } => {
            let r = estimate_gamma(alpha, t, k, trials, seed, None)?;
            println!("kind,alpha,t,k,trials,estimate,stderr,exact,z");
            println!("gamma,{alpha},{t},{k},{}", r.csv_fields());
        }
        MontecarloCommand::Enumerate { alpha, t, k } => {
            let g = enumerate_gamma(alpha, t, k, work_bound())?;
            println!(
                "{}",
                serde_json::json!({
                    "alpha": alpha, "t": t, "k": k,
                    "gamma": {"num": g.numer().to_string(), "den": g.denom().to_string()},
                    "value": g.to_f64(),
                })
            );
        }
        MontecarloCommand::Lambda { m, t, alpha, k, n, trials, seed } => {
            let params = CoveringParams::new(m, t, alpha)?;
            let r = estimate_lambda(params, k, n, trials, seed)?;
            println!("kind,alpha,t,k,n,trials,estimate,stderr,exact,z");
            println!("lambda,{alpha},{t},{k},{n},{}", r.csv_fields());
        }
        MontecarloCommand::MinN { m, t, alpha, k, trials, seed } => {
            let params = CoveringParams::new(m, t, alpha)?;
            let s = empirical_min_n(params, k, trials, seed, work_bound())?;
            println!("kind,m,t,alpha,k,trials,min,median,max");
            println!("min_n,{m},{t},{alpha},{k},{trials},{},{},{}", s.min, s.median, s.max);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_matrix(matrix: &ArrayMatrix, path: Option<&std::path::Path>) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            matrix.store(&mut w)?;
        }
        None => {
            let stdout = std::io::stdout();
            matrix.store(stdout.lock())?;
        }
    }
    Ok(())
}
