mod compute;
mod emit;
mod selfcheck;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "kdvtau", version, about = "Exact KdV tau-function correlators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witten–Kontsevich solution, initial data x.
    Wk(FamilyArgs),
    /// Theta class, generalized BGW at C = 1/8.
    Theta(FamilyArgs),
    /// Generalized BGW solution, initial data C/(x−1)².
    Gbgw(FamilyArgs),
    /// Lamé solution, initial data C℘(x).
    Lame(FamilyArgs),
    /// Run the built-in verification suites.
    Selfcheck(SelfcheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Correlator,
    Table,
    Kernel,
    Onepoint,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Mr,
    Tau,
    Kernel,
    Airy,
    Bessel,
    Lame,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub mode: Mode,
    /// Index vector p_1,...,p_n.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    /// Repeated index for tables.
    #[arg(long)]
    pub b: Option<usize>,
    /// Largest n in a table.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Parameter C, a rational such as -3/8 or the word "symbolic".
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Truncation depth; defaults to max(30, minimal sufficient).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Add a rounded decimal column with this many digits (display only).
    #[arg(long)]
    pub decimal: Option<usize>,
    /// Lamé only: print x-Laurent expansions through this power of x.
    #[arg(long)]
    pub laurent: Option<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct SelfcheckArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (family, args) = match cli.command {
        Command::Selfcheck(s) => {
            return match with_pool(s.jobs, || selfcheck::run(s.suite)) {
                Ok(items) => {
                    print!("{}", selfcheck::render(&items, s.format));
                    if items.iter().all(|i| i.pass) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => fail(&e),
            };
        }
        Command::Wk(a) => (compute::FamilyKind::Wk, a),
        Command::Theta(a) => (compute::FamilyKind::Theta, a),
        Command::Gbgw(a) => (compute::FamilyKind::Gbgw, a),
        Command::Lame(a) => (compute::FamilyKind::Lame, a),
    };
    let result = compute::RunConfig::from_args(family, &args)
        .and_then(|cfg| with_pool(args.jobs, || compute::run(&cfg)).and_then(|r| r));
    match result {
        Ok(report) => {
            print!("{}", emit::render(&report, args.format, args.decimal));
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}
