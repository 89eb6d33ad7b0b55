//! `es`: command-line front end for the es-core computations.

mod cache;
mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use es_core::Error;

use crate::cache::{cache_key, Cache};
use crate::commands::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "es", about = "Erdős–Straus counts, mean values and bilinear divisor sums", disable_version_flag = true)]
struct Cli {
    /// Print the report-schema version and exit.
    #[arg(short = 'V', long = "version", action = ArgAction::SetTrue)]
    version: bool,

    /// Emit JSON, to stdout or to PATH.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH", conflicts_with = "csv")]
    json: Option<String>,

    /// Emit CSV, to stdout or to PATH.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    csv: Option<String>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    workers: u32,

    /// Reuse and store results in the cache directory.
    #[arg(long, global = true)]
    cache: bool,

    /// Cache directory; implies --cache. Defaults to $ES_CACHE_DIR, then .es-cache.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, hide = true, value_enum)]
    inject_fault: Option<Fault>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fault {
    Domain,
    Capacity,
    Config,
    Invariant,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solutions of 4/n = 1/n1 + 1/n2 + 1/n3.
    Solve { n: u64 },
    /// Type I / Type II split of f(p) for a prime p.
    Split { p: u64 },
    /// Σ f1(p) and Σ f2(p) over primes p <= x with envelope ratios.
    Mean {
        #[arg(long)]
        x: u64,
    },
    /// Direct and dyadic evaluation of the weighted φ/d sum.
    Weightsum {
        #[arg(long)]
        x: u64,
        /// Report the numerical summation chain instead.
        #[arg(long)]
        chain: bool,
    },
    /// Σ d(4la² + 1) over V < l <= 2V, W < a <= 2W.
    Bilinear {
        #[arg(long = "V")]
        v: u64,
        #[arg(long = "W")]
        w: u64,
        #[arg(long, default_value_t = es_core::bilinear::DEFAULT_THETA)]
        theta: f64,
        /// Break the sum down by case.
        #[arg(long)]
        cases: bool,
        /// Use the W < V branch (split threshold from V).
        #[arg(long, conflicts_with = "cases")]
        linear: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Sieve)]
        method: MethodArg,
    },
    /// Numerical checks of the auxiliary bounds.
    Lemma {
        #[arg(long, value_enum)]
        which: LemmaWhich,
        /// key=value pairs, comma separated (x; z, r, nmax).
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Root counts of 4a²l + 1 ≡ 0 (mod n) in a (given l) or in l (given a).
    Congruence {
        #[arg(long)]
        n: u64,
        #[arg(long, required_unless_present = "a")]
        l: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
        /// Also run the brute-force count.
        #[arg(long)]
        oracle: bool,
    },
    /// Primes up to a limit.
    Primes {
        #[arg(long)]
        limit: u64,
        /// Include every prime in the output.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Sieve,
    Direct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LemmaWhich {
    #[value(name = "4")]
    Four,
    #[value(name = "5")]
    Five,
    #[value(name = "6")]
    Six,
    #[value(name = "case2tail")]
    Case2Tail,
}

const EXIT_IO: u8 = 1;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) => 3,
        Error::Capacity(_) => 4,
        Error::Config(_) => 5,
        Error::Invariant(_) => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.version {
        println!("es {} (report schema {})", env!("CARGO_PKG_VERSION"), es_core::SCHEMA_VERSION);
        return ExitCode::SUCCESS;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required\n\nFor more information, try '--help'.");
        return ExitCode::from(2);
    };
    let (format, dest) = match (&cli.json, &cli.csv) {
        (Some(p), _) => (Format::Json, Some(p.clone())),
        (_, Some(p)) => (Format::Csv, Some(p.clone())),
        _ => (Format::Human, None),
    };
    match run(&cli, command, format) {
        Ok(bytes) => match write_output(dest.as_deref(), &bytes) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_IO)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli, command: &Command, format: Format) -> Result<Vec<u8>, Error> {
    if let Some(f) = cli.inject_fault {
        let msg = "injected fault".to_string();
        return Err(match f {
            Fault::Domain => Error::Domain(msg),
            Fault::Capacity => Error::Capacity(msg),
            Fault::Config => Error::Config(msg),
            Fault::Invariant => Error::Invariant(msg),
        });
    }
    let workers = cli.workers as usize;
    let (name, params) = commands::describe(command)?;
    let cache = (cli.cache || cli.cache_dir.is_some()).then(|| Cache::resolve(cli.cache_dir.as_deref()));
    let key = cache_key(&name, &params, format.name(), es_core::SCHEMA_VERSION);
    if let Some(c) = &cache {
        if let Some(hit) = c.load(&key) {
            return Ok(hit);
        }
    }
    let out: Output = commands::execute(command, workers)?;
    let bytes = out.emit(format).into_bytes();
    if let Some(c) = &cache {
        if let Err(e) = c.store(&key, &bytes, &name, &params) {
            eprintln!("warning: cache write failed: {e}");
        }
    }
    Ok(bytes)
}

fn write_output(dest: Option<&str>, bytes: &[u8]) -> std::io::Result<()> {
    use std::io::Write;
    match dest {
        None | Some("-") => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
        Some(path) => std::fs::write(path, bytes),
    }
}
