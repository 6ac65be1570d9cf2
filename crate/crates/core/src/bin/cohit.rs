use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cohit::boardman::{Truncation, DEFAULT_LEVEL_OFFSET};
use cohit::error::{Error, Result};
use cohit::parse::parse_polynomial;
use cohit::report::{
    compute_boardman, compute_invariants, compute_kameko, load_or_build, verify_polynomial, write_json,
    InvariantOptions,
};

/// Cohit bases and GL_k(F_2)-invariants for the Steenrod hit problem.
#[derive(Parser)]
#[command(name = "cohit", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sigma_k- and GL_k-invariants of (QP_k)_n by cluster analysis.
    Invariants {
        #[command(flatten)]
        degree: Degree,
        /// Stop after the Sigma_k stage.
        #[arg(long)]
        sigma_only: bool,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        cache: Cache,
    },
    /// GL_k-coinvariants of primitive homology by Boardman's orbit method (k = 2, 3).
    Boardman {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Truncation level l = (largest parameter sum) + offset.
        #[arg(long, default_value_t = DEFAULT_LEVEL_OFFSET, conflicts_with = "level")]
        l_offset: u32,
        /// Fixed truncation level l.
        #[arg(long)]
        level: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Check a polynomial from a file for hits and invariance modulo hits.
    Verify {
        #[command(flatten)]
        degree: Degree,
        /// File holding the polynomial, e.g. `x1^3*x2 + x1*x2^3`.
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        cache: Cache,
    },
    /// Rank of the Kameko map (QP_k)_n -> (QP_k)_{(n-k)/2}.
    Kameko {
        #[command(flatten)]
        degree: Degree,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        cache: Cache,
    },
}

#[derive(Args)]
struct Degree {
    /// Number of variables.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=32))]
    k: u32,
    /// Degree.
    #[arg(long)]
    n: u32,
}

#[derive(Args)]
struct Output {
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record per-phase times in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct Cache {
    /// Directory for cached cohit bases.
    #[arg(long, env = "COHIT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Invariants {
            degree,
            sigma_only,
            out,
            cache,
        } => {
            let opts = InvariantOptions {
                cache_dir: cache.cache_dir.as_deref(),
                sigma_only,
                record_timings: out.timings,
            };
            let report = compute_invariants(degree.k as usize, degree.n, &opts)?.report;
            print!("{report}");
            if let Some(path) = out.json {
                write_json(&path, &report)?;
            }
            Ok(true)
        }
        Command::Boardman {
            k,
            n,
            l_offset,
            level,
            out,
        } => {
            let truncation = level.map_or(Truncation::Offset(l_offset), Truncation::Level);
            let report = compute_boardman(k, n, truncation, out.timings)?;
            print!("{report}");
            if let Some(path) = out.json {
                write_json(&path, &report)?;
            }
            Ok(true)
        }
        Command::Verify {
            degree,
            file,
            out,
            cache,
        } => {
            let k = degree.k as usize;
            let text = std::fs::read_to_string(&file).map_err(|source| Error::Io {
                path: file.clone(),
                source,
            })?;
            let poly = parse_polynomial(&text, k)?;
            let (cb, _) = load_or_build(k, degree.n, cache.cache_dir.as_deref())?;
            let report = verify_polynomial(&cb, &poly)?;
            print!("{report}");
            if let Some(path) = out.json {
                write_json(&path, &report)?;
            }
            Ok(report.passed())
        }
        Command::Kameko { degree, out, cache } => {
            let report = compute_kameko(degree.k as usize, degree.n, cache.cache_dir.as_deref())?;
            print!("{report}");
            if let Some(path) = out.json {
                write_json(&path, &report)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
