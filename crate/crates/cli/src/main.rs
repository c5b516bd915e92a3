//! `arqft`: L-functions, ternary forms and spectral identities over F_p[T].

mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FormArgs, Select};
use config::{Failure, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "arqft", version, about = "Arithmetic of quadratic forms and L-functions over F_p[T]")]
struct Cli {
    /// Odd prime with p = 1 mod 4 (default 5; forms carry their own).
    #[arg(long, global = true)]
    p: Option<u32>,
    #[arg(long, global = true, default_value_t = 2026)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, env = "ARQFT_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Write outputs here instead of stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Largest search box or residue count attempted.
    #[arg(long, global = true, default_value_t = 5.0e7)]
    budget: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// L-polynomial, functional equation, RH and central values.
    Lfun(Select),
    /// Zeros of the L-polynomial in t = p^-s.
    Zeros(Select),
    /// Zero statistics and the central-value audit over a family.
    Family(Select),
    /// Representations Q(v) = D.
    Rep {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        select: Select,
    },
    /// Order of the automorphism group.
    Auto(FormArgs),
    /// Classes in the genus, by neighbor walks.
    Genus {
        #[command(flatten)]
        form: FormArgs,
        /// Degree of the neighbor primes.
        #[arg(long, default_value_t = 1)]
        prime_deg: usize,
    },
    /// Siegel ratio r_G(D) / (|D|^{1/2} prod alpha_w(D)) over admissible D.
    Mass {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5])]
        degrees: Vec<usize>,
        /// Keep every n-th D of each degree.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long, default_value_t = 1)]
        prime_deg: usize,
    },
    /// e(D) = r_Q(D) - r_G(D) and the fitted decay exponent.
    Residual {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 5)]
        maxdeg: usize,
        /// Largest accepted max log_p|e(D)| / deg D.
        #[arg(long, default_value_t = 0.35)]
        max_exponent: f64,
        /// Keep D of every degree, not only those matching deg disc mod 2.
        #[arg(long)]
        all_parities: bool,
        #[arg(long, default_value_t = 1)]
        prime_deg: usize,
    },
    /// Whittaker recursions, Mellin identity, cocycle and Hecke checks.
    IdentitySuite {
        #[arg(long, value_delimiter = ',', default_values_t = [5u32, 13])]
        primes: Vec<u32>,
    },
    /// The two forms of discriminant 2(T^3+T+1) over F_5.
    Example7,
    /// Throughput of the enumeration and character-sum kernels.
    Bench,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::new(cli.p, cli.seed, cli.threads, cli.tol, cli.budget, cli.cache_dir, cli.out_dir)
        .and_then(|cfg| dispatch(&cfg, cli.cmd));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("arqft: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cfg: &RunConfig, cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Lfun(s) => commands::lfun(cfg, &s),
        Cmd::Zeros(s) => commands::zeros(cfg, &s),
        Cmd::Family(s) => commands::family(cfg, &s),
        Cmd::Rep { form, select } => commands::rep(cfg, &form, &select),
        Cmd::Auto(form) => commands::auto(cfg, &form),
        Cmd::Genus { form, prime_deg } => commands::genus(cfg, &form, prime_deg),
        Cmd::Mass { form, degrees, stride, prime_deg } => commands::mass(cfg, &form, &degrees, stride, prime_deg),
        Cmd::Residual { form, maxdeg, max_exponent, all_parities, prime_deg } => {
            commands::residual(cfg, &form, maxdeg, max_exponent, !all_parities, prime_deg)
        }
        Cmd::IdentitySuite { primes } => commands::identity_suite(cfg, &primes),
        Cmd::Example7 => commands::example7(cfg),
        Cmd::Bench => commands::bench(cfg),
    }
}
