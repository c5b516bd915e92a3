use std::fmt;
use std::path::PathBuf;

use arqft_core::{Error, PrimeModulus};

use crate::cache::Cache;
use crate::output::Sink;

pub const DEFAULT_P: u32 = 5;

/// Why a run did not succeed; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// A mathematical check came out false.
    Check(String),
    Core(Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 2,
            Failure::Core(Error::Budget(_)) => 4,
            Failure::Core(Error::Numerical(_) | Error::Assertion(_)) => 2,
            Failure::Core(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(m) => write!(f, "check failed: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub fn precondition(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::Precondition(msg.into()))
}

#[derive(Debug)]
pub struct RunConfig {
    pub p: u32,
    /// Whether `--p` was given explicitly.
    pub p_given: bool,
    pub seed: u64,
    pub tol: f64,
    pub budget: f64,
    pub cache: Cache,
    pub sink: Sink,
}

impl RunConfig {
    pub fn new(
        p: Option<u32>,
        seed: u64,
        threads: Option<usize>,
        tol: f64,
        budget: f64,
        cache_dir: Option<PathBuf>,
        out_dir: Option<PathBuf>,
    ) -> Result<Self, Failure> {
        let p_given = p.is_some();
        let p = p.unwrap_or(DEFAULT_P);
        PrimeModulus::new(p)?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(precondition("--tol must be positive"));
        }
        if !(budget > 0.0) {
            return Err(precondition("--budget must be positive"));
        }
        if let Some(n) = threads {
            if n == 0 {
                return Err(precondition("--threads must be positive"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| precondition(format!("thread pool: {e}")))?;
        }
        Ok(RunConfig { p, p_given, seed, tol, budget, cache: Cache::new(cache_dir), sink: Sink::new(out_dir) })
    }
}
