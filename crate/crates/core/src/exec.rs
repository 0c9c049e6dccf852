//! Data-parallel execution with a sequential fallback.
//!
//! Every parallel loop in the crate goes through [`Execution`]. Work items are
//! indexed and each one derives its own RNG stream from its index, so results
//! never depend on the execution mode or on the number of workers.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Evaluates `f(0..n)` and returns the results in index order.
    pub fn map_collect<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            Execution::Parallel => par::map_collect(n, f),
        }
    }

    /// Maps `0..n` and folds with an associative `reduce`.
    ///
    /// The grouping differs between modes, so `reduce` must be exactly
    /// associative for results to be mode independent.
    pub fn map_reduce<T, F, R, I>(self, n: usize, identity: I, map: F, reduce: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(usize) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(map).fold(identity(), reduce),
            Execution::Parallel => par::map_reduce(n, identity, map, reduce),
        }
    }

    /// Runs `op` with at most `workers` threads (0 = library default).
    pub fn with_workers<T, F>(self, workers: usize, op: F) -> T
    where
        T: Send,
        F: FnOnce() -> T + Send,
    {
        match self {
            Execution::Sequential => op(),
            Execution::Parallel => par::with_workers(workers, op),
        }
    }

    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn name(self) -> &'static str {
        match self {
            Execution::Sequential => "sequential",
            Execution::Parallel => "parallel",
        }
    }
}

impl std::fmt::Display for Execution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Execution {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "sequential" => Ok(Execution::Sequential),
            "parallel" => Ok(Execution::Parallel),
            other => Err(crate::error::Error::InvalidConfig(format!("unknown execution mode {other:?}"))),
        }
    }
}

#[cfg(feature = "parallel")]
mod par {
    use rayon::prelude::*;

    pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }

    pub fn map_reduce<T, F, R, I>(n: usize, identity: I, map: F, reduce: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(usize) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(map).reduce(identity, reduce)
    }

    pub fn with_workers<T, F>(workers: usize, op: F) -> T
    where
        T: Send,
        F: FnOnce() -> T + Send,
    {
        if workers == 0 {
            return op();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod par {
    pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        (0..n).map(f).collect()
    }

    pub fn map_reduce<T, F, R, I>(n: usize, identity: I, map: F, reduce: R) -> T
    where
        I: Fn() -> T,
        F: Fn(usize) -> T,
        R: Fn(T, T) -> T,
    {
        (0..n).map(map).fold(identity(), reduce)
    }

    pub fn with_workers<T, F>(_workers: usize, op: F) -> T
    where
        F: FnOnce() -> T,
    {
        op()
    }
}
