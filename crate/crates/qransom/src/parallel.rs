use std::sync::Arc;

use qransom_core::exec::Executor;
use rayon::prelude::*;

use crate::error::{HarnessError, Result};

/// Per-sample fan-out on a rayon pool. Results come back in index order,
/// so sums over them match a sequential run bit for bit.
#[derive(Debug, Clone)]
pub struct RayonExecutor {
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl RayonExecutor {
    /// `None` uses the global pool.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = match threads {
            None => None,
            Some(n) => Some(Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| HarnessError::Runtime(format!("thread pool: {e}")))?,
            )),
        };
        Ok(Self { pool })
    }
}

impl Executor for RayonExecutor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let run = || (0..n).into_par_iter().map(&f).collect();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}
