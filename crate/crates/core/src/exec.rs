//! Fan-out hooks for per-sample work.
//!
//! The core never spawns threads. Callers that want parallel cost
//! evaluation implement [`Executor`] over their thread pool; results must
//! come back in index order so reductions stay bit-identical.

use alloc::vec::Vec;

pub trait Executor {
    /// Evaluates `f(0..n)` and returns the results in index order.
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Source of elapsed time for training logs.
pub trait Clock {
    fn now_seconds(&self) -> f64;
}

/// Reports zero for every reading.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_seconds(&self) -> f64 {
        0.0
    }
}

/// Monotonic wall clock, measured from construction.
#[cfg(feature = "std")]
#[derive(Debug, Clone, Copy)]
pub struct WallClock(std::time::Instant);

#[cfg(feature = "std")]
impl WallClock {
    pub fn start() -> Self {
        Self(std::time::Instant::now())
    }
}

#[cfg(feature = "std")]
impl Default for WallClock {
    fn default() -> Self {
        Self::start()
    }
}

#[cfg(feature = "std")]
impl Clock for WallClock {
    fn now_seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
