//! Thread pool for census pair checks.

use frameq_core::harmonic::PairOutcome;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

pub const THREADS_VAR: &str = "FRAMEQ_THREADS";

/// Worker cap from `FRAMEQ_THREADS`; unset, empty or `0` means no cap.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

pub fn pool() -> ThreadPool {
    let mut builder = ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}

/// Runs `job(0..count)` on `pool`, keeping order.
pub fn run_pairs(
    pool: &ThreadPool,
    count: usize,
    job: &(dyn Fn(usize) -> PairOutcome + Sync),
) -> Vec<PairOutcome> {
    pool.install(|| (0..count).into_par_iter().map(job).collect())
}
