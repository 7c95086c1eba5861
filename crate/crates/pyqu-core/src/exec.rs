//! Data-parallel execution helpers.
//!
//! Per-commit metric extraction and per-candidate model fitting are
//! embarrassingly parallel, so the default build maps them over a rayon pool.
//! Disabling the `parallel` feature swaps in the sequential fallback without
//! touching any call site; results are identical either way because every
//! work item carries its own derived seed and outputs preserve input order.

/// Map `f` over `items`, preserving input order.
///
/// Runs on the rayon pool when the `parallel` feature is enabled, otherwise
/// sequentially.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving input order (sequential build).
#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    map_ordered_seq(items, f)
}

/// Sequential map, always available. The benchmark suite compares this
/// against [`map_ordered`] on the same workloads.
pub fn map_ordered_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Configure the degree of parallelism. `0` keeps the default (one worker
/// per logical CPU). Returns the effective worker count.
///
/// With the `parallel` feature disabled this is a no-op reporting `1`.
pub fn configure_jobs(jobs: usize) -> usize {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            // build_global errors if a pool already exists; keep the first one.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        1
    }
}
