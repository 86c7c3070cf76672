//! Data-parallel map/fold helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the work runs on a rayon pool sized
//! by the explicit request or the `DFRC_THREADS` environment variable
//! (0 or unset means all cores). Without the feature everything runs
//! sequentially. Results are identical either way: workers only compute pure
//! functions of the item index and counts merge by addition.

use std::env;

/// Worker count resolution: explicit request wins, then `DFRC_THREADS`,
/// then all available cores.
pub fn effective_threads(requested: Option<usize>) -> usize {
    let cap = requested.or_else(|| {
        env::var("DFRC_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
    });
    match cap {
        Some(n) if n > 0 => n,
        _ => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    }
}

pub fn map_indexed_seq<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

pub fn fold_counts_seq<F: Fn(u64) -> (u64, u64)>(n: u64, f: F) -> (u64, u64) {
    (0..n).fold((0u64, 0u64), |acc, i| {
        let (a, b) = f(i);
        (acc.0 + a, acc.1 + b)
    })
}

#[cfg(feature = "parallel")]
fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build worker pool")
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    pool(threads).install(|| (0..n).into_par_iter().map(f).collect())
}

#[cfg(feature = "parallel")]
pub fn fold_counts_par<F>(n: u64, threads: usize, f: F) -> (u64, u64)
where
    F: Fn(u64) -> (u64, u64) + Sync + Send,
{
    use rayon::prelude::*;
    pool(threads).install(|| {
        (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    })
}

/// Ordered map over `0..n`, parallel when available and worth it.
pub fn map_indexed<T, F>(n: usize, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let t = effective_threads(threads);
    #[cfg(feature = "parallel")]
    {
        if t > 1 && n > 1 {
            return map_indexed_par(n, t, f);
        }
    }
    let _ = t;
    map_indexed_seq(n, f)
}

/// Sums `(a, b)` count pairs over `0..n`.
pub fn fold_counts<F>(n: u64, threads: Option<usize>, f: F) -> (u64, u64)
where
    F: Fn(u64) -> (u64, u64) + Sync + Send,
{
    let t = effective_threads(threads);
    #[cfg(feature = "parallel")]
    {
        if t > 1 && n > 1 {
            return fold_counts_par(n, t, f);
        }
    }
    let _ = t;
    fold_counts_seq(n, f)
}
