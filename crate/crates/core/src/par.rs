//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Parallelism::Parallel`]
//! dispatches to rayon; without it every request runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map<T, U, F>(items: &[T], mode: Parallelism, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Fold fixed-size chunks independently, then merge the partial results.
pub fn fold_chunks<T, A, F, M>(
    items: &[T],
    chunk: usize,
    mode: Parallelism,
    fold: F,
    merge: M,
) -> Option<A>
where
    T: Sync,
    A: Send,
    F: Fn(&[T]) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_chunks(chunk).map(fold).reduce_with(merge);
    }
    let _ = mode;
    items.chunks(chunk).map(fold).reduce(merge)
}

/// Run a closure inside a pool of `jobs` threads (global pool when `None`).
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            assert_eq!(map(&xs, mode, |x| x * 2)[999], 1998);
            let s = fold_chunks(&xs, 64, mode, |c| c.iter().sum::<u64>(), |a, b| a + b);
            assert_eq!(s, Some(499500));
        }
    }
}
