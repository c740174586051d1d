//! Sample farming over independent indices.
//!
//! Every Monte Carlo sample is a pure function of its index, so results are
//! collected in index order and do not depend on the execution strategy.
//! Without the `parallel` feature every strategy runs sequentially.

/// How to evaluate a batch of independent samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon work stealing; `None` uses the global pool.
    #[default]
    Parallel,
    /// Rayon on a dedicated pool with this many threads.
    Workers(usize),
}

impl Execution {
    /// `0` selects the global pool.
    pub fn from_workers(workers: usize) -> Self {
        match workers {
            0 => Execution::Parallel,
            w => Execution::Workers(w),
        }
    }
}

/// Evaluates `f(0), ..., f(count - 1)` and returns the results in index order.
pub fn map_indexed<T, F>(count: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => parallel::map(count, f),
        #[cfg(feature = "parallel")]
        Execution::Workers(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| parallel::map(count, f)),
            Err(_) => parallel::map(count, f),
        },
        #[cfg(not(feature = "parallel"))]
        _ => (0..count).map(f).collect(),
    }
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    pub(super) fn map<T, F>(count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..count).into_par_iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_strategy() {
        let f = |i: u64| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 7;
        let seq = map_indexed(1000, Execution::Sequential, f);
        assert_eq!(seq, map_indexed(1000, Execution::Parallel, f));
        assert_eq!(seq, map_indexed(1000, Execution::Workers(3), f));
        assert!(map_indexed(0, Execution::Parallel, f).is_empty());
    }
}
