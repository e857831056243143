//! Per-node evaluation helpers.
//!
//! Every solver pass funnels through [`map_nodes`] and [`max_nodes`], so the
//! choice between the rayon pool and a plain loop is made in one place. Both
//! paths produce identical results: maps are index-ordered and the only
//! reduction is a max, which does not depend on evaluation order.

use std::sync::atomic::{AtomicBool, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Chunk size below which rayon is not worth the scheduling cost.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 512;

/// Selects the execution mode for subsequent calls. Without the `parallel`
/// feature this is a no-op and everything runs sequentially.
pub fn set_execution(mode: Execution) {
    SEQUENTIAL.store(mode == Execution::Sequential, Ordering::Relaxed);
}

pub fn execution() -> Execution {
    if cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::Relaxed) {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

pub fn map_nodes<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution() == Execution::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(MIN_CHUNK).map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Maximum of `f` over the nodes where it returns `Some`; `None` if no node
/// contributes.
pub fn max_nodes<F>(n: usize, f: F) -> Option<f64>
where
    F: Fn(usize) -> Option<f64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution() == Execution::Parallel {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .with_min_len(MIN_CHUNK)
            .filter_map(f)
            .reduce_with(f64::max);
    }
    (0..n).filter_map(f).reduce(f64::max)
}
