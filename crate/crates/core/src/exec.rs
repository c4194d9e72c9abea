//! Execution-mode shims for the data-parallel loops.
//!
//! Catalog sweeps, witness searches and friends map a pure function over a
//! slice of independent items. With the `parallel` feature the dispatching
//! entry point uses rayon; results come back in input order either way, so
//! output is identical across modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which engine the mapping loops run on. `Parallel` is only available with
/// the `parallel` feature; benchmarks compare the two on the same inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
}

/// Maps `f` over the items in input order using the default mode.
pub fn map_slice<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    map_slice_with(ExecMode::default(), items, f)
}

/// Maps `f` over the items in input order using an explicit mode.
pub fn map_slice_with<T: Sync, U: Send, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.par_iter().map(f).collect(),
        ExecMode::Sequential => items.iter().map(f).collect(),
    }
}
