//! Data-parallel map helpers.
//!
//! Grid sweeps and Monte-Carlo style property scans are embarrassingly
//! parallel over immutable inputs. `map` fans out over rayon when the
//! `parallel` feature (default) is enabled and degrades to a plain
//! sequential loop otherwise; output order always matches input order, so
//! downstream CSV emission is deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential reference path; also the fallback when `parallel` is off.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Evaluate `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_parallel(items, f)
}

/// Evaluate `f` over `items`, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_sequential(items, f)
}
