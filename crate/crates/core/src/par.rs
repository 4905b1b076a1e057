//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it the same functions run on plain iterators. Reductions are
//! performed over fixed-size chunks whose partial results are combined in
//! index order, so results are bit-identical regardless of thread count or
//! feature selection.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used by all chunked reductions and samplers.
pub const CHUNK: usize = 1 << 14;

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Deterministic sum of `f(x)` over `xs`.
pub fn sum_by<T, F>(xs: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    let chunks: Vec<&[T]> = xs.chunks(CHUNK).collect();
    map(&chunks, |c| c.iter().map(&f).sum::<f64>()).into_iter().sum()
}

/// Deterministic mean of `f(x)` over `xs`; NaN for an empty slice.
pub fn mean_by<T, F>(xs: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    sum_by(xs, f) / xs.len() as f64
}
