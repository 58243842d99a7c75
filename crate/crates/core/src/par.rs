//! Data-parallel helpers.
//!
//! With the `parallel` feature the closures run on the rayon pool, otherwise
//! they run in order on the calling thread. Every caller derives randomness
//! from per-item substreams, so both paths produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::Result;

#[cfg(feature = "parallel")]
static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Route all helpers through the sequential path even when the `parallel`
/// feature is compiled in. Used by the benchmarks to compare both paths.
pub fn force_sequential(on: bool) {
    #[cfg(feature = "parallel")]
    FORCE_SEQUENTIAL.store(on, Ordering::Relaxed);
    #[cfg(not(feature = "parallel"))]
    let _ = on;
}

pub fn is_parallel() -> bool {
    #[cfg(feature = "parallel")]
    {
        !FORCE_SEQUENTIAL.load(Ordering::Relaxed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        false
    }
}

pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

pub fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn try_for_each_mut<A, F>(items: &mut [A], f: F) -> Result<()>
where
    A: Send,
    F: Fn(usize, &mut A) -> Result<()> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return items
            .par_iter_mut()
            .enumerate()
            .try_for_each(|(i, a)| f(i, a));
    }
    items.iter_mut().enumerate().try_for_each(|(i, a)| f(i, a))
}

/// Fallible map over `0..n`; the first error (in index order) wins.
pub fn try_map_range<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_range(n, f).into_iter().collect()
}
