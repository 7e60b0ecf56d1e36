//! Data-parallel execution helpers with a sequential fallback.
//!
//! Checker scans are embarrassingly parallel: every stratum (row of a distance
//! matrix, tuple of net points, candidate pair) can be evaluated independently,
//! and determinism is preserved because results are collected in input order and
//! winning witnesses are selected by index afterwards, never by completion time.
//!
//! The `parallel` cargo feature (on by default) compiles the rayon backend. At
//! runtime the sequential path can be forced — even in a parallel build — either
//! by setting the environment variable `CONTINUA_SEQUENTIAL=1` before first use
//! or by calling [`set_sequential`]. The benchmark suite flips this switch to
//! compare both modes in one process.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static FORCE_SEQUENTIAL: OnceLock<AtomicBool> = OnceLock::new();

fn flag() -> &'static AtomicBool {
    FORCE_SEQUENTIAL.get_or_init(|| {
        let env = std::env::var("CONTINUA_SEQUENTIAL")
            .map(|v| v == "1" || v.eq_ignore_ascii_case("true"))
            .unwrap_or(false);
        AtomicBool::new(env)
    })
}

/// Force (or release) sequential execution at runtime.
pub fn set_sequential(sequential: bool) {
    flag().store(sequential, Ordering::Relaxed);
}

/// True if work will run sequentially (feature disabled or runtime override).
pub fn is_sequential() -> bool {
    if cfg!(feature = "parallel") {
        flag().load(Ordering::Relaxed)
    } else {
        true
    }
}

/// Map `f` over `items`, in parallel when enabled, preserving input order.
pub fn pmap<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return items.par_iter().map(&f).collect();
    }
    items.iter().map(f).collect()
}

/// Map `f` over `0..n`, in parallel when enabled, preserving index order.
pub fn pmap_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        return (0..n).into_par_iter().map(&f).collect();
    }
    (0..n).map(f).collect()
}
