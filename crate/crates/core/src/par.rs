//! Data-parallel helpers over index ranges.
//!
//! With the `parallel` feature the helpers fan out over rayon's pool; without
//! it (or after [`force_sequential`]) they run as plain iterators. Results are
//! always collected in index order, so callers see identical output either way.

use std::sync::atomic::{AtomicBool, Ordering};

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Route every helper through the sequential path, even when the `parallel`
/// feature is compiled in. Used by the benches to compare both paths in one
/// binary.
pub fn force_sequential(on: bool) {
    SEQUENTIAL.store(on, Ordering::SeqCst);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::SeqCst)
}

/// `(0..n).map(f).collect()`
pub fn map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `(0..n).flat_map(f).collect()`, preserving the order of both levels.
pub fn flat_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        let chunks: Vec<Vec<R>> = (0..n).into_par_iter().map(f).collect();
        return chunks.into_iter().flatten().collect();
    }
    (0..n).flat_map(f).collect()
}

/// `(0..n).filter_map(f).collect()`
pub fn filter_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().filter_map(f).collect();
    }
    (0..n).filter_map(f).collect()
}

/// First index (in index order) for which `f` returns `Some`.
pub fn find_first<R, F>(n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(f);
    }
    (0..n).find_map(f)
}

/// True iff `f` holds for every index.
pub fn all<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().all(f);
    }
    (0..n).all(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = flat_map(50, |i| vec![i; i % 3]);
        let expected: Vec<usize> = (0..50).flat_map(|i| vec![i; i % 3]).collect();
        assert_eq!(v, expected);
        assert_eq!(
            filter_map(20, |i| (i % 2 == 0).then_some(i)),
            (0..20).step_by(2).collect::<Vec<_>>()
        );
        assert!(all(10, |i| i < 10));
        assert_eq!(
            find_first(100, |i| (i > 40 && i % 7 == 0).then_some(i)),
            Some(42)
        );
    }
}
