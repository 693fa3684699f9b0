//! Data-parallel helpers with a sequential fallback. The `parallel` feature
//! (default) routes bulk point evaluation through rayon; without it the same
//! entry points run sequentially so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over items, collecting results in input order.
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Always-sequential variant, kept callable with the feature enabled so the
/// bench suite can compare both code paths in one build.
pub fn map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
