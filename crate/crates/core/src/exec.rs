//! Execution helper: data-parallel map when the `parallel` feature is on,
//! plain sequential map otherwise. Both preserve input order, so observable
//! output never depends on the degree of parallelism.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}
