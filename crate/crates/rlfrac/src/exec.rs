//! Data-parallel mapping helpers.
//!
//! Grid sampling and per-(t, s) residual checks are embarrassingly
//! parallel. With the `parallel` feature (default) `map_collect` fans out
//! over rayon; without it the same call is a plain sequential map, so the
//! crate builds and behaves identically on targets without a thread pool.
//!
//! Both variants preserve input order, and every element is computed by a
//! fixed sequence of floating-point operations, so results are
//! bit-identical across thread counts and runs. Reductions are never done
//! in parallel: callers fold the collected `Vec` in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order. Parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential map with the same signature as [`map_collect`]. Exists so the
/// bench suite can compare the two paths inside one build.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let xs: Vec<f64> = (1..200).map(|i| i as f64 * 0.37).collect();
        let f = |x: &f64| (x.sin() * x.exp()).sqrt().to_bits();
        assert_eq!(map_collect(&xs, f), map_collect_seq(&xs, f));
    }
}
