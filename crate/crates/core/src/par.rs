//! Order-preserving data parallelism; sequential without the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= 256 {
            return (0..n).into_par_iter().with_min_len(64).map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

pub fn map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        return items.par_iter().map(f).collect();
    }
    #[allow(unreachable_code)]
    items.iter().map(f).collect()
}
