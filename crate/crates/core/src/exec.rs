//! Execution strategy for the data-parallel kernels.
//!
//! Every kernel takes an [`Exec`] and produces identical results under both
//! variants: work is split into fixed chunks whose partial results are merged
//! in chunk order. Without the `parallel` feature, `Exec::Parallel` runs
//! sequentially.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn for_each<T, F>(self, items: &[T], f: F)
    where
        T: Sync,
        F: Fn(&T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            items.par_iter().for_each(f);
            return;
        }
        items.iter().for_each(f)
    }

    /// Splits `0..len` into consecutive chunks of `chunk` indices and maps each.
    /// Results come back in chunk order regardless of the strategy.
    pub fn map_chunks<R, F>(self, len: u64, chunk: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<u64>) -> R + Sync + Send,
    {
        let chunk = chunk.max(1);
        let ranges: Vec<Range<u64>> = (0..len.div_ceil(chunk)).map(|i| i * chunk..((i + 1) * chunk).min(len)).collect();
        self.map(&ranges, |r| f(r.clone()))
    }
}
