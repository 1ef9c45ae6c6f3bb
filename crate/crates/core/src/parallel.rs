//! Deterministic replicate-level parallelism.

use std::num::NonZeroUsize;

/// Number of worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers(NonZeroUsize);

impl Workers {
    /// `n` workers; zero is treated as one.
    pub fn new(n: usize) -> Self {
        Self(NonZeroUsize::new(n).unwrap_or(NonZeroUsize::MIN))
    }

    pub fn single() -> Self {
        Self(NonZeroUsize::MIN)
    }

    pub fn available() -> Self {
        Self(std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN))
    }

    pub fn get(&self) -> usize {
        self.0.get()
    }
}

impl Default for Workers {
    fn default() -> Self {
        Self::available()
    }
}

/// Evaluates `f(0) .. f(n-1)`, splitting the indices into contiguous blocks, one per
/// worker. The result is ordered by index whatever the number of workers.
pub fn parallel_map<T, F>(n: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let w = workers.get().min(n.max(1));
    if w == 1 {
        return (0..n).map(&f).collect();
    }
    let block = n.div_ceil(w);
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..w)
            .map(|k| {
                let range = (k * block).min(n)..((k + 1) * block).min(n);
                scope.spawn(move || range.map(f).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
