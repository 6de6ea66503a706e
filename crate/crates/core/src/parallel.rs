//! Order-preserving batch parallelism over record streams.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_BATCH: usize = 4096;

/// Runs `f` on a rayon pool with exactly `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Maps `items` in parallel batches of `batch` and feeds the results to
/// `sink` in input order. Output is independent of the pool size.
pub fn map_ordered<T, U, I, F, S>(items: I, batch: usize, f: F, mut sink: S) -> Result<()>
where
    I: IntoIterator<Item = Result<T>>,
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync,
    S: FnMut(U) -> Result<()>,
{
    let batch = batch.max(1);
    let mut buf = Vec::with_capacity(batch);
    let flush = |buf: &mut Vec<T>, sink: &mut S| -> Result<()> {
        let out: Vec<U> = std::mem::take(buf).into_par_iter().map(&f).collect();
        out.into_iter().try_for_each(&mut *sink)
    };
    for item in items {
        buf.push(item?);
        if buf.len() == batch {
            flush(&mut buf, &mut sink)?;
        }
    }
    flush(&mut buf, &mut sink)
}
