//! Worker-count-independent parallel map.
//!
//! Work is always cut into the same chunks regardless of how many threads run
//! it, and results come back in chunk order, so any reduction the caller does
//! afterwards is bit-for-bit reproducible across worker counts.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs `f(chunk_index)` for every chunk on a pool of `workers` threads and
/// returns the results in chunk order.
pub fn map_chunks<T, F>(n_chunks: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers == 0 {
        return Err(Error::Config("worker count must be >= 1".into()));
    }
    if workers == 1 {
        return Ok((0..n_chunks).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..n_chunks).into_par_iter().map(f).collect()))
}

/// Splits the inclusive range `lo..=hi` into consecutive pieces of at most
/// `chunk` elements.
pub fn split_range(lo: u64, hi: u64, chunk: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut start = lo;
    loop {
        let end = start.saturating_add(chunk - 1).min(hi);
        out.push((start, end));
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_order_is_preserved() {
        let a = map_chunks(100, 1, |i| i * i).unwrap();
        let b = map_chunks(100, 4, |i| i * i).unwrap();
        assert_eq!(a, b);
        assert!(map_chunks(1, 0, |i| i).is_err());
    }

    #[test]
    fn ranges_cover_exactly() {
        assert_eq!(split_range(1, 10, 4), vec![(1, 4), (5, 8), (9, 10)]);
        assert_eq!(split_range(5, 5, 4), vec![(5, 5)]);
        assert!(split_range(6, 5, 4).is_empty());
    }
}
