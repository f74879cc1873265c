//! Thread-parallel drivers over the core crate. Work is split into
//! contiguous chunks and merged in chunk order, so results never depend on
//! the thread count.

use std::ops::Range;
use std::thread;

use rsad_core::counting::{self, Decomposition};
use rsad_core::primes::SegmentedSieve;
use rsad_core::{PrimeTable, Ratio, Result, SieveConfig};

/// Splits `0..len` into at most `parts` contiguous, nearly equal ranges.
pub fn split(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let end = start + base + usize::from(i < extra);
            let r = start..end;
            start = end;
            r
        })
        .collect()
}

/// Runs `f` on each chunk of `0..len` on its own thread; results come back in chunk order.
pub fn map_chunks<T, F>(len: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync,
{
    let chunks = split(len, threads);
    if chunks.len() == 1 {
        return chunks.into_iter().map(&f).collect();
    }
    thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|c| {
                let f = &f;
                s.spawn(move || f(c))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Sieves segments concurrently and concatenates them in segment order.
pub fn build_table(limit: u64, cfg: &SieveConfig, threads: usize) -> Result<PrimeTable> {
    let sieve = SegmentedSieve::new(limit, cfg)?;
    let segments = sieve.segment_count();
    let parts = map_chunks(segments, threads, |range| {
        let mut out = Vec::new();
        for i in range {
            sieve.sieve_segment(i, &mut out);
        }
        out
    });
    let mut primes = Vec::with_capacity(parts.iter().map(Vec::len).sum());
    for part in parts {
        primes.extend(part);
    }
    PrimeTable::from_parts(limit, primes)
}

/// [`counting::count_identity`] with the prime loop split across threads.
pub fn count_identity(
    table: &PrimeTable,
    x: u64,
    r: Ratio,
    threads: usize,
) -> Result<Decomposition> {
    table.require(counting::required_limit(x, r))?;
    let terms = counting::identity_terms(table, x);
    map_chunks(terms, threads, |range| {
        counting::count_identity_partial(table, x, r, range)
    })
    .into_iter()
    .sum()
}
