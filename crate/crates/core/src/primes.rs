//! Segmented, odd-only, bit-packed sieve of Eratosthenes and the immutable
//! [`PrimeTable`] built from it.
//!
//! Odd `n = 2k + 1` is tracked as bit `k`. A segment covers a fixed run of
//! `k` values, so segments are independent given the base primes and can be
//! sieved in any order; callers concatenate them by index.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default segment size in bytes (256 KiB, roughly an L2 cache).
pub const DEFAULT_SEGMENT_BYTES: usize = 1 << 18;

/// Default memory budget for the stored prime list (8 GiB).
pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_bytes: usize,
    pub memory_budget_bytes: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_bytes: DEFAULT_SEGMENT_BYTES,
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Estimated bytes needed to hold every prime up to `limit`, using
/// `pi(limit) ~ limit / ln(limit)` at 8 bytes per prime.
pub fn estimated_table_bytes(limit: u64) -> u64 {
    if limit < 3 {
        return 8;
    }
    let l = limit as f64;
    let est = l / libm::log(l) * 8.0;
    if est >= u64::MAX as f64 {
        u64::MAX
    } else {
        est as u64
    }
}

/// Odd primes up to `n` by a plain (unsegmented) odd-only sieve.
fn small_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let len = ((n - 1) / 2) as usize + 1; // k in 0..len, n = 2k + 1
    let mut composite = vec![false; len];
    let mut out = Vec::new();
    for k in 1..len {
        if composite[k] {
            continue;
        }
        let p = 2 * k as u64 + 1;
        out.push(p);
        let mut j = (p * p - 1) / 2;
        while (j as usize) < len {
            composite[j as usize] = true;
            j += p;
        }
    }
    out
}

/// A sieve over `[0, limit]` split into segments of `segment_bytes * 8` odd numbers.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    limit: u64,
    base: Vec<u64>,
    bits_per_segment: u64,
    odd_count: u64,
}

impl SegmentedSieve {
    pub fn new(limit: u64, cfg: &SieveConfig) -> Result<Self> {
        let estimated_bytes = estimated_table_bytes(limit);
        if estimated_bytes > cfg.memory_budget_bytes {
            return Err(Error::BudgetExceeded {
                limit,
                estimated_bytes,
                budget_bytes: cfg.memory_budget_bytes,
            });
        }
        let segment_bytes = cfg.segment_bytes.max(8);
        // Round down to whole words.
        let bits_per_segment = (segment_bytes as u64 / 8) * 64;
        let odd_count = if limit == 0 { 0 } else { (limit - 1) / 2 + 1 };
        Ok(SegmentedSieve {
            limit,
            base: small_odd_primes(limit.isqrt()),
            bits_per_segment,
            odd_count,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_count(&self) -> usize {
        self.odd_count.div_ceil(self.bits_per_segment) as usize
    }

    /// Appends the primes of segment `index` to `out` in ascending order.
    /// Segment 0 also emits 2.
    pub fn sieve_segment(&self, index: usize, out: &mut Vec<u64>) {
        let lo_k = index as u64 * self.bits_per_segment;
        if lo_k >= self.odd_count {
            return;
        }
        let hi_k = (lo_k + self.bits_per_segment).min(self.odd_count);
        let span = (hi_k - lo_k) as usize;
        let mut words = vec![0u64; span.div_ceil(64)];

        let lo_n = 2 * lo_k + 1;
        for &p in &self.base {
            let sq = p * p;
            if sq > 2 * (hi_k - 1) + 1 {
                break;
            }
            let start_n = if sq >= lo_n {
                sq
            } else {
                // smallest odd multiple of p that is >= lo_n
                let m = lo_n.div_ceil(p);
                let m = if m % 2 == 0 { m + 1 } else { m };
                m * p
            };
            let mut k = (start_n - 1) / 2 - lo_k;
            while k < span as u64 {
                words[(k / 64) as usize] |= 1 << (k % 64);
                k += p;
            }
        }

        if index == 0 {
            // k = 0 is n = 1
            words[0] |= 1;
            if self.limit >= 2 {
                out.push(2);
            }
        }
        for (w, &word) in words.iter().enumerate() {
            let mut free = !word;
            while free != 0 {
                let bit = free.trailing_zeros() as u64;
                free &= free - 1;
                let k = w as u64 * 64 + bit;
                if k >= span as u64 {
                    break;
                }
                out.push(2 * (lo_k + k) + 1);
            }
        }
    }
}

/// Every prime up to an inclusive `limit`, with `pi(n)` answered by binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, &SieveConfig::default())
    }

    pub fn build_with(limit: u64, cfg: &SieveConfig) -> Result<Self> {
        let sieve = SegmentedSieve::new(limit, cfg)?;
        let mut primes = Vec::with_capacity(capacity_hint(limit));
        for i in 0..sieve.segment_count() {
            sieve.sieve_segment(i, &mut primes);
        }
        Ok(PrimeTable { limit, primes })
    }

    /// Wraps an existing prime list, checking that it is strictly increasing,
    /// starts at 2 or later and stays within `limit`.
    pub fn from_parts(limit: u64, primes: Vec<u64>) -> Result<Self> {
        if primes.first().is_some_and(|&p| p < 2) {
            return Err(Error::InvalidTable("entry below 2"));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTable("primes not strictly increasing"));
        }
        if primes.last().is_some_and(|&p| p > limit) {
            return Err(Error::InvalidTable("prime above the table limit"));
        }
        Ok(PrimeTable { limit, primes })
    }

    #[inline]
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    #[inline]
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn into_primes(self) -> Vec<u64> {
        self.primes
    }

    #[inline]
    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::OutOfRange {
                n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Fails with [`Error::TableTooSmall`] unless `n` is within the table.
    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::TableTooSmall {
                required: n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// `pi(n)` without the range check. Callers guarantee `n <= limit`.
    #[inline]
    pub(crate) fn pi(&self, n: u64) -> u64 {
        debug_assert!(n <= self.limit);
        self.primes.partition_point(|&p| p <= n) as u64
    }

    /// Number of primes `<= n`.
    pub fn prime_count(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.pi(n))
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(self.primes.binary_search(&n).is_ok())
    }

    /// Primes `p` with `lo_exclusive < p <= hi_inclusive`, ascending.
    pub fn primes_between(&self, lo_exclusive: u64, hi_inclusive: u64) -> Result<&[u64]> {
        self.check(hi_inclusive)?;
        if lo_exclusive >= hi_inclusive {
            return Ok(&[]);
        }
        let a = self.pi(lo_exclusive) as usize;
        let b = self.pi(hi_inclusive) as usize;
        Ok(&self.primes[a..b])
    }

    /// Index range of the primes `<= n` (clamped to the table).
    pub(crate) fn index_upto(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }
}

fn capacity_hint(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    // pi(x) < 1.25506 x / ln x for x >= 17
    let l = limit as f64;
    (1.25506 * l / libm::log(l)) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn tiny_limits() {
        assert_eq!(PrimeTable::build(0).unwrap().count(), 0);
        assert_eq!(PrimeTable::build(1).unwrap().count(), 0);
        assert_eq!(PrimeTable::build(2).unwrap().primes(), &[2]);
        assert_eq!(PrimeTable::build(3).unwrap().primes(), &[2, 3]);
        assert_eq!(
            PrimeTable::build(20).unwrap().primes(),
            &[2, 3, 5, 7, 11, 13, 17, 19]
        );
    }

    #[test]
    fn segment_boundaries_do_not_matter() {
        let reference = PrimeTable::build(200_000).unwrap();
        for segment_bytes in [8, 16, 24, 1000, 4096] {
            let cfg = SieveConfig {
                segment_bytes,
                ..SieveConfig::default()
            };
            let t = PrimeTable::build_with(200_000, &cfg).unwrap();
            assert_eq!(t, reference, "segment_bytes = {segment_bytes}");
        }
    }

    #[test]
    fn every_limit_up_to_600_matches_trial_division() {
        let cfg = SieveConfig {
            segment_bytes: 8,
            ..SieveConfig::default()
        };
        for limit in 0..600u64 {
            let t = PrimeTable::build_with(limit, &cfg).unwrap();
            let expected: Vec<u64> = (0..=limit).filter(|&n| trial_division(n)).collect();
            assert_eq!(t.primes(), expected.as_slice(), "limit {limit}");
        }
    }

    #[test]
    fn queries_reject_out_of_range() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(
            t.prime_count(101),
            Err(Error::OutOfRange { n: 101, limit: 100 })
        );
        assert!(t.is_prime(1000).is_err());
        assert!(t.primes_between(0, 101).is_err());
        assert_eq!(t.prime_count(100), Ok(25));
    }

    #[test]
    fn primes_between_examples() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(t.primes_between(5, 10).unwrap(), &[7]);
        assert!(t.primes_between(7, 7).unwrap().is_empty());
        assert!(t.primes_between(50, 7).unwrap().is_empty());
        assert_eq!(t.primes_between(0, 5).unwrap(), &[2, 3, 5]);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SieveConfig {
            memory_budget_bytes: 1024,
            ..SieveConfig::default()
        };
        match PrimeTable::build_with(1_000_000, &cfg) {
            Err(Error::BudgetExceeded { budget_bytes, .. }) => assert_eq!(budget_bytes, 1024),
            other => panic!("expected budget error, got {other:?}"),
        }
        // default budget refuses absurd limits before allocating anything
        assert!(matches!(
            PrimeTable::build(u64::MAX),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn from_parts_validates() {
        assert!(PrimeTable::from_parts(10, vec![2, 3, 5, 7]).is_ok());
        assert!(PrimeTable::from_parts(10, vec![2, 5, 3]).is_err());
        assert!(PrimeTable::from_parts(10, vec![2, 2]).is_err());
        assert!(PrimeTable::from_parts(6, vec![2, 3, 5, 7]).is_err());
        assert!(PrimeTable::from_parts(10, vec![1, 3]).is_err());
    }
}
