//! Exact counts of RSA integers `n = p q <= x` with primes `p < q <= r p`.
//!
//! Two independent routes:
//!
//! * [`count_brute`] enumerates the pairs `(p, q)` directly.
//! * [`count_identity`] never looks at pairs. It sums prime counts over
//!   `p <= sqrt x`:
//!
//!   `C_r(x) = -S1 + S2 + S3`, with
//!   `S1 = sum_{p <= sqrt x} pi(p)`,
//!   `S2 = sum_{p <= sqrt(x/r)} pi(r p)` and
//!   `S3 = sum_{sqrt(x/r) < p <= sqrt x} pi(x / p)`.
//!
//! Both use the inclusive bound `q <= r p`. `pi(r p)` means
//! `pi(floor(num p / den))`, `pi(x / p)` means `pi(floor(x / p))`, and the
//! range split `p <= sqrt(x / r)` is the integer test `p^2 num <= x den`.

use core::ops::{Add, Range};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::ratio::Ratio;

/// Default cap on `x` for the pair-enumeration counters.
pub const DEFAULT_BRUTE_BUDGET: u64 = 100_000_000;

/// The three prime-count sums and the count they combine to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub s1: u64,
    pub s2: u64,
    pub s3: u64,
    pub total: u64,
}

impl Decomposition {
    /// Combines the sums into `total = s2 + s3 - s1`.
    ///
    /// Over any set of primes `p <= sqrt x` every term `pi(min(rp, x/p)) - pi(p)`
    /// is non-negative, so the subtraction cannot underflow for sums produced
    /// by this module.
    pub fn from_sums(s1: u64, s2: u64, s3: u64) -> Self {
        let total = (s2 + s3)
            .checked_sub(s1)
            .expect("s2 + s3 >= s1 for sums over primes p <= sqrt(x)");
        Decomposition { s1, s2, s3, total }
    }
}

impl Add for Decomposition {
    type Output = Decomposition;

    fn add(self, rhs: Self) -> Self {
        Decomposition::from_sums(self.s1 + rhs.s1, self.s2 + rhs.s2, self.s3 + rhs.s3)
    }
}

impl core::iter::Sum for Decomposition {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Decomposition::default(), Add::add)
    }
}

/// Largest value ever passed to `pi` when counting up to `x`: `floor(sqrt(r x))`.
pub fn required_limit(x: u64, r: Ratio) -> u64 {
    r.isqrt_rx(x)
}

/// Number of primes `q` with `p < q <= min(r p, x / p)`.
pub fn f_p(table: &PrimeTable, p: u64, x: u64, r: Ratio) -> Result<u64> {
    if p as u128 * p as u128 > x as u128 {
        return Ok(0);
    }
    let hi = if r.below_sqrt_x_over_r(p, x) {
        r.floor_mul(p) as u64
    } else {
        x / p
    };
    table.require(hi)?;
    if !table.is_prime(p)? {
        return Err(Error::NotPrime(p));
    }
    Ok(table.pi(hi) - table.pi(p))
}

fn check_brute(x: u64, budget: u64) -> Result<()> {
    if x > budget {
        Err(Error::BruteBudgetExceeded { x, budget })
    } else {
        Ok(())
    }
}

/// Counts pairs `(p, q)` by direct double iteration over a table that the
/// caller sized to at least [`required_limit`].
pub fn count_brute_with(table: &PrimeTable, x: u64, r: Ratio, budget: u64) -> Result<u64> {
    check_brute(x, budget)?;
    table.require(required_limit(x, r))?;
    let primes = table.primes();
    let mut count = 0u64;
    for (i, &p) in primes.iter().enumerate() {
        if p as u128 * p as u128 > x as u128 {
            break;
        }
        for &q in &primes[i + 1..] {
            if !r.bounds(q, p) || p as u128 * q as u128 > x as u128 {
                break;
            }
            count += 1;
        }
    }
    Ok(count)
}

/// [`count_brute_with`] over a freshly sieved table.
pub fn count_brute(x: u64, r: Ratio, budget: u64) -> Result<u64> {
    check_brute(x, budget)?;
    let table = PrimeTable::build(required_limit(x, r))?;
    count_brute_with(&table, x, r, budget)
}

/// `C_r(x)` for every `x` in `0..=max_x` at once: each admissible product
/// `p q <= max_x` is marked, then prefix-summed.
pub fn brute_sweep(table: &PrimeTable, max_x: u64, r: Ratio, budget: u64) -> Result<Vec<u64>> {
    check_brute(max_x, budget)?;
    table.require(required_limit(max_x, r))?;
    let mut hits = vec![0u64; max_x as usize + 1];
    let primes = table.primes();
    for (i, &p) in primes.iter().enumerate() {
        if p as u128 * p as u128 > max_x as u128 {
            break;
        }
        for &q in &primes[i + 1..] {
            if !r.bounds(q, p) {
                break;
            }
            let n = p as u128 * q as u128;
            if n > max_x as u128 {
                break;
            }
            hits[n as usize] += 1;
        }
    }
    let mut running = 0;
    for h in hits.iter_mut() {
        running += *h;
        *h = running;
    }
    Ok(hits)
}

/// Number of primes `p <= sqrt x`, i.e. the length of the sum in [`count_identity`].
pub fn identity_terms(table: &PrimeTable, x: u64) -> usize {
    table.index_upto(x.isqrt())
}

/// The decomposition restricted to the primes with table indices in `range`.
/// Summing the results over a partition of `0..identity_terms(table, x)`
/// gives [`count_identity`].
pub fn count_identity_partial(
    table: &PrimeTable,
    x: u64,
    r: Ratio,
    range: Range<usize>,
) -> Result<Decomposition> {
    table.require(required_limit(x, r))?;
    let terms = identity_terms(table, x);
    let range = range.start.min(terms)..range.end.min(terms);
    let (mut s1, mut s2, mut s3) = (0u64, 0u64, 0u64);
    for idx in range {
        let p = table.primes()[idx];
        s1 += idx as u64 + 1;
        if r.below_sqrt_x_over_r(p, x) {
            s2 += table.pi(r.floor_mul(p) as u64);
        } else {
            s3 += table.pi(x / p);
        }
    }
    Ok(Decomposition::from_sums(s1, s2, s3))
}

/// `C_r(x)` through the prime-count decomposition. The table must reach
/// `floor(sqrt(r x))`.
pub fn count_identity(table: &PrimeTable, x: u64, r: Ratio) -> Result<Decomposition> {
    count_identity_partial(table, x, r, 0..usize::MAX)
}

/// Number of `n <= x` that are a product of two distinct primes.
pub fn count_pi2(table: &PrimeTable, x: u64) -> Result<u64> {
    if x < 4 {
        return Ok(0);
    }
    table.require(x / 2)?;
    let mut total = 0;
    for (idx, &p) in table.primes().iter().enumerate() {
        if p * p > x {
            break;
        }
        total += table.pi(x / p) - (idx as u64 + 1);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    #[test]
    fn f_p_examples() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(f_p(&t, 11, 100, r(2, 1)), Ok(0));
        assert_eq!(f_p(&t, 7, 100, r(2, 1)), Ok(2));
        assert_eq!(f_p(&t, 5, 100, r(2, 1)), Ok(1));
        assert_eq!(f_p(&t, 9, 100, r(2, 1)), Err(Error::NotPrime(9)));
        let small = PrimeTable::build(10).unwrap();
        assert_eq!(
            f_p(&small, 7, 100, r(2, 1)),
            Err(Error::TableTooSmall {
                required: 14,
                limit: 10
            })
        );
    }

    #[test]
    fn brute_examples() {
        for x in [0, 1, 10, 100, 1000] {
            assert_eq!(count_brute(x, Ratio::ONE, DEFAULT_BRUTE_BUDGET), Ok(0));
        }
        assert_eq!(count_brute(100, r(2, 1), DEFAULT_BRUTE_BUDGET), Ok(5));
        assert_eq!(count_brute(200, r(2, 1), DEFAULT_BRUTE_BUDGET), Ok(7));
        assert_eq!(
            count_brute(101, r(2, 1), 100),
            Err(Error::BruteBudgetExceeded {
                x: 101,
                budget: 100
            })
        );
    }

    #[test]
    fn identity_examples() {
        let t = PrimeTable::build(1000).unwrap();
        assert_eq!(
            count_identity(&t, 100, r(2, 1)),
            Ok(Decomposition {
                s1: 10,
                s2: 15,
                s3: 0,
                total: 5
            })
        );
        assert_eq!(count_identity(&t, 200, r(2, 1)).unwrap().total, 7);
        assert_eq!(count_identity(&t, 1000, Ratio::ONE).unwrap().total, 0);
        for x in 0..4 {
            assert_eq!(count_identity(&t, x, r(5, 1)).unwrap().total, 0);
        }
        let small = PrimeTable::build(13).unwrap();
        assert_eq!(
            count_identity(&small, 100, r(2, 1)),
            Err(Error::TableTooSmall {
                required: 14,
                limit: 13
            })
        );
    }

    #[test]
    fn rational_boundary_counts_q_equal_rp() {
        // r = 7/5: q = 7 = r * 5 is admitted by the inclusive bound.
        let t = PrimeTable::build(1000).unwrap();
        let rr = r(7, 5);
        assert_eq!(count_brute_with(&t, 35, rr, DEFAULT_BRUTE_BUDGET), Ok(1));
        assert_eq!(count_identity(&t, 35, rr).unwrap().total, 1);
        assert_eq!(
            count_brute_with(&t, 35, r(69, 50), DEFAULT_BRUTE_BUDGET),
            Ok(0)
        );
        assert_eq!(count_identity(&t, 35, r(69, 50)).unwrap().total, 0);
    }

    #[test]
    fn pi2_examples() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(count_pi2(&t, 1), Ok(0));
        assert_eq!(count_pi2(&t, 6), Ok(1));
        assert_eq!(count_pi2(&t, 30), Ok(7));
        let small = PrimeTable::build(10).unwrap();
        assert_eq!(
            count_pi2(&small, 30),
            Err(Error::TableTooSmall {
                required: 15,
                limit: 10
            })
        );
    }

    #[test]
    fn sweep_matches_single_counts() {
        let rr = r(3, 2);
        let t = PrimeTable::build(required_limit(5000, rr)).unwrap();
        let sweep = brute_sweep(&t, 5000, rr, DEFAULT_BRUTE_BUDGET).unwrap();
        for x in (0..=5000).step_by(37) {
            assert_eq!(
                sweep[x as usize],
                count_brute_with(&t, x, rr, DEFAULT_BRUTE_BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn partials_add_up() {
        let rr = r(5, 1);
        let x = 1_000_000;
        let t = PrimeTable::build(required_limit(x, rr)).unwrap();
        let n = identity_terms(&t, x);
        let whole = count_identity(&t, x, rr).unwrap();
        let split: Decomposition = [0..7, 7..50, 50..n]
            .into_iter()
            .map(|range| count_identity_partial(&t, x, rr, range).unwrap())
            .sum();
        assert_eq!(whole, split);
    }
}
