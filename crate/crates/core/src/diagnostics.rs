//! Exact sums next to their predicted main terms.
//!
//! Each probe returns a [`ProbeRow`]: the exact integer sum, the main term,
//! their ratio, and `|exact - main|` divided by the error scale the
//! asymptotic claims for that sum. No probe asserts a bound on the
//! normalized error; it is reported so boundedness can be checked across
//! scales.

use alloc::vec::Vec;

use crate::analytic::{self, reciprocal_sum};
use crate::counting;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    /// `z` or `x`, depending on the probe.
    pub scale: u64,
    pub r: Ratio,
    pub exact: u64,
    pub main_term: f64,
    pub ratio: f64,
    pub err_normalized: f64,
}

impl ProbeRow {
    fn new(scale: u64, r: Ratio, exact: u64, main_term: f64, error_scale: f64) -> Self {
        let e = exact as f64;
        let ratio = if main_term != 0.0 {
            e / main_term
        } else if exact == 0 {
            1.0
        } else {
            f64::INFINITY
        };
        ProbeRow {
            scale,
            r,
            exact,
            main_term,
            ratio,
            err_normalized: (e - main_term).abs() / error_scale,
        }
    }

    pub fn abs_error(&self) -> f64 {
        (self.exact as f64 - self.main_term).abs()
    }
}

/// `sum_{p <= z} pi(p)`, checked against `pi(z) (pi(z) + 1) / 2`.
///
/// As `p` runs over the primes up to `z`, `pi(p)` takes each value
/// `1, 2, ..., pi(z)` once. A mismatch means the table is broken.
pub fn sum_pi_p(table: &PrimeTable, z: u64) -> Result<u64> {
    let n = table.prime_count(z)?;
    let mut sum = 0u64;
    for &p in table.primes_between(0, z)? {
        sum += table.prime_count(p)?;
    }
    let expected = n * (n + 1) / 2;
    if sum != expected {
        return Err(Error::IdentityViolation { z, sum, expected });
    }
    Ok(sum)
}

/// Exact `sum_{p <= z} pi(floor(r p))` against `r z^2 / (2 ln^2 z)`.
pub fn sum_pi_rp_probe(table: &PrimeTable, z: u64, r: Ratio) -> Result<ProbeRow> {
    let main = analytic::sum_pi_rp_main_term(z, r)?;
    let scale = analytic::sum_pi_rp_error_scale(z, r)?;
    let top = r.floor_mul(z);
    if top > table.limit() as u128 {
        return Err(Error::TableTooSmall {
            required: u64::try_from(top).unwrap_or(u64::MAX),
            limit: table.limit(),
        });
    }
    let exact = table
        .primes_between(0, z)?
        .iter()
        .map(|&p| table.pi(r.floor_mul(p) as u64))
        .sum();
    Ok(ProbeRow::new(z, r, exact, main, scale))
}

fn upper_band(table: &PrimeTable, x: u64, r: Ratio) -> Result<&[u64]> {
    if !r.at_most_sqrt(x) {
        return Err(Error::Domain("need 1 <= r <= sqrt(x)"));
    }
    table.require(counting::required_limit(x, r))?;
    table.primes_between(r.isqrt_x_over(x), x.isqrt())
}

/// Exact `sum_{sqrt(x/r) < p <= sqrt x} pi(floor(x / p))` against `2 x ln r / ln^2 x`.
pub fn sum_pi_x_over_p_probe(table: &PrimeTable, x: u64, r: Ratio) -> Result<ProbeRow> {
    let main = analytic::count_main_term(x, r)?;
    let scale = analytic::sum_pi_x_over_p_error_scale(x, r)?;
    let exact = upper_band(table, x, r)?
        .iter()
        .map(|&p| table.pi(x / p))
        .sum();
    Ok(ProbeRow::new(x, r, exact, main, scale))
}

/// `H(x) = sum_{sqrt(x/r) < p <= sqrt x} 1/p`, compensated, ascending.
pub fn h_sum(table: &PrimeTable, x: u64, r: Ratio) -> Result<f64> {
    Ok(reciprocal_sum(upper_band(table, x, r)?))
}

/// Exact `C_r(x)` next to `2 x ln r / ln^2 x`, normalized by `r ln(e r) x / ln^3 x`.
pub fn convergence_row(table: &PrimeTable, x: u64, r: Ratio) -> Result<ProbeRow> {
    let main = analytic::count_main_term(x, r)?;
    let scale = analytic::count_error_scale(x, r)?;
    let exact = counting::count_identity(table, x, r)?.total;
    Ok(ProbeRow::new(x, r, exact, main, scale))
}

pub fn convergence_table(table: &PrimeTable, x_values: &[u64], r: Ratio) -> Result<Vec<ProbeRow>> {
    if x_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("x values must be strictly ascending"));
    }
    x_values
        .iter()
        .map(|&x| convergence_row(table, x, r))
        .collect()
}
