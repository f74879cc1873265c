//! The aspect-ratio bound `r` as an exact rational.
//!
//! Every comparison against `r` (`q <= r p`, `p <= sqrt(x / r)`) is done by
//! cross-multiplication in `u128`, so the two counting routes agree at
//! boundaries such as `r p` landing exactly on a prime.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A rational `num / den` with `num >= den >= 1`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::InvalidRatio { num, den });
        }
        let g = gcd(num, den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    #[inline]
    pub fn num(self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `ln r`, computed as `log1p((num - den) / den)` so ratios close to 1
    /// keep their relative precision.
    pub fn ln(self) -> f64 {
        libm::log1p((self.num - self.den) as f64 / self.den as f64)
    }

    /// Exact product, reduced. Fails if the reduced result does not fit in `u64`.
    pub fn checked_mul(self, other: Ratio) -> Result<Ratio> {
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let num = (self.num / g1).checked_mul(other.num / g2);
        let den = (self.den / g2).checked_mul(other.den / g1);
        match (num, den) {
            (Some(num), Some(den)) => Ratio::new(num, den),
            _ => Err(Error::Overflow("ratio product")),
        }
    }

    /// `floor(r * n)`.
    #[inline]
    pub fn floor_mul(self, n: u64) -> u128 {
        self.num as u128 * n as u128 / self.den as u128
    }

    /// `q <= r * p`, exactly.
    #[inline]
    pub fn bounds(self, q: u64, p: u64) -> bool {
        q as u128 * self.den as u128 <= self.num as u128 * p as u128
    }

    /// `p <= sqrt(x / r)`, decided as `p^2 num <= x den`.
    #[inline]
    pub fn below_sqrt_x_over_r(self, p: u64, x: u64) -> bool {
        let lhs = (p as u128 * p as u128).checked_mul(self.num as u128);
        match lhs {
            Some(lhs) => lhs <= x as u128 * self.den as u128,
            None => false,
        }
    }

    /// `floor(sqrt(x / r))`: the largest integer `b` with `b^2 num <= x den`.
    pub fn isqrt_x_over(self, x: u64) -> u64 {
        let q = x as u128 * self.den as u128 / self.num as u128;
        // q <= x, so it fits in u64
        (q as u64).isqrt()
    }

    /// `floor(sqrt(r * x))`.
    pub fn isqrt_rx(self, x: u64) -> u64 {
        self.floor_mul(x).isqrt() as u64
    }

    /// `r <= sqrt(x)`, decided as `num^2 <= x den^2`.
    pub fn at_most_sqrt(self, x: u64) -> bool {
        let lhs = self.num as u128 * self.num as u128;
        match (x as u128).checked_mul(self.den as u128 * self.den as u128) {
            Some(rhs) => lhs <= rhs,
            None => true,
        }
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Error from parsing a ratio string.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRatioError {
    #[error("malformed ratio {0:?}, expected forms like 2, 1.5 or 3/2")]
    Malformed(alloc::string::String),
    #[error("ratio {0:?} does not fit in 64-bit numerator and denominator")]
    TooLarge(alloc::string::String),
    #[error("ratio {0:?} must be at least 1")]
    BelowOne(alloc::string::String),
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Ratio {
    type Err = ParseRatioError;

    /// Accepts `"n"`, `"a/b"` and decimals `"i.f"`. Decimals become
    /// `(i * 10^k + f) / 10^k` before reduction, so `"1.5"` is exactly `3/2`.
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        use alloc::string::ToString;
        let s = s.trim();
        let malformed = || ParseRatioError::Malformed(s.to_string());
        let too_large = || ParseRatioError::TooLarge(s.to_string());

        let (num, den) = if let Some((a, b)) = s.split_once('/') {
            let num = parse_digits(a.trim()).ok_or_else(malformed)?;
            let den = parse_digits(b.trim()).ok_or_else(malformed)?;
            (num, den)
        } else if let Some((int, frac)) = s.split_once('.') {
            if int.is_empty() && frac.is_empty() {
                return Err(malformed());
            }
            let int = if int.is_empty() {
                0
            } else {
                parse_digits(int).ok_or_else(malformed)?
            };
            let frac_digits = frac.trim_end_matches('0');
            let frac_val = if frac_digits.is_empty() {
                if !frac.bytes().all(|b| b == b'0') {
                    return Err(malformed());
                }
                0
            } else {
                parse_digits(frac_digits).ok_or_else(malformed)?
            };
            let den = 10u64
                .checked_pow(frac_digits.len() as u32)
                .ok_or_else(too_large)?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac_val))
                .ok_or_else(too_large)?;
            (num, den)
        } else {
            (parse_digits(s).ok_or_else(malformed)?, 1)
        };
        if den == 0 {
            return Err(malformed());
        }
        Ratio::new(num, den).map_err(|_| ParseRatioError::BelowOne(s.to_string()))
    }
}
