//! Real-valued objects: the logarithmic integral, the reciprocal prime sum
//! and its residual against `log log z`, and the closed-form main terms
//! (and error scales) that the exact counts are measured against.
//!
//! Everything here is `f64`. The exact counts live in [`crate::counting`].

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::ratio::Ratio;

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub relative_tolerance: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            relative_tolerance: 1e-12,
            max_depth: 60,
        }
    }
}

#[inline]
fn inv_ln(t: f64) -> f64 {
    1.0 / libm::log(t)
}

struct Panel {
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(a: f64, fa: f64, b: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let fm = inv_ln(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Panel {
            a,
            fa,
            m,
            fm,
            b,
            fb,
            whole,
        }
    }
}

fn adaptive_simpson(p: Panel, eps: f64, depth: u32) -> Result<f64> {
    let left = Panel::new(p.a, p.fa, p.m, p.fm);
    let right = Panel::new(p.m, p.fm, p.b, p.fb);
    let delta = left.whole + right.whole - p.whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left.whole + right.whole + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence { max_depth: 0 });
    }
    Ok(adaptive_simpson(left, eps / 2.0, depth - 1)?
        + adaptive_simpson(right, eps / 2.0, depth - 1)?)
}

/// `Li(x) = integral from 2 to x of dt / ln t`, by adaptive Simpson.
pub fn log_integral(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::Domain("log_integral needs a finite x >= 2"));
    }
    if cfg.relative_tolerance.is_nan() || cfg.relative_tolerance <= 0.0 || cfg.max_depth == 0 {
        return Err(Error::Domain(
            "quadrature needs relative_tolerance > 0 and max_depth >= 1",
        ));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let root = Panel::new(2.0, inv_ln(2.0), x, inv_ln(x));
    // Li(x) lies between (x - 2) / ln x and (x - 2) / ln 2; the lower bound
    // turns the relative tolerance into an absolute one without under-resolving.
    let eps = cfg.relative_tolerance * (x - 2.0) / libm::log(x);
    adaptive_simpson(root, eps, cfg.max_depth).map_err(|_| Error::NoConvergence {
        max_depth: cfg.max_depth,
    })
}

/// `sum_{p <= z} 1/p` next to `log log z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensResult {
    pub z: u64,
    pub sum: f64,
    pub loglog_z: f64,
    /// `sum - loglog_z`; tends to the Meissel-Mertens constant.
    pub residual: f64,
}

pub fn mertens_sum(table: &PrimeTable, z: u64) -> Result<MertensResult> {
    if z < 2 {
        return Err(Error::Domain("mertens_sum needs z >= 2"));
    }
    let primes = table.primes_between(0, z)?;
    let sum = reciprocal_sum(primes);
    let loglog_z = libm::log(libm::log(z as f64));
    Ok(MertensResult {
        z,
        sum,
        loglog_z,
        residual: sum - loglog_z,
    })
}

/// Compensated `sum 1/p` over `primes` in the given (ascending) order.
pub fn reciprocal_sum(primes: &[u64]) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(primes.iter().map(|&p| 1.0 / p as f64));
    acc.value()
}

fn ln_checked(x: u64, what: &'static str) -> Result<f64> {
    if x < 2 {
        return Err(Error::Domain(what));
    }
    Ok(libm::log(x as f64))
}

/// Main term of the RSA-integer count: `2 x ln r / ln^2 x`.
pub fn count_main_term(x: u64, r: Ratio) -> Result<f64> {
    let lx = ln_checked(x, "count main term needs x >= 2")?;
    Ok(2.0 * x as f64 * r.ln() / (lx * lx))
}

/// Error scale of the RSA-integer count: `r ln(e r) x / ln^3 x`.
pub fn count_error_scale(x: u64, r: Ratio) -> Result<f64> {
    let lx = ln_checked(x, "count error scale needs x >= 2")?;
    Ok(r.to_f64() * (1.0 + r.ln()) * x as f64 / (lx * lx * lx))
}

/// Main term of `sum_{p <= z} pi(r p)`: `r z^2 / (2 ln^2 z)`.
pub fn sum_pi_rp_main_term(z: u64, r: Ratio) -> Result<f64> {
    let lz = ln_checked(z, "sum pi(rp) main term needs z >= 2")?;
    let z = z as f64;
    Ok(r.to_f64() * z * z / (2.0 * lz * lz))
}

/// Error scale of `sum_{p <= z} pi(r p)`: `r ln(e r) z^2 / ln^3 z`.
pub fn sum_pi_rp_error_scale(z: u64, r: Ratio) -> Result<f64> {
    let lz = ln_checked(z, "sum pi(rp) error scale needs z >= 2")?;
    let z = z as f64;
    Ok(r.to_f64() * (1.0 + r.ln()) * z * z / (lz * lz * lz))
}

fn check_r_at_most_sqrt(x: u64, r: Ratio) -> Result<()> {
    if r.at_most_sqrt(x) {
        Ok(())
    } else {
        Err(Error::Domain("need 1 <= r <= sqrt(x)"))
    }
}

/// Main term of `H(x) = sum_{sqrt(x/r) < p <= sqrt x} 1/p`: `ln r / ln x`.
pub fn h_estimate(x: u64, r: Ratio) -> Result<f64> {
    let lx = ln_checked(x, "h_estimate needs x >= 2")?;
    check_r_at_most_sqrt(x, r)?;
    Ok(r.ln() / lx)
}

/// Error scale of `sum_{sqrt(x/r) < p <= sqrt x} pi(x/p)`: `x ln^2(e r) / ln^3 x`.
pub fn sum_pi_x_over_p_error_scale(x: u64, r: Ratio) -> Result<f64> {
    let lx = ln_checked(x, "error scale needs x >= 2")?;
    check_r_at_most_sqrt(x, r)?;
    let ler = 1.0 + r.ln();
    Ok(x as f64 * ler * ler / (lx * lx * lx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    /// Romberg integration of e^u / u over [ln 2, ln x], i.e. Li(x) after t = e^u.
    fn romberg_li(x: f64) -> f64 {
        let (a, b) = (2f64.ln(), x.ln());
        let f = |u: f64| u.exp() / u;
        let mut rows: Vec<Vec<f64>> = vec![vec![0.5 * (b - a) * (f(a) + f(b))]];
        for k in 1..22 {
            let n = 1usize << k;
            let h = (b - a) / n as f64;
            let mid: f64 = (0..n / 2).map(|i| f(a + (2 * i + 1) as f64 * h)).sum();
            let mut row = vec![0.5 * rows[k - 1][0] + h * mid];
            for j in 1..=k {
                let pow = 4f64.powi(j as i32);
                row.push((pow * row[j - 1] - rows[k - 1][j - 1]) / (pow - 1.0));
            }
            let done = (row[k] - rows[k - 1][k - 1]).abs() <= 1e-14 * row[k].abs();
            rows.push(row);
            if done && k > 4 {
                break;
            }
        }
        *rows.last().unwrap().last().unwrap()
    }

    #[test]
    fn li_matches_independent_quadrature() {
        let cfg = QuadratureConfig::default();
        assert_eq!(log_integral(2.0, &cfg).unwrap(), 0.0);
        for x in [2.5, 10.0, 100.0, 1e4, 1e5, 1e7] {
            let got = log_integral(x, &cfg).unwrap();
            let oracle = romberg_li(x);
            assert!(
                (got - oracle).abs() <= 1e-10 * oracle,
                "x={x}: {got} vs {oracle}"
            );
        }
        // frozen from the Romberg oracle
        assert!((log_integral(10.0, &cfg).unwrap() - 5.120435724669806).abs() < 1e-10);
        assert!((log_integral(100.0, &cfg).unwrap() - 29.08097780396214).abs() < 1e-9);
    }

    #[test]
    fn li_domain_and_config_errors() {
        let cfg = QuadratureConfig::default();
        assert!(log_integral(1.99, &cfg).is_err());
        assert!(log_integral(f64::NAN, &cfg).is_err());
        assert!(log_integral(f64::INFINITY, &cfg).is_err());
        let bad = QuadratureConfig {
            relative_tolerance: 0.0,
            ..cfg
        };
        assert!(log_integral(10.0, &bad).is_err());
        let shallow = QuadratureConfig {
            relative_tolerance: 1e-15,
            max_depth: 1,
        };
        assert_eq!(
            log_integral(1e6, &shallow),
            Err(Error::NoConvergence { max_depth: 1 })
        );
    }

    #[test]
    fn mertens_examples() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(mertens_sum(&t, 2).unwrap().sum, 0.5);
        let m = mertens_sum(&t, 10).unwrap();
        let by_hand = 1.0 / 2.0 + 1.0 / 3.0 + 1.0 / 5.0 + 1.0 / 7.0;
        assert!((m.sum - by_hand).abs() < 1e-15);
        assert!((m.sum - 1.176190).abs() < 1e-6);
        assert!((m.residual - 0.342158).abs() < 1e-6);
        assert_eq!(m.residual, m.sum - m.loglog_z);
        assert!(mertens_sum(&t, 1).is_err());
        assert!(mertens_sum(&t, 101).is_err());
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut acc = CompensatedSum::new();
        acc.extend([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(count_main_term(1_000_000, Ratio::ONE).unwrap(), 0.0);
        let v = count_main_term(1_000_000, r(2, 1)).unwrap();
        assert!((v - 7263.092555790381).abs() < 1e-6, "{v}");
        let e = count_main_term(100, r(2_718_282, 1_000_000)).unwrap();
        assert!((e - 9.431).abs() < 1e-3, "{e}");
        assert!(count_main_term(1, r(2, 1)).is_err());

        let ln100 = 100f64.ln();
        let base = sum_pi_rp_main_term(100, Ratio::ONE).unwrap();
        assert!((base - 1e4 / (2.0 * ln100 * ln100)).abs() < 1e-12);
        assert!((base - 235.765).abs() < 1e-3, "{base}");
        let doubled = sum_pi_rp_main_term(100, r(2, 1)).unwrap();
        assert!((doubled - 471.530).abs() < 1e-3, "{doubled}");
        assert!(sum_pi_rp_main_term(1, Ratio::ONE).is_err());

        assert_eq!(h_estimate(100, Ratio::ONE).unwrap(), 0.0);
        assert!((h_estimate(100, r(4, 1)).unwrap() - 0.301).abs() < 1e-3);
        assert_eq!(h_estimate(100, r(4, 1)).unwrap(), 4f64.ln() / 100f64.ln());
        assert!((h_estimate(1_000_000, r(2, 1)).unwrap() - 0.05017).abs() < 1e-5);
        assert!(h_estimate(100, r(11, 1)).is_err());
        assert!(h_estimate(100, r(10, 1)).is_ok());
    }

    #[test]
    fn error_scales() {
        let x = 100_000_000u64;
        let lx = (x as f64).ln();
        let s = count_error_scale(x, r(2, 1)).unwrap();
        assert!((s - 2.0 * (1.0 + 2f64.ln()) * 1e8 / lx.powi(3)).abs() < 1e-6);
        assert!((count_error_scale(x, Ratio::ONE).unwrap() - 1e8 / lx.powi(3)).abs() < 1e-6);
        let s4 = sum_pi_x_over_p_error_scale(x, r(2, 1)).unwrap();
        assert!((s4 - 1e8 * (1.0 + 2f64.ln()).powi(2) / lx.powi(3)).abs() < 1e-6);
        let s3 = sum_pi_rp_error_scale(1000, r(2, 1)).unwrap();
        assert!((s3 - 2.0 * (1.0 + 2f64.ln()) * 1e6 / 1000f64.ln().powi(3)).abs() < 1e-6);
    }
}
