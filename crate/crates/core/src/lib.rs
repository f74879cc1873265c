//! Exact and asymptotic counting of RSA integers: products `n = p q <= x`
//! of primes with `p < q <= r p`.
//!
//! The crate is `no_std` (it needs `alloc` for the prime list). IO, the
//! cache file format, threading and the command line live in the `rsad`
//! crate.
//!
//! ```
//! use rsad_core::{counting, PrimeTable, Ratio};
//!
//! let r: Ratio = "2".parse().unwrap();
//! let table = PrimeTable::build(counting::required_limit(100, r)).unwrap();
//! let d = counting::count_identity(&table, 100, r).unwrap();
//! assert_eq!((d.s1, d.s2, d.s3, d.total), (10, 15, 0, 5));
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytic;
pub mod counting;
pub mod diagnostics;
pub mod error;
pub mod primes;
pub mod ratio;

pub use analytic::{log_integral, mertens_sum, MertensResult, QuadratureConfig};
pub use counting::{count_brute, count_identity, count_pi2, Decomposition};
pub use diagnostics::ProbeRow;
pub use error::{Error, Result};
pub use primes::{PrimeTable, SieveConfig};
pub use ratio::{ParseRatioError, Ratio};
