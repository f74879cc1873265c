//! The `rsad` command line.
//!
//! Exit codes: 0 success, 1 io or internal failure, 2 bad input,
//! 3 table or budget limits, 4 the two counting methods (or a verify check)
//! disagree.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use rsad_core::analytic::{self, count_main_term};
use rsad_core::counting::{self, brute_sweep, count_brute_with, count_pi2};
use rsad_core::diagnostics::{self, sum_pi_p};
use rsad_core::primes::DEFAULT_MEMORY_BUDGET;
use rsad_core::{PrimeTable, QuadratureConfig, Ratio, SieveConfig};

use crate::cache;
use crate::parallel;
use crate::report::{self, Cell, CountReport, Format, Method, Table};

/// Extra headroom added to auto-sized prime tables.
const AUTO_MARGIN: u64 = 64;

/// Environment variable that, when set, replaces `--cache`.
pub const CACHE_ENV: &str = "RSAD_CACHE";

#[derive(Debug, Parser)]
#[command(
    name = "rsad",
    version,
    about = "Count RSA integers pq <= x with p < q <= rp"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Prime table cache file (RSAD_CACHE overrides this)
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Prime table limit [default: sized from the inputs]
    #[arg(long, global = true, value_parser = parse_count)]
    pub table_limit: Option<u64>,
    /// Largest x the brute-force counter accepts
    #[arg(long, global = true, value_parser = parse_positive, default_value = "100000000")]
    pub brute_budget: u64,
    /// Memory budget for the prime table, in bytes
    #[arg(long, global = true, value_parser = parse_positive, default_value_t = DEFAULT_MEMORY_BUDGET)]
    pub memory_budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact count C_r(x) with the main-term estimate
    Count {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long)]
        r: Ratio,
        #[arg(long, value_enum, default_value_t = Method::Identity)]
        method: Method,
    },
    /// Convergence table over a geometric grid of x
    Table {
        #[arg(long, value_parser = parse_count)]
        x_min: u64,
        #[arg(long, value_parser = parse_count)]
        x_max: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        points_per_decade: u32,
        #[arg(long)]
        r: Ratio,
        /// Fill the seconds column with wall-clock time (otherwise 0, keeping output reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// Sum of 1/p over primes p <= z and its residual against log log z
    Mertens {
        #[arg(long, value_parser = parse_count)]
        z: u64,
    },
    /// Prime-counting function pi(x)
    Pi {
        #[arg(long, value_parser = parse_count)]
        x: u64,
    },
    /// Logarithmic integral from 2 to x
    Li {
        #[arg(long)]
        x: f64,
    },
    /// Exhaustive cross-checks of both counting methods and related identities
    Verify {
        #[arg(long, value_parser = parse_count)]
        max_x: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<Ratio>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub table_limit: Option<u64>,
    pub memory_budget_bytes: u64,
    pub brute_budget: u64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub cache_path: Option<PathBuf>,
    pub threads: usize,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let env_cache = std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        let threads = cli
            .threads
            .map(|t| t as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        RunConfig {
            table_limit: cli.table_limit,
            memory_budget_bytes: cli.memory_budget,
            brute_budget: cli.brute_budget,
            output_format: cli.format,
            output_path: cli.out.clone(),
            cache_path: env_cache.or_else(|| cli.cache.clone()),
            threads,
        }
    }

    fn sieve_config(&self) -> SieveConfig {
        SieveConfig {
            memory_budget_bytes: self.memory_budget_bytes,
            ..SieveConfig::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limits(rsad_core::Error),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limits(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl From<rsad_core::Error> for CliError {
    fn from(e: rsad_core::Error) -> Self {
        use rsad_core::Error as E;
        match e {
            E::BudgetExceeded { .. }
            | E::OutOfRange { .. }
            | E::TableTooSmall { .. }
            | E::BruteBudgetExceeded { .. } => CliError::Limits(e),
            E::Domain(_) | E::InvalidRatio { .. } | E::NotPrime(_) | E::Overflow(_) => {
                CliError::Input(e.to_string())
            }
            E::IdentityViolation { .. } => CliError::Mismatch(e.to_string()),
            E::NoConvergence { .. } | E::InvalidTable(_) => CliError::Other(e.into()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Other(e.into())
    }
}

/// Parses a non-negative integer written plainly (`"10000"`, `"10_000"`) or
/// in exponent form (`"1e4"`, `"2.5e3"`). The value must be an exact integer.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let err = || format!("invalid count {s:?}: expected an integer such as 10000 or 1e4");
    let cleaned: String = s.trim().chars().filter(|&c| c != '_').collect();
    let (mantissa, exp) = match cleaned.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<u32>().map_err(|_| err())?),
        None => (cleaned.as_str(), 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let value: u128 = digits.parse().map_err(|_| err())?;
    let shift = exp as i64 - frac.len() as i64;
    let value = if shift >= 0 {
        10u128
            .checked_pow(shift as u32)
            .and_then(|p| value.checked_mul(p))
            .ok_or_else(err)?
    } else {
        let div = 10u128.checked_pow((-shift) as u32).ok_or_else(err)?;
        if !value.is_multiple_of(div) {
            return Err(format!("{s:?} is not an integer"));
        }
        value / div
    };
    u64::try_from(value).map_err(|_| err())
}

fn parse_positive(s: &str) -> Result<u64, String> {
    match parse_count(s)? {
        0 => Err("must be positive".to_string()),
        v => Ok(v),
    }
}

/// Geometric grid `x_min * 10^(k / per_decade)`, rounded, up to `x_max`.
pub fn geometric_grid(x_min: u64, x_max: u64, per_decade: u32) -> Vec<u64> {
    let mut grid: Vec<u64> = Vec::new();
    for k in 0u32.. {
        let v = (x_min as f64 * 10f64.powf(k as f64 / per_decade as f64)).round();
        if v > x_max as f64 {
            break;
        }
        let v = v as u64;
        if grid.last() != Some(&v) {
            grid.push(v);
        }
    }
    grid
}

fn obtain_table(cfg: &RunConfig, needed: u64) -> Result<PrimeTable, CliError> {
    let limit = match cfg.table_limit {
        Some(l) => l,
        None => needed.saturating_add(AUTO_MARGIN),
    };
    if let Some(path) = &cfg.cache_path {
        if path.exists() {
            match cache::load(path) {
                Ok(t) if t.limit() >= limit => return Ok(t),
                Ok(_) => {}
                Err(e) => eprintln!("ignoring cache {}: {e}", path.display()),
            }
        }
    }
    let table = parallel::build_table(limit, &cfg.sieve_config(), cfg.threads)?;
    if let Some(path) = &cfg.cache_path {
        cache::save(path, &table)?;
    }
    Ok(table)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_count(
    cfg: &RunConfig,
    x: u64,
    r: Ratio,
    method: Method,
) -> Result<Vec<CountReport>, CliError> {
    if matches!(method, Method::Brute | Method::Both) && x > cfg.brute_budget {
        return Err(rsad_core::Error::BruteBudgetExceeded {
            x,
            budget: cfg.brute_budget,
        }
        .into());
    }
    let table = obtain_table(cfg, counting::required_limit(x, r))?;
    let estimate = if x >= 2 { count_main_term(x, r)? } else { 0.0 };
    let mut reports = Vec::new();
    if matches!(method, Method::Brute | Method::Both) {
        let start = Instant::now();
        let exact = count_brute_with(&table, x, r, cfg.brute_budget)?;
        reports.push(CountReport::new(
            x,
            r,
            exact,
            estimate,
            Method::Brute,
            start.elapsed(),
        ));
    }
    if matches!(method, Method::Identity | Method::Both) {
        let start = Instant::now();
        let exact = parallel::count_identity(&table, x, r, cfg.threads)?.total;
        reports.push(CountReport::new(
            x,
            r,
            exact,
            estimate,
            Method::Identity,
            start.elapsed(),
        ));
    }
    Ok(reports)
}

pub fn cmd_table(
    cfg: &RunConfig,
    x_min: u64,
    x_max: u64,
    per_decade: u32,
    r: Ratio,
    timing: bool,
) -> Result<Table, CliError> {
    if x_min < 2 || x_min > x_max {
        return Err(CliError::Input(format!(
            "need 2 <= x_min <= x_max, got x_min = {x_min}, x_max = {x_max}"
        )));
    }
    let grid = geometric_grid(x_min, x_max, per_decade);
    let table = obtain_table(cfg, counting::required_limit(x_max, r))?;
    let rows = parallel::map_chunks(grid.len(), cfg.threads, |range| {
        grid[range]
            .iter()
            .map(|&x| {
                let start = Instant::now();
                let row = diagnostics::convergence_row(&table, x, r)?;
                let seconds = if timing {
                    start.elapsed().as_secs_f64()
                } else {
                    0.0
                };
                Ok((row, seconds))
            })
            .collect::<Result<Vec<_>, rsad_core::Error>>()
    });
    let mut out = Table::new(&report::CONVERGENCE_HEADER);
    for chunk in rows {
        for (row, seconds) in chunk? {
            out.push(report::convergence_row(&row, seconds));
        }
    }
    Ok(out)
}

pub fn cmd_mertens(cfg: &RunConfig, z: u64) -> Result<Table, CliError> {
    let table = obtain_table(cfg, z)?;
    let m = analytic::mertens_sum(&table, z)?;
    let mut out = Table::new(&["z", "sum", "loglog_z", "residual"]);
    out.push(vec![
        Cell::Int(m.z),
        Cell::Real(m.sum),
        Cell::Real(m.loglog_z),
        Cell::Real(m.residual),
    ]);
    Ok(out)
}

pub fn cmd_pi(cfg: &RunConfig, x: u64) -> Result<Table, CliError> {
    let table = obtain_table(cfg, x)?;
    let mut out = Table::new(&["x", "pi"]);
    out.push(vec![Cell::Int(x), Cell::Int(table.prime_count(x)?)]);
    Ok(out)
}

pub fn cmd_li(x: f64) -> Result<Table, CliError> {
    let li = analytic::log_integral(x, &QuadratureConfig::default())?;
    let mut out = Table::new(&["x", "li"]);
    out.push(vec![Cell::Real(x), Cell::Real(li)]);
    Ok(out)
}

/// Outcome of `verify`: how many checks of each kind ran.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub count_checks: u64,
    pub closed_form_checks: u64,
    pub landau_checks: u64,
}

impl VerifySummary {
    pub fn render(&self) -> String {
        format!(
            "identity vs brute checks passed: {}\nsum pi(p) closed-form checks passed: {}\nC_x(x) = pi_2(x) checks passed: {}\nall checks passed\n",
            self.count_checks, self.closed_form_checks, self.landau_checks
        )
    }
}

fn landau_sample(max_x: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = (1..=max_x.min(1000)).collect();
    for i in 1..=64u64 {
        xs.push(max_x * i / 64);
    }
    xs.retain(|&x| x >= 1);
    xs.sort_unstable();
    xs.dedup();
    xs
}

pub fn cmd_verify(cfg: &RunConfig, max_x: u64, rs: &[Ratio]) -> Result<VerifySummary, CliError> {
    if max_x > cfg.brute_budget {
        return Err(rsad_core::Error::BruteBudgetExceeded {
            x: max_x,
            budget: cfg.brute_budget,
        }
        .into());
    }
    let needed = rs
        .iter()
        .map(|&r| counting::required_limit(max_x, r))
        .chain([max_x])
        .max()
        .unwrap_or(max_x);
    let table = obtain_table(cfg, needed)?;
    let mut summary = VerifySummary::default();

    for &r in rs {
        let sweep = brute_sweep(&table, max_x, r, cfg.brute_budget)?;
        let len = max_x as usize + 1;
        let firsts = parallel::map_chunks(len, cfg.threads, |range| {
            for x in range {
                let d = counting::count_identity(&table, x as u64, r)?;
                if d.total != sweep[x] {
                    return Ok(Some((x as u64, sweep[x], d.total)));
                }
            }
            Ok(None)
        });
        for first in firsts {
            let first: Option<_> = first.map_err(|e: rsad_core::Error| CliError::from(e))?;
            if let Some((x, brute, identity)) = first {
                return Err(CliError::Mismatch(format!(
                    "mismatch: x={x}, r={r}, brute={brute}, identity={identity}"
                )));
            }
        }
        summary.count_checks += len as u64;
    }

    let mut closed_form: Vec<u64> = (0..=max_x.min(10_000)).collect();
    closed_form.push(max_x);
    closed_form.dedup();
    for z in closed_form {
        sum_pi_p(&table, z)?;
        summary.closed_form_checks += 1;
    }

    for x in landau_sample(max_x) {
        let via_identity = counting::count_identity(&table, x, Ratio::from_integer(x)?)?.total;
        let pi2 = count_pi2(&table, x)?;
        if via_identity != pi2 {
            return Err(CliError::Mismatch(format!(
                "mismatch: C_x(x) = {via_identity} but pi_2(x) = {pi2} at x={x}"
            )));
        }
        summary.landau_checks += 1;
    }
    Ok(summary)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli);
    let format = cfg.output_format;
    match &cli.command {
        Command::Count { x, r, method } => {
            let reports = cmd_count(&cfg, *x, *r, *method)?;
            let mut t = Table::new(&report::COUNT_HEADER);
            for rep in &reports {
                t.push(report::count_row(rep));
            }
            emit(&cfg, &t.render(format))?;
            if let [a, b] = reports.as_slice() {
                if a.exact != b.exact {
                    return Err(CliError::Mismatch(format!(
                        "mismatch: x={x}, r={r}, brute={}, identity={}",
                        a.exact, b.exact
                    )));
                }
            }
        }
        Command::Table {
            x_min,
            x_max,
            points_per_decade,
            r,
            timing,
        } => {
            let t = cmd_table(&cfg, *x_min, *x_max, *points_per_decade, *r, *timing)?;
            emit(&cfg, &t.render(format))?;
        }
        Command::Mertens { z } => emit(&cfg, &cmd_mertens(&cfg, *z)?.render(format))?,
        Command::Pi { x } => emit(&cfg, &cmd_pi(&cfg, *x)?.render(format))?,
        Command::Li { x } => emit(&cfg, &cmd_li(*x)?.render(format))?,
        Command::Verify { max_x, r } => {
            let summary = cmd_verify(&cfg, *max_x, r)?;
            emit(&cfg, &summary.render())?;
        }
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_parse() {
        assert_eq!(parse_count("10000"), Ok(10_000));
        assert_eq!(parse_count("1e4"), Ok(10_000));
        assert_eq!(parse_count("1E8"), Ok(100_000_000));
        assert_eq!(parse_count("2.5e3"), Ok(2500));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert_eq!(parse_count("0"), Ok(0));
        assert!(parse_count("2.55e1").is_err());
        assert!(parse_count("-1").is_err());
        assert!(parse_count("1e30").is_err());
        assert!(parse_count("abc").is_err());
        assert!(parse_count("").is_err());
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(geometric_grid(100, 100, 1), vec![100]);
        assert_eq!(
            geometric_grid(10_000, 10_000_000, 1),
            vec![10_000, 100_000, 1_000_000, 10_000_000]
        );
        assert_eq!(geometric_grid(100, 1000, 2), vec![100, 316, 1000]);
        assert_eq!(geometric_grid(2, 5, 1), vec![2]);
    }

    #[test]
    fn landau_sample_is_sorted_and_bounded() {
        let s = landau_sample(100_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*s.last().unwrap(), 100_000);
        assert!(landau_sample(0).is_empty());
    }
}
