//! The semiprime log weight, its partial sums, and their growth trend.
//!
//! The weight assigns `ln p` to squares of primes `p^2`, `ln p + ln q` to
//! products of two distinct primes, and zero to everything else, so its
//! support is exactly the integers with two prime factors counted with
//! multiplicity. Its partial sum up to `x` has three independently computed
//! routes that are provably equal at every finite `x`:
//!
//! * `sum_direct`: evaluate the weight at every `n <= x` and accumulate;
//! * `sum_lemma`: `sum over primes p <= x/2 of pi(floor(x/p)) * ln p` (each
//!   ordered pair `(p, q)` with `pq <= x` contributes `ln p`, which counts
//!   every unordered pair on both sides);
//! * `sum_logsemiprime`: `sum of ln n over n <= x with exactly two prime
//!   factors, minus theta(isqrt(x))` (squares contribute `2 ln p` to the raw
//!   sum, so subtracting `theta` at the integer square root corrects them).
//!
//! Only float noise separates the three; the tests hold them to 1e-9
//! relative agreement. The growth trend against `(ln x)(ln ln x)` is
//! reported as a table, never asserted: the asymptotic closes in far too
//! slowly to test at desk scale, so the table doubles as a regression
//! fixture instead.

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::prime::{FactorSieve, PrimeTable};
use crate::report::fmt_real;

/// Partial-sum routes and trend data at one argument.
///
/// `ratio` is `mertens_sum / ((ln x)(ln ln x))`, present only for `x >= 16`
/// where the denominator is positive.
#[derive(Debug, Clone, Copy)]
pub struct UpsilonSummary {
    pub x: u64,
    pub sum_direct: f64,
    pub sum_lemma: f64,
    pub sum_logsemiprime: f64,
    pub mertens_sum: f64,
    pub ratio: Option<f64>,
}

/// The semiprime log weight: `ln p` at `n = p^2`, `ln n` at products of two
/// distinct primes, zero elsewhere.
pub fn upsilon(n: u64, sieve: &FactorSieve) -> Result<f64> {
    match sieve.semiprime_parts(n)? {
        None => Ok(0.0),
        Some((p, q)) if p == q => Ok((p as f64).ln()),
        Some((p, q)) => Ok((p as f64).ln() + (q as f64).ln()),
    }
}

/// The Mertens-type sum `sum over primes p <= x/2 of
/// (ln p / p) / (1 - ln p / ln x)`.
fn mertens_sum(x: u64, table: &PrimeTable) -> Result<f64> {
    let bound = x / 2;
    let ln_x = (x as f64).ln();
    let mut acc = CompensatedSum::new();
    for &p in table.primes() {
        if p > bound {
            break;
        }
        let ln_p = (p as f64).ln();
        acc.add(ln_p / p as f64 / (1.0 - ln_p / ln_x));
    }
    Ok(acc.value())
}

/// All three partial-sum routes plus the trend data at `x`.
///
/// Needs `sieve.limit >= x` for the direct routes and
/// `table.limit >= max(x/2, isqrt(x))` for the prime-count route and the
/// square correction.
pub fn summarize(x: u64, table: &PrimeTable, sieve: &FactorSieve) -> Result<UpsilonSummary> {
    if x < 2 {
        return Err(Error::Domain(format!(
            "partial-sum summary needs x >= 2, got {x}"
        )));
    }
    if x > sieve.limit() {
        return Err(Error::Range {
            what: "x",
            value: x,
            limit: sieve.limit(),
        });
    }
    let table_need = (x / 2).max(x.isqrt());
    if table_need > table.limit() {
        return Err(Error::Range {
            what: "x/2 (prime enumeration bound)",
            value: table_need,
            limit: table.limit(),
        });
    }

    // Route 1: the weight itself, ascending n.
    let mut direct = CompensatedSum::new();
    for n in 4..=x {
        direct.add(upsilon(n, sieve)?);
    }

    // Route 2: ordered prime pairs via pi lookups.
    let mut lemma = CompensatedSum::new();
    for &p in table.primes() {
        if p > x / 2 {
            break;
        }
        let count = table.pi(x / p)?;
        lemma.add(count as f64 * (p as f64).ln());
    }

    // Route 3: raw logs over two-factor n, squares corrected by theta.
    let mut raw = CompensatedSum::new();
    for n in 4..=x {
        if sieve.omega(n)? == 2 {
            raw.add((n as f64).ln());
        }
    }
    let logsemiprime = raw.value() - table.theta(x.isqrt())?;

    let mertens = mertens_sum(x, table)?;
    let ratio = trend_ratio(x, mertens);

    Ok(UpsilonSummary {
        x,
        sum_direct: direct.value(),
        sum_lemma: lemma.value(),
        sum_logsemiprime: logsemiprime,
        mertens_sum: mertens,
        ratio,
    })
}

/// `(ln x)(ln ln x)` is positive only past `x = e^e`, i.e. from 16 on.
fn trend_ratio(x: u64, mertens: f64) -> Option<f64> {
    if x < 16 {
        return None;
    }
    let ln_x = (x as f64).ln();
    Some(mertens / (ln_x * ln_x.ln()))
}

/// One row of the growth-trend table.
#[derive(Debug, Clone, Copy)]
pub struct TrendRow {
    pub x: u64,
    pub mertens_sum: f64,
    pub logx_loglogx: f64,
    pub ratio: f64,
}

/// Trend rows for a strictly increasing list of arguments, all `>= 16`.
///
/// Only the prime table is consulted (the weight routes are not run here),
/// so `table.limit >= max(xs)/2` suffices.
pub fn trend_table(xs: &[u64], table: &PrimeTable) -> Result<Vec<TrendRow>> {
    if let Some(w) = xs.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "trend arguments must increase strictly, got {} then {}",
            w[0], w[1]
        )));
    }
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        if x < 16 {
            return Err(Error::Domain(format!(
                "trend ratio needs x >= 16 (ln ln x must be positive), got {x}"
            )));
        }
        if x / 2 > table.limit() {
            return Err(Error::Range {
                what: "x/2 (prime enumeration bound)",
                value: x / 2,
                limit: table.limit(),
            });
        }
        let mertens = mertens_sum(x, table)?;
        let ln_x = (x as f64).ln();
        let denom = ln_x * ln_x.ln();
        rows.push(TrendRow {
            x,
            mertens_sum: mertens,
            logx_loglogx: denom,
            ratio: mertens / denom,
        });
    }
    Ok(rows)
}

/// CSV rendering of a trend table: fixed header, 15-significant-digit reals.
pub fn trend_csv(rows: &[TrendRow]) -> String {
    let mut out = String::from("x,mertens_sum,logx_loglogx,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.x,
            fmt_real(r.mertens_sum),
            fmt_real(r.logx_loglogx),
            fmt_real(r.ratio)
        ));
    }
    out
}
