//! Exact base-2 logarithm splitting for integer ratios.
//!
//! For integers `1 <= n <= x` the quantity `log2(x/n)` splits into an integer
//! part `b = floor(log2(x/n))` and a fractional part in `[0, 1)`. The integer
//! part is computed with shift-and-compare arithmetic only: `b` is the unique
//! exponent with `n * 2^b <= x < n * 2^(b+1)`, and both comparisons are exact
//! in `u128`. No float ever participates, so there is no rounding to
//! misclassify a boundary case.
//!
//! The fractional part is irrational unless `x / n` is exactly a power of
//! two, and that one rational case is detected by the same integer
//! comparison: `n << b == x`. Only after the exact-zero case is excluded does
//! the float path run, and then the true value is bounded away from 0 and 1
//! by roughly `1.44 / x`, far beyond the two rounding errors (one division,
//! one log2) the computation commits. Fractional parts are reliable for
//! `x <= 2^50`; the integer part is exact for all of `u64`.

use crate::error::{Error, Result};

/// A base-2 logarithm of a ratio `x / n`, split exactly.
///
/// Invariants: `n * 2^int_part <= x < n * 2^(int_part + 1)`, and
/// `frac_part` is in `[0, 1)` with `frac_part == 0.0` exactly when `x / n`
/// is a power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicLog {
    pub int_part: u32,
    pub frac_part: f64,
}

impl DyadicLog {
    /// The full logarithm `int_part + frac_part`, for display and for
    /// cross-checks against float computations.
    pub fn value(&self) -> f64 {
        self.int_part as f64 + self.frac_part
    }
}

fn check_args(x: u64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dyadic log: n must be positive".into()));
    }
    if n > x {
        return Err(Error::Domain(format!(
            "dyadic log: need n <= x, got n = {n} > x = {x}"
        )));
    }
    Ok(())
}

/// `floor(log2(x / n))` by shift-and-compare, exact for all `1 <= n <= x`.
pub fn dyadic_floor(x: u64, n: u64) -> Result<u32> {
    check_args(x, n)?;
    let x = x as u128;
    let mut shifted = (n as u128) << 1;
    let mut b = 0u32;
    while shifted <= x {
        b += 1;
        shifted <<= 1;
    }
    Ok(b)
}

/// Fractional part of `log2(x / n)`, exactly `0.0` when `x / n` is a power
/// of two and strictly inside `(0, 1)` otherwise.
pub fn dyadic_frac(x: u64, n: u64) -> Result<f64> {
    Ok(dyadic_log(x, n)?.frac_part)
}

/// Both parts of `log2(x / n)` in one pass.
pub fn dyadic_log(x: u64, n: u64) -> Result<DyadicLog> {
    let b = dyadic_floor(x, n)?;
    let scaled = (n as u128) << b;
    if scaled == x as u128 {
        // x / n is exactly 2^b: the fractional part is zero by definition,
        // decided here by integer comparison rather than float rounding.
        return Ok(DyadicLog {
            int_part: b,
            frac_part: 0.0,
        });
    }
    let frac = ((x as f64) / (scaled as f64)).log2();
    // The true value lies in (0, 1); the float result can only escape that
    // interval by rounding at the endpoints, so pin it back inside.
    let frac = frac.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
    Ok(DyadicLog {
        int_part: b,
        frac_part: frac,
    })
}
