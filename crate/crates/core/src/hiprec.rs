//! Escalated-precision ceiling/floor decisions for log-factorial quantities.
//!
//! The window scanner works in f64 with tracked error bounds. When a value
//! lands within the boundary guard of a ceiling/floor discontinuity, the
//! decision is retried here with arbitrary-precision arithmetic: recompute
//! `ln n!` term by term at `>= 128` fractional bits and compare against the
//! candidate integer. If even that sits within `1e-18` of the integer, the
//! decision is refused as inconclusive rather than guessed.
//!
//! The decisions only assume the f64 path delivered `candidate` as the
//! nearest integer to the true value; both branches below are then correct
//! for any true value within half a unit of the candidate.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

/// Floor for the escalated mantissa width; requests below are raised here.
pub const MIN_PRECISION_BITS: usize = 128;

/// Default escalated mantissa width.
pub const DEFAULT_PRECISION_BITS: usize = 192;

/// Distance to an integer below which even the escalated path refuses.
const TIE_LIMIT: f64 = 1e-18;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arbitrary-precision re-evaluator for window boundary decisions.
pub struct EscalatedDecider {
    bits: usize,
    consts: Consts,
}

impl EscalatedDecider {
    pub fn new(bits: usize) -> Self {
        Self {
            bits: bits.max(MIN_PRECISION_BITS),
            consts: Consts::new().expect("constant cache allocation"),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `ln n!` as the term-by-term sum of `ln k`, `k = 2..=n`.
    fn ln_factorial(&mut self, n: u64) -> BigFloat {
        let mut acc = BigFloat::from_i64(0, self.bits);
        for k in 2..=n {
            let term = BigFloat::from_u64(k, self.bits).ln(self.bits, RM, &mut self.consts);
            acc = acc.add(&term, self.bits, RM);
        }
        acc
    }

    /// Where `value` sits relative to the integer `candidate`, refusing
    /// within the tie limit.
    fn classify(&mut self, value: &BigFloat, candidate: i64, what: &str, n: u64) -> Result<Ordering> {
        let target = BigFloat::from_i64(candidate, self.bits);
        let diff = value.sub(&target, self.bits, RM);
        let tie = BigFloat::from_f64(TIE_LIMIT, self.bits);
        if diff.abs() < tie {
            return Err(Error::Inconclusive(format!(
                "{what} at n = {n}: value within {TIE_LIMIT:e} of {candidate} at {} bits",
                self.bits
            )));
        }
        if diff.is_negative() {
            Ok(Ordering::Less)
        } else {
            Ok(Ordering::Greater)
        }
    }

    /// `ceil(2 (ln n! + 1))` given the f64 path's nearest integer.
    pub fn window_base(&mut self, n: u64, candidate: i64) -> Result<i64> {
        let lf = self.ln_factorial(n);
        let one = BigFloat::from_i64(1, self.bits);
        let two = BigFloat::from_i64(2, self.bits);
        let value = lf.add(&one, self.bits, RM).mul(&two, self.bits, RM);
        // value in (candidate - 1/2, candidate + 1/2): ceil is candidate
        // when value lies below the integer, candidate + 1 above it.
        match self.classify(&value, candidate, "window base", n)? {
            Ordering::Greater => Ok(candidate + 1),
            _ => Ok(candidate),
        }
    }

    /// `floor(ln ln n!)` given the f64 path's nearest integer.
    pub fn window_exponent(&mut self, n: u64, candidate: i64) -> Result<i64> {
        let lf = self.ln_factorial(n);
        let value = lf.ln(self.bits, RM, &mut self.consts);
        match self.classify(&value, candidate, "window exponent", n)? {
            Ordering::Greater => Ok(candidate),
            _ => Ok(candidate - 1),
        }
    }
}
