//! The verified identities: semiprime counts, floor-log parity, and the
//! explicit prime-count reconstruction.
//!
//! Each identity is checked through two independent routes that must agree:
//!
//! * semiprime count: pair enumeration over odd primes vs. the binomial
//!   closed form `C(pi(x), 2)`;
//! * floor-log parity: the sum of `floor(log2(x/n))` over odd `n <= x`
//!   vs. `floor(x / 2)`, both exact integers;
//! * prime-count reconstruction: a floating-point formula in `theta`, a
//!   fractional-part sum over primes, and floor sums over odd non-primes,
//!   rounded and compared against the sieve's `pi(x)`.
//!
//! The floor sums run as a monotone threshold walk: `floor(log2(x/n))` is
//! nonincreasing in `n`, so one decrementing exponent and an integer shift
//! serve every term in O(1) without division or floats. The walk is checked
//! against the per-term shift-and-compare route in the property tests.
//!
//! The reconstruction exists in two parity flavors that differ in one term;
//! [`audit_parity_variants`] measures both against sieve counts so the
//! residuals identify which flavor is the exact one.

use std::f64::consts::LN_2;

use crate::accum::{Bounded, CompensatedSum};
use crate::dyadic::{dyadic_floor, dyadic_frac};
use crate::error::{Error, Result};
use crate::prime::{odd_semiprime_count, FactorSieve, PrimeTable};

/// Which identity a report speaks for. Wire names follow the CLI commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    SemiprimeCount,
    FloorLogParity,
    PiReconstruction,
}

impl IdentityKind {
    pub fn wire_name(self) -> &'static str {
        match self {
            IdentityKind::SemiprimeCount => "thm1",
            IdentityKind::FloorLogParity => "thm2",
            IdentityKind::PiReconstruction => "pi-formula",
        }
    }
}

/// One side of a verified identity: an exact integer or a computed real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportValue {
    Int(i128),
    Real(f64),
}

/// Outcome of one identity check at one argument.
///
/// For integer identities `exact` means the two routes returned the same
/// integer and `residual` is their absolute difference (so `exact` holds
/// exactly when `residual == 0`). For the real-valued reconstruction,
/// `residual` is the distance from the computed value to the sieve count and
/// `exact` records whether the guarded rounding reproduced the count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub identity: IdentityKind,
    pub x: u64,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub residual: f64,
    pub exact: bool,
}

/// Exact sum of `floor(log2(x/n))` over odd `n <= x`.
///
/// Walks odd `n` upward while lowering the exponent `b` whenever `n`
/// crosses the threshold `x >> b`; every comparison is an integer shift, so
/// the result is exact for all of `u64`. Terms with `n > x/2` are zero and
/// the walk stops there.
pub fn sum_dyadic_floor_over_odd(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain("floor-log sum needs x >= 1".into()));
    }
    let mut sum = x.ilog2() as u64;
    if x < 6 {
        // No odd n in [3, x/2]; every remaining term is zero.
        return Ok(sum);
    }
    let mut b = (x / 3).ilog2();
    let mut n = 3u64;
    while n <= x {
        while (x >> b) < n {
            b -= 1;
        }
        if b == 0 {
            break;
        }
        sum += b as u64;
        n += 2;
    }
    Ok(sum)
}

/// Sum of `floor(log2(x/n))` over odd `n <= x` that are not prime
/// (`n = 1` contributes `floor(log2 x)`).
///
/// Same walk as [`sum_dyadic_floor_over_odd`] with a primality skip; only
/// `n <= x/2` is visited, so the sieve needs to cover just `x/2`.
pub fn floor_sum_over_odd_nonprimes(x: u64, sieve: &FactorSieve) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain("floor-log sum needs x >= 1".into()));
    }
    if x >= 6 && x / 2 > sieve.limit() {
        return Err(Error::Range {
            what: "x/2 (composite scan bound)",
            value: x / 2,
            limit: sieve.limit(),
        });
    }
    let mut sum = x.ilog2() as u64;
    if x < 6 {
        return Ok(sum);
    }
    let mut b = (x / 3).ilog2();
    let mut n = 3u64;
    while n <= x {
        while (x >> b) < n {
            b -= 1;
        }
        if b == 0 {
            break;
        }
        if !sieve.is_prime(n)? {
            sum += b as u64;
        }
        n += 2;
    }
    Ok(sum)
}

/// Sum of the fractional parts of `log2(x/p)` over primes `p <= x`, with a
/// bound covering both per-term rounding and accumulation error.
pub fn frac_sum_over_primes(x: u64, table: &PrimeTable) -> Result<Bounded> {
    if x == 0 {
        return Err(Error::Domain("fractional-part sum needs x >= 1".into()));
    }
    let k = table.pi(x)? as usize;
    let mut acc = CompensatedSum::new();
    for &p in &table.primes()[..k] {
        acc.add(dyadic_frac(x, p)?);
    }
    // Each fractional part carries at most one division and one log2
    // rounding, under 4 eps absolute per term.
    let per_term = 4.0 * f64::EPSILON * k as f64;
    Ok(Bounded {
        value: acc.value(),
        error_bound: acc.error_bound() + per_term,
    })
}

/// Checks that the number of distinct products of two odd primes `<= x`
/// equals `C(pi(x), 2)`.
pub fn verify_semiprime_count(x: u64, table: &PrimeTable) -> Result<VerificationReport> {
    let enumerated = odd_semiprime_count(x, table)?;
    let k = table.pi(x)?;
    let closed_form = k * (k - 1) / 2;
    Ok(int_report(
        IdentityKind::SemiprimeCount,
        x,
        enumerated,
        closed_form,
    ))
}

/// Checks that the odd floor-log sum equals `floor(x / 2)` exactly.
pub fn verify_floor_log_parity(x: u64) -> Result<VerificationReport> {
    let walked = sum_dyadic_floor_over_odd(x)?;
    Ok(int_report(IdentityKind::FloorLogParity, x, walked, x / 2))
}

fn int_report(identity: IdentityKind, x: u64, lhs: u64, rhs: u64) -> VerificationReport {
    let residual = lhs.abs_diff(rhs);
    VerificationReport {
        identity,
        x,
        lhs: ReportValue::Int(lhs as i128),
        rhs: ReportValue::Int(rhs as i128),
        residual: residual as f64,
        exact: residual == 0,
    }
}

/// The two shapes of the reconstruction's parity correction.
///
/// Both are scaled by `(1 + (-1)^x)`, so they act only on even `x`:
/// [`ParityVariant::Statement`] adds `ln(2)/2` there, and
/// [`ParityVariant::Proof`] adds `1/2`. [`audit_parity_variants`] measures
/// which one reproduces the sieve counts exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityVariant {
    Statement,
    Proof,
}

impl ParityVariant {
    pub fn wire_name(self) -> &'static str {
        match self {
            ParityVariant::Statement => "statement",
            ParityVariant::Proof => "proof",
        }
    }

    fn term(self, x: u64) -> f64 {
        if x % 2 == 1 {
            0.0
        } else {
            match self {
                ParityVariant::Statement => LN_2 / 2.0,
                ParityVariant::Proof => 0.5,
            }
        }
    }
}

/// Refuse to round when the tracked error bound exceeds this; a bound this
/// small guarantees the nearest integer is unambiguous with margin.
pub const MAX_ROUNDING_BOUND: f64 = 0.25;

/// Round to the nearest nonnegative integer, refusing when the error bound
/// no longer pins the result down.
pub fn round_within(value: f64, error_bound: f64) -> Option<u64> {
    if error_bound.is_nan() || error_bound > MAX_ROUNDING_BOUND {
        return None;
    }
    Some(value.round().max(0.0) as u64)
}

/// A prime-count reconstruction at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiReconstruction {
    pub x: u64,
    pub variant: ParityVariant,
    /// The formula value before rounding.
    pub value: f64,
    /// Bound on the accumulated floating-point error in `value`.
    pub error_bound: f64,
    /// Guarded rounding of `value`; `None` when the bound exceeds
    /// [`MAX_ROUNDING_BOUND`].
    pub rounded: Option<u64>,
    /// `pi(x)` counted directly from the table.
    pub sieve_pi: u64,
    /// Whether `rounded` reproduced `sieve_pi`.
    pub matches: bool,
}

/// Evaluate the reconstruction formula
/// `pi(x) = [(x-1) ln sqrt(2) + theta(x) + ln(2) (H - G + T) + parity] / ln x`
/// where `H` is the fractional sum over primes, `G` the floor sum over odd
/// non-primes, and `T = floor(log2(x/2))`, then round under the tracked
/// error bound and compare with the sieve count.
pub fn reconstruct_pi(
    x: u64,
    table: &PrimeTable,
    sieve: &FactorSieve,
    variant: ParityVariant,
) -> Result<PiReconstruction> {
    if x < 2 {
        return Err(Error::Domain(
            "prime-count reconstruction needs x >= 2 (ln x must not vanish)".into(),
        ));
    }
    let h = frac_sum_over_primes(x, table)?;
    let g = floor_sum_over_odd_nonprimes(x, sieve)?;
    let t = dyadic_floor(x, 2)?;
    let theta = table.theta(x)?;
    let theta_bound = table.theta_error_bound(x)?;

    let eps = f64::EPSILON;
    let a = (x - 1) as f64 * (LN_2 / 2.0);
    let combined = h.value - g as f64 + t as f64;
    let scaled = LN_2 * combined;
    let parity = variant.term(x);
    let numerator = a + theta + scaled + parity;
    let denominator = (x as f64).ln();
    let value = numerator / denominator;

    // Component errors: the two tracked bounds, plus one rounding per
    // arithmetic step over the magnitudes involved.
    let magnitudes = a.abs() + theta + scaled.abs() + parity + 1.0;
    let numerator_bound = theta_bound
        + LN_2 * h.error_bound
        + 2.0 * eps * LN_2 * (h.value.abs() + g as f64 + t as f64)
        + 6.0 * eps * magnitudes;
    let error_bound = numerator_bound / denominator + 2.0 * eps * value.abs();

    let rounded = round_within(value, error_bound);
    let sieve_pi = table.pi(x)?;
    Ok(PiReconstruction {
        x,
        variant,
        value,
        error_bound,
        rounded,
        sieve_pi,
        matches: rounded == Some(sieve_pi),
    })
}

/// Reconstruction packaged as a report: `lhs` is the formula value, `rhs`
/// the sieve count, `exact` whether guarded rounding reproduced it.
pub fn verify_pi_reconstruction(
    x: u64,
    table: &PrimeTable,
    sieve: &FactorSieve,
    variant: ParityVariant,
) -> Result<VerificationReport> {
    let r = reconstruct_pi(x, table, sieve, variant)?;
    Ok(VerificationReport {
        identity: IdentityKind::PiReconstruction,
        x,
        lhs: ReportValue::Real(r.value),
        rhs: ReportValue::Int(r.sieve_pi as i128),
        residual: (r.value - r.sieve_pi as f64).abs(),
        exact: r.matches,
    })
}

/// Residual statistics for one parity variant over a range.
#[derive(Debug, Clone, Copy)]
pub struct VariantSummary {
    pub variant: ParityVariant,
    pub checked: u64,
    pub rounded_matches: u64,
    pub refusals: u64,
    pub max_abs_residual: f64,
    pub worst_x: u64,
}

impl VariantSummary {
    pub fn all_match(&self) -> bool {
        self.checked > 0 && self.rounded_matches == self.checked && self.refusals == 0
    }
}

/// Both parity variants measured over `start..=end`.
#[derive(Debug, Clone, Copy)]
pub struct ParityAudit {
    pub statement: VariantSummary,
    pub proof: VariantSummary,
}

impl ParityAudit {
    /// The variant whose unrounded values sit on the sieve counts. Both
    /// variants can round correctly; only one has residuals at rounding
    /// noise, and a variant that ever rounds wrong is never preferred.
    pub fn preferred(&self) -> Option<ParityVariant> {
        let candidates = [&self.statement, &self.proof];
        candidates
            .into_iter()
            .filter(|s| s.all_match())
            .min_by(|a, b| a.max_abs_residual.total_cmp(&b.max_abs_residual))
            .map(|s| s.variant)
    }
}

/// Run both parity variants across `start..=end` and report their residual
/// envelopes against sieve counts.
pub fn audit_parity_variants(
    start: u64,
    end: u64,
    table: &PrimeTable,
    sieve: &FactorSieve,
) -> Result<ParityAudit> {
    if start < 2 || start > end {
        return Err(Error::Domain(format!(
            "audit range must satisfy 2 <= start <= end, got {start}..={end}"
        )));
    }
    let mut summaries = Vec::new();
    for variant in [ParityVariant::Statement, ParityVariant::Proof] {
        let mut summary = VariantSummary {
            variant,
            checked: 0,
            rounded_matches: 0,
            refusals: 0,
            max_abs_residual: 0.0,
            worst_x: start,
        };
        for x in start..=end {
            let r = reconstruct_pi(x, table, sieve, variant)?;
            summary.checked += 1;
            match r.rounded {
                Some(_) if r.matches => summary.rounded_matches += 1,
                Some(_) => {}
                None => summary.refusals += 1,
            }
            let residual = (r.value - r.sieve_pi as f64).abs();
            if residual > summary.max_abs_residual {
                summary.max_abs_residual = residual;
                summary.worst_x = x;
            }
        }
        summaries.push(summary);
    }
    Ok(ParityAudit {
        statement: summaries[0],
        proof: summaries[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(limit: u64) -> (PrimeTable, FactorSieve) {
        (
            PrimeTable::build(limit).unwrap(),
            FactorSieve::build(limit).unwrap(),
        )
    }

    #[test]
    fn floor_log_sum_small_values() {
        // x = 20: terms over odd n are 4+2+2+1+1+0+... = 10 = floor(20/2).
        assert_eq!(sum_dyadic_floor_over_odd(20).unwrap(), 10);
        assert_eq!(sum_dyadic_floor_over_odd(19).unwrap(), 9);
        assert_eq!(sum_dyadic_floor_over_odd(1).unwrap(), 0);
        assert_eq!(sum_dyadic_floor_over_odd(2).unwrap(), 1);
        assert!(sum_dyadic_floor_over_odd(0).is_err());
    }

    #[test]
    fn walk_matches_per_term_route() {
        for x in 1..=3_000u64 {
            let mut per_term = 0u64;
            let mut n = 1;
            while n <= x {
                per_term += dyadic_floor(x, n).unwrap() as u64;
                n += 2;
            }
            assert_eq!(sum_dyadic_floor_over_odd(x).unwrap(), per_term, "x = {x}");
        }
    }

    #[test]
    fn parity_identity_holds_exhaustively() {
        for x in 1..=20_000u64 {
            let report = verify_floor_log_parity(x).unwrap();
            assert!(report.exact, "x = {x}: {report:?}");
            assert_eq!(report.residual, 0.0);
        }
    }

    #[test]
    fn semiprime_count_small_values() {
        let (table, _) = tables(100);
        let r = verify_semiprime_count(20, &table).unwrap();
        assert!(r.exact);
        assert_eq!(r.lhs, ReportValue::Int(28));
        let r = verify_semiprime_count(5, &table).unwrap();
        assert_eq!(r.lhs, ReportValue::Int(3));
        assert!(r.exact);
        assert!(verify_semiprime_count(4, &table).is_err());
    }

    #[test]
    fn nonprime_floor_sum_small_values() {
        let (_, sieve) = tables(100);
        // x = 100: floor(log2 100) = 6 plus 3+2+2+2+1*6 over the odd
        // composites 9..49 gives 21.
        assert_eq!(floor_sum_over_odd_nonprimes(100, &sieve).unwrap(), 21);
        // x = 20: only n = 1 (4) and n = 9 (1) contribute.
        assert_eq!(floor_sum_over_odd_nonprimes(20, &sieve).unwrap(), 5);
        assert_eq!(floor_sum_over_odd_nonprimes(1, &sieve).unwrap(), 0);
        assert_eq!(floor_sum_over_odd_nonprimes(8, &sieve).unwrap(), 3);
    }

    #[test]
    fn nonprime_floor_sum_checks_sieve_coverage() {
        let (_, sieve) = tables(100);
        // x/2 = 150 exceeds the sieve; the walk must refuse, not index out.
        assert!(matches!(
            floor_sum_over_odd_nonprimes(300, &sieve),
            Err(Error::Range { .. })
        ));
        // x/2 = 100 is exactly covered.
        assert!(floor_sum_over_odd_nonprimes(200, &sieve).is_ok());
    }

    #[test]
    fn frac_sum_known_values() {
        let (table, _) = tables(100);
        // x = 4: {log2 2} = 0, {log2(4/3)} = 2 - log2 3.
        let h = frac_sum_over_primes(4, &table).unwrap();
        let expected = 2.0 - 3f64.log2();
        assert!((h.value - expected).abs() < 1e-14);
        assert!(h.error_bound < 1e-12);
        // x = 2: single prime, exact power of two ratio.
        assert_eq!(frac_sum_over_primes(2, &table).unwrap().value, 0.0);
    }

    #[test]
    fn reconstruction_rounds_to_sieve_pi() {
        let (table, sieve) = tables(2_000);
        for x in [2u64, 3, 10, 19, 20, 97, 100, 541, 1000, 1999, 2000] {
            let r = reconstruct_pi(x, &table, &sieve, ParityVariant::Statement).unwrap();
            assert!(r.matches, "x = {x}: {r:?}");
            assert!(r.error_bound < MAX_ROUNDING_BOUND);
            assert_eq!(r.rounded, Some(table.pi(x).unwrap()));
        }
        assert!(reconstruct_pi(1, &table, &sieve, ParityVariant::Statement).is_err());
    }

    #[test]
    fn statement_variant_sits_on_the_count() {
        let (table, sieve) = tables(2_000);
        let mut max_statement = 0f64;
        let mut max_proof = 0f64;
        for x in 2..=2_000u64 {
            let s = reconstruct_pi(x, &table, &sieve, ParityVariant::Statement).unwrap();
            let p = reconstruct_pi(x, &table, &sieve, ParityVariant::Proof).unwrap();
            max_statement = max_statement.max((s.value - s.sieve_pi as f64).abs());
            max_proof = max_proof.max((p.value - p.sieve_pi as f64).abs());
        }
        // Frozen envelopes: the statement variant is exact to rounding
        // noise; the proof variant carries a (1 - ln 2)/(2 ln x) offset on
        // even x, peaking near 0.2213 at the low end.
        assert!(max_statement < 1e-12, "statement residual {max_statement}");
        assert!(max_proof > 0.2 && max_proof < 0.23, "proof residual {max_proof}");
    }

    #[test]
    fn audit_prefers_statement_variant() {
        let (table, sieve) = tables(2_000);
        let audit = audit_parity_variants(2, 2_000, &table, &sieve).unwrap();
        assert!(audit.statement.all_match());
        assert_eq!(audit.preferred(), Some(ParityVariant::Statement));
        assert!(audit.statement.max_abs_residual < audit.proof.max_abs_residual);
    }

    #[test]
    fn rounding_refuses_on_wide_bounds() {
        assert_eq!(round_within(41.99, 1e-9), Some(42));
        assert_eq!(round_within(42.4, 0.25), Some(42));
        assert_eq!(round_within(42.0, 0.250001), None);
        assert_eq!(round_within(42.0, f64::NAN), None);
        assert_eq!(round_within(-0.3, 1e-9), Some(0));
    }

    #[test]
    fn report_invariant_exact_iff_zero_residual() {
        let (table, _) = tables(100);
        let r = verify_semiprime_count(20, &table).unwrap();
        assert_eq!(r.exact, r.residual == 0.0);
        let r = verify_floor_log_parity(19).unwrap();
        assert_eq!(r.exact, r.residual == 0.0);
    }
}
