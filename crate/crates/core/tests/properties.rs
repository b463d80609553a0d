//! Randomized invariants over the whole library, checked with proptest.
//!
//! Each property states a mathematical fact the implementation must honor
//! everywhere, not just at the anchors the unit tests pin down.

use std::sync::OnceLock;

use proptest::prelude::*;
use psum_core::conjecture::{find_collision, verify_witness, ScanStatus};
use psum_core::dyadic::{dyadic_floor, dyadic_log};
use psum_core::identity::{
    self, floor_sum_over_odd_nonprimes, reconstruct_pi, sum_dyadic_floor_over_odd,
    verify_floor_log_parity, verify_semiprime_count, ParityVariant,
};
use psum_core::prime::{FactorSieve, PrimeTable};
use psum_core::upsilon::upsilon;

fn table() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| PrimeTable::build(1_000_000).unwrap())
}

fn sieve() -> &'static FactorSieve {
    static S: OnceLock<FactorSieve> = OnceLock::new();
    S.get_or_init(|| FactorSieve::build(100_000).unwrap())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Pairs (x, n) with 1 <= n <= x <= 10^15.
fn quotient_args() -> impl Strategy<Value = (u64, u64)> {
    (1u64..=1_000_000_000_000_000).prop_flat_map(|x| (Just(x), 1u64..=x))
}

proptest! {
    #![proptest_config(config(256))]

    /// The integer part brackets the quotient: n 2^b <= x < n 2^(b+1).
    #[test]
    fn dyadic_floor_brackets_quotient((x, n) in quotient_args()) {
        let b = dyadic_floor(x, n).unwrap();
        let low = (n as u128) << b;
        prop_assert!(low <= x as u128);
        prop_assert!((n as u128) << (b + 1) > x as u128);
        prop_assert_eq!(b, (x / n).ilog2());
    }

    /// Integer plus fractional part reassembles the float logarithm.
    #[test]
    fn dyadic_log_matches_float_log((x, n) in quotient_args()) {
        let log = dyadic_log(x, n).unwrap();
        prop_assert!(log.frac_part >= 0.0 && log.frac_part < 1.0);
        let float = (x as f64 / n as f64).log2();
        prop_assert!((log.value() - float).abs() < 1e-9,
            "x = {x}, n = {n}: {} vs {float}", log.value());
    }
}

proptest! {
    #![proptest_config(config(64))]

    /// The threshold walk equals the term-by-term floor sum.
    #[test]
    fn walk_matches_per_term_sum(x in 1u64..=500_000) {
        let walk = sum_dyadic_floor_over_odd(x).unwrap();
        let mut direct = 0u64;
        let mut n = 1u64;
        while n <= x {
            direct += dyadic_floor(x, n).unwrap() as u64;
            n += 2;
        }
        prop_assert_eq!(walk, direct);
    }

    /// The floor-log sum over odd arguments collapses to floor(x / 2).
    #[test]
    fn parity_identity_holds_everywhere(x in 1u64..=10_000_000) {
        let report = verify_floor_log_parity(x).unwrap();
        prop_assert!(report.exact);
        prop_assert_eq!(sum_dyadic_floor_over_odd(x).unwrap(), x / 2);
    }

    /// Prime-factor counts from the sieve match trial division.
    #[test]
    fn omega_matches_trial_division(n in 2u64..=100_000) {
        let mut m = n;
        let mut count = 0u32;
        let mut d = 2u64;
        while d * d <= m {
            while m % d == 0 {
                m /= d;
                count += 1;
            }
            d += 1;
        }
        if m > 1 {
            count += 1;
        }
        prop_assert_eq!(sieve().omega(n).unwrap(), count);
    }

    /// The semiprime log-weight is supported exactly on semiprimes: ln n
    /// for a product of distinct primes, half that on prime squares.
    #[test]
    fn upsilon_supported_on_semiprimes(n in 1u64..=100_000) {
        let w = upsilon(n, sieve()).unwrap();
        match sieve().semiprime_parts(n).unwrap() {
            Some((p, q)) => {
                let expected = if p == q {
                    (n as f64).ln() / 2.0
                } else {
                    (n as f64).ln()
                };
                prop_assert!((w - expected).abs() <= 1e-12 * expected, "n = {n}");
            }
            None => prop_assert_eq!(w, 0.0, "n = {}", n),
        }
    }

    /// Chebyshev theta steps by ln y exactly at primes and is flat
    /// elsewhere.
    #[test]
    fn theta_steps_only_at_primes(y in 3u64..=1_000_000) {
        let t = table();
        let step = t.theta(y).unwrap() - t.theta(y - 1).unwrap();
        if t.is_prime(y).unwrap() {
            prop_assert!((step - (y as f64).ln()).abs() < 1e-9, "y = {y}");
        } else {
            prop_assert_eq!(step, 0.0, "y = {}", y);
        }
    }

    /// Odd arguments partition into 1, odd primes, and odd non-primes: the
    /// full floor sum splits into the prime part plus the rest.
    #[test]
    fn floor_sum_partitions_over_primality(x in 6u64..=10_000) {
        let total = sum_dyadic_floor_over_odd(x).unwrap();
        let prime_part: u64 = table()
            .odd_primes()
            .iter()
            .take_while(|&&p| p <= x)
            .map(|&p| dyadic_floor(x, p).unwrap() as u64)
            .sum();
        let rest = floor_sum_over_odd_nonprimes(x, sieve()).unwrap();
        prop_assert_eq!(total, prime_part + rest);
    }

    /// Semiprime-count verification is exact wherever defined.
    #[test]
    fn semiprime_count_formula_is_exact(x in 5u64..=50_000) {
        let report = verify_semiprime_count(x, table()).unwrap();
        prop_assert!(report.exact);
        prop_assert_eq!(report.residual, 0.0);
    }

    /// Collision records always survive independent re-verification.
    #[test]
    fn collision_records_self_verify(n in 5u64..=5_000) {
        let record = find_collision(n, table()).unwrap();
        prop_assert!(verify_witness(&record));
        if record.status == ScanStatus::Pass {
            let [a, b] = &record.witnesses[..] else {
                return Err(TestCaseError::fail("wrong witness arity"));
            };
            prop_assert_eq!(
                a[0] as u128 * a[1] as u128 % n as u128,
                b[0] as u128 * b[1] as u128 % n as u128
            );
        }
    }

    /// The reconstruction rounds to the sieve count with a sub-half
    /// residual at every sampled argument.
    #[test]
    fn reconstruction_rounds_to_sieve_count(x in 2u64..=10_000) {
        let r = reconstruct_pi(x, table(), sieve(), ParityVariant::Statement).unwrap();
        prop_assert_eq!(r.rounded, Some(r.sieve_pi), "x = {}", x);
        prop_assert!((r.value - r.sieve_pi as f64).abs() < 0.5);
        prop_assert!(r.error_bound < 0.25);
    }

    /// Every JSON line is parseable with the required keys present.
    #[test]
    fn json_lines_are_well_formed(x in 5u64..=2_000) {
        let report = verify_semiprime_count(x, table()).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&report.json_line(None)).unwrap();
        for key in ["identity", "x", "lhs", "rhs", "residual", "exact"] {
            prop_assert!(parsed.get(key).is_some(), "missing {key}");
        }
        prop_assert_eq!(parsed["x"].as_u64(), Some(x));

        let audit = identity::audit_parity_variants(x, x + 10, table(), sieve()).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&audit.json_line()).unwrap();
        prop_assert_eq!(parsed["kind"].as_str(), Some("audit"));
        prop_assert!(parsed["statement"]["checked"].as_u64().is_some());
    }
}
