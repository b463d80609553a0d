//! Sieve-backed exact verification of prime and semiprime counting
//! identities, with guarded floating-point and escalated-precision
//! arithmetic.
//!
//! The crate is organized around one idea: every numerical claim is either
//! decided in exact integer arithmetic, or carried through f64 with a
//! tracked error bound and refused (or re-resolved at higher precision)
//! when the bound reaches a rounding boundary. Nothing is silently
//! trusted to float rounding.
//!
//! * [`prime`]: segmented bit-packed prime sieve with cached prime lists,
//!   a smallest-prime-factor sieve, Chebyshev theta prefix sums, and
//!   semiprime enumeration.
//! * [`dyadic`]: exact integer and guarded fractional parts of
//!   `log2(x / n)` without floating-point division of the inputs.
//! * [`accum`]: compensated summation with a proven worst-case error
//!   bound.
//! * [`identity`]: the verifiers for the semiprime-count formula, the
//!   floor-log parity identity, and the prime-count reconstruction with
//!   guarded rounding.
//! * [`upsilon`]: three independent routes to the semiprime log-sum and
//!   its Mertens-type growth ratio.
//! * [`conjecture`]: prime-window, residue-collision, and
//!   Goldbach-congruence scanners with witness self-verification.
//! * [`hiprec`]: escalated-precision (>= 128-bit) re-resolution of
//!   ceiling/floor decisions too close to call in f64.
//! * [`report`]: deterministic JSON-lines and CSV serialization.

pub mod accum;
pub mod conjecture;
pub mod dyadic;
pub mod error;
pub mod hiprec;
pub mod identity;
pub mod prime;
pub mod report;
pub mod upsilon;

pub use accum::{Bounded, CompensatedSum};
pub use conjecture::{ScanKind, ScanRecord, ScanStatus};
pub use error::{Error, Result};
pub use identity::{IdentityKind, ParityVariant, ReportValue, VerificationReport};
pub use prime::{FactorSieve, PrimeTable};
pub use upsilon::UpsilonSummary;
