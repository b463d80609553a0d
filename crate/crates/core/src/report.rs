//! Machine-readable serialization: JSON lines and CSV.
//!
//! Output is deterministic byte-for-byte for a fixed build: integers print
//! as integers, reals print through [`fmt_real`] at 15 significant digits,
//! key order is fixed, and no timestamps or durations appear unless the
//! caller passes one explicitly.

use crate::conjecture::{EpsilonDeltaFit, ScanRecord, ScanStatus};
use crate::identity::{ParityAudit, ReportValue, VariantSummary, VerificationReport};
use crate::upsilon::{TrendRow, UpsilonSummary};

/// Canonical real format: 15 significant digits, exponent notation, valid
/// as a JSON number. Non-finite values serialize as `null`.
pub fn fmt_real(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.14e}")
    } else {
        "null".to_string()
    }
}

fn fmt_opt_real(value: Option<f64>) -> String {
    value.map_or_else(|| "null".to_string(), fmt_real)
}

impl ReportValue {
    fn repr(&self) -> String {
        match self {
            ReportValue::Int(i) => i.to_string(),
            ReportValue::Real(v) => fmt_real(*v),
        }
    }
}

impl VerificationReport {
    /// Integer-valued residuals (both sides integers) print as integers.
    fn residual_repr(&self) -> String {
        match (&self.lhs, &self.rhs) {
            (ReportValue::Int(_), ReportValue::Int(_)) => {
                format!("{}", self.residual as i128)
            }
            _ => fmt_real(self.residual),
        }
    }

    /// One JSON object per line; `ms` is appended only when given.
    pub fn json_line(&self, ms: Option<f64>) -> String {
        let mut line = format!(
            "{{\"identity\":\"{}\",\"x\":{},\"lhs\":{},\"rhs\":{},\"residual\":{},\"exact\":{}",
            self.identity.wire_name(),
            self.x,
            self.lhs.repr(),
            self.rhs.repr(),
            self.residual_repr(),
            self.exact
        );
        if let Some(ms) = ms {
            line.push_str(&format!(",\"ms\":{}", fmt_real(ms)));
        }
        line.push('}');
        line
    }

    pub fn csv_header() -> &'static str {
        "identity,x,lhs,rhs,residual,exact"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.identity.wire_name(),
            self.x,
            self.lhs.repr(),
            self.rhs.repr(),
            self.residual_repr(),
            self.exact
        )
    }
}

impl ScanRecord {
    fn witnesses_json(&self) -> String {
        let tuples: Vec<String> = self
            .witnesses
            .iter()
            .map(|w| {
                let nums: Vec<String> = w.iter().map(u64::to_string).collect();
                format!("[{}]", nums.join(","))
            })
            .collect();
        format!("[{}]", tuples.join(","))
    }

    /// Witness tuples as `3*5;5*7`: `*` joins primes, `;` joins tuples.
    fn witnesses_csv(&self) -> String {
        let tuples: Vec<String> = self
            .witnesses
            .iter()
            .map(|w| {
                w.iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        tuples.join(";")
    }

    pub fn json_line(&self, ms: Option<f64>) -> String {
        let mut line = format!(
            "{{\"kind\":\"{}\",\"n\":{},\"lower\":{},\"upper\":{},\"target\":{},\"witnesses\":{},\"status\":\"{}\"",
            self.kind.wire_name(),
            self.n,
            self.lower,
            self.upper,
            self.target,
            self.witnesses_json(),
            self.status.wire_name()
        );
        if let Some(ms) = ms {
            line.push_str(&format!(",\"ms\":{}", fmt_real(ms)));
        }
        line.push('}');
        line
    }

    pub fn csv_header() -> &'static str {
        "kind,n,lower,upper,target,witnesses,status"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind.wire_name(),
            self.n,
            self.lower,
            self.upper,
            self.target,
            self.witnesses_csv(),
            self.status.wire_name()
        )
    }
}

impl UpsilonSummary {
    pub fn json_line(&self, ms: Option<f64>) -> String {
        let mut line = format!(
            "{{\"x\":{},\"sum_direct\":{},\"sum_lemma\":{},\"sum_logsemiprime\":{},\"mertens_sum\":{},\"ratio\":{}",
            self.x,
            fmt_real(self.sum_direct),
            fmt_real(self.sum_lemma),
            fmt_real(self.sum_logsemiprime),
            fmt_real(self.mertens_sum),
            fmt_opt_real(self.ratio)
        );
        if let Some(ms) = ms {
            line.push_str(&format!(",\"ms\":{}", fmt_real(ms)));
        }
        line.push('}');
        line
    }

    pub fn csv_header() -> &'static str {
        "x,sum_direct,sum_lemma,sum_logsemiprime,mertens_sum,ratio"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.x,
            fmt_real(self.sum_direct),
            fmt_real(self.sum_lemma),
            fmt_real(self.sum_logsemiprime),
            fmt_real(self.mertens_sum),
            self.ratio.map(fmt_real).unwrap_or_default()
        )
    }
}

impl TrendRow {
    pub fn json_line(&self) -> String {
        format!(
            "{{\"x\":{},\"mertens_sum\":{},\"logx_loglogx\":{},\"ratio\":{}}}",
            self.x,
            fmt_real(self.mertens_sum),
            fmt_real(self.logx_loglogx),
            fmt_real(self.ratio)
        )
    }
}

impl EpsilonDeltaFit {
    pub fn json_line(&self) -> String {
        format!(
            "{{\"kind\":\"fit\",\"n\":{},\"epsilon\":{},\"delta\":{},\"degenerate\":{}}}",
            self.n,
            fmt_opt_real(self.epsilon),
            fmt_opt_real(self.delta),
            self.degenerate
        )
    }
}

impl VariantSummary {
    fn json_object(&self) -> String {
        format!(
            "{{\"variant\":\"{}\",\"checked\":{},\"rounded_matches\":{},\"refusals\":{},\"max_abs_residual\":{},\"worst_x\":{}}}",
            self.variant.wire_name(),
            self.checked,
            self.rounded_matches,
            self.refusals,
            fmt_real(self.max_abs_residual),
            self.worst_x
        )
    }
}

impl ParityAudit {
    pub fn json_line(&self) -> String {
        let preferred = self
            .preferred()
            .map_or_else(|| "null".to_string(), |v| format!("\"{}\"", v.wire_name()));
        format!(
            "{{\"kind\":\"audit\",\"preferred\":{},\"statement\":{},\"proof\":{}}}",
            preferred,
            self.statement.json_object(),
            self.proof.json_object()
        )
    }
}

/// Aggregate scan counters for a JSON footer object.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanTally {
    pub checked: u64,
    pub pass: u64,
    pub violation: u64,
    pub not_found: u64,
    pub inconclusive: u64,
}

impl ScanTally {
    pub fn record(&mut self, status: ScanStatus) {
        self.checked += 1;
        match status {
            ScanStatus::Pass => self.pass += 1,
            ScanStatus::Violation => self.violation += 1,
            ScanStatus::NotFound => self.not_found += 1,
        }
    }

    pub fn record_inconclusive(&mut self) {
        self.checked += 1;
        self.inconclusive += 1;
    }

    pub fn json_line(&self) -> String {
        format!(
            "{{\"summary\":{{\"checked\":{},\"pass\":{},\"violation\":{},\"not_found\":{},\"inconclusive\":{}}}}}",
            self.checked, self.pass, self.violation, self.not_found, self.inconclusive
        )
    }
}
