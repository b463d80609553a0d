//! Prime tables and factorization sieves.
//!
//! [`PrimeTable`] holds every prime up to a limit, sieved segment by segment
//! from a bit-packed odd-only bitmap, together with a compensated prefix sum
//! of `ln p` so that both the prime-counting function and Chebyshev's theta
//! answer in O(log n) with a tracked rounding bound. [`FactorSieve`] stores
//! the smallest prime factor of every integer up to its limit (linear sieve),
//! which makes factor counts and semiprime splits O(log n) lookups.
//!
//! Construction is budgeted: both builders estimate their allocation up
//! front and refuse with [`Error::Resource`] instead of letting the
//! allocator abort. Tables can be cached to disk in a delta-encoded binary
//! format with a checksum trailer; see [`write_cache`] and [`read_cache`].

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};

/// Default construction budget: 2 GiB, enough for a table past 10^9.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Numbers spanned by one sieve segment. 2^20 numbers means 2^19 odd
/// candidates, a 64 KiB bitmap that stays cache-resident.
const SEGMENT_SPAN: u64 = 1 << 20;

/// Every prime up to a limit, plus prefix data for `pi` and `theta` queries.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    /// `theta_prefix[k]` = compensated sum of `ln p` over the first k primes.
    theta_prefix: Vec<f64>,
}

/// Configures and builds a [`PrimeTable`].
#[derive(Debug, Clone)]
pub struct PrimeTableBuilder {
    limit: u64,
    budget: u64,
}

impl PrimeTableBuilder {
    /// Override the construction memory budget in bytes.
    pub fn memory_budget(mut self, bytes: u64) -> Self {
        self.budget = bytes;
        self
    }

    pub fn build(self) -> Result<PrimeTable> {
        if self.limit < 2 {
            return Err(Error::Domain(format!(
                "prime table limit must be at least 2, got {}",
                self.limit
            )));
        }
        let required = estimate_table_bytes(self.limit);
        if required > self.budget {
            return Err(Error::Resource {
                limit: self.limit,
                required_bytes: required,
                budget_bytes: self.budget,
            });
        }

        let limit = self.limit;
        let base = small_primes(limit.isqrt());
        let odd_base = &base[base.iter().position(|&p| p > 2).unwrap_or(base.len())..];

        let mut primes = vec![2u64];
        if limit >= 3 {
            let mut segments = Vec::new();
            let mut lo = 3u64;
            while lo <= limit {
                let hi = (lo + SEGMENT_SPAN - 1).min(limit);
                segments.push((lo, hi));
                lo = hi + 1;
            }
            // Segments are independent; collect preserves order, so the
            // flattened list is ascending regardless of thread count.
            let found: Vec<Vec<u64>> = segments
                .par_iter()
                .map(|&(lo, hi)| sieve_segment(lo, hi, odd_base))
                .collect();
            for seg in found {
                primes.extend(seg);
            }
        }

        let mut theta_prefix = Vec::with_capacity(primes.len() + 1);
        theta_prefix.push(0.0);
        let mut acc = CompensatedSum::new();
        for &p in &primes {
            acc.add((p as f64).ln());
            theta_prefix.push(acc.value());
        }

        Ok(PrimeTable {
            limit,
            primes,
            theta_prefix,
        })
    }
}

impl PrimeTable {
    pub fn builder(limit: u64) -> PrimeTableBuilder {
        PrimeTableBuilder {
            limit,
            budget: DEFAULT_MEMORY_BUDGET,
        }
    }

    /// Build with the default memory budget.
    pub fn build(limit: u64) -> Result<Self> {
        Self::builder(limit).build()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// All odd primes up to the limit, ascending.
    pub fn odd_primes(&self) -> &[u64] {
        &self.primes[1..]
    }

    pub fn prime_count(&self) -> u64 {
        self.primes.len() as u64
    }

    fn check_range(&self, what: &'static str, value: u64) -> Result<()> {
        if value > self.limit {
            return Err(Error::Range {
                what,
                value,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Number of primes `<= y`.
    pub fn pi(&self, y: u64) -> Result<u64> {
        self.check_range("pi argument", y)?;
        Ok(self.primes.partition_point(|&p| p <= y) as u64)
    }

    pub fn is_prime(&self, y: u64) -> Result<bool> {
        self.check_range("primality argument", y)?;
        Ok(self.primes.binary_search(&y).is_ok())
    }

    /// The n-th prime, 1-indexed.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("prime indices start at 1".into()));
        }
        self.primes
            .get(n as usize - 1)
            .copied()
            .ok_or(Error::Range {
                what: "prime index",
                value: n,
                limit: self.prime_count(),
            })
    }

    /// Chebyshev's theta: the sum of `ln p` over primes `p <= y`.
    pub fn theta(&self, y: u64) -> Result<f64> {
        let k = self.pi(y)?;
        Ok(self.theta_prefix[k as usize])
    }

    /// Bound on the rounding error in [`PrimeTable::theta`] at `y`.
    pub fn theta_error_bound(&self, y: u64) -> Result<f64> {
        let k = self.pi(y)?;
        Ok(crate::accum::sum_error_bound(k, self.theta_prefix[k as usize]))
    }
}

/// Conservative allocation estimate for a table build, in bytes.
fn estimate_table_bytes(limit: u64) -> u64 {
    let x = limit.max(17) as f64;
    // pi(x) < 1.3 x / ln x for all x >= 17.
    let est_primes = (1.3 * x / x.ln()) as u64 + 16;
    // One u64 per prime, one f64 theta entry per prime; the bitmap, base
    // sieve, and segment list run well under the slack constant.
    est_primes * 16 + SEGMENT_SPAN / 8 + limit.isqrt() + (1 << 16)
}

/// Plain sieve for the base primes used to mark segments.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Primes in the odd range `[lo, hi]` (both inclusive, `lo` odd and >= 3),
/// found by marking odd multiples of the base primes in a packed bitmap.
fn sieve_segment(lo: u64, hi: u64, odd_base: &[u64]) -> Vec<u64> {
    debug_assert!(lo % 2 == 1 && lo >= 3);
    let hi_odd = if hi % 2 == 0 { hi - 1 } else { hi };
    if hi_odd < lo {
        return Vec::new();
    }
    let len = ((hi_odd - lo) / 2 + 1) as usize;
    let mut bits = vec![0u64; len.div_ceil(64)];

    for &p in odd_base {
        let p_sq = p * p;
        if p_sq > hi_odd {
            break;
        }
        // First odd multiple of p in range, at least p^2 (smaller composites
        // carry a smaller prime factor and are marked by it).
        let start = if p_sq >= lo {
            p_sq
        } else {
            let mut m = lo.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            m
        };
        if start > hi_odd {
            continue;
        }
        let mut idx = ((start - lo) / 2) as usize;
        // Consecutive odd multiples differ by 2p, i.e. p bitmap slots.
        let step = p as usize;
        while idx < len {
            bits[idx / 64] |= 1 << (idx % 64);
            idx += step;
        }
    }

    let mut primes = Vec::new();
    for idx in 0..len {
        if bits[idx / 64] & (1 << (idx % 64)) == 0 {
            primes.push(lo + 2 * idx as u64);
        }
    }
    primes
}

/// Smallest-prime-factor table for every integer up to a limit.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl FactorSieve {
    /// Build with the default memory budget.
    pub fn build(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!(
                "factor sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::Domain(format!(
                "factor sieve limit {limit} exceeds the u32 entry width"
            )));
        }
        let x = limit.max(17) as f64;
        let required = 4 * (limit + 1) + (1.3 * x / x.ln()) as u64 * 4 + (1 << 16);
        if required > budget {
            return Err(Error::Resource {
                limit,
                required_bytes: required,
                budget_bytes: budget,
            });
        }

        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        // Linear sieve: each composite is marked exactly once, by its
        // smallest prime factor.
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                spf[m] = p;
            }
        }

        Ok(FactorSieve { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check_range(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::Range {
                what,
                value: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Smallest prime factor of `n >= 2`.
    pub fn spf(&self, n: u64) -> Result<u64> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "smallest prime factor needs n >= 2, got {n}"
            )));
        }
        self.check_range("spf argument", n)?;
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_range("primality argument", n)?;
        Ok(n >= 2 && self.spf[n as usize] as u64 == n)
    }

    /// Number of prime factors of `n >= 1`, counted with multiplicity.
    pub fn omega(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::Domain("factor count needs n >= 1".into()));
        }
        self.check_range("factor count argument", n)?;
        let mut m = n as usize;
        let mut count = 0;
        while m > 1 {
            m /= self.spf[m] as usize;
            count += 1;
        }
        Ok(count)
    }

    /// For a semiprime `n = p * q` (primes `p <= q`, not necessarily
    /// distinct) returns the pair; `None` when `n` is not a semiprime.
    pub fn semiprime_parts(&self, n: u64) -> Result<Option<(u64, u64)>> {
        if n == 0 {
            return Err(Error::Domain("semiprime split needs n >= 1".into()));
        }
        self.check_range("semiprime split argument", n)?;
        if n < 4 {
            return Ok(None);
        }
        let p = self.spf[n as usize] as u64;
        if p == n {
            return Ok(None);
        }
        let q = n / p;
        if self.spf[q as usize] as u64 == q {
            Ok(Some((p, q)))
        } else {
            Ok(None)
        }
    }

    /// Full factorization as `(prime, multiplicity)` pairs, ascending.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 {
            return Err(Error::Domain("factorization needs n >= 1".into()));
        }
        self.check_range("factorization argument", n)?;
        let mut m = n as usize;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as u64;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            m /= p as usize;
        }
        Ok(out)
    }
}

/// Count of distinct products `p * q` over odd primes `p <= q <= x`.
///
/// Every pair is enumerated and its product formed; the count trusts unique
/// factorization to make products distinct. [`odd_semiprime_products`] is the
/// slower route that materializes and deduplicates instead, used to check
/// this one.
pub fn odd_semiprime_count(x: u64, table: &PrimeTable) -> Result<u64> {
    if x < 5 {
        return Err(Error::Domain(format!(
            "odd semiprime products need x >= 5 (no odd prime pairs below), got {x}"
        )));
    }
    if x > table.limit() {
        return Err(Error::Range {
            what: "x",
            value: x,
            limit: table.limit(),
        });
    }
    let odd = &table.odd_primes()[..table.pi(x)? as usize - 1];
    let mut count = 0u64;
    for (i, &p) in odd.iter().enumerate() {
        for &q in &odd[i..] {
            let product = p.checked_mul(q).ok_or_else(|| {
                Error::Domain(format!("product {p} * {q} overflows u64"))
            })?;
            debug_assert!(product >= 9);
            count += 1;
        }
    }
    Ok(count)
}

/// The distinct products `p * q` over odd primes `p <= q <= x`, ascending.
pub fn odd_semiprime_products(x: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    if x < 5 {
        return Err(Error::Domain(format!(
            "odd semiprime products need x >= 5 (no odd prime pairs below), got {x}"
        )));
    }
    if x > table.limit() {
        return Err(Error::Range {
            what: "x",
            value: x,
            limit: table.limit(),
        });
    }
    let odd = &table.odd_primes()[..table.pi(x)? as usize - 1];
    let mut products = Vec::with_capacity(odd.len() * (odd.len() + 1) / 2);
    for (i, &p) in odd.iter().enumerate() {
        for &q in &odd[i..] {
            products.push(p * q);
        }
    }
    products.sort_unstable();
    products.dedup();
    Ok(products)
}

const CACHE_MAGIC: &[u8; 5] = b"PSUM1";

/// Serialize a table's primes: magic, limit, count, u16 deltas, and the
/// first 8 bytes of a SHA-256 over everything before the trailer.
pub fn write_cache(table: &PrimeTable, path: &Path) -> Result<()> {
    let primes = table.primes();
    let mut buf = Vec::with_capacity(29 + 2 * primes.len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&table.limit().to_le_bytes());
    buf.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    let mut prev = 0u64;
    for &p in primes {
        let gap = p - prev;
        if gap > u16::MAX as u64 {
            return Err(Error::Cache(format!(
                "prime gap {gap} at {p} exceeds the delta encoding width"
            )));
        }
        buf.extend_from_slice(&(gap as u16).to_le_bytes());
        prev = p;
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest[..8]);

    // Write-then-rename so a crashed writer never leaves a torn file behind.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Load a cached table, validating magic, checksum, and structure, and
/// rebuilding the theta prefix from the decoded primes.
pub fn read_cache(path: &Path) -> Result<PrimeTable> {
    let data = fs::read(path)?;
    if data.len() < 29 {
        return Err(Error::Cache("file too short".into()));
    }
    if &data[..5] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let body = &data[..data.len() - 8];
    let digest = Sha256::digest(body);
    if digest[..8] != data[data.len() - 8..] {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let limit = u64::from_le_bytes(data[5..13].try_into().unwrap());
    let count = u64::from_le_bytes(data[13..21].try_into().unwrap());
    if data.len() as u64 != 29 + 2 * count {
        return Err(Error::Cache("length does not match prime count".into()));
    }
    if limit < 2 || count == 0 {
        return Err(Error::Cache("empty or undersized table".into()));
    }
    let mut primes = Vec::with_capacity(count as usize);
    let mut prev = 0u64;
    for chunk in data[21..data.len() - 8].chunks_exact(2) {
        let gap = u16::from_le_bytes(chunk.try_into().unwrap()) as u64;
        if gap == 0 {
            return Err(Error::Cache("non-increasing prime sequence".into()));
        }
        prev += gap;
        primes.push(prev);
    }
    if primes[0] != 2 || *primes.last().unwrap() > limit {
        return Err(Error::Cache("decoded primes violate table bounds".into()));
    }

    let mut theta_prefix = Vec::with_capacity(primes.len() + 1);
    theta_prefix.push(0.0);
    let mut acc = CompensatedSum::new();
    for &p in &primes {
        acc.add((p as f64).ln());
        theta_prefix.push(acc.value());
    }
    Ok(PrimeTable {
        limit,
        primes,
        theta_prefix,
    })
}

/// Build a table, reusing `dir`'s cache when possible. A missing, stale, or
/// corrupt cache entry triggers a rebuild; the rebuilt table is written back
/// on a best-effort basis (a read-only cache directory is not an error).
pub fn load_or_build(limit: u64, dir: Option<&Path>) -> Result<PrimeTable> {
    let Some(dir) = dir else {
        return PrimeTable::build(limit);
    };
    let path = dir.join(format!("psum1-{limit}.primes"));
    if let Ok(table) = read_cache(&path) {
        if table.limit() == limit {
            return Ok(table);
        }
    }
    let table = PrimeTable::build(limit)?;
    if fs::create_dir_all(dir).is_ok() {
        let _ = write_cache(&table, &path);
    }
    Ok(table)
}
