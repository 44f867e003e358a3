//! Exact prime counting, Chebyshev theta, the weighted prime-power sum, and
//! the density D_n.
//!
//! A bit sieve answers pi(m) in O(1) up to `small_limit`; above it a
//! Meissel/Legendre-style DP over the distinct values of n/k covers queries
//! up to the configured maximum (default 10^13), with results cached and
//! optionally persisted to an append-only `m<TAB>pi` text file.

use crate::error::{Error, Result};
use crate::util::{integer_nth_root, CompensatedSum};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

/// Sieve coverage used when none is specified.
pub const DEFAULT_SMALL_LIMIT: u64 = 100_000_000;
/// Largest argument the combinatorial backend accepts by default.
pub const DEFAULT_MAX_N: u64 = 10_000_000_000_000;

/// OEIS A006880 fixture: exact pi(10^k) for k = 1..=27. Never computed here.
const CHECKPOINT_FIXTURE: &str = include_str!("../data/pi_checkpoints.tsv");

/// Which machinery serves queries above the sieve range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    SieveOnly,
    Combinatorial,
}

/// Odd-only bit sieve with per-word prefix counts for O(1) rank queries.
struct BitSieve {
    /// Bit i set <=> 2i+1 is prime (bit 0, the number 1, is clear).
    words: Vec<u64>,
    /// prefix[w] = number of set bits in words[..w].
    prefix: Vec<u64>,
}

impl BitSieve {
    fn build(limit: u64) -> Self {
        let n_bits = if limit < 1 { 1 } else { (limit as usize).div_ceil(2) };
        let n_words = n_bits.div_ceil(64).max(1);
        let mut words = vec![u64::MAX; n_words];
        words[0] &= !1; // 1 is not prime
        // Clear bits past the limit.
        for i in n_bits..n_words * 64 {
            words[i >> 6] &= !(1u64 << (i & 63));
        }
        let mut p = 3u64;
        while p * p <= limit {
            let idx = ((p - 1) / 2) as usize;
            if words[idx >> 6] & (1 << (idx & 63)) != 0 {
                let mut j = p * p;
                while j <= limit {
                    let k = ((j - 1) / 2) as usize;
                    words[k >> 6] &= !(1u64 << (k & 63));
                    j += 2 * p;
                }
            }
            p += 2;
        }
        let mut prefix = Vec::with_capacity(n_words + 1);
        let mut acc = 0u64;
        prefix.push(0);
        for w in &words {
            acc += w.count_ones() as u64;
            prefix.push(acc);
        }
        BitSieve { words, prefix }
    }

    /// Number of primes <= m (requires m <= limit).
    fn pi(&self, m: u64) -> u64 {
        if m < 2 {
            return 0;
        }
        if m == 2 {
            return 1;
        }
        let i_max = ((m - 1) / 2) as usize; // index of largest odd number <= m
        let w = i_max >> 6;
        let bit = i_max & 63;
        let mask = if bit == 63 { u64::MAX } else { (1u64 << (bit + 1)) - 1 };
        1 + self.prefix[w] + (self.words[w] & mask).count_ones() as u64
    }

    fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2u64).chain(
            self.words
                .iter()
                .enumerate()
                .flat_map(|(w, &word)| {
                    let base = (w as u64) << 6;
                    BitIter { word, base }
                })
                .map(|i| 2 * i + 1),
        )
    }
}

struct BitIter {
    word: u64,
    base: u64,
}

impl Iterator for BitIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as u64;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

/// Legendre/Meissel-style DP over the distinct values of n/k ("Lucy"
/// recurrence): O(n^{3/4})-class time, O(n^{1/2}) memory.
pub fn lucy_pi(n: u64) -> u64 {
    if n < 2 {
        return 0;
    }
    let r = integer_nth_root(n, 2);
    let mut small: Vec<u64> = (0..=r).map(|i| i.saturating_sub(1)).collect();
    let mut large: Vec<u64> = vec![0; (r + 1) as usize];
    for i in 1..=r {
        large[i as usize] = n / i - 1;
    }
    for p in 2..=r {
        if small[p as usize] > small[(p - 1) as usize] {
            let sp = small[(p - 1) as usize];
            let p2 = p * p;
            let lim = (n / p2).min(r);
            for i in 1..=lim {
                let d = i * p;
                let sub = if d <= r {
                    large[d as usize]
                } else {
                    small[(n / d) as usize]
                };
                large[i as usize] -= sub - sp;
            }
            let mut v = r;
            while v >= p2 {
                small[v as usize] -= small[(v / p) as usize] - sp;
                v -= 1;
            }
        }
    }
    large[1]
}

/// Queryable exact prime-counting provider.
///
/// Construction is single-threaded; afterwards all queries are read-only and
/// callable concurrently. Cache writes are serialized through one writer.
pub struct PrimeTable {
    small_limit: u64,
    backend: Backend,
    max_n: u64,
    sieve: BitSieve,
    cache: RwLock<BTreeMap<u64, u64>>,
    writer: Mutex<Option<BufWriter<File>>>,
    checkpoints: BTreeMap<u32, u128>,
}

impl PrimeTable {
    pub fn new(small_limit: u64) -> Self {
        Self::with_backend(small_limit, Backend::Combinatorial)
    }

    pub fn with_backend(small_limit: u64, backend: Backend) -> Self {
        PrimeTable {
            small_limit,
            backend,
            max_n: DEFAULT_MAX_N,
            sieve: BitSieve::build(small_limit),
            cache: RwLock::new(BTreeMap::new()),
            writer: Mutex::new(None),
            checkpoints: parse_checkpoints(CHECKPOINT_FIXTURE)
                .expect("embedded checkpoint fixture is well-formed"),
        }
    }

    pub fn small_limit(&self) -> u64 {
        self.small_limit
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn set_max_n(&mut self, max_n: u64) {
        self.max_n = max_n;
    }

    /// Load `m<TAB>pi` records from `path` (validating every record with
    /// m <= small_limit against the sieve) and keep the file open for
    /// appending newly computed values. Returns the number of records loaded.
    pub fn attach_cache_file(&mut self, path: impl AsRef<Path>) -> Result<usize> {
        let path = path.as_ref();
        let mut loaded = 0usize;
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            let mut cache = self.cache.write().expect("cache lock poisoned");
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let (m, pi) = parse_cache_line(&line, idx + 1)?;
                if m <= self.small_limit && self.sieve.pi(m) != pi {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!(
                            "cached pi({m}) = {pi} disagrees with sieve value {}",
                            self.sieve.pi(m)
                        ),
                    });
                }
                cache.insert(m, pi);
                loaded += 1;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        *self.writer.lock().expect("writer lock poisoned") = Some(BufWriter::new(file));
        Ok(loaded)
    }

    /// Exact number of primes <= m.
    pub fn prime_count(&self, m: u64) -> Result<u64> {
        if m <= self.small_limit {
            return Ok(self.sieve.pi(m));
        }
        if m > self.max_n {
            return Err(Error::ResourceLimit {
                message: format!("pi({m}) requested"),
                limit: self.max_n,
            });
        }
        if self.backend == Backend::SieveOnly {
            return Err(Error::ResourceLimit {
                message: format!("pi({m}) requested with a sieve-only backend"),
                limit: self.small_limit,
            });
        }
        if let Some(&v) = self.cache.read().expect("cache lock poisoned").get(&m) {
            return Ok(v);
        }
        let v = lucy_pi(m);
        let mut cache = self.cache.write().expect("cache lock poisoned");
        if cache.insert(m, v).is_none() {
            if let Some(w) = self.writer.lock().expect("writer lock poisoned").as_mut() {
                let _ = writeln!(w, "{m}\t{v}");
                let _ = w.flush();
            }
        }
        Ok(v)
    }

    /// Chebyshev theta(m) = sum of ln p over primes p <= m, compensated.
    ///
    /// Only supported inside the sieve range.
    pub fn theta(&self, m: u64) -> Result<f64> {
        if m < 2 {
            return Err(Error::domain("theta", format!("m = {m} must be >= 2")));
        }
        if m > self.small_limit {
            return Err(Error::ResourceLimit {
                message: format!("theta({m}) is only available up to the sieve limit"),
                limit: self.small_limit,
            });
        }
        let mut sum = CompensatedSum::new();
        for p in self.sieve.primes().take_while(|&p| p <= m) {
            sum.add((p as f64).ln());
        }
        Ok(sum.value())
    }

    /// All sieve primes in increasing order.
    pub fn sieve_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.sieve.primes().filter(move |&p| p <= self.small_limit)
    }

    /// Exact pi(n) from the read-only OEIS fixture, for n = 10^k, k = 1..=27.
    pub fn checkpoint_pi(&self, n: u128) -> Option<u128> {
        let mut k = 0u32;
        let mut v = n;
        while v >= 10 && v.is_multiple_of(10) {
            v /= 10;
            k += 1;
        }
        if v != 1 || k == 0 {
            return None;
        }
        self.checkpoints.get(&k).copied()
    }

    /// Snapshot of the combinatorial-result cache, sorted by m.
    pub fn cached_counts(&self) -> Vec<(u64, u64)> {
        self.cache
            .read()
            .expect("cache lock poisoned")
            .iter()
            .map(|(&m, &v)| (m, v))
            .collect()
    }

    /// Rewrite the full cache, sorted by m, to `path`.
    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for (m, v) in self.cached_counts() {
            writeln!(out, "{m}\t{v}")?;
        }
        out.flush()?;
        Ok(())
    }
}

fn parse_cache_line(line: &str, lineno: usize) -> Result<(u64, u64)> {
    let mut parts = line.split('\t');
    let m = parts
        .next()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("bad m field in {line:?}"),
        })?;
    let pi = parts
        .next()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("bad pi field in {line:?}"),
        })?;
    Ok((m, pi))
}

fn parse_checkpoints(text: &str) -> Result<BTreeMap<u32, u128>> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let power = parts.next().unwrap_or_default();
        let value = parts.next().unwrap_or_default();
        let k = power
            .strip_prefix("10^")
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("bad power field {power:?}"),
            })?;
        let v = value.parse::<u128>().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("bad value field {value:?}"),
        })?;
        map.insert(k, v);
    }
    Ok(map)
}

/// The weighted prime-power sum over roots of n.
#[derive(Clone, Debug)]
pub struct PrimePowerSum {
    pub n: u128,
    /// Sum over r = 2..=floor(log2 n) of pi(floor(n^{1/r})) / r.
    pub value: f64,
    pub terms: Vec<(u32, f64)>,
}

/// Sum over r = 2..=floor(log2 n) of pi(floor(n^{1/r}))/r; empty sum is 0.
pub fn prime_power_sum(n: u64, table: &PrimeTable) -> Result<PrimePowerSum> {
    if n < 2 {
        return Err(Error::domain("prime_power_sum", format!("n = {n} must be >= 2")));
    }
    let mut terms = Vec::new();
    let mut sum = CompensatedSum::new();
    for r in 2..=n.ilog2() {
        let root = integer_nth_root(n, r);
        let term = table.prime_count(root)? as f64 / r as f64;
        terms.push((r, term));
        sum.add(term);
    }
    Ok(PrimePowerSum {
        n: n as u128,
        value: sum.value(),
        terms,
    })
}

/// Prime-power sum for arguments beyond u64 (the roots still fit in u64 for
/// every r >= 2). Serves the 10^27-scale comparison recipe.
pub fn prime_power_sum_wide(n: u128, table: &PrimeTable) -> Result<PrimePowerSum> {
    if n <= u64::MAX as u128 {
        return prime_power_sum(n as u64, table);
    }
    let mut terms = Vec::new();
    let mut sum = CompensatedSum::new();
    let log2 = 128 - n.leading_zeros() - 1; // floor(log2 n) for n > 0
    for r in 2..=log2 {
        let root = crate::util::integer_nth_root_u128(n, r);
        let root64 = u64::try_from(root).map_err(|_| {
            Error::domain("prime_power_sum_wide", format!("root {root} exceeds u64"))
        })?;
        let term = table.prime_count(root64)? as f64 / r as f64;
        terms.push((r, term));
        sum.add(term);
    }
    Ok(PrimePowerSum {
        n,
        value: sum.value(),
        terms,
    })
}

/// The density D_n: the weighted prime-power sum divided by n.
#[derive(Clone, Copy, Debug)]
pub struct Density {
    pub n: u64,
    pub d: f64,
}

pub fn density(n: u64, table: &PrimeTable) -> Result<Density> {
    if n < 4 {
        return Err(Error::domain("density", format!("n = {n} must be >= 4")));
    }
    let pps = prime_power_sum(n, table)?;
    Ok(Density {
        n,
        d: pps.value / n as f64,
    })
}

/// The exponent beta with sum_{r=2}^{floor(log2 n)} n^{1/r} = n^beta.
pub fn beta_n(n: u64) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain("beta_n", format!("n = {n} must be >= 4")));
    }
    let ln_n = (n as f64).ln();
    let mut sum = CompensatedSum::new();
    for r in 2..=n.ilog2() {
        sum.add((ln_n / r as f64).exp());
    }
    Ok(sum.value().ln() / ln_n)
}
