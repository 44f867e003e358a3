//! Shared command context: prime table construction from flags and
//! environment, and the slow-computation gate.

use litrunc::primes::{PrimeTable, DEFAULT_MAX_N};
use litrunc::{Error, Result};

/// pi-related work above this n requires --allow-slow.
pub const SLOW_PI_THRESHOLD: u64 = 10_000_000_000;

pub struct Context {
    pub table: PrimeTable,
    pub allow_slow: bool,
}

impl Context {
    /// Precedence: flags > environment (LITRUNC_CACHE, LITRUNC_MAX_N) > defaults.
    pub fn build(
        small_limit: u64,
        max_n_flag: Option<u64>,
        cache_flag: Option<&str>,
        allow_slow: bool,
    ) -> Result<Context> {
        let max_n = match max_n_flag {
            Some(v) => v,
            None => match std::env::var("LITRUNC_MAX_N") {
                Ok(s) => s.parse::<u64>().map_err(|_| {
                    Error::domain("context", format!("bad LITRUNC_MAX_N value {s:?}"))
                })?,
                Err(_) => DEFAULT_MAX_N,
            },
        };
        let cache = match cache_flag {
            Some(p) => Some(p.to_string()),
            None => std::env::var("LITRUNC_CACHE").ok(),
        };
        let mut table = PrimeTable::new(small_limit);
        table.set_max_n(if allow_slow {
            max_n
        } else {
            max_n.min(SLOW_PI_THRESHOLD)
        });
        if let Some(path) = cache {
            let loaded = table.attach_cache_file(&path)?;
            if loaded > 0 {
                eprintln!("# cache: loaded {loaded} records from {path}");
            }
        }
        Ok(Context { table, allow_slow })
    }

    /// Map a resource-limit error to a hint about --allow-slow when the
    /// request would have been inside the configured maximum.
    pub fn slow_hint(&self, err: Error) -> Error {
        match err {
            Error::ResourceLimit { message, limit } if !self.allow_slow => Error::ResourceLimit {
                message: format!("{message}; pass --allow-slow to permit long-running prime counts"),
                limit,
            },
            other => other,
        }
    }
}

/// Parse an integer that may be written as digits (underscores allowed),
/// `B^K` power notation, or exact `MeK` scientific notation.
pub fn parse_n(s: &str) -> Result<u128> {
    let clean: String = s.chars().filter(|&c| c != '_' && c != ',').collect();
    let bad = |m: String| Error::domain("parse_n", m);
    if let Some((base, exp)) = clean.split_once('^') {
        let b: u128 = base
            .parse()
            .map_err(|_| bad(format!("bad base in {s:?}")))?;
        let e: u32 = exp.parse().map_err(|_| bad(format!("bad exponent in {s:?}")))?;
        return b
            .checked_pow(e)
            .ok_or_else(|| bad(format!("{s:?} overflows u128")));
    }
    if let Some((mant, exp)) = clean.split_once(['e', 'E']) {
        if mant.contains('.') {
            return Err(bad(format!(
                "non-integer mantissa in {s:?}; use power notation like 10^6"
            )));
        }
        let m: u128 = mant
            .parse()
            .map_err(|_| bad(format!("bad mantissa in {s:?}")))?;
        let e: u32 = exp.parse().map_err(|_| bad(format!("bad exponent in {s:?}")))?;
        return 10u128
            .checked_pow(e)
            .and_then(|p| m.checked_mul(p))
            .ok_or_else(|| bad(format!("{s:?} overflows u128")));
    }
    clean
        .parse()
        .map_err(|_| bad(format!("cannot parse {s:?} as an integer")))
}

/// Exit-code mapping: domain errors 1, resource limits 2, I/O 3.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit { .. } => 2,
        Error::Io(_) | Error::Parse { .. } => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        assert_eq!(parse_n("599").unwrap(), 599);
        assert_eq!(parse_n("1_000_000").unwrap(), 1_000_000);
        assert_eq!(parse_n("10^27").unwrap(), 10u128.pow(27));
        assert_eq!(parse_n("2^10").unwrap(), 1024);
        assert_eq!(parse_n("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_n("25E2").unwrap(), 2_500);
        assert!(parse_n("2.5e3").is_err());
        assert!(parse_n("10^40").is_err());
        assert!(parse_n("abc").is_err());
    }
}
