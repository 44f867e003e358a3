//! Riemann's prime-count approximation R(n): the Mobius-weighted sum of
//! li(n^{1/r}).

use crate::error::{Error, Result};
use crate::logint::li;
use crate::util::CompensatedSum;

/// Mobius function by trial factorization (arguments stay <= 64 here).
pub fn mobius(r: u64) -> i32 {
    if r == 0 {
        return 0;
    }
    let mut m = r;
    let mut factors = 0u32;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0; // squared factor
            }
            factors += 1;
        }
        d += 1;
    }
    if m > 1 {
        factors += 1;
    }
    if factors.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// R(n) = sum_{r} mu(r)/r · li(n^{1/r}) over r = 1..=floor(log2 n),
/// keeping at most `terms` nonzero-mu terms (mu(r) = 0 rows don't count).
///
/// `terms = 5` covers r in {1, 2, 3, 5, 6}: up to the first positive
/// correction at r = 6.
pub fn riemann_r(n: f64, terms: u32) -> Result<f64> {
    if !(n >= 2.0) {
        return Err(Error::domain("riemann_r", format!("n = {n} must be >= 2")));
    }
    if terms < 1 {
        return Err(Error::domain("riemann_r", "terms must be >= 1".to_string()));
    }
    let r_max = (n.ln() / 2f64.ln()).floor() as u64;
    let mut sum = CompensatedSum::new();
    let mut used = 0u32;
    for r in 1..=r_max.max(1) {
        let mu = mobius(r);
        if mu == 0 {
            continue;
        }
        let root = n.powf(1.0 / r as f64);
        if root <= 1.0 {
            break;
        }
        sum.add(mu as f64 / r as f64 * li(root)?);
        used += 1;
        if used >= terms {
            break;
        }
    }
    Ok(sum.value())
}

/// Number of nonzero-mu rows available for n (i.e. the `terms` value that
/// makes `riemann_r` use every term up to floor(log2 n)).
pub fn full_terms(n: f64) -> u32 {
    let r_max = (n.ln() / 2f64.ln()).floor() as u64;
    (1..=r_max.max(1)).filter(|&r| mobius(r) != 0).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logint::li;
    use approx::assert_relative_eq;

    #[test]
    fn mobius_small_values() {
        let expect = [
            (1, 1),
            (2, -1),
            (3, -1),
            (4, 0),
            (5, -1),
            (6, 1),
            (7, -1),
            (8, 0),
            (9, 0),
            (10, 1),
            (12, 0),
            (30, -1),
            (64, 0),
        ];
        for (r, m) in expect {
            assert_eq!(mobius(r), m, "mu({r})");
        }
    }

    #[test]
    fn one_term_is_li() {
        for &n in &[2.0, 100.0, 1e6] {
            assert_relative_eq!(
                riemann_r(n, 1).unwrap(),
                li(n).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn hand_expansion_at_100() {
        // floor(log2 100) = 6; nonzero mu at r = 1,2,3,5,6.
        let oracle = li(100.0).unwrap() - li(10.0).unwrap() / 2.0
            - li(100f64.powf(1.0 / 3.0)).unwrap() / 3.0
            - li(100f64.powf(0.2)).unwrap() / 5.0
            + li(100f64.powf(1.0 / 6.0)).unwrap() / 6.0;
        assert_relative_eq!(riemann_r(100.0, 32).unwrap(), oracle, max_relative = 1e-12);
        // Five nonzero terms reach exactly r = 6 here.
        assert_relative_eq!(
            riemann_r(100.0, 5).unwrap(),
            oracle,
            max_relative = 1e-12
        );
    }

    #[test]
    fn closer_to_pi_than_li_at_1e6() {
        let pi = 78_498.0;
        let r = riemann_r(1e6, 5).unwrap();
        let l = li(1e6).unwrap();
        assert!((r - pi).abs() < (l - pi).abs());
    }

    #[test]
    fn truncation_gap_small_at_desk_scale() {
        // Full-vs-5-term gap: < 0.5 up to 1e5; it grows slowly past that
        // (0.69 at 1e6, 1.27 at 1e9 — dominated by the r = 7 term).
        for k in 2..=5u32 {
            let n = 10f64.powi(k as i32);
            let gap = (riemann_r(n, 5).unwrap() - riemann_r(n, full_terms(n)).unwrap()).abs();
            assert!(gap < 0.5, "n = 1e{k}: gap = {gap}");
        }
        for k in 6..=9u32 {
            let n = 10f64.powi(k as i32);
            let gap = (riemann_r(n, 5).unwrap() - riemann_r(n, full_terms(n)).unwrap()).abs();
            assert!(gap < 1.5, "n = 1e{k}: gap = {gap}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(riemann_r(1.5, 5).is_err());
        assert!(riemann_r(100.0, 0).is_err());
    }
}
