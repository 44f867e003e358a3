//! Truncation-point solvers: the exact prime truncation g_pi(n), the average
//! prime truncation (source-integral constraint), its Lambert-W closed form,
//! the first-order approximation, and the large-n limit forms.

use crate::error::{Error, Result};
use crate::logint::{li_expansion, li_expansion_signed, source_integral};
use crate::primes::{beta_n, density, prime_power_sum, PrimeTable};
use crate::roots::{brent, golden_section_min};
use crate::special::{lambert_w_m1, solve_linear_exponential};
use std::f64::consts::E;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMethod {
    ExactPrime,
    AvgPrimeIntegral,
    AvgPrimeAsymptotic,
    ClosedFormW,
    LimitSimple,
    LimitLogLog,
}

/// Which limit form of the truncation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitVariant {
    Simple,
    LogLog,
}

/// A solved truncation point.
#[derive(Clone, Copy, Debug)]
pub struct TruncationSolution {
    pub n: f64,
    pub x: f64,
    /// The constraint V (the weighted prime-power sum) where one applies.
    pub constraint_v: Option<f64>,
    /// |equation residual| for root-solved methods (0 by construction for
    /// closed forms); for a constrained minimum, the remaining gap V_min − V.
    pub residual: f64,
    pub method: TruncationMethod,
    /// The exact solver used the subtractive small-n expansion.
    pub signed_regime: bool,
    /// The average solver returned the minimizer of the source integral
    /// because the constraint is below the integral's attainable minimum.
    pub constrained_minimum: bool,
}

const BRENT_X_TOL: f64 = 1e-12;
const BRENT_MAX_ITER: usize = 200;

/// The x with li(n;x) = pi(n), for n >= 2.
///
/// For n >= 11 (and the small n where pi(n) >= n/ln n) this root-solves the
/// monotone increasing expansion on [1, tau(n)+10], doubling the upper bound
/// up to 4 times for spike regions. For the remaining 2 <= n < 11 it solves
/// the monotone decreasing subtractive expansion.
pub fn exact_truncation(n: u64, table: &PrimeTable) -> Result<TruncationSolution> {
    if n < 2 {
        return Err(Error::domain("exact_truncation", format!("n = {n} must be >= 2")));
    }
    let target = table.prime_count(n)? as f64;
    let nf = n as f64;
    let use_signed = n < 11 && target * nf.ln() / nf < 1.0;

    let f: Box<dyn FnMut(f64) -> f64> = if use_signed {
        Box::new(move |x: f64| {
            li_expansion_signed(nf, x).expect("domain checked") - target
        })
    } else {
        Box::new(move |x: f64| li_expansion(nf, x).expect("domain checked").value - target)
    };
    let mut f = f;

    let lo = 1.0;
    let f_lo = f(lo);
    let mut hi = (nf.ln() - 1.0 / 3.0).max(1.0) + 10.0;
    let mut f_hi = f(hi);
    let mut expansions = 0;
    while f_hi.signum() == f_lo.signum() && expansions < 4 {
        hi *= 2.0;
        f_hi = f(hi);
        expansions += 1;
    }
    if f_hi.signum() == f_lo.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    let root = brent(&mut f, lo, hi, BRENT_X_TOL, BRENT_MAX_ITER)?;
    Ok(TruncationSolution {
        n: nf,
        x: root.x,
        constraint_v: None,
        residual: root.f_value.abs(),
        method: TruncationMethod::ExactPrime,
        signed_regime: use_signed,
        constrained_minimum: false,
    })
}

/// The x with source_integral(n, x) = prime_power_sum(n), for n >= 4.
///
/// The source integral is log-convex in x (decreasing, then divergent), so a
/// unit-step scan either brackets the sign change on the decreasing branch
/// or detects the turnover. If the constraint is below the attainable
/// minimum — the usual desk-scale situation, since the offset integral
/// cannot go below li(2) + its t~2 mass — the minimizer is returned with the
/// remaining gap as `residual` and `constrained_minimum` set.
pub fn avg_truncation(n: u64, table: &PrimeTable) -> Result<TruncationSolution> {
    if n < 4 {
        return Err(Error::domain("avg_truncation", format!("n = {n} must be >= 4")));
    }
    let target = prime_power_sum(n, table)?.value;
    avg_truncation_with_constraint(n as f64, target)
}

/// Solve source_integral(n, x) = constraint for a real-valued n (the
/// constraint is normally the weighted prime-power sum, but callers beyond
/// u64 range supply it directly).
pub fn avg_truncation_with_constraint(nf: f64, target: f64) -> Result<TruncationSolution> {
    if !(nf >= 4.0) {
        return Err(Error::domain(
            "avg_truncation",
            format!("n = {nf} must be >= 4"),
        ));
    }
    let v = |x: f64| -> Result<f64> { source_integral(nf, x) };

    let v0 = v(0.0)?;
    if v0 < target {
        return Err(Error::NoRoot {
            message: format!(
                "constraint {target} exceeds the source integral at x = 0 ({v0}) for n = {nf}"
            ),
        });
    }

    let x_cap = nf.ln() + 15.0;
    let mut prev_x = 0.0f64;
    let mut prev_v = v0;
    loop {
        let x = prev_x + 1.0;
        if x > x_cap {
            return Err(Error::NoRoot {
                message: format!("avg_truncation({nf}): no bracket below x = {x_cap}"),
            });
        }
        let vx = v(x)?;
        if vx < target {
            // Sign change on [prev_x, x]: root-solve.
            let mut g = |x: f64| v(x).expect("source integral converges") - target;
            let root = brent(&mut g, prev_x, x, BRENT_X_TOL, BRENT_MAX_ITER)?;
            return Ok(TruncationSolution {
                n: nf,
                x: root.x,
                constraint_v: Some(target),
                residual: root.f_value.abs(),
                method: TruncationMethod::AvgPrimeIntegral,
                signed_regime: false,
                constrained_minimum: false,
            });
        }
        if vx >= prev_v {
            // Past the minimum while still above the constraint.
            let lo = (x - 2.0).max(0.0);
            let (x_min, v_min) =
                golden_section_min(|x| v(x).expect("source integral converges"), lo, x, 1e-10);
            return Ok(TruncationSolution {
                n: nf,
                x: x_min,
                constraint_v: Some(target),
                residual: v_min - target,
                method: TruncationMethod::AvgPrimeIntegral,
                signed_regime: false,
                constrained_minimum: true,
            });
        }
        prev_x = x;
        prev_v = vx;
    }
}

/// Closed form of the average truncation (Lambert W lower branch):
/// x = ln(D_n) / W_{-1}(ln(D_n)/(e ln n)), defined for n >= 9.
pub fn avg_truncation_asymptotic(n: u64, table: &PrimeTable) -> Result<TruncationSolution> {
    if n < 9 {
        return Err(Error::domain(
            "avg_truncation_asymptotic",
            format!("n = {n}: the W argument leaves [-1/e, 0) for 4 <= n <= 8; need n >= 9"),
        ));
    }
    let d = density(n, table)?;
    let x = solve_linear_exponential(d.d, n as f64)?;
    Ok(TruncationSolution {
        n: n as f64,
        x,
        constraint_v: Some(d.d * n as f64),
        residual: 0.0,
        method: TruncationMethod::ClosedFormW,
        signed_regime: false,
        constrained_minimum: false,
    })
}

/// First-order approximation:
/// x = ((beta_n − 1)·ln n − ln ln n) / W_{-1}((beta_n − 1)/e), for n >= 4.
pub fn avg_truncation_first_order(n: u64, _table: &PrimeTable) -> Result<TruncationSolution> {
    if n < 4 {
        return Err(Error::domain(
            "avg_truncation_first_order",
            format!("n = {n} must be >= 4"),
        ));
    }
    let beta = beta_n(n)?;
    let nf = n as f64;
    let w = lambert_w_m1((beta - 1.0) / E).map_err(|_| {
        Error::domain(
            "avg_truncation_first_order",
            format!("(beta-1)/e = {} outside [-1/e, 0)", (beta - 1.0) / E),
        )
    })?;
    let x = ((beta - 1.0) * nf.ln() - nf.ln().ln()) / w.w;
    Ok(TruncationSolution {
        n: nf,
        x,
        constraint_v: None,
        residual: 0.0,
        method: TruncationMethod::AvgPrimeAsymptotic,
        signed_regime: false,
        constrained_minimum: false,
    })
}

/// The limit coefficient −(1/2)/W_{-1}(−1/(2e)) = 1/5.356694 = 0.186682...,
/// derived from the W evaluation rather than hardcoded.
pub fn limit_coefficient() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let w = lambert_w_m1(-1.0 / (2.0 * E)).expect("-1/(2e) is inside [-1/e, 0)");
        -0.5 / w.w
    })
}

/// Large-n limit forms: 0.186682·ln n (Simple) or
/// 0.186682·ln n + 0.373365·ln ln n (LogLog), for n > e.
pub fn limit_form(n: f64, variant: LimitVariant) -> Result<TruncationSolution> {
    if !(n > E) {
        return Err(Error::domain("limit_form", format!("n = {n} must be > e")));
    }
    let c = limit_coefficient();
    let (x, method) = match variant {
        LimitVariant::Simple => (c * n.ln(), TruncationMethod::LimitSimple),
        LimitVariant::LogLog => (
            c * n.ln() + 2.0 * c * n.ln().ln(),
            TruncationMethod::LimitLogLog,
        ),
    };
    Ok(TruncationSolution {
        n,
        x,
        constraint_v: None,
        residual: 0.0,
        method,
        signed_regime: false,
        constrained_minimum: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logint::{li_expansion, li_expansion_signed, stieltjes_tau};
    use approx::assert_relative_eq;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| PrimeTable::new(2_000_000))
    }

    #[test]
    fn exact_truncation_quoted_values() {
        let g599 = exact_truncation(599, table()).unwrap();
        assert!((g599.x - 2.15).abs() < 0.01, "g(599) = {}", g599.x);
        assert_relative_eq!(g599.x, 2.1509117944621062, max_relative = 1e-9);
        let g88783 = exact_truncation(88_783, table()).unwrap();
        assert!((g88783.x - 3.0).abs() < 0.01, "g(88783) = {}", g88783.x);
        assert_relative_eq!(g88783.x, 2.9996467549937777, max_relative = 1e-9);
    }

    #[test]
    fn exact_truncation_forward_verification() {
        for n in [11u64, 599, 88_783, 1_000_000] {
            let sol = exact_truncation(n, table()).unwrap();
            let target = table().prime_count(n).unwrap() as f64;
            let back = li_expansion(n as f64, sol.x).unwrap().value;
            assert!(
                (back - target).abs() <= 1e-9 * target,
                "n = {n}: li(n;x) = {back}, pi = {target}"
            );
            assert!(sol.residual <= 1e-9 * target);
            assert!(!sol.signed_regime);
        }
    }

    #[test]
    fn exact_truncation_small_n_regimes() {
        // pi(n)·ln(n)/n < 1 needs the subtractive form; n = 7, 8 do not.
        for n in 2..=10u64 {
            let sol = exact_truncation(n, table()).unwrap();
            let target = table().prime_count(n).unwrap() as f64;
            let back = if sol.signed_regime {
                li_expansion_signed(n as f64, sol.x).unwrap()
            } else {
                li_expansion(n as f64, sol.x).unwrap().value
            };
            assert!(
                (back - target).abs() <= 1e-9 * target.max(1.0),
                "n = {n}: {back} vs {target}"
            );
            let expect_signed = ![7u64, 8].contains(&n);
            assert_eq!(sol.signed_regime, expect_signed, "n = {n}");
        }
        assert!(exact_truncation(1, table()).is_err());
    }

    #[test]
    fn exact_truncation_bracket_has_single_sign_change() {
        for n in [11u64, 599, 88_783] {
            let target = table().prime_count(n).unwrap() as f64;
            let hi = stieltjes_tau(n as f64).unwrap().tau + 10.0;
            let mut changes = 0;
            let mut prev = (li_expansion(n as f64, 1.0).unwrap().value - target).signum();
            for i in 1..=100 {
                let x = 1.0 + (hi - 1.0) * i as f64 / 100.0;
                let s = (li_expansion(n as f64, x).unwrap().value - target).signum();
                if s != prev && s != 0.0 {
                    changes += 1;
                    prev = s;
                }
            }
            assert_eq!(changes, 1, "n = {n}");
        }
    }

    #[test]
    fn avg_truncation_known_points() {
        // Constrained-minimum regime at desk scale; values cross-checked
        // against an independent multiprecision implementation.
        let s = avg_truncation(6_063, table()).unwrap();
        assert!(s.constrained_minimum);
        assert_relative_eq!(s.x, 2.6750255826, max_relative = 1e-6);
        assert!(s.residual > 0.0);

        let s = avg_truncation(88_783, table()).unwrap();
        assert_relative_eq!(s.x, 3.3362553264, max_relative = 1e-6);
        // "x ≈ 3" regime for the quoted point.
        assert!((2.8..3.5).contains(&s.x));

        let s6 = avg_truncation(1_000_000, table()).unwrap();
        assert_relative_eq!(s6.x, 3.9039395878, max_relative = 1e-6);
        assert!(s6.constraint_v.is_some());
    }

    #[test]
    fn avg_truncation_tracks_exact_at_1e6() {
        let g = exact_truncation(1_000_000, table()).unwrap().x;
        let a = avg_truncation(1_000_000, table()).unwrap().x;
        assert!((a - g).abs() < 0.6, "avg {a} vs exact {g}");
    }

    #[test]
    fn avg_truncation_small_n_pathology_reported() {
        // n = 4: the integral's minimum (> li(2)) sits far above pps = 0.5.
        let s = avg_truncation(4, table()).unwrap();
        assert!(s.constrained_minimum);
        assert!(s.residual > 1.0);
        assert!(s.x < 1.5);
        assert!(avg_truncation(3, table()).is_err());
    }

    #[test]
    fn avg_truncation_monotone_on_sample() {
        let mut prev = 0.0;
        for &n in &[1_000u64, 3_163, 10_000, 31_630, 100_000, 316_300, 1_000_000] {
            let x = avg_truncation(n, table()).unwrap().x;
            assert!(x > prev, "n = {n}: {x} <= {prev}");
            prev = x;
        }
    }

    #[test]
    fn asymptotic_form_domain_and_values() {
        // Defined from n = 9; the W argument leaves its domain for 4..=8.
        let s9 = avg_truncation_asymptotic(9, table()).unwrap();
        assert!(s9.x.is_finite() && s9.x > 0.0);
        assert_relative_eq!(s9.x, 1.1735291646771509, max_relative = 1e-9);
        for n in 4..=8u64 {
            assert!(avg_truncation_asymptotic(n, table()).is_err(), "n = {n}");
        }
        let s = avg_truncation_asymptotic(1_000_000, table()).unwrap();
        assert_relative_eq!(s.x, 4.215386258786824, max_relative = 1e-9);
    }

    #[test]
    fn asymptotic_within_15_percent_of_integral_at_1e6() {
        let a = avg_truncation(1_000_000, table()).unwrap().x;
        let w = avg_truncation_asymptotic(1_000_000, table()).unwrap().x;
        assert!((w - a).abs() / a < 0.15, "w = {w}, a = {a}");
    }

    #[test]
    fn closed_form_dominates_integral_form() {
        for &n in &[1_000_000u64, 10_000_000, 100_000_000, 1_000_000_000] {
            let a = avg_truncation(n, table()).unwrap().x;
            let w = avg_truncation_asymptotic(n, table()).unwrap().x;
            assert!(w >= a, "n = {n}: W form {w} < integral form {a}");
        }
    }

    #[test]
    fn first_order_values_and_ordering() {
        let f4 = avg_truncation_first_order(10_000, table()).unwrap();
        assert!(f4.x.is_finite() && f4.x > 0.0);
        // At 1e8 the first-order value sits between the Simple limit and the
        // W closed form.
        let simple = limit_form(1e8, LimitVariant::Simple).unwrap().x;
        let w = avg_truncation_asymptotic(100_000_000, table()).unwrap().x;
        let first = avg_truncation_first_order(100_000_000, table()).unwrap().x;
        assert!(
            simple < first && first < w,
            "simple {simple}, first {first}, W {w}"
        );
        assert!(avg_truncation_first_order(3, table()).is_err());
    }

    #[test]
    fn first_order_reproduces_limit_algebra_at_beta_half() {
        // Substituting beta = 1/2 reproduces the LogLog limit form exactly.
        let n = 1e8f64;
        let w = lambert_w_m1(-0.5 / E).unwrap().w;
        let by_hand = (-0.5 * n.ln() - n.ln().ln()) / w;
        let loglog = limit_form(n, LimitVariant::LogLog).unwrap().x;
        assert_relative_eq!(by_hand, loglog, max_relative = 1e-12);
    }

    #[test]
    fn limit_constants() {
        let c = limit_coefficient();
        assert!((c - 0.186682).abs() < 1e-5);
        assert!((1.0 / c - 5.356694).abs() < 1e-4);
        assert!((2.0 * c - 0.373365).abs() < 1e-6);
        let s = limit_form(1e6, LimitVariant::Simple).unwrap();
        assert_relative_eq!(s.x, c * 1e6f64.ln(), max_relative = 1e-14);
        let l = limit_form(1e6, LimitVariant::LogLog).unwrap();
        assert_relative_eq!(
            l.x,
            c * 1e6f64.ln() + 2.0 * c * 1e6f64.ln().ln(),
            max_relative = 1e-14
        );
        assert!(limit_form(2.0, LimitVariant::Simple).is_err());
    }

    #[test]
    fn limit_vs_stieltjes_ratio() {
        // The Simple limit is a bit less than a fifth of the Stieltjes
        // truncation on [1e6, 1e12].
        for k in 6..=12u32 {
            let n = 10f64.powi(k as i32);
            let ratio = limit_form(n, LimitVariant::Simple).unwrap().x
                / stieltjes_tau(n).unwrap().tau;
            assert!((0.17..0.21).contains(&ratio), "n = 1e{k}: ratio = {ratio}");
        }
    }

    #[test]
    fn limit_approaches_model_closed_form() {
        // With the density replaced by its first-order model n^(beta-1)/ln n,
        // the W closed form and the limit forms converge slowly (the dropped
        // ln ln n term decays like lnln/ln); check the approach from below.
        let model_w = |n: f64| {
            let ln_d = -0.5 * n.ln() - n.ln().ln();
            let w = lambert_w_m1(ln_d / (E * n.ln())).unwrap().w;
            ln_d / w
        };
        let r50 = limit_form(1e50, LimitVariant::Simple).unwrap().x / model_w(1e50);
        let r100 = limit_form(1e100, LimitVariant::Simple).unwrap().x / model_w(1e100);
        assert!(r50 < r100 && r100 < 1.0, "r50 = {r50}, r100 = {r100}");
        assert!(r100 > 0.9);
        let l100 = limit_form(1e100, LimitVariant::LogLog).unwrap().x / model_w(1e100);
        assert!(l100 > 0.95 && l100 < 1.0, "loglog ratio = {l100}");
    }
}
