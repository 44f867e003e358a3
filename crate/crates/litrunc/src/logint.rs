//! The logarithmic integral, its interpolated asymptotic expansion li(n;x),
//! the source-integral term, the correction factor C(n;x), the sigma-tilde
//! ratio, and the Stieltjes truncation point.

use crate::error::{Error, Result};
use crate::quad::adaptive_quadrature;
use crate::special::log_gamma_unchecked;
use crate::util::CompensatedSum;
use std::sync::OnceLock;

/// Default relative quadrature tolerance for li and the source integral.
pub const LI_REL_TOL: f64 = 1e-12;

/// li(2), computed once by symmetric principal-value quadrature around t = 1:
/// li(2) = PV int_0^2 dt/ln t = int_0^1 [1/ln(1+s) + 1/ln(1-s)] ds.
pub fn li2() -> f64 {
    static LI2: OnceLock<f64> = OnceLock::new();
    *LI2.get_or_init(|| {
        let h = |s: f64| {
            if s.abs() < 1e-8 {
                // The 1/s poles of the two terms cancel; h(s) = 1 + O(s^2).
                1.0
            } else {
                1.0 / (1.0 + s).ln() + 1.0 / (1.0 - s).ln()
            }
        };
        let v = adaptive_quadrature(h, 0.0, 1.0, 1e-13)
            .expect("li(2) principal-value quadrature converges")
            .value;
        // Cross-check against the 5 quoted digits.
        assert!(
            (v - 1.04516).abs() < 1e-5,
            "li(2) quadrature produced {v}, expected 1.04516 within 1e-5"
        );
        v
    })
}

/// li(n) = li(2) + int_2^n dt/ln t, adaptive quadrature at relative
/// tolerance `rel_tol` under the substitution t = e^u.
pub fn li_with_tolerance(n: f64, rel_tol: f64) -> Result<f64> {
    if !(n > 1.0) {
        return Err(Error::domain("li", format!("n = {n} must be > 1")));
    }
    let (a, b) = (n.ln().min(2f64.ln()), n.ln().max(2f64.ln()));
    let integral = if a == b {
        0.0
    } else {
        let v = adaptive_quadrature(|u| u.exp() / u, a, b, rel_tol)?.value;
        if n >= 2.0 {
            v
        } else {
            -v
        }
    };
    Ok(li2() + integral)
}

/// li(n) at the default tolerance.
pub fn li(n: f64) -> Result<f64> {
    li_with_tolerance(n, LI_REL_TOL)
}

/// One evaluation of the interpolated asymptotic expansion li(n;x).
#[derive(Clone, Copy, Debug)]
pub struct ExpansionEval {
    pub n: f64,
    pub x: f64,
    /// (n/ln n)·sum_{k=0}^{floor(x)-1} k!/ln^k n + (x-floor(x))·floor(x)!·n/ln^{floor(x)+1} n
    pub value: f64,
    pub head_terms: u32,
    pub fractional_weight: f64,
}

/// The interpolated asymptotic expansion li(n;x) for n > 1, x >= 1.
///
/// Terms are built by running product (k!/ln^k n never forms k! alone, so
/// nothing overflows until the series itself leaves f64 range) and summed
/// with compensation.
pub fn li_expansion(n: f64, x: f64) -> Result<ExpansionEval> {
    if !(n > 1.0) {
        return Err(Error::domain("li_expansion", format!("n = {n} must be > 1")));
    }
    if !(x >= 1.0) {
        return Err(Error::domain("li_expansion", format!("x = {x} must be >= 1")));
    }
    let ln_n = n.ln();
    let floor_x = x.floor();
    let weight = x - floor_x;
    let mut head = CompensatedSum::new();
    let mut term = 1.0f64; // k!/ln^k n at current k
    for k in 0..floor_x as u64 {
        if k > 0 {
            term *= k as f64 / ln_n;
        }
        head.add(term);
    }
    // term now holds (floor(x)-1)!/ln^{floor(x)-1}; one more step gives
    // floor(x)!/ln^{floor(x)}.
    let frac_coeff = if floor_x as u64 == 0 {
        unreachable!("x >= 1 guarantees at least one head term")
    } else {
        term * floor_x / ln_n
    };
    let value = n / ln_n * (head.value() + weight * frac_coeff);
    Ok(ExpansionEval {
        n,
        x,
        value,
        head_terms: floor_x as u32,
        fractional_weight: weight,
    })
}

/// The subtractive variant for 2 <= n < 11, allowing 0 < C(n;x) < 1:
/// (n/ln n)·(1 − sum_{k=1}^{floor(x)-1} k!/ln^k n − (x−floor(x))·floor(x)!/ln^{floor(x)} n).
///
/// Monotone decreasing in x.
pub fn li_expansion_signed(n: f64, x: f64) -> Result<f64> {
    if !(2.0..11.0).contains(&n) {
        return Err(Error::domain(
            "li_expansion_signed",
            format!("n = {n} outside [2, 11)"),
        ));
    }
    if !(x >= 1.0) {
        return Err(Error::domain(
            "li_expansion_signed",
            format!("x = {x} must be >= 1"),
        ));
    }
    let ln_n = n.ln();
    let floor_x = x.floor();
    let weight = x - floor_x;
    let mut subtracted = CompensatedSum::new();
    let mut term = 1.0f64;
    for k in 1..floor_x as u64 {
        term *= k as f64 / ln_n;
        subtracted.add(term);
    }
    let frac_coeff = term * floor_x / ln_n;
    Ok(n / ln_n * (1.0 - subtracted.value() - weight * frac_coeff))
}

/// Gamma(x+1) * int_2^n dt/ln^{x+1} t + li(2).
///
/// The integral runs under u = ln t (int e^u u^{-(x+1)} du) with the
/// integrand rescaled by its endpoint maximum so the product with
/// Gamma(x+1) is assembled in log space.
pub fn source_integral(n: f64, x: f64) -> Result<f64> {
    if !(n > 2.0) {
        return Err(Error::domain("source_integral", format!("n = {n} must be > 2")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("source_integral", format!("x = {x} must be >= 0")));
    }
    Ok(log_source_term(n, x)?.exp() + li2())
}

/// ln( Gamma(x+1) * int_2^n dt/ln^{x+1} t ).
fn log_source_term(n: f64, x: f64) -> Result<f64> {
    let a = 2f64.ln();
    let b = n.ln();
    // phi(u) = u - (x+1) ln u is convex; its max over [a, b] is at an endpoint.
    let phi = |u: f64| u - (x + 1.0) * u.ln();
    let scale = phi(a).max(phi(b));
    let integral = adaptive_quadrature(|u| (phi(u) - scale).exp(), a, b, LI_REL_TOL)?;
    Ok(log_gamma_unchecked(x + 2.0) - (x + 1.0).ln() + scale + integral.value.ln())
}

/// ln( int_2^n dt/ln^{x+1} t ), without the Gamma factor.
fn log_bare_integral(n: f64, x: f64) -> Result<f64> {
    let a = 2f64.ln();
    let b = n.ln();
    let phi = |u: f64| u - (x + 1.0) * u.ln();
    let scale = phi(a).max(phi(b));
    let integral = adaptive_quadrature(|u| (phi(u) - scale).exp(), a, b, LI_REL_TOL)?;
    Ok(scale + integral.value.ln())
}

/// The multiplicative correction factor C(n;x) = li(n;x)·ln(n)/n for n >= 11.
pub fn correction_factor(n: f64, x: f64) -> Result<f64> {
    if !(n >= 11.0) {
        return Err(Error::domain(
            "correction_factor",
            format!("n = {n} must be >= 11"),
        ));
    }
    let e = li_expansion(n, x)?;
    Ok(e.value * n.ln() / n)
}

/// sigma-tilde(n, x) = (li(2) + int_2^n dt/ln^{x+1} t) / (n / ln^{x+1} n).
pub fn sigma_tilde(n: f64, x: f64) -> Result<f64> {
    if !(n > 2.0) {
        return Err(Error::domain("sigma_tilde", format!("n = {n} must be > 2")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("sigma_tilde", format!("x = {x} must be >= 0")));
    }
    let numerator = li2() + log_bare_integral(n, x)?.exp();
    let denominator = (n.ln() - (x + 1.0) * n.ln().ln()).exp();
    Ok(numerator / denominator)
}

/// The Stieltjes truncation point tau(n) = ln(n) - 1/3 (first two terms).
#[derive(Clone, Copy, Debug)]
pub struct StieltjesPoint {
    pub n: f64,
    pub tau: f64,
}

/// Smallest n for which tau(n) >= 1.
pub fn stieltjes_min_n() -> f64 {
    (4f64 / 3.0).exp()
}

pub fn stieltjes_tau(n: f64) -> Result<StieltjesPoint> {
    if !(n >= stieltjes_min_n()) {
        return Err(Error::domain(
            "stieltjes_tau",
            format!("n = {n} below e^(4/3) = {}", stieltjes_min_n()),
        ));
    }
    Ok(StieltjesPoint {
        n,
        tau: n.ln() - 1.0 / 3.0,
    })
}
