//! Special functions: the Lambert W lower branch, log-Gamma, the
//! factorial-root ratio, Robbins' factorial bounds, and the inversion of the
//! linear-exponential equation y = (x/(e ln n))^x.

use crate::error::{Error, Result};
use std::f64::consts::{E, PI};

/// A solved W_{-1} evaluation with its certified residual.
#[derive(Clone, Copy, Debug)]
pub struct WEval {
    pub t: f64,
    pub w: f64,
    /// w·e^w − t at the returned point.
    pub residual: f64,
}

/// Relative residual target for `lambert_w_m1`.
pub const W_RESIDUAL_TOL: f64 = 1e-14;

/// Lambert W, lower real branch: the unique w ≤ −1 with w·e^w = t,
/// defined for t ∈ [−1/e, 0).
///
/// Halley iteration from a branch-point series guess near t = −1/e and a
/// logarithmic asymptotic guess near 0⁻; the switch is at t = −0.25.
pub fn lambert_w_m1(t: f64) -> Result<WEval> {
    let neg_inv_e = -(-1f64).exp();
    // Arguments within one part in 10^14 below -1/e are rounding artifacts of
    // callers composing logs; treating them as the branch point keeps the
    // residual within the advertised tolerance.
    let clamp_lo = neg_inv_e * (1.0 + 1e-14);
    if !(t >= clamp_lo && t < 0.0) {
        return Err(Error::domain(
            "lambert_w_m1",
            format!("t = {t} outside [-1/e, 0)"),
        ));
    }
    if t <= neg_inv_e {
        return Ok(WEval { t, w: -1.0, residual: neg_inv_e - t });
    }

    let mut w = if t < -0.25 {
        // Branch-point series in q = sqrt(2(1 + e t)).
        let q = (2.0 * (1.0 + E * t)).max(0.0).sqrt();
        -1.0 - q - q * q / 3.0
    } else {
        // w ~ ln(-t) - ln(-ln(-t)) as t -> 0^-.
        let l1 = (-t).ln();
        l1 - (-l1).ln()
    };

    for _ in 0..50 {
        let ew = w.exp();
        let r = w * ew - t;
        if r.abs() <= W_RESIDUAL_TOL * t.abs() {
            return Ok(WEval { t, w, residual: r });
        }
        // Halley step for f(w) = w e^w - t.
        let denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        let step = r / denom;
        w -= step;
        if w >= -1.0 {
            // Keep the iterate on the lower branch.
            w = -1.0 - f64::EPSILON;
        }
    }
    let residual = w * w.exp() - t;
    if residual.abs() <= W_RESIDUAL_TOL * t.abs() * 10.0 {
        return Ok(WEval { t, w, residual });
    }
    Err(Error::NoRoot {
        message: format!("lambert_w_m1: Halley stalled at w = {w}, residual = {residual:e}"),
    })
}

/// Lanczos coefficients, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos approximation).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("log_gamma", format!("x = {x} must be > 0")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// x!^{1/x} / x, computed in log space; strictly decreasing with limit 1/e.
pub fn factorial_root_ratio(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::domain(
            "factorial_root_ratio",
            format!("x = {x} must be >= 1"),
        ));
    }
    Ok((log_gamma_unchecked(x + 1.0) / x).exp() / x)
}

/// Robbins' bounds on z!: both sides of
/// √(2π) z^{z+1/2} e^{−z} e^{1/(12z+1)} ≤ z! ≤ √(2π) z^{z+1/2} e^{−z} e^{1/(12z)}.
pub fn robbins_bounds(z: f64) -> Result<(f64, f64)> {
    if !(z >= 1.0) {
        return Err(Error::domain("robbins_bounds", format!("z = {z} must be >= 1")));
    }
    let core = 0.5 * (2.0 * PI).ln() + (z + 0.5) * z.ln() - z;
    let lower = (core + 1.0 / (12.0 * z + 1.0)).exp();
    let upper = (core + 1.0 / (12.0 * z)).exp();
    Ok((lower, upper))
}

/// Solve y = (x / (e ln n))^x for x via the W lower branch:
/// x = ln(y) / W_{-1}( ln(y) / (e ln n) ).
///
/// Requires ln(y)/(e ln n) ∈ [−1/e, 0), which forces y < 1.
pub fn solve_linear_exponential(y: f64, n: f64) -> Result<f64> {
    if !(y > 0.0) || !(n > 1.0) {
        return Err(Error::domain(
            "solve_linear_exponential",
            format!("need y > 0 and n > 1 (y = {y}, n = {n})"),
        ));
    }
    let arg = y.ln() / (E * n.ln());
    let w = lambert_w_m1(arg).map_err(|_| {
        Error::domain(
            "solve_linear_exponential",
            format!(
                "W argument ln(y)/(e ln n) = {arg} outside [-1/e, 0) for y = {y}, n = {n}"
            ),
        )
    })?;
    Ok(y.ln() / w.w)
}

/// Forward map of `solve_linear_exponential`: (x/(e ln n))^x.
pub fn linear_exponential_forward(x: f64, n: f64) -> f64 {
    (x / (E * n.ln())).powf(x)
}
