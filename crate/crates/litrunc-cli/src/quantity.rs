//! The registered computable quantities served by `value` and usable as
//! sweep columns.

use crate::context::Context;
use litrunc::bounds;
use litrunc::logint::{li, li_expansion, sigma_tilde};
use litrunc::primes::{beta_n, density, prime_power_sum};
use litrunc::riemann::riemann_r;
use litrunc::solvers::{
    avg_truncation, avg_truncation_asymptotic, avg_truncation_first_order, exact_truncation,
    limit_form, LimitVariant,
};
use litrunc::{Error, Result};

/// Every sweep-capable column identifier.
pub const COLUMNS: &[&str] = &[
    "pi",
    "li",
    "li_trunc_avg",
    "g_exact",
    "g_avg",
    "g_asym",
    "g_first",
    "g_limit_simple",
    "g_limit_loglog",
    "Rn",
    "density",
    "beta",
    "theta",
    "pps",
    "f1",
    "f2",
    "trunc_bound_avg",
    "trunc_bound_loglog",
    "trunc_bound_simple",
    "schoenfeld_b",
    "sigma_at_g_exact",
];

pub fn is_column(name: &str) -> bool {
    COLUMNS.contains(&name)
}

/// Evaluate one registered column at integer n.
pub fn evaluate(name: &str, n: u64, ctx: &Context) -> Result<f64> {
    let t = &ctx.table;
    let nf = n as f64;
    match name {
        "pi" => Ok(t.prime_count(n)? as f64),
        "li" => li(nf),
        "li_trunc_avg" => {
            let g = avg_truncation(n, t)?;
            Ok(li_expansion(nf, g.x.max(1.0))?.value)
        }
        "g_exact" => Ok(exact_truncation(n, t)?.x),
        "g_avg" => Ok(avg_truncation(n, t)?.x),
        "g_asym" => Ok(avg_truncation_asymptotic(n, t)?.x),
        "g_first" => Ok(avg_truncation_first_order(n, t)?.x),
        "g_limit_simple" => Ok(limit_form(nf, LimitVariant::Simple)?.x),
        "g_limit_loglog" => Ok(limit_form(nf, LimitVariant::LogLog)?.x),
        "Rn" => riemann_r(nf, 5),
        "density" => Ok(density(n, t)?.d),
        "beta" => beta_n(n),
        "theta" => t.theta(n),
        "pps" => Ok(prime_power_sum(n, t)?.value),
        "f1" => bounds::f1(nf),
        "f2" => bounds::f2(n, t),
        "trunc_bound_avg" => bounds::truncation_bound(nf, avg_truncation(n, t)?.x),
        "trunc_bound_loglog" => {
            bounds::truncation_bound(nf, limit_form(nf, LimitVariant::LogLog)?.x)
        }
        "trunc_bound_simple" => {
            bounds::truncation_bound(nf, limit_form(nf, LimitVariant::Simple)?.x)
        }
        "schoenfeld_b" => bounds::schoenfeld_b_bound(n, t),
        "sigma_at_g_exact" => {
            let g = exact_truncation(n, t)?;
            sigma_tilde(nf, g.x)
        }
        _ => Err(Error::domain(
            "quantity",
            format!("unknown quantity {name:?}; known: {}", COLUMNS.join(", ")),
        )),
    }
}
