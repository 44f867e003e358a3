//! The `verify` subcommand: seeded spot-check suites over the library
//! invariants, reporting one PASS/FAIL line each.

use crate::context::Context;
use litrunc::bounds::{li_deviation_bound, DUSART_TABLE};
use litrunc::logint::{li, li_expansion, stieltjes_min_n, stieltjes_tau};
use litrunc::primes::{beta_n, prime_power_sum};
use litrunc::solvers::{avg_truncation, exact_truncation};
use litrunc::special::{
    lambert_w_m1, linear_exponential_forward, solve_linear_exponential, W_RESIDUAL_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct VerifyReport {
    pub failures: u32,
}

fn check(name: &str, pass: bool, detail: String, failures: &mut u32) {
    println!("verify {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    if !pass {
        *failures += 1;
    }
}

pub fn run(ctx: &Context, grid: usize, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let t = &ctx.table;

    // Prime counting vs a trial-division oracle on seeded points <= 1e4.
    let mut ok = true;
    for _ in 0..grid {
        let m = rng.gen_range(0..=10_000u64);
        let oracle = (2..=m)
            .filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
            .count() as u64;
        if t.prime_count(m).unwrap() != oracle {
            ok = false;
            break;
        }
    }
    check("prime-count-oracle", ok, format!("{grid} seeded points <= 1e4"), &mut failures);

    // Monotonicity of pi on random pairs.
    let mut ok = true;
    for _ in 0..grid {
        let a = rng.gen_range(2..=1_000_000u64);
        let b = rng.gen_range(2..=1_000_000u64);
        let (lo, hi) = (a.min(b), a.max(b));
        if t.prime_count(lo).unwrap() > t.prime_count(hi).unwrap() {
            ok = false;
            break;
        }
    }
    check("prime-count-monotone", ok, format!("{grid} seeded pairs"), &mut failures);

    // Lambert W residuals on seeded arguments.
    let mut worst: f64 = 0.0;
    let neg_inv_e = -(-1f64).exp();
    for _ in 0..grid {
        let u: f64 = rng.gen_range(1e-6..1.0f64);
        let arg = neg_inv_e * u;
        let w = lambert_w_m1(arg).unwrap();
        worst = worst.max(w.residual.abs() / arg.abs());
    }
    check(
        "lambert-w-residual",
        worst <= 10.0 * W_RESIDUAL_TOL,
        format!("worst relative residual {worst:.2e}"),
        &mut failures,
    );

    // Linear-exponential round trip on seeded on-branch points.
    let mut ok = true;
    for _ in 0..grid {
        let ln_n: f64 = rng.gen_range(4.7..27.0f64);
        let n = ln_n.exp();
        let x: f64 = rng.gen_range(1.2..0.9 * ln_n);
        let y = linear_exponential_forward(x, n);
        if !(y > 0.0 && y < 1.0) {
            continue;
        }
        match solve_linear_exponential(y, n) {
            Ok(back) => {
                if (back - x).abs() > 1e-9 * x.max(1.0) {
                    ok = false;
                }
            }
            Err(_) => continue,
        }
    }
    check("linear-exponential-round-trip", ok, format!("{grid} seeded points"), &mut failures);

    // Stieltjes envelope on a log grid.
    let mut ok = true;
    let (lo, hi) = (stieltjes_min_n().max(4.0), 1e8f64);
    for i in 0..=grid {
        let n = lo * (hi / lo).powf(i as f64 / grid.max(1) as f64);
        let tau = stieltjes_tau(n).unwrap().tau;
        let gap = (li(n).unwrap() - li_expansion(n, tau).unwrap().value).abs();
        if gap >= 0.5 / n.ln().powi(2) {
            ok = false;
        }
    }
    check("stieltjes-envelope", ok, format!("{} log points on [4, 1e8]", grid + 1), &mut failures);

    // Expansion continuity at integer x on seeded (n, k).
    let mut ok = true;
    for _ in 0..grid {
        let n = rng.gen_range(3.0..1e8f64);
        let k = rng.gen_range(2..8u32) as f64;
        let eps = 1e-8;
        let a = li_expansion(n, k - eps).unwrap().value;
        let b = li_expansion(n, k + eps).unwrap().value;
        if (b - a).abs() > 1e-6 * b.abs() {
            ok = false;
        }
    }
    check("expansion-continuity", ok, format!("{grid} seeded points"), &mut failures);

    // beta decade decrease.
    let mut ok = true;
    let mut prev = f64::INFINITY;
    for k in 1..=12u32 {
        let b = beta_n(10u64.pow(k)).unwrap();
        if !(0.5..=1.0).contains(&b) || b >= prev {
            ok = false;
        }
        prev = b;
    }
    check("beta-decades", ok, "k = 1..12".to_string(), &mut failures);

    // Prime-power sum below pi on seeded n >= 11.
    let mut ok = true;
    for _ in 0..grid {
        let n = rng.gen_range(11..=1_000_000u64);
        let pps = prime_power_sum(n, t).unwrap().value;
        if pps >= t.prime_count(n).unwrap() as f64 {
            ok = false;
        }
    }
    check("prime-powers-below-pi", ok, format!("{grid} seeded points"), &mut failures);

    // Dusart rows inside the sieve range.
    let mut ok = true;
    let limit = t.small_limit();
    for row in DUSART_TABLE.iter().filter(|r| r.n_k <= limit) {
        let lo = row.n_k.max(2) as f64;
        let hi = limit as f64;
        for i in 0..=grid.min(400) {
            let n = (lo * (hi / lo).powf(i as f64 / grid.clamp(1, 400) as f64)).round() as u64;
            let theta = t.theta(n).unwrap();
            let bound = row.eta * n as f64 / (n as f64).ln().powi(row.k as i32);
            if (theta - n as f64).abs() >= bound {
                ok = false;
            }
        }
    }
    check("dusart-theta-rows", ok, format!("rows with n_k <= {limit}"), &mut failures);

    // Exact truncation forward residual on seeded n.
    let mut ok = true;
    for _ in 0..grid.min(200) {
        let n = rng.gen_range(11..=1_000_000u64);
        let sol = exact_truncation(n, t).unwrap();
        let pi = t.prime_count(n).unwrap() as f64;
        if sol.residual > 1e-9 * pi {
            ok = false;
        }
    }
    check("exact-truncation-residual", ok, format!("{} seeded points", grid.min(200)), &mut failures);

    // Average truncation stays inside the li-deviation bound.
    let mut ok = true;
    for _ in 0..grid.min(200) {
        let n = rng.gen_range(1_000..=1_000_000u64);
        let sol = avg_truncation(n, t).unwrap();
        let pi = t.prime_count(n).unwrap() as f64;
        let dev = (li_expansion(n as f64, sol.x).unwrap().value - pi).abs();
        if dev >= li_deviation_bound(n as f64, sol.x).unwrap() {
            ok = false;
        }
    }
    check("truncation-deviation-bound", ok, format!("{} seeded points", grid.min(200)), &mut failures);

    VerifyReport { failures }
}
