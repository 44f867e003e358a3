//! Small numeric helpers shared across modules.

/// Neumaier-compensated accumulator.
///
/// Tracks the rounding error of each addition in a carry term so that long
/// sums of mixed-magnitude terms keep close to full f64 precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Floor of the r-th root of `n`, exact for perfect powers.
///
/// A floating-point estimate alone misclassifies perfect powers (e.g.
/// n = 2^10 at r = 10 can land on 1.999...); the estimate is corrected by
/// exact integer exponentiation comparison.
pub fn integer_nth_root(n: u64, r: u32) -> u64 {
    debug_assert!(r >= 1);
    if r == 1 || n <= 1 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / r as f64).round() as u64;
    if x == 0 {
        x = 1;
    }
    while x > 1 && pow_exceeds(x, r, n) {
        x -= 1;
    }
    while !pow_exceeds(x + 1, r, n) {
        x += 1;
    }
    x
}

/// True iff base^exp > limit, without overflowing.
fn pow_exceeds(base: u64, exp: u32, limit: u64) -> bool {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return true,
        };
        if acc > limit {
            return true;
        }
    }
    false
}

/// Floor of the r-th root of a u128 `n`, exact for perfect powers.
pub fn integer_nth_root_u128(n: u128, r: u32) -> u128 {
    debug_assert!(r >= 1);
    if r == 1 || n <= 1 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / r as f64).round() as u128;
    if x == 0 {
        x = 1;
    }
    let exceeds = |base: u128| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..r {
            acc = match acc.checked_mul(base) {
                Some(v) => v,
                None => return true,
            };
            if acc > n {
                return true;
            }
        }
        false
    };
    while x > 1 && exceeds(x) {
        x -= 1;
    }
    while !exceeds(x + 1) {
        x += 1;
    }
    x
}
