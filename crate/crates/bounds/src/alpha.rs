//! The normalising constant `alpha = sum_{k>=9} 1 / (k * log2(k)^2)`.
//!
//! The series is summed exactly up to a cutoff `N` and the tail
//! `sum_{k>=N} f(k)` is enclosed with a two-term Euler-Maclaurin expansion of
//! `f(x) = 1 / (x log2(x)^2)`:
//!
//! ```text
//! tail = int_N^inf f + f(N)/2 - f'(N)/12 + f'''(N)/720 + R,   |R| <= |f'''(N)| / 720
//! ```
//!
//! The remainder bound is the standard `2 zeta(4) / (2 pi)^4 * int |f''''|`
//! estimate; `f''''` is positive on `[9, inf)` so the integral equals
//! `|f'''(N)|`.

use crate::real::BigReal;

/// Cutoff used by [`alpha_constant`].
pub const ALPHA_CUTOFF: u64 = 1 << 14;

/// First index of the series (`t = -1` gives `t + 10 = 9`).
pub const FIRST_INDEX: u64 = 9;

/// `1 / (k * log2(k)^2)` enclosed at `prec` bits.
pub fn series_term(prec: u32, k: u64) -> BigReal {
    let kk = BigReal::from_i64(prec, k as i64);
    let l = kk.log2();
    kk.mul(&l).mul(&l).recip()
}

/// Enclosure of `sum_{k >= n} 1 / (k log2(k)^2)` via Euler-Maclaurin at `n`.
pub fn em_tail(prec: u32, n: u64) -> BigReal {
    assert!(n >= FIRST_INDEX, "tail start below the series range");
    let x = BigReal::from_i64(prec, n as i64);
    let u = x.ln();
    let ln2 = BigReal::from_i64(prec, 2).ln();
    let c = ln2.mul(&ln2);
    let inv_u = u.recip();
    let u2 = inv_u.mul(&inv_u);
    let u3 = u2.mul(&inv_u);
    let u4 = u3.mul(&inv_u);
    let u5 = u4.mul(&inv_u);
    let x2 = x.mul(&x);
    let x4 = x2.mul(&x2);

    // int_n^inf f = ln(2)^2 / ln(n)
    let integral = c.mul(&inv_u);
    let f = c.div(&x).mul(&u2);
    // f' = -c x^-2 (u^-2 + 2 u^-3)
    let f1 = c.div(&x2).mul(&u2.add(&u3.mul_i64(2))).neg();
    // f''' = -c x^-4 (6 u^-2 + 22 u^-3 + 36 u^-4 + 24 u^-5)
    let poly = u2
        .mul_i64(6)
        .add(&u3.mul_i64(22))
        .add(&u4.mul_i64(36))
        .add(&u5.mul_i64(24));
    let f3 = c.div(&x4).mul(&poly).neg();

    let base = integral.add(&f.div_i64(2)).sub(&f1.div_i64(12));
    // base + f'''/720 +- |f'''|/720 = [base + 2 f'''/720, base]
    let lower = base.add(&f3.div_i64(360));
    BigReal::from_endpoints(lower.lo().clone(), base.hi().clone())
}

/// `sum_{k >= from} 1 / (k log2(k)^2)`: explicit terms below `cutoff`,
/// Euler-Maclaurin tail from `max(from, cutoff)`.
pub fn tail_enclosure(prec: u32, from: u64, cutoff: u64) -> BigReal {
    let from = from.max(FIRST_INDEX);
    let start_tail = cutoff.max(from);
    let mut acc = BigReal::from_i64(prec, 0);
    for k in from..start_tail {
        acc = acc.add(&series_term(prec, k));
    }
    acc.add(&em_tail(prec, start_tail))
}

/// Enclosure of alpha using an explicit cutoff.
pub fn alpha_enclosure(prec: u32, cutoff: u64) -> BigReal {
    tail_enclosure(prec, FIRST_INDEX, cutoff)
}

/// Enclosure of alpha with width below `2^-64` (at 128 bits or more).
pub fn alpha_constant(prec: u32) -> BigReal {
    alpha_enclosure(prec, ALPHA_CUTOFF)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn alpha_is_about_point_22() {
        let a = alpha_constant(256);
        let v = a.to_f64();
        assert!((v - 0.22).abs() < 0.005, "alpha = {v}");
        assert!(a.width() < Float::with_val(64, 1) >> 64u32);
    }

    #[test]
    fn tail_enclosures_nest_as_cutoff_grows() {
        let a = alpha_enclosure(256, 1000);
        let b = alpha_enclosure(256, 2000);
        assert!(b.width() < a.width());
        // Both contain the true value, so they must overlap.
        assert!(a.lo() <= b.hi() && b.lo() <= a.hi());
    }

    #[test]
    fn third_derivative_matches_finite_differences() {
        let f = |x: f64| 1.0 / (x * x.log2().powi(2));
        let x = 50.0f64;
        let h = 0.01;
        let fd3 = (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h);
        let c = std::f64::consts::LN_2.powi(2);
        let u = x.ln();
        let closed = -c / x.powi(4)
            * (6.0 / u.powi(2) + 22.0 / u.powi(3) + 36.0 / u.powi(4) + 24.0 / u.powi(5));
        assert!((fd3 - closed).abs() < 1e-4 * closed.abs(), "{fd3} vs {closed}");
    }

    #[test]
    fn em_tail_brackets_long_explicit_sum() {
        // sum_{k=100}^{inf} == sum_{k=100}^{9999} + tail(10000)
        let direct = tail_enclosure(128, 100, 10_000);
        let em = em_tail(128, 100);
        assert!(em.lo() <= direct.hi() && direct.lo() <= em.hi());
    }
}
