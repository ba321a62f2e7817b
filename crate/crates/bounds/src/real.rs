//! Outward-rounded interval arithmetic over MPFR floats.
//!
//! A [`BigReal`] is a closed interval `[lo, hi]` whose endpoints are rounded
//! away from the enclosed value on every operation, so the exact real result
//! of an expression always lies inside the computed interval. Only monotone
//! elementary functions are provided; each one maps endpoints with directed
//! rounding, which MPFR performs correctly.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone)]
pub struct BigReal {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Down).0
}

fn up<T>(prec: u32, val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Up).0
}

fn min_f(a: Float, b: Float) -> Float {
    if b < a {
        b
    } else {
        a
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

impl BigReal {
    fn from_bounds(lo: Float, hi: Float) -> Self {
        BigReal { lo, hi }
    }

    /// The whole extended real line; used for undefined results.
    pub fn unbounded(prec: u32) -> Self {
        BigReal {
            lo: Float::with_val(prec, rug::float::Special::NegInfinity),
            hi: Float::with_val(prec, rug::float::Special::Infinity),
        }
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        BigReal::from_bounds(down(prec, v), up(prec, v))
    }

    pub fn from_integer(prec: u32, v: &Integer) -> Self {
        BigReal::from_bounds(down(prec, v), up(prec, v))
    }

    pub fn from_rational(prec: u32, v: &Rational) -> Self {
        BigReal::from_bounds(down(prec, v), up(prec, v))
    }

    /// `num / den` enclosed at `prec` bits.
    pub fn ratio(prec: u32, num: i64, den: i64) -> Self {
        BigReal::from_rational(prec, &Rational::from((num, den)))
    }

    /// A point interval; `v` is taken to be exact.
    pub fn from_float(v: Float) -> Self {
        BigReal { lo: v.clone(), hi: v }
    }

    /// Interval with explicitly given endpoints. Panics if `lo > hi`.
    pub fn from_endpoints(lo: Float, hi: Float) -> Self {
        assert!(!(lo > hi), "interval endpoints out of order");
        BigReal { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn mid(&self) -> Float {
        let prec = self.prec() + 1;
        Float::with_val(prec, &self.lo + &self.hi) / 2u32
    }

    /// Upper bound on the half-width.
    pub fn radius(&self) -> Float {
        let w = up(self.prec(), &self.hi - &self.lo);
        w / 2u32
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn is_valid(&self) -> bool {
        !self.lo.is_nan() && !self.hi.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_float(&self, v: &Float) -> bool {
        self.is_valid() && &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, v: &Rational) -> bool {
        self.is_valid() && self.lo <= *v && self.hi >= *v
    }

    pub fn contains_zero(&self) -> bool {
        self.is_valid() && self.lo <= 0 && self.hi >= 0
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.is_valid() && self.lo > 0
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        self.is_valid() && self.hi < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Returns `Some(true)` if `self >= other` holds for every pair of values in
    /// the two intervals, `Some(false)` if `self < other` holds for every pair,
    /// and `None` otherwise.
    pub fn ge(&self, other: &BigReal) -> Option<bool> {
        if !self.is_valid() || !other.is_valid() {
            return None;
        }
        if self.lo >= other.hi {
            Some(true)
        } else if self.hi < other.lo {
            Some(false)
        } else {
            None
        }
    }

    /// Strict version of [`BigReal::ge`].
    pub fn gt(&self, other: &BigReal) -> Option<bool> {
        if !self.is_valid() || !other.is_valid() {
            return None;
        }
        if self.lo > other.hi {
            Some(true)
        } else if self.hi <= other.lo {
            Some(false)
        } else {
            None
        }
    }

    /// Sign of the enclosed value when it is certain: `Some(true)` for `>= 0`,
    /// `Some(false)` for `< 0`.
    pub fn nonneg(&self) -> Option<bool> {
        if !self.is_valid() {
            None
        } else if self.lo >= 0 {
            Some(true)
        } else if self.hi < 0 {
            Some(false)
        } else {
            None
        }
    }

    pub fn add(&self, o: &BigReal) -> BigReal {
        let p = self.prec().max(o.prec());
        BigReal::from_bounds(down(p, &self.lo + &o.lo), up(p, &self.hi + &o.hi))
    }

    pub fn sub(&self, o: &BigReal) -> BigReal {
        let p = self.prec().max(o.prec());
        BigReal::from_bounds(down(p, &self.lo - &o.hi), up(p, &self.hi - &o.lo))
    }

    pub fn neg(&self) -> BigReal {
        BigReal::from_bounds(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &BigReal) -> BigReal {
        let p = self.prec().max(o.prec());
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a * b);
            let h = up(p, a * b);
            lo = Some(match lo {
                None => l,
                Some(x) => min_f(x, l),
            });
            hi = Some(match hi {
                None => h,
                Some(x) => max_f(x, h),
            });
        }
        let out = BigReal::from_bounds(lo.unwrap(), hi.unwrap());
        if out.is_valid() {
            out
        } else {
            BigReal::unbounded(p)
        }
    }

    pub fn mul_i64(&self, k: i64) -> BigReal {
        self.mul(&BigReal::from_i64(self.prec(), k))
    }

    pub fn recip(&self) -> BigReal {
        let p = self.prec();
        if self.contains_zero() || !self.is_valid() {
            return BigReal::unbounded(p);
        }
        BigReal::from_bounds(down(p, 1 / &self.hi), up(p, 1 / &self.lo))
    }

    pub fn div(&self, o: &BigReal) -> BigReal {
        self.mul(&o.recip())
    }

    pub fn div_i64(&self, k: i64) -> BigReal {
        self.div(&BigReal::from_i64(self.prec(), k))
    }

    /// Natural logarithm; the lower end is `-inf` when the interval reaches 0
    /// and the result is unbounded when it contains negative values.
    pub fn ln(&self) -> BigReal {
        let p = self.prec();
        if !self.is_valid() || self.lo < 0 {
            return BigReal::unbounded(p);
        }
        BigReal::from_bounds(down(p, self.lo.ln_ref()), up(p, self.hi.ln_ref()))
    }

    /// `ln(1 + x)`, defined for `x > -1`.
    pub fn ln_1p(&self) -> BigReal {
        let p = self.prec();
        if !self.is_valid() || self.lo < -1 {
            return BigReal::unbounded(p);
        }
        BigReal::from_bounds(down(p, self.lo.ln_1p_ref()), up(p, self.hi.ln_1p_ref()))
    }

    pub fn exp(&self) -> BigReal {
        let p = self.prec();
        BigReal::from_bounds(down(p, self.lo.exp_ref()), up(p, self.hi.exp_ref()))
    }

    /// `exp(x) - 1` without cancellation near zero.
    pub fn exp_m1(&self) -> BigReal {
        let p = self.prec();
        BigReal::from_bounds(down(p, self.lo.exp_m1_ref()), up(p, self.hi.exp_m1_ref()))
    }

    /// `self^e` for a nonnegative base. `x^e` is monotone in each argument
    /// separately, so the extremes sit at the four corners.
    pub fn pow(&self, e: &BigReal) -> BigReal {
        let p = self.prec().max(e.prec());
        if !self.is_valid() || !e.is_valid() || self.lo < 0 {
            return BigReal::unbounded(p);
        }
        if self.lo >= 1 && e.lo >= 0 {
            // Increasing in both arguments.
            let out = BigReal::from_bounds(down(p, (&self.lo).pow(&e.lo)), up(p, (&self.hi).pow(&e.hi)));
            return if out.is_valid() { out } else { BigReal::unbounded(p) };
        }
        let corners = [
            (&self.lo, &e.lo),
            (&self.lo, &e.hi),
            (&self.hi, &e.lo),
            (&self.hi, &e.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (b, x) in corners {
            let l = down(p, b.pow(x));
            let h = up(p, b.pow(x));
            lo = Some(match lo {
                None => l,
                Some(v) => min_f(v, l),
            });
            hi = Some(match hi {
                None => h,
                Some(v) => max_f(v, h),
            });
        }
        let out = BigReal::from_bounds(lo.unwrap(), hi.unwrap());
        if out.is_valid() {
            out
        } else {
            BigReal::unbounded(p)
        }
    }

    /// Logarithm in base `b`.
    pub fn log_base(&self, b: &BigReal) -> BigReal {
        self.ln().div(&b.ln())
    }

    pub fn log2(&self) -> BigReal {
        self.log_base(&BigReal::from_i64(self.prec(), 2))
    }

    /// Largest integer that is certainly `<= self`.
    pub fn floor_lo(&self) -> Option<Integer> {
        if !self.lo.is_finite() {
            return None;
        }
        self.lo.to_integer_round(Round::Down).map(|(i, _)| i)
    }

    /// The upper endpoint as a point interval.
    pub fn upper_point(&self) -> BigReal {
        BigReal::from_float(self.hi.clone())
    }

    /// Same interval, re-enclosed at a new precision.
    pub fn with_prec(&self, prec: u32) -> BigReal {
        BigReal::from_bounds(down(prec, &self.lo), up(prec, &self.hi))
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, o: &BigReal) -> BigReal {
        BigReal::from_bounds(
            min_f(self.lo.clone(), o.lo.clone()),
            max_f(self.hi.clone(), o.hi.clone()),
        )
    }

    /// Compact decimal rendering of the midpoint.
    pub fn to_sci(&self, digits: usize) -> String {
        if !self.is_valid() {
            return "nan".to_string();
        }
        let m = self.mid();
        if m.is_infinite() {
            return if m.is_sign_negative() { "-inf" } else { "inf" }.to_string();
        }
        m.to_string_radix(10, Some(digits))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix(10, Some(12)),
            self.hi.to_string_radix(10, Some(12))
        )
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.to_sci(12), self.radius().to_string_radix(10, Some(3)))
    }
}
