//! The functions `f`, `h`, `g`, `s` in terms of `ell = log_{r+1} n`.
//!
//! With `E(ell, t, p) = 2 ell^gamma(t) (3 ell^phi(t) - p)` we have
//! `log_{6(r+1)}(n / g(n,t,p)) = E(ell, t, p)`, so
//! `log_{r+1} g(n,t,p) = ell - lambda E(ell, t, p)` with
//! `lambda = log_{r+1}(6(r+1))`.

use rug::Integer;

use crate::error::BoundsError;
use crate::params::ParamFns;
use crate::real::BigReal;

/// `r`, the parameter functions and `ell = log_{r+1} n`.
#[derive(Clone, Debug)]
pub struct BoundContext {
    r: u64,
    params: ParamFns,
    ell: BigReal,
}

fn inconclusive(what: impl Into<String>) -> BoundsError {
    BoundsError::Inconclusive { what: what.into() }
}

impl BoundContext {
    /// Fails when `r = 0` or `ell` is not certainly positive.
    pub fn new(r: u64, params: ParamFns, ell: BigReal) -> Result<Self, BoundsError> {
        if r == 0 {
            return Err(BoundsError::Precondition("r must be >= 1".into()));
        }
        match ell.is_positive() {
            true => Ok(BoundContext { r, params, ell }),
            false if ell.nonneg() == Some(false) || ell.hi() <= &0 => {
                Err(BoundsError::Precondition("ell must be > 0".into()))
            }
            false => Err(inconclusive("sign of ell")),
        }
    }

    /// Context for a concrete vertex count `n >= 2`.
    pub fn from_n(r: u64, params: ParamFns, n: &Integer) -> Result<Self, BoundsError> {
        if *n < 2 {
            return Err(BoundsError::Precondition(format!("n must be >= 2, got {n}")));
        }
        let prec = params.precision();
        let ell = BigReal::from_integer(prec, n).log_base(&BigReal::from_i64(prec, r as i64 + 1));
        BoundContext::new(r, params, ell)
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn params(&self) -> &ParamFns {
        &self.params
    }

    pub fn ell(&self) -> &BigReal {
        &self.ell
    }

    pub fn prec(&self) -> u32 {
        self.params.precision()
    }

    /// The same `r` and parameters at another `ell`.
    pub fn with_ell(&self, ell: BigReal) -> Result<Self, BoundsError> {
        BoundContext::new(self.r, self.params.clone(), ell)
    }

    pub(crate) fn int(&self, v: i64) -> BigReal {
        BigReal::from_i64(self.prec(), v)
    }

    pub(crate) fn big(&self, p: &Integer) -> BigReal {
        BigReal::from_integer(self.prec(), p)
    }

    /// `log_{r+1}(x)`.
    pub fn log_r1(&self, x: &BigReal) -> BigReal {
        x.ln().div(&self.int(self.r as i64 + 1).ln())
    }

    /// `lambda = log_{r+1}(6(r+1))`.
    pub fn lambda(&self) -> BigReal {
        self.log_r1(&self.int(6 * (self.r as i64 + 1)))
    }

    /// `4^{1/(phi(t-1) - eta(t))}`, the constant subtracted in `f(., t, .)`.
    /// The constant in `h(., t, .)` is `c_f(t - 1)`.
    pub fn c_f(&self, t: i64) -> BigReal {
        let p = &self.params;
        self.int(4).pow(&p.phi(t - 1).sub(&p.eta(t)).recip())
    }

    /// `f` at an arbitrary `ell`, without argument checks.
    pub fn f_at(&self, ell: &BigReal, t: i64, p: &Integer) -> BigReal {
        ell.pow(&self.params.phi(t))
            .sub(&self.big(p).div_i64(2))
            .sub(&self.c_f(t))
    }

    /// `h` at an arbitrary `ell`, without argument checks.
    pub fn h_at(&self, ell: &BigReal, t: i64, p: &Integer) -> BigReal {
        ell.pow(&self.params.eta(t))
            .add(&self.big(p).div_i64(2))
            .sub(&self.c_f(t - 1))
    }

    /// `E(ell, t, p) = 2 ell^gamma(t) (3 ell^phi(t) - p)`.
    pub fn e_at(&self, ell: &BigReal, t: i64, p: &Integer) -> BigReal {
        let prm = &self.params;
        ell.pow(&prm.gamma(t))
            .mul(&ell.pow(&prm.phi(t)).mul_i64(3).sub(&self.big(p)))
            .mul_i64(2)
    }

    /// `log_{r+1} g` at an arbitrary `ell`.
    pub fn g_log_at(&self, ell: &BigReal, t: i64, p: &Integer) -> BigReal {
        ell.sub(&self.lambda().mul(&self.e_at(ell, t, p)))
    }

    /// `log_{r+1} 3`, the shift from `n` to `n/3`.
    pub fn log3(&self) -> BigReal {
        self.log_r1(&self.int(3))
    }

    /// `E(ell, t, p) - E(ell - delta, t, p)` for `0 <= delta < ell`, without
    /// cancellation:
    /// `6 ell^{gamma+phi} q_{gamma+phi} - 2 p ell^gamma q_gamma` with
    /// `q_a = 1 - (1 - delta/ell)^a`.
    pub fn e_drop(&self, ell: &BigReal, delta: &BigReal, t: i64, p: &Integer) -> BigReal {
        let prm = &self.params;
        let gamma = prm.gamma(t);
        let gp = gamma.add(&prm.phi(t));
        let rel = delta.div(ell).neg().ln_1p();
        let q_gp = gp.mul(&rel).exp_m1().neg();
        let q_g = gamma.mul(&rel).exp_m1().neg();
        ell.pow(&gp)
            .mul(&q_gp)
            .mul_i64(6)
            .sub(&self.big(p).mul(&ell.pow(&gamma)).mul(&q_g).mul_i64(2))
    }

    /// Splits `D` (with `log_{r+1} s(n,t,p) = ell - D`) as
    /// `D = lambda E(ell, t-1, p) + rest`.
    ///
    /// `s = (g' - 1) / (2r + 1)` with `g' = g(n/3, t-1, p)`; writing
    /// `G = log_{r+1} g'`,
    /// `D = log3 + lambda E(ell - log3, t-1, p) + log(2r+1) - log(1 - (r+1)^{-G})`.
    /// Keeping `lambda E(ell, t-1, p)` apart lets callers cancel it exactly.
    pub fn s_deficit_parts(&self, t: i64, p: &Integer) -> Result<(BigReal, BigReal), BoundsError> {
        let log3 = self.log3();
        let ell3 = self.ell.sub(&log3);
        match ell3.is_positive() {
            true => {}
            false if ell3.hi() <= &0 => {
                return Err(BoundsError::Domain("n/3 < 1, s is undefined".into()))
            }
            false => return Err(inconclusive("sign of log(n/3)")),
        }
        let lambda = self.lambda();
        let main = lambda.mul(&self.e_at(&self.ell, t - 1, p));
        let drop = lambda.mul(&self.e_drop(&self.ell, &log3, t - 1, p));
        let g_prev = ell3.sub(&main).add(&drop);
        match g_prev.is_positive() {
            true => {}
            false if g_prev.hi() <= &0 => {
                return Err(BoundsError::Domain("g(n/3, t-1, p) <= 1, so s <= 0".into()))
            }
            false => return Err(inconclusive("sign of log g(n/3, t-1, p)")),
        }
        let ln_base = self.int(self.r as i64 + 1).ln();
        // log_{r+1}(1 - (r+1)^{-G}) = ln(-expm1(-G ln(r+1))) / ln(r+1)
        let tail = g_prev.mul(&ln_base).neg().exp_m1().neg().ln().div(&ln_base);
        let rest = log3
            .sub(&drop)
            .add(&self.log_r1(&self.int(2 * self.r as i64 + 1)))
            .sub(&tail);
        Ok((main, rest))
    }

    /// `D` with `log_{r+1} s(n,t,p) = ell - D`.
    pub fn s_deficit(&self, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
        let (main, rest) = self.s_deficit_parts(t, p)?;
        Ok(main.add(&rest))
    }
}

fn check_tp(t: i64, p: &Integer) -> Result<(), BoundsError> {
    if t < 1 {
        return Err(BoundsError::Precondition(format!("t must be >= 1, got {t}")));
    }
    if *p < 0 {
        return Err(BoundsError::Precondition(format!("p must be >= 0, got {p}")));
    }
    Ok(())
}

/// `f(n,t,p) = ell^phi(t) - p/2 - 4^{1/(phi(t-1) - eta(t))}`.
pub fn f_val(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
    check_tp(t, p)?;
    Ok(ctx.f_at(ctx.ell(), t, p))
}

/// `h(n,t,p) = ell^eta(t) + p/2 - 4^{1/(phi(t-2) - eta(t-1))}`.
pub fn h_val(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
    check_tp(t, p)?;
    Ok(ctx.h_at(ctx.ell(), t, p))
}

/// `log_{6(r+1)}(n / g(n,t,p)) = 2 ell^gamma(t) (3 ell^phi(t) - p)`.
pub fn g_exponent(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
    check_tp(t, p)?;
    Ok(ctx.e_at(ctx.ell(), t, p))
}

/// `log_{r+1} g(n,t,p)`.
pub fn g_log(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
    check_tp(t, p)?;
    Ok(ctx.g_log_at(ctx.ell(), t, p))
}

/// `log_{r+1} s(n,t,p)`. Fails with a domain error when `s <= 0`.
pub fn s_log(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BigReal, BoundsError> {
    check_tp(t, p)?;
    Ok(ctx.ell().sub(&ctx.s_deficit(t, p)?))
}

/// `4^{1/(phi(t) (phi(t-1) - eta(t)))}`: the lower limit on `ell` for the
/// monotonicity statements.
pub fn thr_mono(params: &ParamFns, t: i64) -> BigReal {
    let prec = params.precision();
    let gap = params.phi(t - 1).sub(&params.eta(t));
    BigReal::from_i64(prec, 4).pow(&params.phi(t).mul(&gap).recip())
}

/// `(2 + p/2)^{1/phi(t)} + 4^{1/(phi(t) (phi(t-1) - eta(t)))}`: the lower
/// limit on `ell` for the recursion inequalities.
pub fn thr_bign(params: &ParamFns, t: i64, p: &Integer) -> BigReal {
    let prec = params.precision();
    let base = BigReal::from_i64(prec, 2).add(&BigReal::from_integer(prec, p).div_i64(2));
    base.pow(&params.phi(t).recip()).add(&thr_mono(params, t))
}

/// `2^{1/phi(t)}`: the lower limit on `ell` for the stretch lower bound.
pub fn thr_lowbd(params: &ParamFns, t: i64) -> BigReal {
    let prec = params.precision();
    BigReal::from_i64(prec, 2).pow(&params.phi(t).recip())
}
