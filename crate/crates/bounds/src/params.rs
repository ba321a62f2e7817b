//! The parameter functions `phi`, `eta`, `gamma` and their admissibility check.

use std::fmt;
use std::sync::Arc;

use rug::Rational;

use crate::alpha::{alpha_constant, series_term};
use crate::error::BoundsError;
use crate::real::BigReal;

/// A source of enclosures for `phi(t)`, `eta(t)`, `gamma(t)`.
///
/// The two slack methods exist so that identities that hold by construction
/// (the default `gamma` increments are exactly `8 phi(t-1)`) can be reported
/// exactly instead of as an interval straddling zero.
pub trait ParamSource: Send + Sync + fmt::Debug {
    fn precision(&self) -> u32;
    fn phi(&self, t: i64) -> BigReal;
    fn eta(&self, t: i64) -> BigReal;
    fn gamma(&self, t: i64) -> BigReal;

    /// `gamma(t) - gamma(t-1) - 8 phi(t-1)`.
    fn gamma_step_slack(&self, t: i64) -> BigReal {
        self.gamma(t)
            .sub(&self.gamma(t - 1))
            .sub(&self.phi(t - 1).mul_i64(8))
    }

    /// `1 - gamma(t-1) - 8 phi(t-1)`.
    fn unit_slack(&self, t: i64) -> BigReal {
        BigReal::from_i64(self.precision(), 1)
            .sub(&self.gamma(t - 1))
            .sub(&self.phi(t - 1).mul_i64(8))
    }
}

/// The instantiation `phi(t) = 1 / (8 alpha (t+10) log2(t+10)^2)`,
/// `eta(t) = (phi(t-1) + phi(t)) / 2`, `gamma(t) = 8 sum_{i=-1}^{t-1} phi(i)`.
///
/// `phi` is evaluated from the same closed form for `t = -2`, which the
/// monotonicity checks at `t = 1` need through `eta(-1)`.
#[derive(Debug)]
pub struct DefaultParams {
    prec: u32,
    alpha: BigReal,
}

impl DefaultParams {
    pub fn new(prec: u32) -> Self {
        DefaultParams {
            prec,
            alpha: alpha_constant(prec),
        }
    }

    pub fn alpha(&self) -> &BigReal {
        &self.alpha
    }

    fn weight(&self, t: i64) -> BigReal {
        assert!(t >= -2, "phi is only defined for t >= -2");
        series_term(self.prec, (t + 10) as u64)
    }
}

impl ParamSource for DefaultParams {
    fn precision(&self) -> u32 {
        self.prec
    }

    fn phi(&self, t: i64) -> BigReal {
        self.weight(t).div(&self.alpha).div_i64(8)
    }

    fn eta(&self, t: i64) -> BigReal {
        self.phi(t - 1).add(&self.phi(t)).div_i64(2)
    }

    fn gamma(&self, t: i64) -> BigReal {
        if t <= -1 {
            return BigReal::from_i64(self.prec, 0);
        }
        let mut acc = BigReal::from_i64(self.prec, 0);
        for i in -1..t {
            acc = acc.add(&self.weight(i));
        }
        acc.div(&self.alpha)
    }

    fn gamma_step_slack(&self, _t: i64) -> BigReal {
        BigReal::from_i64(self.prec, 0)
    }

    fn unit_slack(&self, t: i64) -> BigReal {
        // 1 - gamma(t-1) - 8 phi(t-1) = 1 - gamma(t) = (alpha - sum_{k < t+10} w_k) / alpha
        let mut head = BigReal::from_i64(self.prec, 0);
        for i in -1..t {
            head = head.add(&self.weight(i));
        }
        self.alpha.sub(&head).div(&self.alpha)
    }
}

type RationalFn = Box<dyn Fn(i64) -> Rational + Send + Sync>;

/// Parameter functions given by exact rational closures. Used for artificial
/// instances in tests and for negative admissibility checks.
pub struct RationalParams {
    prec: u32,
    phi: RationalFn,
    eta: RationalFn,
    gamma: RationalFn,
}

impl RationalParams {
    pub fn new(
        prec: u32,
        phi: impl Fn(i64) -> Rational + Send + Sync + 'static,
        eta: impl Fn(i64) -> Rational + Send + Sync + 'static,
        gamma: impl Fn(i64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        RationalParams {
            prec,
            phi: Box::new(phi),
            eta: Box::new(eta),
            gamma: Box::new(gamma),
        }
    }

    /// Constant functions.
    pub fn constant(prec: u32, phi: Rational, eta: Rational, gamma: Rational) -> Self {
        RationalParams::new(
            prec,
            move |_| phi.clone(),
            move |_| eta.clone(),
            move |_| gamma.clone(),
        )
    }

    pub fn phi_exact(&self, t: i64) -> Rational {
        (self.phi)(t)
    }

    pub fn eta_exact(&self, t: i64) -> Rational {
        (self.eta)(t)
    }

    pub fn gamma_exact(&self, t: i64) -> Rational {
        (self.gamma)(t)
    }
}

impl fmt::Debug for RationalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalParams")
            .field("prec", &self.prec)
            .finish_non_exhaustive()
    }
}

impl ParamSource for RationalParams {
    fn precision(&self) -> u32 {
        self.prec
    }
    fn phi(&self, t: i64) -> BigReal {
        BigReal::from_rational(self.prec, &(self.phi)(t))
    }
    fn eta(&self, t: i64) -> BigReal {
        BigReal::from_rational(self.prec, &(self.eta)(t))
    }
    fn gamma(&self, t: i64) -> BigReal {
        BigReal::from_rational(self.prec, &(self.gamma)(t))
    }
    fn gamma_step_slack(&self, t: i64) -> BigReal {
        let exact = (self.gamma)(t) - (self.gamma)(t - 1) - Rational::from(8) * (self.phi)(t - 1);
        BigReal::from_rational(self.prec, &exact)
    }
    fn unit_slack(&self, t: i64) -> BigReal {
        let exact = Rational::from(1) - (self.gamma)(t - 1) - Rational::from(8) * (self.phi)(t - 1);
        BigReal::from_rational(self.prec, &exact)
    }
}

/// Parameter functions plus the flag recording whether they passed
/// [`check_param_fns`].
#[derive(Clone, Debug)]
pub struct ParamFns {
    source: Arc<dyn ParamSource>,
    compliant: bool,
}

/// Range of `t` checked by [`default_params`] before it sets `compliant`.
pub const DEFAULT_CHECK_T_MAX: i64 = 100;

impl ParamFns {
    /// Wraps a source without checking it.
    pub fn unchecked(source: impl ParamSource + 'static) -> Self {
        ParamFns {
            source: Arc::new(source),
            compliant: false,
        }
    }

    /// Wraps a source and sets `compliant` from [`check_param_fns`].
    pub fn checked(source: impl ParamSource + 'static, t_max: i64) -> Result<Self, BoundsError> {
        let mut p = ParamFns::unchecked(source);
        p.compliant = check_param_fns(&p, t_max)?;
        Ok(p)
    }

    pub fn compliant(&self) -> bool {
        self.compliant
    }

    pub fn precision(&self) -> u32 {
        self.source.precision()
    }

    pub fn phi(&self, t: i64) -> BigReal {
        self.source.phi(t)
    }

    pub fn eta(&self, t: i64) -> BigReal {
        self.source.eta(t)
    }

    pub fn gamma(&self, t: i64) -> BigReal {
        self.source.gamma(t)
    }

    pub fn gamma_step_slack(&self, t: i64) -> BigReal {
        self.source.gamma_step_slack(t)
    }

    pub fn unit_slack(&self, t: i64) -> BigReal {
        self.source.unit_slack(t)
    }
}

/// The default instantiation, checked on `t in [0, 100]`.
pub fn default_params(prec: u32) -> Result<ParamFns, BoundsError> {
    ParamFns::checked(DefaultParams::new(prec), DEFAULT_CHECK_T_MAX)
}

fn decide(name: &str, t: i64, verdict: Option<bool>) -> Result<bool, BoundsError> {
    verdict.ok_or_else(|| BoundsError::Inconclusive {
        what: format!("{name} at t={t}"),
    })
}

/// Checks the four admissibility inequalities for every `t in [0, t_max]`,
/// plus `phi, eta in (0,1)` and `gamma in [0,1)` on the same range.
///
/// Returns `Ok(false)` on a certain violation and an `Inconclusive` error when
/// the enclosures are too wide to decide.
pub fn check_param_fns(p: &ParamFns, t_max: i64) -> Result<bool, BoundsError> {
    if t_max < 1 {
        return Err(BoundsError::Precondition(format!("t_max must be >= 1, got {t_max}")));
    }
    let prec = p.precision();
    let zero = BigReal::from_i64(prec, 0);
    let one = BigReal::from_i64(prec, 1);
    for t in -1..=t_max {
        let phi = p.phi(t);
        let eta = p.eta(t);
        let gamma = p.gamma(t);
        let in_range = decide("phi > 0", t, phi.gt(&zero))?
            && decide("phi < 1", t, one.gt(&phi))?
            && decide("gamma < 1", t, one.gt(&gamma))?
            && decide("gamma >= 0", t, gamma.ge(&zero))?;
        if !in_range {
            return Ok(false);
        }
        if t >= 0 {
            let eta_ok = decide("eta > 0", t, eta.gt(&zero))? && decide("eta < 1", t, one.gt(&eta))?;
            if !eta_ok {
                return Ok(false);
            }
        }
    }
    for t in 0..=t_max {
        let phi_prev = p.phi(t - 1);
        let phi = p.phi(t);
        let eta = p.eta(t);
        let eta_next = p.eta(t + 1);
        let ok = decide("gamma step", t, p.gamma_step_slack(t).nonneg())?
            && decide("unit slack", t, p.unit_slack(t).nonneg())?
            && decide("phi(t-1) > eta(t)", t, phi_prev.gt(&eta))?
            && decide("eta(t) > phi(t)", t, eta.gt(&phi))?
            && decide(
                "phi(t-1) - eta(t) > phi(t) - eta(t+1)",
                t,
                phi_prev.sub(&eta).gt(&phi.sub(&eta_next)),
            )?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_minus_one_is_zero() {
        let d = DefaultParams::new(128);
        let g = d.gamma(-1);
        assert!(g.is_point());
        assert!(g.contains_rational(&Rational::from(0)));
    }

    #[test]
    fn eta_between_neighbours() {
        let d = DefaultParams::new(128);
        for t in 0..=100 {
            assert_eq!(d.eta(t).gt(&d.phi(t)), Some(true));
            assert_eq!(d.phi(t - 1).gt(&d.eta(t)), Some(true));
        }
    }

    #[test]
    fn unit_slack_matches_direct_subtraction() {
        let d = DefaultParams::new(256);
        for t in [0i64, 1, 5, 30] {
            let direct = BigReal::from_i64(256, 1)
                .sub(&d.gamma(t - 1))
                .sub(&d.phi(t - 1).mul_i64(8));
            let closed = d.unit_slack(t);
            assert!(closed.lo() <= direct.hi() && direct.lo() <= closed.hi(), "t={t}");
        }
    }

    #[test]
    fn zero_gamma_fails_first_inequality() {
        let p = ParamFns::unchecked(RationalParams::constant(
            128,
            Rational::from((1, 100)),
            Rational::from((1, 200)),
            Rational::from(0),
        ));
        assert_eq!(check_param_fns(&p, 5).unwrap(), false);
    }

    #[test]
    fn eta_equal_phi_fails_strictness() {
        // gamma steps of exactly 8 phi keep the first two inequalities alive;
        // dyadic values make the equality decidable.
        let p = ParamFns::unchecked(RationalParams::new(
            128,
            |_| Rational::from((1, 1024)),
            |_| Rational::from((1, 1024)),
            |t| Rational::from((8 * (t + 1), 1024)),
        ));
        assert_eq!(check_param_fns(&p, 5).unwrap(), false);
    }

    #[test]
    fn t_max_zero_rejected() {
        let p = ParamFns::unchecked(DefaultParams::new(64));
        assert!(check_param_fns(&p, 0).is_err());
    }
}
