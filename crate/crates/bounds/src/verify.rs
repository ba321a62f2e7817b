//! Rigorous checks of the monotonicity and recursion inequalities, and the
//! grid sweep that reports them as TSV.
//!
//! Every margin is arranged as `lhs - rhs` of an inequality `lhs >= rhs` and
//! rewritten so that no two astronomically large terms cancel. With
//! `ell_s = log_{r+1} s = ell - D`:
//!
//! * `f(s,t,p+1) - f(n,t,p) + 1 = 1/2 + ell^phi expm1(phi ln1p(-D/ell))`
//! * the same with `eta` for `h`
//! * `log g(s,t,p+1) - log g(n,t,p) = lambda (E(ell,t,p) - E(ell-D,t,p+1)) - D`
//! * `f(n/3,t-1,p) - h(n,t,p) = (ell - log 3)^phi(t-1) - ell^eta(t) - p`
//! * `log s - log g(n,t,p) = lambda E(ell,t,p) - D`

use std::fmt;

use rayon::prelude::*;
use rug::Integer;

use crate::error::BoundsError;
use crate::functions::{thr_bign, thr_lowbd, thr_mono, BoundContext};
use crate::params::ParamFns;
use crate::real::BigReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn of_margin(m: &BigReal) -> Verdict {
        match m.nonneg() {
            Some(true) => Verdict::Pass,
            Some(false) => Verdict::Fail,
            None => Verdict::Inconclusive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated inequality.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub margin: BigReal,
    pub verdict: Verdict,
}

impl Check {
    fn new(name: &'static str, margin: BigReal) -> Check {
        let verdict = Verdict::of_margin(&margin);
        Check { name, margin, verdict }
    }
}

fn require(what: &str, v: Option<bool>) -> Result<(), BoundsError> {
    match v {
        Some(true) => Ok(()),
        Some(false) => Err(BoundsError::Precondition(what.to_string())),
        None => Err(BoundsError::Inconclusive {
            what: format!("precondition {what}"),
        }),
    }
}

fn all_pass(checks: &[Check]) -> Result<bool, BoundsError> {
    if let Some(c) = checks.iter().find(|c| c.verdict == Verdict::Inconclusive) {
        return Err(BoundsError::Inconclusive {
            what: c.name.to_string(),
        });
    }
    Ok(checks.iter().all(|c| c.verdict == Verdict::Pass))
}

/// `ell^a expm1(a ln1p(-d/ell)) = (ell - d)^a - ell^a`, cancellation free.
fn shifted_pow_delta(ell: &BigReal, d: &BigReal, a: &BigReal) -> BigReal {
    let rel = d.div(ell).neg().ln_1p();
    ell.pow(a).mul(&a.mul(&rel).exp_m1())
}

/// Checks `ell >= thr_mono(t)` and `p <= 2 ell^phi(t)`.
pub fn mono_preconditions(ctx: &BoundContext, t: i64, p: &Integer) -> Result<(), BoundsError> {
    if t < 1 || *p < 0 {
        return Err(BoundsError::Precondition("need t >= 1 and p >= 0".into()));
    }
    let prm = ctx.params();
    require("ell >= 4^{1/(phi(t)(phi(t-1)-eta(t)))}", ctx.ell().ge(&thr_mono(prm, t)))?;
    let cap = ctx.ell().pow(&prm.phi(t)).mul_i64(2);
    require("p <= 2 ell^phi(t)", cap.ge(&ctx.big(p)))
}

/// Margins of `f(n,t-1,p) >= f(n,t,p)`, `g(n,t-1,p) >= g(n,t,p)` (in
/// `log_{r+1}` units) and `h(n,t-1,p) >= h(n,t,p)`.
pub fn mono_checks(ctx: &BoundContext, t: i64, p: &Integer) -> Result<Vec<Check>, BoundsError> {
    mono_preconditions(ctx, t, p)?;
    let prm = ctx.params();
    let ell = ctx.ell();
    // p/2 cancels in f and h.
    let f = ell
        .pow(&prm.phi(t - 1))
        .sub(&ctx.c_f(t - 1))
        .sub(&ell.pow(&prm.phi(t)))
        .add(&ctx.c_f(t));
    let h = ell
        .pow(&prm.eta(t - 1))
        .sub(&ctx.c_f(t - 2))
        .sub(&ell.pow(&prm.eta(t)))
        .add(&ctx.c_f(t - 1));
    let g = ctx
        .lambda()
        .mul(&ctx.e_at(ell, t, p).sub(&ctx.e_at(ell, t - 1, p)));
    Ok(vec![
        Check::new("mono_f", f),
        Check::new("mono_g", g),
        Check::new("mono_h", h),
    ])
}

/// All three monotonicity inequalities hold.
pub fn verify_mono(ctx: &BoundContext, t: i64, p: &Integer) -> Result<bool, BoundsError> {
    all_pass(&mono_checks(ctx, t, p)?)
}

/// Checks conditions `ell >= thr_bign(t,p)` and `p < 2 ell^phi(t)`.
pub fn bounds_preconditions(ctx: &BoundContext, t: i64, p: &Integer) -> Result<(), BoundsError> {
    if t < 1 || *p < 0 {
        return Err(BoundsError::Precondition("need t >= 1 and p >= 0".into()));
    }
    let prm = ctx.params();
    require(
        "ell >= (2 + p/2)^{1/phi(t)} + 4^{1/(phi(t)(phi(t-1)-eta(t)))}",
        ctx.ell().ge(&thr_bign(prm, t, p)),
    )?;
    let cap = ctx.ell().pow(&prm.phi(t)).mul_i64(2);
    require("p < 2 ell^phi(t)", cap.gt(&ctx.big(p)))
}

/// Margins of the five recursion inequalities, named `recursionf`,
/// `recursionh`, `recursiong`, `middlef`, `middleg`.
pub fn bounds_checks(ctx: &BoundContext, t: i64, p: &Integer) -> Result<Vec<Check>, BoundsError> {
    bounds_preconditions(ctx, t, p)?;
    let prm = ctx.params();
    let ell = ctx.ell();
    let (d_main, d_rest) = ctx.s_deficit_parts(t, p)?;
    let d = d_main.add(&d_rest);
    let half = BigReal::ratio(ctx.prec(), 1, 2);
    let lambda = ctx.lambda();

    let rec_f = half.add(&shifted_pow_delta(ell, &d, &prm.phi(t)));
    let rec_h = half.add(&shifted_pow_delta(ell, &d, &prm.eta(t)));

    // E(ell,t,p) - E(ell-D,t,p+1)
    //   = 2 ell^gamma + 6 ell^{gamma+phi} q_{gamma+phi} - 2 (p+1) ell^gamma q_gamma
    // with q_a = 1 - (1 - D/ell)^a.
    let gamma = prm.gamma(t);
    let gp = gamma.add(&prm.phi(t));
    let rel = d.div(ell).neg().ln_1p();
    let q_gp = gp.mul(&rel).exp_m1().neg();
    let q_g = gamma.mul(&rel).exp_m1().neg();
    let ell_g = ell.pow(&gamma);
    let p1 = ctx.big(p).add(&ctx.int(1));
    let e_diff = ell_g
        .mul_i64(2)
        .add(&ell.pow(&gp).mul(&q_gp).mul_i64(6))
        .sub(&p1.mul(&ell_g).mul(&q_g).mul_i64(2));
    let rec_g = lambda.mul(&e_diff).sub(&d);

    let mid_f = ell
        .sub(&ctx.log3())
        .pow(&prm.phi(t - 1))
        .sub(&ell.pow(&prm.eta(t)))
        .sub(&ctx.big(p));
    let mid_g = lambda.mul(&ctx.e_at(ell, t, p)).sub(&d_main).sub(&d_rest);

    Ok(vec![
        Check::new("recursionf", rec_f),
        Check::new("recursionh", rec_h),
        Check::new("recursiong", rec_g),
        Check::new("middlef", mid_f),
        Check::new("middleg", mid_g),
    ])
}

/// Report for the five recursion inequalities.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }
}

/// Evaluates the five recursion inequalities; an undecidable margin is an
/// error.
pub fn verify_bounds(ctx: &BoundContext, t: i64, p: &Integer) -> Result<BoundsReport, BoundsError> {
    let checks = bounds_checks(ctx, t, p)?;
    all_pass(&checks)?;
    Ok(BoundsReport { checks })
}

/// Margin of `log s(n,t,p) >= log(n / (6(r+1))^{E(ell,t-1,p)+1})`.
pub fn lowbdstretch_check(ctx: &BoundContext, t: i64, p: &Integer) -> Result<Check, BoundsError> {
    if t < 1 || *p < 0 {
        return Err(BoundsError::Precondition("need t >= 1 and p >= 0".into()));
    }
    require("ell >= 2^{1/phi(t)}", ctx.ell().ge(&thr_lowbd(ctx.params(), t)))?;
    // lambda (E(ell,t-1,p) + 1) - D = lambda - rest
    let (_, rest) = ctx.s_deficit_parts(t, p)?;
    Ok(Check::new("lowbdstretch", ctx.lambda().sub(&rest)))
}

pub fn verify_lowbdstretch(ctx: &BoundContext, t: i64, p: &Integer) -> Result<bool, BoundsError> {
    all_pass(&[lowbdstretch_check(ctx, t, p)?])
}

/// Margin of `(ell - c1 ell^c0)^x >= ell^x - 1/2` after checking
/// `c0 in (0,1)`, `c1 > 0`, `ell >= max(1, c1^{1/(1-c0)})` and
/// `x <= 1 - c0 - log_ell(2 c1)`.
pub fn log_inequality_check(
    name: &'static str,
    ell: &BigReal,
    c0: &BigReal,
    c1: &BigReal,
    x: &BigReal,
) -> Result<Check, BoundsError> {
    let prec = ell.prec();
    let zero = BigReal::from_i64(prec, 0);
    let one = BigReal::from_i64(prec, 1);
    require("c0 > 0", c0.gt(&zero))?;
    require("c0 < 1", one.gt(c0))?;
    require("c1 > 0", c1.gt(&zero))?;
    require("ell >= 1", ell.ge(&one))?;
    let lim = c1.pow(&one.sub(c0).recip());
    require("ell >= c1^{1/(1-c0)}", ell.ge(&lim))?;
    let room = one.sub(c0).sub(&c1.mul_i64(2).ln().div(&ell.ln()));
    require("x <= 1 - c0 - log_ell(2 c1)", room.ge(x))?;
    let d = c1.mul(&ell.pow(c0));
    let half = BigReal::ratio(prec, 1, 2);
    Ok(Check::new(name, half.add(&shifted_pow_delta(ell, &d, x))))
}

/// The two instances used for the `f` and `h` recursions:
/// `c0 = gamma(t-1) + phi(t-1)`, `c1 = 7 log_{r+1}(6(r+1))`, `x in {phi(t), eta(t)}`.
pub fn log_inequality_checks(ctx: &BoundContext, t: i64) -> Result<Vec<Check>, BoundsError> {
    let prm = ctx.params();
    let c0 = prm.gamma(t - 1).add(&prm.phi(t - 1));
    let c1 = ctx.lambda().mul_i64(7);
    Ok(vec![
        log_inequality_check("log_ineq_phi", ctx.ell(), &c0, &c1, &prm.phi(t))?,
        log_inequality_check("log_ineq_eta", ctx.ell(), &c0, &c1, &prm.eta(t))?,
    ])
}

/// Which `p` a grid cell uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PChoice {
    Fixed(u64),
    /// The largest `p` for which the `ell` threshold condition is still
    /// certifiable at `ell = k * thr_bign(t, 0)`.
    Top,
}

/// Sweep configuration.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub rs: Vec<u64>,
    pub t_max: i64,
    pub multipliers: Vec<u32>,
    pub ps: Vec<PChoice>,
}

impl GridSpec {
    /// `r in {1,2,3,5}`, `t in [1,20]`, `ell` at 1, 2, 10 times the
    /// threshold, `p in {0, 1, 2, top}`.
    pub fn default_grid() -> GridSpec {
        GridSpec {
            rs: vec![1, 2, 3, 5],
            t_max: 20,
            multipliers: vec![1, 2, 10],
            ps: vec![PChoice::Fixed(0), PChoice::Fixed(1), PChoice::Fixed(2), PChoice::Top],
        }
    }
}

/// One TSV row.
#[derive(Clone, Debug)]
pub struct GridRow {
    pub r: u64,
    pub t: i64,
    pub p_label: String,
    pub multiplier: u32,
    pub ell_log2: f64,
    pub inequality: String,
    pub margin: String,
    pub verdict: Verdict,
}

pub const TSV_HEADER: &str = "r\tt\tp\tell_mult\tlog2_ell\tinequality\tmargin\tverdict";

impl GridRow {
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.3}\t{}\t{}\t{}",
            self.r,
            self.t,
            self.p_label,
            self.multiplier,
            self.ell_log2,
            self.inequality,
            self.margin,
            self.verdict
        )
    }
}

fn p_label(p: &Integer) -> String {
    if p.significant_bits() <= 64 {
        p.to_string()
    } else {
        let f = rug::Float::with_val(64, p);
        format!("~2^{:.2}", f.log2().to_f64())
    }
}

/// `floor(2 ((ell - C)^phi (1 - 2^{-prec/2}) - 2))` with `C = thr_mono(t)`,
/// i.e. just below the largest `p` allowed by the `ell` threshold. The
/// relative slack keeps the threshold condition decidable at working
/// precision.
pub fn top_p(ctx: &BoundContext, t: i64) -> Option<Integer> {
    let prm = ctx.params();
    let prec = ctx.prec();
    let avail = ctx.ell().sub(&thr_mono(prm, t));
    if !avail.is_positive() {
        return None;
    }
    let slack = BigReal::from_i64(prec, 1).sub(&BigReal::from_float(
        rug::Float::with_val(prec, 1) >> (prec / 2),
    ));
    let v = avail
        .pow(&prm.phi(t))
        .mul(&slack)
        .sub(&BigReal::from_i64(prec, 2))
        .mul_i64(2);
    let p = v.floor_lo()?;
    (p >= 0).then_some(p)
}

fn cell_rows(params: &ParamFns, r: u64, t: i64, mult: u32, pc: &PChoice) -> Vec<GridRow> {
    let prec = params.precision();
    let base_p = match pc {
        PChoice::Fixed(p) => Integer::from(*p),
        PChoice::Top => Integer::from(0),
    };
    let thr = thr_bign(params, t, &base_p).upper_point();
    let ell = thr.mul(&BigReal::from_i64(prec, mult as i64));
    let ell_log2 = ell.log2().to_f64();
    let row = |p_label: String, inequality: &str, margin: String, verdict| GridRow {
        r,
        t,
        p_label,
        multiplier: mult,
        ell_log2,
        inequality: inequality.to_string(),
        margin,
        verdict,
    };
    let ctx = match BoundContext::new(r, params.clone(), ell) {
        Ok(c) => c,
        Err(e) => return vec![row("-".into(), "context", e.to_string(), Verdict::Inconclusive)],
    };
    let p = match pc {
        PChoice::Fixed(p) => Integer::from(*p),
        PChoice::Top => match top_p(&ctx, t) {
            Some(p) => p,
            None => return vec![row("top".into(), "context", "no admissible p".into(), Verdict::Inconclusive)],
        },
    };
    let label = p_label(&p);
    let mut out = Vec::new();
    let mut push = |res: Result<Vec<Check>, BoundsError>, group: &str| match res {
        Ok(checks) => {
            for c in checks {
                out.push(row(label.clone(), c.name, c.margin.to_sci(6), c.verdict));
            }
        }
        Err(e) => {
            let v = match e {
                BoundsError::Inconclusive { .. } => Verdict::Inconclusive,
                _ => Verdict::Fail,
            };
            out.push(row(label.clone(), group, e.to_string(), v));
        }
    };
    push(bounds_checks(&ctx, t, &p), "bounds");
    push(mono_checks(&ctx, t, &p), "mono");
    push(lowbdstretch_check(&ctx, t, &p).map(|c| vec![c]), "lowbdstretch");
    push(log_inequality_checks(&ctx, t), "log_inequality");
    out
}

/// Evaluates every cell of the grid in parallel. Rows come back in a fixed
/// order (r, t, p choice, multiplier, inequality) regardless of scheduling.
pub fn run_grid(params: &ParamFns, spec: &GridSpec) -> Vec<GridRow> {
    let mut cells = Vec::new();
    for &r in &spec.rs {
        for t in 1..=spec.t_max {
            for (pi, pc) in spec.ps.iter().enumerate() {
                for &m in &spec.multipliers {
                    cells.push((r, t, pi, pc.clone(), m));
                }
            }
        }
    }
    let per_cell: Vec<Vec<GridRow>> = cells
        .par_iter()
        .map(|(r, t, _, pc, m)| cell_rows(params, *r, *t, *m, pc))
        .collect();
    per_cell.into_iter().flatten().collect()
}
