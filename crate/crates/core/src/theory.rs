//! Closed-form predictions for the gradient method on `a|x1| + x2 + ... + xn`
//! and checkers that compare them against solver traces.
//!
//! With `d_k = -grad f(x_k)` every quantity of interest depends only on `a`,
//! `n`, the Armijo parameter `c1` and the first coordinate `x1`. The single
//! number that decides the behavior is
//!
//! ```text
//! tau = c1 + (n - 1)(c1 - 1) / a^2
//! ```
//!
//! `tau > 0` forces convergence to a point on the kink `x1 = 0` for any
//! Armijo-Wolfe steps; `tau <= 0` admits unbounded descent, and for the
//! bracketing line search the accepted step is a power of two that can be
//! written down from `|x1|` alone.
//!
//! Checkers return per-record results instead of failing fast so that sweeps
//! can count violations.

use crate::error::{Error, Result};
use crate::linesearch::check_armijo;
use crate::methods::RunTrace;

/// Relative guard band around dyadic boundaries `a 2^m` and `(1 + tau) a 2^m`.
pub const DYADIC_GUARD: f64 = 1e-9;

/// Relative slack for equalities and "at the boundary" classifications.
pub const EQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauContext {
    pub a: f64,
    pub n: usize,
    pub c1: f64,
    pub tau: f64,
}

pub fn compute_tau(a: f64, n: usize, c1: f64) -> Result<TauContext> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidConfig(format!("a must be positive, got {a}")));
    }
    if n < 2 {
        return Err(Error::InvalidConfig(format!("n must be at least 2, got {n}")));
    }
    if !(0.0 < c1 && c1 < 1.0) {
        return Err(Error::InvalidConfig(format!("c1 must lie in (0, 1), got {c1}")));
    }
    let tau = c1 + (n - 1) as f64 * (c1 - 1.0) / (a * a);
    Ok(TauContext { a, n, c1, tau })
}

/// The `a` giving a prescribed `tau` for fixed `c1` and `n`:
/// `a = sqrt((n - 1)(1 - c1) / (c1 - tau))`.
pub fn a_for_tau(tau: f64, c1: f64, n: usize) -> Result<f64> {
    if !(tau < c1) || n < 2 || !(0.0 < c1 && c1 < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "need tau < c1 in (0, 1) and n >= 2 (tau = {tau}, c1 = {c1}, n = {n})"
        )));
    }
    Ok(((n - 1) as f64 * (1.0 - c1) / (c1 - tau)).sqrt())
}

impl TauContext {
    /// `sqrt((n - 1)(1/c1 - 1))`: larger `a` means `tau > 0`.
    pub fn critical_a(&self) -> f64 {
        ((self.n - 1) as f64 * (1.0 / self.c1 - 1.0)).sqrt()
    }

    /// Ratio `C = (1 - tau) / (1 + tau)` of the step-maximizing schedule.
    pub fn contraction_ratio(&self) -> f64 {
        (1.0 - self.tau) / (1.0 + self.tau)
    }

    /// `-(a^2 + n - 1)`, the slope along the negative gradient.
    pub fn directional_derivative(&self) -> f64 {
        -(self.a * self.a + (self.n - 1) as f64)
    }

    pub fn satisfies_bound_assumption(&self) -> bool {
        self.a * self.a >= (self.n - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `|x1| > a`: the search doubles until the sign flips.
    LargeX,
    /// `|x1| < a`: `t = 1` flips the sign; the search halves until Armijo holds.
    SmallX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPrediction {
    pub regime: Regime,
    /// `r_k` in the large regime, `q_k` in the small one.
    pub exponent: i32,
    pub predicted_t: f64,
    /// `p_k = ceil(log2(a / |x1|))`, reported only when `tau == 0`.
    pub p: Option<i32>,
}

/// Smallest integer `e` with `ratio <= 2^e`, exact away from powers of two.
fn ceil_log2(ratio: f64) -> i32 {
    let mut e = ratio.log2().ceil() as i32;
    while 2f64.powi(e) < ratio {
        e += 1;
    }
    while 2f64.powi(e - 1) >= ratio {
        e -= 1;
    }
    e
}

fn check_guard(u: f64, base: f64) -> Result<()> {
    let m = (u / base).log2().round() as i32;
    for e in [m - 1, m, m + 1] {
        let boundary = base * 2f64.powi(e);
        if (u - boundary).abs() <= DYADIC_GUARD * u {
            return Err(Error::DyadicBoundary { x1: u, boundary });
        }
    }
    Ok(())
}

/// The step the bracketing line search (initial step 1) accepts from an
/// iterate with first coordinate `x1`, when `tau <= 0`.
pub fn predict_step(ctx: &TauContext, x1: f64) -> Result<StepPrediction> {
    if ctx.tau > 0.0 {
        return Err(Error::PositiveTau { tau: ctx.tau });
    }
    if x1 == 0.0 || !x1.is_finite() {
        return Err(Error::InvalidConfig(format!("x1 must be finite and nonzero, got {x1}")));
    }
    let u = x1.abs();
    let a = ctx.a;
    let shrunk = (1.0 + ctx.tau) * a;
    check_guard(u, a)?;
    check_guard(u, shrunk)?;

    if u > a {
        let r = ceil_log2(u / a);
        return Ok(StepPrediction {
            regime: Regime::LargeX,
            exponent: r,
            predicted_t: 2f64.powi(r),
            p: None,
        });
    }
    let q = ceil_log2(shrunk / u);
    let p = (ctx.tau == 0.0).then(|| {
        let p = ceil_log2(a / u);
        debug_assert_eq!(p, q);
        p
    });
    Ok(StepPrediction {
        regime: Regime::SmallX,
        exponent: q,
        predicted_t: if q <= 1 { 1.0 } else { 2f64.powi(1 - q) },
        p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleStep {
    pub k: usize,
    pub t: f64,
    /// First coordinate of `x_k`; alternates in sign.
    pub x1: f64,
}

/// The largest Armijo-Wolfe step at every iteration,
/// `t_k = 2 |x1_k| / ((1 + tau) a) = 2 C^k |x1_0| / (a (1 + tau))`,
/// under which `|x1_k| = C^k |x1_0|`.
pub fn closed_form_schedule(ctx: &TauContext, x1_0: f64, steps: usize) -> Result<Vec<ScheduleStep>> {
    if !(ctx.tau.abs() < 1.0) {
        return Err(Error::InvalidConfig(format!("need |tau| < 1, got {}", ctx.tau)));
    }
    if x1_0 == 0.0 {
        return Err(Error::InvalidConfig("x1_0 must be nonzero".into()));
    }
    let c = ctx.contraction_ratio();
    let scale = 2.0 * x1_0.abs() / (ctx.a * (1.0 + ctx.tau));
    Ok((0..steps)
        .map(|k| {
            let ck = c.powi(k as i32);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            ScheduleStep {
                k,
                t: scale * ck,
                x1: sign * x1_0 * ck,
            }
        })
        .collect())
}

/// The three equivalent forms of the Wolfe condition for one accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WolfeEquivalences {
    pub sign_flip: bool,
    pub exceeds_ratio: bool,
    pub distance_identity: bool,
    /// The step lands exactly on the kink; none of the forms applies.
    pub on_kink: bool,
}

impl WolfeEquivalences {
    pub fn all_hold(&self) -> bool {
        !self.on_kink && self.sign_flip && self.exceeds_ratio && self.distance_identity
    }

    /// All three agree with each other (all true or all false).
    pub fn consistent(&self) -> bool {
        self.on_kink
            || (self.sign_flip == self.exceeds_ratio && self.exceeds_ratio == self.distance_identity)
    }
}

pub fn check_wolfe_equivalences(x1_k: f64, x1_next: f64, t: f64, a: f64) -> WolfeEquivalences {
    let ratio = x1_k.abs() / a;
    WolfeEquivalences {
        sign_flip: x1_next != 0.0 && x1_next.signum() == -x1_k.signum(),
        exceeds_ratio: t > ratio,
        distance_identity: (a * t - (x1_k.abs() + x1_next.abs())).abs() <= EQUALITY_TOL * a * t,
        on_kink: x1_next == 0.0 || t == ratio,
    }
}

/// Step-length equivalences for every accepted step of a gradient trace.
pub fn check_trace_wolfe(trace: &RunTrace, ctx: &TauContext) -> Vec<WolfeEquivalences> {
    trace
        .records
        .windows(2)
        .filter_map(|w| {
            w[0].step
                .map(|t| check_wolfe_equivalences(w[0].x1(), w[1].x1(), t, ctx.a))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumBoundCheck {
    pub k: usize,
    pub step_sum: f64,
    pub decrease: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SumBoundCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `c1 (a^2 + n - 1) S_N <= f(x_0) - f(x_N) <= (n - 1) S_N + a |x1_0|` at every
/// record, with slack `1e-9 (1 + |f(x_0)|)`.
pub fn check_sum_bounds(trace: &RunTrace, ctx: &TauContext) -> Vec<SumBoundCheck> {
    let Some(first) = trace.records.first() else {
        return Vec::new();
    };
    let slack = 1e-9 * (1.0 + first.f.abs());
    let m = (ctx.n - 1) as f64;
    trace
        .records
        .iter()
        .map(|r| {
            let s = r.cumulative_step_sum;
            let decrease = first.f - r.f;
            SumBoundCheck {
                k: r.k,
                step_sum: s,
                decrease,
                lower_holds: ctx.c1 * (ctx.a * ctx.a + m) * s <= decrease + slack,
                upper_holds: decrease <= m * s + ctx.a * first.x1().abs() + slack,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    /// `(1 + tau) a t / 2` equals `|x1|` to within the equality tolerance.
    Boundary,
}

/// Compares the Armijo test with its reformulation `(1 + tau) a t / 2 <= |x1_k|`,
/// valid for steps that satisfy Wolfe.
pub fn check_armijo_reformulation(
    ctx: &TauContext,
    x1_k: f64,
    t: f64,
    f_k: f64,
    f_next: f64,
) -> Agreement {
    let lhs = (1.0 + ctx.tau) * ctx.a * t / 2.0;
    let u = x1_k.abs();
    if (lhs - u).abs() <= EQUALITY_TOL * u {
        return Agreement::Boundary;
    }
    let armijo = check_armijo(f_k, ctx.directional_derivative(), t, f_next, ctx.c1);
    if armijo == (lhs <= u) {
        Agreement::Agree
    } else {
        Agreement::Disagree
    }
}

pub fn check_trace_armijo(trace: &RunTrace, ctx: &TauContext) -> Vec<Agreement> {
    trace
        .records
        .windows(2)
        .filter_map(|w| {
            w[0].step
                .map(|t| check_armijo_reformulation(ctx, w[0].x1(), t, w[0].f, w[1].f))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryCheck {
    /// `ceil(log2(|x1_0| / a))`.
    pub r0: i32,
    /// First index with `|x1_j| < a`.
    pub first_inside: Option<usize>,
    pub holds: bool,
}

/// With `tau <= 0` and `|x1_0| > a`: `|x1_j| < a` after `j <= r0` iterations,
/// and it stays there. `None` when the hypotheses do not apply.
pub fn check_entry_bound(trace: &RunTrace, ctx: &TauContext) -> Option<EntryCheck> {
    let first = trace.records.first()?;
    let u0 = first.x1().abs();
    if ctx.tau > 0.0 || u0 <= ctx.a {
        return None;
    }
    let r0 = ceil_log2(u0 / ctx.a);
    let first_inside = trace.records.iter().position(|r| r.x1().abs() < ctx.a);
    let holds = match first_inside {
        Some(j) => {
            j as i32 <= r0 && trace.records[j..].iter().all(|r| r.x1().abs() < ctx.a)
        }
        // the run stopped before it could get inside
        None => (trace.records.len() as i32) <= r0,
    };
    Some(EntryCheck {
        r0,
        first_inside,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingCheck {
    pub checked: usize,
    pub violations: usize,
    /// Twice the last accepted step bounds the remaining step sum.
    pub tail_bound: f64,
}

/// For `tau = 0`: once `|x1_k| < a`, consecutive accepted steps satisfy
/// `t_{k+1} <= t_k / 2`.
pub fn check_step_halving(trace: &RunTrace, ctx: &TauContext) -> HalvingCheck {
    let mut checked = 0;
    let mut violations = 0;
    let mut last_step = f64::NAN;
    for w in trace.records.windows(2) {
        if let Some(t) = w[0].step {
            last_step = t;
        }
        if let (Some(t0), Some(t1)) = (w[0].step, w[1].step) {
            if w[0].x1().abs() < ctx.a {
                checked += 1;
                if t1 > t0 / 2.0 {
                    violations += 1;
                }
            }
        }
    }
    HalvingCheck {
        checked,
        violations,
        tail_bound: 2.0 * last_step,
    }
}

/// Index after which every accepted step equals 1, if the trace ends that way.
pub fn unit_step_onset(trace: &RunTrace) -> Option<usize> {
    let steps: Vec<(usize, f64)> = trace
        .records
        .iter()
        .filter_map(|r| r.step.map(|t| (r.k, t)))
        .collect();
    let tail = steps.iter().rev().take_while(|(_, t)| *t == 1.0).count();
    if tail == 0 {
        return None;
    }
    Some(steps[steps.len() - tail].0)
}
