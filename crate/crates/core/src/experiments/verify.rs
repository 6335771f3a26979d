use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use super::{mix_seed, sample_start, trial_rng, StartDistribution};
use crate::error::{Error, Result};
use crate::linesearch::LineSearchConfig;
use crate::methods::{run_gradient_method, Classification, RunTrace, StopRule};
use crate::objective::{eval_abs_plus_linear, ObjectiveSpec};
use crate::theory::{
    a_for_tau, check_entry_bound, check_step_halving, check_sum_bounds, check_trace_armijo,
    check_trace_wolfe, closed_form_schedule, compute_tau, predict_step, unit_step_onset, Agreement,
    TauContext,
};

/// Randomized checks of the closed-form results against solver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifySuite {
    /// Accepted steps flip the sign of `x1`, exceed `|x1| / a`, and satisfy `a t = |x1_k| + |x1_{k+1}|`.
    Wolfe,
    /// The Armijo test agrees with `(1 + tau) a t / 2 <= |x1|`.
    Armijo,
    /// Lower and upper bounds on `f(x_0) - f(x_N)` in terms of the step sum.
    Sums,
    /// The largest-step schedule contracts `|x1|` by exactly `C` per step.
    Schedule,
    /// From `|x1_0| > a` with `tau <= 0`, `|x1| < a` within `ceil(log2(|x1_0| / a))` steps.
    Entry,
    /// The accepted step equals the closed-form prediction.
    Prediction,
    /// At `tau = 0` steps at least halve once `|x1| < a`, ending in failure.
    Halving,
    /// At `tau <= -0.5` the method settles into unit steps.
    UnitSteps,
}

impl VerifySuite {
    pub const ALL: [VerifySuite; 8] = [
        VerifySuite::Wolfe,
        VerifySuite::Armijo,
        VerifySuite::Sums,
        VerifySuite::Schedule,
        VerifySuite::Entry,
        VerifySuite::Prediction,
        VerifySuite::Halving,
        VerifySuite::UnitSteps,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            VerifySuite::Wolfe => "wolfe",
            VerifySuite::Armijo => "armijo",
            VerifySuite::Sums => "sums",
            VerifySuite::Schedule => "schedule",
            VerifySuite::Entry => "entry",
            VerifySuite::Prediction => "pred",
            VerifySuite::Halving => "halving",
            VerifySuite::UnitSteps => "unit-steps",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown verify suite '{s}'")))
    }

    /// Seed stream; the three per-record suites share one so they examine the same runs.
    fn stream(&self) -> u64 {
        match self {
            VerifySuite::Wolfe | VerifySuite::Armijo | VerifySuite::Sums => 0,
            other => Self::ALL.iter().position(|v| v == other).unwrap_or(0) as u64,
        }
    }
}

impl fmt::Display for VerifySuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: VerifySuite,
    /// Solver runs (or closed-form schedules) examined.
    pub runs: usize,
    pub checks: usize,
    pub violations: usize,
    /// Checks skipped because the hypotheses did not apply or the input sat on a boundary.
    pub skipped: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    runs: usize,
    checks: usize,
    violations: usize,
    skipped: usize,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            runs: self.runs + o.runs,
            checks: self.checks + o.checks,
            violations: self.violations + o.violations,
            skipped: self.skipped + o.skipped,
        }
    }
}

/// `tau = 0` in exact arithmetic and in floating point.
const ZERO_TAU: [(f64, usize, f64); 3] = [(3.0, 4, 0.25), (7.0, 8, 0.125), (15.0, 16, 0.0625)];

const DIMS: [usize; 3] = [2, 3, 5];

fn gradient_run<R: Rng>(ctx: &TauContext, rng: &mut R, log_scale: (f64, f64), iterations: usize) -> Result<RunTrace> {
    let spec = ObjectiveSpec::abs_plus_linear(ctx.a, ctx.n)?;
    let scale = 10f64.powf(rng.gen_range(log_scale.0..=log_scale.1));
    let x0: Vec<f64> = sample_start(StartDistribution::NormalStd, ctx.n, rng)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let ls = LineSearchConfig::default().with_c1(ctx.c1);
    run_gradient_method(&spec, &x0, &ls, &StopRule::iterations(iterations))
}

/// Any `tau` regime with bounded rays.
fn random_context<R: Rng>(rng: &mut R) -> Result<TauContext> {
    let n = DIMS[rng.gen_range(0..DIMS.len())];
    let c1 = rng.gen_range(0.01..0.45);
    let floor = ((n - 1) as f64).sqrt();
    let a = rng.gen_range(floor..floor + 4.0);
    compute_tau(a, n, c1)
}

/// Strictly negative `tau` in `[lo, hi]`, with `a >= sqrt(n - 1)`.
fn negative_tau_context<R: Rng>(rng: &mut R, lo: f64, hi: f64, c1_max: f64) -> Result<TauContext> {
    let n = DIMS[rng.gen_range(0..DIMS.len())];
    let c1 = rng.gen_range(0.01..c1_max);
    let lo = lo.max(2.0 * c1 - 1.0 + 1e-3);
    let tau = rng.gen_range(lo..=hi);
    let ctx = compute_tau(a_for_tau(tau, c1, n)?, n, c1)?;
    debug_assert!(ctx.tau < 0.0);
    Ok(ctx)
}

fn nonpositive_tau_context<R: Rng>(rng: &mut R) -> Result<TauContext> {
    if rng.gen_bool(0.2) {
        let (a, n, c1) = ZERO_TAU[rng.gen_range(0..ZERO_TAU.len())];
        compute_tau(a, n, c1)
    } else {
        negative_tau_context(rng, -0.95, -1e-3, 0.45)
    }
}

fn run_sample(suite: VerifySuite, seed: u64, i: u64) -> Result<Tally> {
    let mut rng = trial_rng(mix_seed(seed, suite.stream(), i));
    let mut tally = Tally {
        runs: 1,
        ..Tally::default()
    };
    match suite {
        VerifySuite::Wolfe => {
            let ctx = random_context(&mut rng)?;
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 2.0), 50)?;
            for w in check_trace_wolfe(&trace, &ctx) {
                tally.checks += 1;
                if !w.all_hold() {
                    tally.violations += 1;
                }
            }
        }
        VerifySuite::Armijo => {
            let ctx = random_context(&mut rng)?;
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 2.0), 50)?;
            for agreement in check_trace_armijo(&trace, &ctx) {
                match agreement {
                    Agreement::Agree => tally.checks += 1,
                    Agreement::Disagree => {
                        tally.checks += 1;
                        tally.violations += 1;
                    }
                    Agreement::Boundary => tally.skipped += 1,
                }
            }
        }
        VerifySuite::Sums => {
            let ctx = random_context(&mut rng)?;
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 2.0), 50)?;
            for check in check_sum_bounds(&trace, &ctx) {
                tally.checks += 1;
                if !check.holds() {
                    tally.violations += 1;
                }
            }
        }
        VerifySuite::Schedule => {
            let ctx = match i % 4 {
                0 => compute_tau(3.0, 4, 0.25)?,
                1 => compute_tau(1.0, 2, 1.0 / 3.0)?,
                2 => compute_tau(2.0, 5, 0.25)?,
                _ => negative_tau_context(&mut rng, -0.9, -1e-3, 0.45)?,
            };
            let x1_0 = sample_start(StartDistribution::NormalStd, 1, &mut rng)[0];
            let (checks, violations) = check_schedule(&ctx, x1_0)?;
            tally.checks += checks;
            tally.violations += violations;
        }
        VerifySuite::Entry => {
            let ctx = nonpositive_tau_context(&mut rng)?;
            let trace = gradient_run(&ctx, &mut rng, (0.5, 3.0), 50)?;
            match check_entry_bound(&trace, &ctx) {
                Some(e) => {
                    tally.checks += 1;
                    if !e.holds {
                        tally.violations += 1;
                    }
                }
                None => tally.skipped += 1,
            }
        }
        VerifySuite::Prediction => {
            // one sampled iteration per run
            let ctx = nonpositive_tau_context(&mut rng)?;
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 2.0), 50)?;
            let accepted: Vec<_> = trace.records.iter().filter(|r| r.step.is_some()).collect();
            if accepted.is_empty() {
                tally.skipped += 1;
            } else {
                let r = accepted[rng.gen_range(0..accepted.len())];
                match predict_step(&ctx, r.x1()) {
                    Ok(p) => {
                        tally.checks += 1;
                        if Some(p.predicted_t) != r.step {
                            tally.violations += 1;
                        }
                    }
                    Err(Error::DyadicBoundary { .. }) => tally.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        VerifySuite::Halving => {
            let (a, n, c1) = ZERO_TAU[(i as usize) % ZERO_TAU.len()];
            let ctx = compute_tau(a, n, c1)?;
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 2.0), 200)?;
            let check = check_step_halving(&trace, &ctx);
            tally.checks += check.checked + 1;
            tally.violations += check.violations;
            if trace.classification != Classification::Failure {
                tally.violations += 1;
            }
        }
        VerifySuite::UnitSteps => {
            let ctx = match i % 3 {
                0 => compute_tau(1.0, 2, 0.1)?,
                1 => compute_tau(2.0, 5, 0.25)?,
                _ => negative_tau_context(&mut rng, -0.95, -0.51, 0.2)?,
            };
            let trace = gradient_run(&ctx, &mut rng, (-1.0, 1.0), 100)?;
            tally.checks += 1;
            let tail_ok = trace.classification != Classification::Failure
                && unit_step_onset(&trace).is_some_and(|onset| onset + 20 <= 100);
            if !tail_ok {
                tally.violations += 1;
            }
        }
    }
    Ok(tally)
}

/// Applies the closed-form steps to the actual update and compares `|x1|`
/// ratios with `C`; for `tau <= -1e-3` also checks `S_100 > 10 S_10`.
fn check_schedule(ctx: &TauContext, x1_0: f64) -> Result<(usize, usize)> {
    let steps = closed_form_schedule(ctx, x1_0, 100)?;
    let c = ctx.contraction_ratio();
    let mut x = vec![0.0; ctx.n];
    x[0] = x1_0;
    let mut checks = 0;
    let mut violations = 0;
    for step in steps.iter().take(50) {
        let e = eval_abs_plus_linear(ctx.a, &x)?;
        let next: Vec<f64> = x.iter().zip(&e.gradient).map(|(xi, gi)| xi - step.t * gi).collect();
        let expected = c * x[0].abs();
        checks += 1;
        if (next[0].abs() - expected).abs() > 1e-12 * expected
            || next[0].signum() == x[0].signum()
        {
            violations += 1;
        }
        x = next;
    }
    if ctx.tau <= -1e-3 {
        let s10: f64 = steps[..10].iter().map(|s| s.t).sum();
        let s100: f64 = steps.iter().map(|s| s.t).sum();
        checks += 1;
        if !(s100 > 10.0 * s10) {
            violations += 1;
        }
    }
    Ok((checks, violations))
}

/// Runs `samples` randomized instances of one suite.
pub fn verify_suite(suite: VerifySuite, samples: usize, seed: u64) -> Result<VerifyReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let tally = (0..samples as u64)
        .into_par_iter()
        .map(|i| run_sample(suite, seed, i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    Ok(VerifyReport {
        suite,
        runs: tally.runs,
        checks: tally.checks,
        violations: tally.violations,
        skipped: tally.skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tau_presets_are_exact() {
        for (a, n, c1) in ZERO_TAU {
            assert_eq!(compute_tau(a, n, c1).unwrap().tau, 0.0);
        }
    }

    #[test]
    fn every_suite_passes_small_samples() {
        for suite in VerifySuite::ALL {
            let report = verify_suite(suite, 40, 1).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.checks > 0, "{report:?}");
        }
    }

    #[test]
    fn names_parse() {
        for suite in VerifySuite::ALL {
            assert_eq!(VerifySuite::parse(suite.name()).unwrap(), suite);
        }
        assert!(VerifySuite::parse("everything").is_err());
    }
}
