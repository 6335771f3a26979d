//! Armijo-Wolfe bracketing line search.
//!
//! Starting from `t = initial_step`, a trial failing the sufficient-decrease
//! (Armijo) test becomes the upper end `beta` of the bracket, and a trial that
//! passes Armijo but fails the curvature test becomes the lower end `alpha`.
//! The next trial is the midpoint once `beta` is finite, otherwise `2 * alpha`.
//! The curvature test only runs when the Armijo test has passed.

use crate::error::{Error, Result};
use crate::objective::{Evaluation, Objective};
use crate::vector;

/// Which "step not too short" test is paired with the Armijo condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureMode {
    /// Directional derivative increase; fails at points of nondifferentiability.
    #[default]
    Wolfe,
    /// `f(x + t d) >= f(x) + c2 t g'd`; needs no gradient at the trial point.
    Goldstein,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchConfig {
    pub c1: f64,
    pub c2: f64,
    pub initial_step: f64,
    /// Number of midpoint updates allowed before giving up.
    pub max_bisections: usize,
    pub max_doublings: usize,
    pub curvature_mode: CurvatureMode,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            c1: 0.1,
            c2: 0.5,
            initial_step: 1.0,
            max_bisections: 30,
            max_doublings: 60,
            curvature_mode: CurvatureMode::Wolfe,
        }
    }
}

impl LineSearchConfig {
    pub fn with_c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn with_c2(mut self, c2: f64) -> Self {
        self.c2 = c2;
        self
    }

    pub fn with_max_bisections(mut self, cap: usize) -> Self {
        self.max_bisections = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < c1 < c2 < 1, got c1 = {}, c2 = {}",
                self.c1, self.c2
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "initial step must be positive, got {}",
                self.initial_step
            )));
        }
        if self.max_bisections < 1 || self.max_doublings < 1 {
            return Err(Error::InvalidConfig(
                "bisection and doubling caps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSearchStatus {
    Accepted,
    BisectionCapReached,
    DoublingCapReached,
}

/// One trial step together with the bracket in force when it was tried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub armijo: bool,
    /// `None` when the curvature test was skipped because Armijo failed.
    pub curvature: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptedStep {
    pub t: f64,
    pub point: Vec<f64>,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome {
    pub status: LineSearchStatus,
    pub accepted: Option<AcceptedStep>,
    pub trials: Vec<Trial>,
}

impl LineSearchOutcome {
    pub fn step(&self) -> Option<f64> {
        self.accepted.as_ref().map(|a| a.t)
    }

    /// Number of objective evaluations, one per trial.
    pub fn evaluations(&self) -> usize {
        self.trials.len()
    }
}

/// Sufficient decrease: `f(x + t d) <= f(x) + c1 t g'd`.
pub fn check_armijo(f0: f64, g0_dot_d: f64, t: f64, ft: f64, c1: f64) -> bool {
    ft <= f0 + c1 * t * g0_dot_d
}

/// Wolfe or Goldstein test at the trial point, depending on `config`.
pub fn check_curvature(
    eval_t: &Evaluation,
    d: &[f64],
    g0_dot_d: f64,
    f0: f64,
    t: f64,
    config: &LineSearchConfig,
) -> bool {
    match config.curvature_mode {
        CurvatureMode::Wolfe => {
            eval_t.differentiable
                && vector::dot_unchecked(&eval_t.gradient, d) >= config.c2 * g0_dot_d
        }
        CurvatureMode::Goldstein => eval_t.value >= f0 + config.c2 * t * g0_dot_d,
    }
}

/// Runs the bracketing search from `x` along `d`.
///
/// `f0` and `g0_dot_d` are the value and directional derivative at `x`;
/// `g0_dot_d` must be negative.
pub fn armijo_wolfe_search<O: Objective + ?Sized>(
    objective: &O,
    x: &[f64],
    d: &[f64],
    f0: f64,
    g0_dot_d: f64,
    config: &LineSearchConfig,
) -> Result<LineSearchOutcome> {
    config.validate()?;
    if x.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: d.len(),
        });
    }
    if !(g0_dot_d < 0.0) {
        return Err(Error::InvalidConfig(format!(
            "search direction is not a descent direction (g'd = {g0_dot_d})"
        )));
    }

    let mut alpha = 0.0_f64;
    let mut beta = f64::INFINITY;
    let mut t = config.initial_step;
    let mut bisections = 0;
    let mut doublings = 0;
    let mut trials = Vec::new();

    loop {
        let point = vector::axpy(t, d, x)?;
        let evaluation = objective.evaluate(&point)?;
        let armijo = check_armijo(f0, g0_dot_d, t, evaluation.value, config.c1);
        let curvature =
            armijo.then(|| check_curvature(&evaluation, d, g0_dot_d, f0, t, config));
        trials.push(Trial {
            t,
            lower: alpha,
            upper: beta,
            value: evaluation.value,
            armijo,
            curvature,
        });

        match curvature {
            None => beta = t,
            Some(false) => alpha = t,
            Some(true) => {
                return Ok(LineSearchOutcome {
                    status: LineSearchStatus::Accepted,
                    accepted: Some(AcceptedStep {
                        t,
                        point,
                        evaluation,
                    }),
                    trials,
                })
            }
        }

        if beta < f64::INFINITY {
            if bisections == config.max_bisections {
                return Ok(LineSearchOutcome {
                    status: LineSearchStatus::BisectionCapReached,
                    accepted: None,
                    trials,
                });
            }
            bisections += 1;
            t = (alpha + beta) / 2.0;
        } else {
            if doublings == config.max_doublings {
                return Ok(LineSearchOutcome {
                    status: LineSearchStatus::DoublingCapReached,
                    accepted: None,
                    trials,
                });
            }
            doublings += 1;
            t = 2.0 * alpha;
        }
    }
}
