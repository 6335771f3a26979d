//! Iterative solvers: gradient, subgradient, BFGS and L-BFGS.
//!
//! The three line-search methods share one driver and differ only in how the
//! search direction is produced from the current gradient and the history of
//! curvature pairs.

mod bfgs;
mod lbfgs;
mod subgradient;

pub use bfgs::{run_bfgs, InverseHessian};
pub use lbfgs::{run_lbfgs, LbfgsMemory};
pub use subgradient::{run_subgradient_method, StepSchedule};

use crate::error::{Error, Result};
use crate::linesearch::{armijo_wolfe_search, LineSearchConfig, LineSearchStatus};
use crate::objective::Objective;
use crate::vector;

/// Which solver produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gradient,
    Subgradient,
    Bfgs,
    Lbfgs { memory: usize, scaled: bool },
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Gradient => write!(f, "gradient"),
            Method::Subgradient => write!(f, "subgradient"),
            Method::Bfgs => write!(f, "bfgs"),
            Method::Lbfgs { memory, scaled } => {
                write!(f, "lbfgs{memory}")?;
                if !scaled {
                    write!(f, "-unscaled")?;
                }
                Ok(())
            }
        }
    }
}

/// State at iterate `k` and the step taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub point: Vec<f64>,
    pub f: f64,
    /// `None` on the final record.
    pub step: Option<f64>,
    /// Sum of the steps taken before this iterate.
    pub cumulative_step_sum: f64,
    /// Evaluations spent before the search from this iterate began.
    pub cumulative_evaluations: usize,
    /// Evaluations spent by the search (or update) from this iterate.
    pub trial_count: usize,
    pub linesearch: Option<LineSearchStatus>,
}

impl IterationRecord {
    pub fn x1(&self) -> f64 {
        self.point[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Reached the target value.
    Success,
    /// A line search exhausted its bisection cap.
    Failure,
    /// Stopped on an iteration or evaluation bound.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    pub final_point: Vec<f64>,
    pub classification: Classification,
    pub seed: u64,
    pub method: Method,
    /// Every objective value computed, in evaluation order.
    pub evaluation_values: Vec<f64>,
}

impl RunTrace {
    pub fn final_value(&self) -> f64 {
        self.records.last().map(|r| r.f).unwrap_or(f64::NAN)
    }

    pub fn total_evaluations(&self) -> usize {
        self.evaluation_values.len()
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().filter_map(|r| r.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_iterations: Option<usize>,
    pub max_evaluations: Option<usize>,
    pub target_f: Option<f64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self::iterations(50)
    }
}

impl StopRule {
    pub fn iterations(max: usize) -> Self {
        Self {
            max_iterations: Some(max),
            max_evaluations: None,
            target_f: None,
        }
    }

    pub fn evaluations(max: usize) -> Self {
        Self {
            max_iterations: None,
            max_evaluations: Some(max),
            target_f: None,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target_f = Some(target);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations.is_none() && self.max_evaluations.is_none() {
            return Err(Error::InvalidConfig(
                "stop rule needs an iteration or evaluation bound".into(),
            ));
        }
        Ok(())
    }

    fn reached(&self, k: usize, evaluations: usize, f: f64) -> Option<Classification> {
        if self.target_f.is_some_and(|target| f <= target) {
            return Some(Classification::Success);
        }
        if self.max_iterations.is_some_and(|m| k >= m)
            || self.max_evaluations.is_some_and(|m| evaluations >= m)
        {
            return Some(Classification::BudgetExhausted);
        }
        None
    }
}

/// Produces search directions from gradients and curvature pairs.
pub(crate) trait DirectionRule {
    fn direction(&self, gradient: &[f64]) -> Vec<f64>;

    fn update(&mut self, s: &[f64], y: &[f64]);

    fn reset(&mut self);
}

struct SteepestDescent;

impl DirectionRule for SteepestDescent {
    fn direction(&self, gradient: &[f64]) -> Vec<f64> {
        vector::scale(-1.0, gradient)
    }

    fn update(&mut self, _s: &[f64], _y: &[f64]) {}

    fn reset(&mut self) {}
}

/// Gradient method `x_{k+1} = x_k - t_k grad f(x_k)` with the bracketing line search.
pub fn run_gradient_method<O: Objective + ?Sized>(
    objective: &O,
    x0: &[f64],
    ls: &LineSearchConfig,
    stop: &StopRule,
) -> Result<RunTrace> {
    run_with_rule(objective, x0, SteepestDescent, Method::Gradient, ls, stop)
}

pub(crate) fn run_with_rule<O, R>(
    objective: &O,
    x0: &[f64],
    mut rule: R,
    method: Method,
    ls: &LineSearchConfig,
    stop: &StopRule,
) -> Result<RunTrace>
where
    O: Objective + ?Sized,
    R: DirectionRule,
{
    ls.validate()?;
    stop.validate()?;
    if x0.len() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            found: x0.len(),
        });
    }
    let mut x = x0.to_vec();
    let mut current = objective.evaluate(&x)?;
    if !current.differentiable {
        return Err(Error::NondifferentiableStart);
    }
    let mut evaluation_values = vec![current.value];
    let mut records = Vec::new();
    let mut step_sum = 0.0;
    let mut k = 0;

    let classification = loop {
        let evaluations = evaluation_values.len();
        if let Some(c) = stop.reached(k, evaluations, current.value) {
            records.push(IterationRecord {
                k,
                point: x.clone(),
                f: current.value,
                step: None,
                cumulative_step_sum: step_sum,
                cumulative_evaluations: evaluations,
                trial_count: 0,
                linesearch: None,
            });
            break c;
        }

        let mut d = rule.direction(&current.gradient);
        let mut slope = vector::dot_unchecked(&current.gradient, &d);
        if !(slope < 0.0) {
            // Lost descent (rounding in the quasi-Newton matrix): restart from steepest descent.
            rule.reset();
            d = vector::scale(-1.0, &current.gradient);
            slope = vector::dot_unchecked(&current.gradient, &d);
            if !(slope < 0.0) {
                // zero gradient
                records.push(IterationRecord {
                    k,
                    point: x.clone(),
                    f: current.value,
                    step: None,
                    cumulative_step_sum: step_sum,
                    cumulative_evaluations: evaluations,
                    trial_count: 0,
                    linesearch: None,
                });
                break Classification::Success;
            }
        }

        let outcome = armijo_wolfe_search(objective, &x, &d, current.value, slope, ls)?;
        evaluation_values.extend(outcome.trials.iter().map(|t| t.value));
        let mut record = IterationRecord {
            k,
            point: x.clone(),
            f: current.value,
            step: outcome.step(),
            cumulative_step_sum: step_sum,
            cumulative_evaluations: evaluations,
            trial_count: outcome.evaluations(),
            linesearch: Some(outcome.status),
        };
        match outcome.status {
            LineSearchStatus::Accepted => {
                let accepted = outcome.accepted.expect("accepted outcome carries a step");
                let s = vector::sub(&accepted.point, &x)?;
                let y = vector::sub(&accepted.evaluation.gradient, &current.gradient)?;
                rule.update(&s, &y);
                step_sum += accepted.t;
                records.push(record);
                x = accepted.point;
                current = accepted.evaluation;
                k += 1;
            }
            LineSearchStatus::BisectionCapReached => {
                record.step = None;
                records.push(record);
                break Classification::Failure;
            }
            LineSearchStatus::DoublingCapReached => {
                return Err(Error::UnboundedAlongDirection { iteration: k });
            }
        }
    };

    Ok(RunTrace {
        records,
        final_point: x,
        classification,
        seed: 0,
        method,
        evaluation_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::ObjectiveSpec;

    fn abs_linear(a: f64, n: usize) -> ObjectiveSpec {
        ObjectiveSpec::abs_plus_linear(a, n).unwrap()
    }

    #[test]
    fn first_gradient_step_from_five_one() {
        let trace = run_gradient_method(
            &abs_linear(2.0, 2),
            &[5.0, 1.0],
            &LineSearchConfig::default(),
            &StopRule::iterations(1),
        )
        .unwrap();
        assert_eq!(trace.records.len(), 2);
        assert_eq!(trace.records[0].step, Some(4.0));
        assert_eq!(trace.records[0].f, 11.0);
        assert_eq!(trace.records[1].point, vec![-3.0, -3.0]);
        assert_eq!(trace.records[1].f, 3.0);
        assert_eq!(trace.records[1].cumulative_step_sum, 4.0);
        assert_eq!(trace.classification, Classification::BudgetExhausted);
        assert_eq!(trace.total_evaluations(), 4);
        assert_eq!(trace.evaluation_values, vec![11.0, 6.0, 1.0, 3.0]);
    }

    #[test]
    fn positive_tau_converges_to_the_kink_and_fails() {
        // a = 5, c1 = 0.1: tau = 0.1 - 0.9 / 25 > 0
        let trace = run_gradient_method(
            &abs_linear(5.0, 2),
            &[0.8, -0.4],
            &LineSearchConfig::default(),
            &StopRule::iterations(200),
        )
        .unwrap();
        assert_eq!(trace.classification, Classification::Failure);
        assert!(trace.final_point[0].abs() < 1e-6);
        let last = trace.records.last().unwrap();
        assert_eq!(last.linesearch, Some(LineSearchStatus::BisectionCapReached));
        assert_eq!(last.step, None);
    }

    #[test]
    fn tau_below_minus_half_takes_unit_steps() {
        // a = 1, c1 = 0.1: tau = -0.8
        let trace = run_gradient_method(
            &abs_linear(1.0, 2),
            &[0.37, 1.2],
            &LineSearchConfig::default(),
            &StopRule::iterations(60),
        )
        .unwrap();
        assert_eq!(trace.classification, Classification::BudgetExhausted);
        let steps: Vec<f64> = trace.steps().collect();
        assert!(steps[steps.len() - 20..].iter().all(|&t| t == 1.0));
        assert!(trace.final_value() < trace.records[0].f - 40.0);
    }

    #[test]
    fn iterates_oscillate_and_tail_coordinates_drop_by_the_step() {
        let trace = run_gradient_method(
            &abs_linear(3.0, 4),
            &[2.3, 0.5, -1.0, 0.25],
            &LineSearchConfig::default().with_c1(0.05),
            &StopRule::iterations(40),
        )
        .unwrap();
        for pair in trace.records.windows(2) {
            let (cur, next) = (&pair[0], &pair[1]);
            let t = cur.step.unwrap();
            assert_eq!(cur.x1().signum(), -next.x1().signum());
            for i in 1..4 {
                let drop = cur.point[i] - next.point[i];
                assert!((drop - t).abs() <= 1e-12 * t.max(cur.point[i].abs()), "{drop} vs {t}");
            }
        }
    }

    #[test]
    fn evaluation_accounting() {
        let trace = run_gradient_method(
            &abs_linear(2.5, 3),
            &[-1.7, 0.2, 0.9],
            &LineSearchConfig::default().with_c1(0.2),
            &StopRule::iterations(50),
        )
        .unwrap();
        let trials: usize = trace.records.iter().map(|r| r.trial_count).sum();
        assert_eq!(trace.total_evaluations(), 1 + trials);
        for pair in trace.records.windows(2) {
            assert_eq!(
                pair[1].cumulative_evaluations,
                pair[0].cumulative_evaluations + pair[0].trial_count
            );
        }
        let failures = trace
            .records
            .iter()
            .filter(|r| r.linesearch == Some(LineSearchStatus::BisectionCapReached))
            .count();
        assert_eq!(failures > 0, trace.classification == Classification::Failure);
    }

    #[test]
    fn rejects_kink_start_and_unbounded_direction() {
        let ls = LineSearchConfig::default();
        assert!(matches!(
            run_gradient_method(&abs_linear(2.0, 2), &[0.0, 1.0], &ls, &StopRule::default()),
            Err(Error::NondifferentiableStart)
        ));
        let mut x0 = vec![0.0; 10];
        x0[0] = 3.0;
        assert!(matches!(
            run_gradient_method(&abs_linear(1.0, 10), &x0, &ls, &StopRule::default()),
            Err(Error::UnboundedAlongDirection { iteration: 0 })
        ));
    }

    #[test]
    fn evaluation_budget_and_target_stop() {
        let spec = ObjectiveSpec::nesterov_max(5).unwrap();
        let x0 = [0.3, -0.8, 1.1, 0.4, -0.2];
        let trace = run_gradient_method(
            &spec,
            &x0,
            &LineSearchConfig::default(),
            &StopRule::evaluations(40),
        )
        .unwrap();
        assert!(trace.total_evaluations() >= 40 || trace.classification == Classification::Failure);
        let trace = run_gradient_method(
            &spec,
            &x0,
            &LineSearchConfig::default(),
            &StopRule::evaluations(1000).with_target(1e9),
        )
        .unwrap();
        assert_eq!(trace.classification, Classification::Success);
        assert_eq!(trace.records.len(), 1);
        assert!(StopRule {
            max_iterations: None,
            max_evaluations: None,
            target_f: Some(0.0)
        }
        .validate()
        .is_err());
    }
}
