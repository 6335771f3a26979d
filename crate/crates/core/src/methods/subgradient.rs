use super::{Classification, IterationRecord, Method, RunTrace, StopRule};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector;

/// Predetermined step lengths, indexed from `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `t_k = 1 / k`: square-summable, not summable.
    Harmonic,
    Constant(f64),
}

impl StepSchedule {
    pub fn step(&self, k: usize) -> f64 {
        match *self {
            StepSchedule::Harmonic => 1.0 / k as f64,
            StepSchedule::Constant(t) => t,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::Harmonic => Ok(()),
            StepSchedule::Constant(t) if t > 0.0 && t.is_finite() => Ok(()),
            StepSchedule::Constant(t) => Err(Error::InvalidConfig(format!(
                "constant step must be positive, got {t}"
            ))),
        }
    }
}

/// `x_{k+1} = x_k - t_k g_k` with `g_k` the returned (sub)gradient; no line
/// search and one evaluation per iteration.
pub fn run_subgradient_method<O: Objective + ?Sized>(
    objective: &O,
    x0: &[f64],
    schedule: StepSchedule,
    stop: &StopRule,
) -> Result<RunTrace> {
    schedule.validate()?;
    stop.validate()?;
    if x0.len() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            found: x0.len(),
        });
    }
    let mut x = x0.to_vec();
    let mut current = objective.evaluate(&x)?;
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
        let t = schedule.step(k + 1);
        let next = vector::axpy(-t, &current.gradient, &x)?;
        records.push(IterationRecord {
            k,
            point: std::mem::replace(&mut x, next),
            f: current.value,
            step: Some(t),
            cumulative_step_sum: step_sum,
            cumulative_evaluations: evaluations,
            trial_count: 1,
            linesearch: None,
        });
        step_sum += t;
        current = objective.evaluate(&x)?;
        evaluation_values.push(current.value);
        k += 1;
    };

    debug_assert_ne!(classification, Classification::Failure);
    Ok(RunTrace {
        records,
        final_point: x,
        classification,
        seed: 0,
        method: Method::Subgradient,
        evaluation_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::ObjectiveSpec;

    #[test]
    fn first_step_uses_unit_length() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 2).unwrap();
        let trace =
            run_subgradient_method(&spec, &[5.0, 1.0], StepSchedule::Harmonic, &StopRule::iterations(2))
                .unwrap();
        assert_eq!(trace.records[1].point, vec![3.0, 0.0]);
        assert_eq!(trace.records[0].step, Some(1.0));
        assert_eq!(trace.records[1].step, Some(0.5));
        assert_eq!(trace.records[2].point, vec![2.0, -0.5]);
        assert_eq!(trace.total_evaluations(), 3);
    }

    #[test]
    fn zero_step_rejected() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 2).unwrap();
        assert!(run_subgradient_method(
            &spec,
            &[5.0, 1.0],
            StepSchedule::Constant(0.0),
            &StopRule::iterations(3)
        )
        .is_err());
    }

    #[test]
    fn moves_through_kinks_with_the_chosen_subgradient() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 2).unwrap();
        // (2, 0) - 1 * (2, 1) lands exactly on the kink; the method keeps going.
        let trace = run_subgradient_method(
            &spec,
            &[2.0, 0.0],
            StepSchedule::Constant(1.0),
            &StopRule::iterations(2),
        )
        .unwrap();
        assert_eq!(trace.records[1].point, vec![0.0, -1.0]);
        assert_eq!(trace.records[2].point, vec![-2.0, -2.0]);
    }

    #[test]
    fn records_every_evaluation_within_budget() {
        let spec = ObjectiveSpec::nesterov_max(100).unwrap();
        let x0: Vec<f64> = (0..100).map(|i| ((i % 7) as f64 - 3.0) * 0.3).collect();
        let trace =
            run_subgradient_method(&spec, &x0, StepSchedule::Harmonic, &StopRule::evaluations(500))
                .unwrap();
        assert_eq!(trace.total_evaluations(), 500);
        assert_eq!(trace.classification, Classification::BudgetExhausted);
        assert_eq!(trace.records.len(), 500);
    }
}
