use std::fmt;

use rayon::prelude::*;

use super::{mix_seed, sample_start, trial_rng, StartDistribution};
use crate::error::{Error, Result};
use crate::linesearch::LineSearchConfig;
use crate::methods::{
    run_bfgs, run_gradient_method, run_lbfgs, run_subgradient_method, RunTrace, StepSchedule,
    StopRule,
};
use crate::objective::ObjectiveSpec;

/// The five solvers of the method comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparePreset {
    /// `t_k = 1 / k`.
    Subgradient,
    Gradient,
    Lbfgs5,
    Lbfgs10,
    Bfgs,
}

impl ComparePreset {
    pub const ALL: [ComparePreset; 5] = [
        ComparePreset::Subgradient,
        ComparePreset::Gradient,
        ComparePreset::Lbfgs5,
        ComparePreset::Lbfgs10,
        ComparePreset::Bfgs,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ComparePreset::Subgradient => "subgradient",
            ComparePreset::Gradient => "gradient",
            ComparePreset::Lbfgs5 => "lbfgs5",
            ComparePreset::Lbfgs10 => "lbfgs10",
            ComparePreset::Bfgs => "bfgs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method '{s}'")))
    }

    fn run(&self, spec: &ObjectiveSpec, x0: &[f64], ls: &LineSearchConfig, stop: &StopRule) -> Result<RunTrace> {
        match self {
            ComparePreset::Subgradient => run_subgradient_method(spec, x0, StepSchedule::Harmonic, stop),
            ComparePreset::Gradient => run_gradient_method(spec, x0, ls, stop),
            ComparePreset::Lbfgs5 => run_lbfgs(spec, x0, 5, true, ls, stop),
            ComparePreset::Lbfgs10 => run_lbfgs(spec, x0, 10, true, ls, stop),
            ComparePreset::Bfgs => run_bfgs(spec, x0, ls, stop),
        }
    }
}

impl fmt::Display for ComparePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Every function value a method computed, line-search trials included,
/// truncated at the evaluation budget. Entry `i` is evaluation `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodHistory {
    pub preset: ComparePreset,
    pub c1: f64,
    pub values: Vec<f64>,
    pub error: Option<String>,
}

impl MethodHistory {
    pub fn final_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn best_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }
}

/// Runs each preset on the max-type test function from one shared normal start.
pub fn compare_methods(
    n: usize,
    seed: u64,
    ls: &LineSearchConfig,
    budget: usize,
    presets: &[ComparePreset],
) -> Result<Vec<MethodHistory>> {
    ls.validate()?;
    if presets.is_empty() {
        return Err(Error::InvalidConfig("no methods selected".into()));
    }
    let stop = StopRule::evaluations(budget);
    stop.validate()?;
    let spec = ObjectiveSpec::nesterov_max(n)?;
    let x0 = sample_start(StartDistribution::NormalStd, n, &mut trial_rng(mix_seed(seed, 0, 0)));
    Ok(presets
        .par_iter()
        .map(|preset| match preset.run(&spec, &x0, ls, &stop) {
            Ok(trace) => {
                let mut values = trace.evaluation_values;
                values.truncate(budget);
                MethodHistory {
                    preset: *preset,
                    c1: ls.c1,
                    values,
                    error: None,
                }
            }
            Err(e) => MethodHistory {
                preset: *preset,
                c1: ls.c1,
                values: Vec::new(),
                error: Some(e.to_string()),
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histories_respect_budget_and_share_start() {
        let ls = LineSearchConfig::default();
        let res = compare_methods(10, 3, &ls, 200, &ComparePreset::ALL).unwrap();
        assert_eq!(res.len(), 5);
        let f0 = res[0].values[0];
        for h in &res {
            assert!(h.error.is_none());
            assert!(!h.values.is_empty() && h.values.len() <= 200);
            assert_eq!(h.values[0], f0);
        }
        assert_eq!(res[0].values.len(), 200);
    }

    #[test]
    fn labels_round_trip() {
        for p in ComparePreset::ALL {
            assert_eq!(ComparePreset::parse(p.label()).unwrap(), p);
        }
        assert!(ComparePreset::parse("newton").is_err());
    }
}
