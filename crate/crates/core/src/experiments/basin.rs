use rayon::prelude::*;

use super::{classify_run, run_trial, ExperimentConfig, Outcome, ProblemParams, StartDistribution};
use crate::error::{Error, Result};
use crate::theory::a_for_tau;

/// Negative τ values used for the success/failure scatter.
pub const BASIN_TAUS: [f64; 3] = [-0.1, -0.01, -0.001];
pub const BASIN_C1: f64 = 0.05;
pub const BASIN_BOX: (f64, f64) = (-100.0, 100.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinPoint {
    pub u0: f64,
    pub v0: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinResult {
    pub tau: f64,
    pub a: f64,
    pub c1: f64,
    pub points: Vec<BasinPoint>,
}

impl BasinResult {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.outcome == Outcome::Failure).count()
    }

    pub fn failure_rate(&self) -> f64 {
        self.failures() as f64 / self.points.len() as f64
    }
}

/// Labels uniform-box starts in the plane with `a = sqrt((1 - c1) / (c1 - tau))`.
///
/// `config.start` is expected to be a box; a normal start is accepted but
/// differs from the preset.
pub fn basin_scatter(config: &ExperimentConfig, tau: f64, c1: f64) -> Result<BasinResult> {
    config.validate()?;
    if config.n != 2 {
        return Err(Error::InvalidConfig(format!("basin scatter needs n = 2, got {}", config.n)));
    }
    let a = a_for_tau(tau, c1, 2)?;
    let params = ProblemParams { a, c1 };
    config.ls.with_c1(c1).validate()?;
    params.check(2)?;
    let points = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let trace = run_trial(config, params, 0, trial)?;
            let x0 = &trace.records[0].point;
            Ok(BasinPoint {
                u0: x0[0],
                v0: x0[1],
                outcome: classify_run(&trace, &config.stop),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasinResult { tau, a, c1, points })
}

/// Box-start configuration matching the scatter preset.
pub fn basin_config(trials: usize, base_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        base_seed,
        start: StartDistribution::UniformBox {
            lo: BASIN_BOX.0,
            hi: BASIN_BOX.1,
        },
        n: 2,
        ..ExperimentConfig::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_every_start_reproducibly() {
        let cfg = basin_config(50, 3);
        let a = basin_scatter(&cfg, -0.01, BASIN_C1).unwrap();
        assert_eq!(a.points.len(), 50);
        assert!(a.points.iter().all(|p| p.u0.abs() < 100.0 && p.v0.abs() < 100.0));
        assert_eq!(a, basin_scatter(&cfg, -0.01, BASIN_C1).unwrap());
        assert!((a.a - (0.95f64 / 0.06).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn requires_plane() {
        let cfg = ExperimentConfig {
            n: 3,
            ..basin_config(5, 0)
        };
        assert!(basin_scatter(&cfg, -0.1, BASIN_C1).is_err());
    }
}
