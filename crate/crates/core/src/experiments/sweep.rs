use rayon::prelude::*;

use super::{classify_run, run_trial, ExperimentConfig, Outcome, ProblemParams};
use crate::error::Result;
use crate::theory::compute_tau;

/// Aggregated outcomes at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub c1: f64,
    pub tau: f64,
    pub failures: usize,
    pub successes: usize,
    /// Runs that ended in an error (unbounded direction); excluded from both counts.
    pub errors: usize,
    pub trials: usize,
}

impl SweepRow {
    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub(super) fn run_grid_point(
    config: &ExperimentConfig,
    params: ProblemParams,
    grid_index: u64,
) -> Result<SweepRow> {
    params.check(config.n)?;
    let ctx = compute_tau(params.a, config.n, params.c1)?;
    let outcomes: Vec<Option<Outcome>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            run_trial(config, params, grid_index, trial)
                .ok()
                .map(|trace| classify_run(&trace, &config.stop))
        })
        .collect();
    let failures = outcomes.iter().filter(|o| **o == Some(Outcome::Failure)).count();
    let successes = outcomes.iter().filter(|o| **o == Some(Outcome::Success)).count();
    Ok(SweepRow {
        a: params.a,
        c1: params.c1,
        tau: ctx.tau,
        failures,
        successes,
        errors: config.trials - failures - successes,
        trials: config.trials,
    })
}

/// Failure rate of the gradient method at each `(a, c1)` grid point.
pub fn sweep_failure_rate(config: &ExperimentConfig, grid: &[ProblemParams]) -> Result<SweepResult> {
    config.validate()?;
    if grid.is_empty() {
        return Err(crate::error::Error::InvalidConfig("sweep grid is empty".into()));
    }
    for p in grid {
        config.ls.with_c1(p.c1).validate()?;
        p.check(config.n)?;
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &p)| run_grid_point(config, p, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapRow {
    pub max_bisections: usize,
    pub row: SweepRow,
}

/// Repeats one grid point under different bisection caps with identical seeds.
pub fn bisection_cap_sensitivity(
    config: &ExperimentConfig,
    params: ProblemParams,
    caps: &[usize],
) -> Result<Vec<CapRow>> {
    config.validate()?;
    caps.iter()
        .map(|&cap| {
            let capped = ExperimentConfig {
                ls: config.ls.with_max_bisections(cap),
                ..*config
            };
            capped.validate()?;
            Ok(CapRow {
                max_bisections: cap,
                row: run_grid_point(&capped, params, 0)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::StartDistribution;

    fn small(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            trials,
            base_seed: 11,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn extreme_tau_rates() {
        let grid = [
            ProblemParams { a: 6.0, c1: 0.05 },
            ProblemParams { a: 1.0, c1: 0.1 },
        ];
        let res = sweep_failure_rate(&small(100), &grid).unwrap();
        assert!(res.rows[0].tau > 0.0);
        assert_eq!(res.rows[0].failure_rate(), 1.0);
        assert!(res.rows[1].tau <= -0.5);
        assert_eq!(res.rows[1].failure_rate(), 0.0);
        for row in &res.rows {
            assert_eq!(row.failures + row.successes, row.trials);
            assert_eq!(row.errors, 0);
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let grid = [ProblemParams { a: 2.3, c1: 0.15 }];
        let cfg = ExperimentConfig {
            start: StartDistribution::UniformBox { lo: -100.0, hi: 100.0 },
            ..small(64)
        };
        let a = sweep_failure_rate(&cfg, &grid).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sweep_failure_rate(&cfg, &grid).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(sweep_failure_rate(&small(10), &[]).is_err());
        assert!(sweep_failure_rate(&small(10), &[ProblemParams { a: 2.0, c1: 0.7 }]).is_err());
        let cfg = ExperimentConfig { n: 10, ..small(10) };
        assert!(sweep_failure_rate(&cfg, &[ProblemParams { a: 2.0, c1: 0.1 }]).is_err());
    }

    #[test]
    fn cap_rows_share_seeds() {
        let rows = bisection_cap_sensitivity(&small(40), ProblemParams { a: 1.0, c1: 0.1 }, &[15, 30, 50])
            .unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.row.failures == 0));
    }
}
