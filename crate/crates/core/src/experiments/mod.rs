//! Seeded Monte-Carlo experiments.
//!
//! Every trial owns a ChaCha8 generator seeded from
//! `mix_seed(base_seed, grid_index, trial_index)`, so results do not depend on
//! the number of worker threads or on scheduling order.

mod basin;
mod compare;
mod sweep;
mod verify;

pub use basin::{basin_config, basin_scatter, BasinPoint, BasinResult, BASIN_BOX, BASIN_C1, BASIN_TAUS};
pub use compare::{compare_methods, ComparePreset, MethodHistory};
pub use sweep::{bisection_cap_sensitivity, sweep_failure_rate, CapRow, SweepResult, SweepRow};
pub use verify::{verify_suite, VerifyReport, VerifySuite};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::linesearch::{LineSearchConfig, LineSearchStatus};
use crate::methods::{run_gradient_method, RunTrace, StopRule};
use crate::objective::ObjectiveSpec;

/// Where starting points come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartDistribution {
    /// Independent standard normal coordinates.
    NormalStd,
    /// Independent uniform coordinates in the open interval `(lo, hi)`.
    UniformBox { lo: f64, hi: f64 },
}

/// Settings shared by all trials of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub base_seed: u64,
    pub start: StartDistribution,
    pub ls: LineSearchConfig,
    pub stop: StopRule,
    pub n: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 5000,
            base_seed: 0,
            start: StartDistribution::NormalStd,
            ls: LineSearchConfig::default(),
            stop: StopRule::iterations(50),
            n: 2,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n must be at least 2, got {}", self.n)));
        }
        if let StartDistribution::UniformBox { lo, hi } = self.start {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidConfig(format!("invalid box ({lo}, {hi})")));
            }
        }
        self.ls.validate()?;
        self.stop.validate()
    }
}

/// One `(a, c1)` grid point for the abs-plus-linear objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub a: f64,
    pub c1: f64,
}

impl ProblemParams {
    /// Rejects `a < sqrt(n - 1)`, for which the objective is unbounded along
    /// the first search direction.
    pub fn check(&self, n: usize) -> Result<ObjectiveSpec> {
        let spec = ObjectiveSpec::abs_plus_linear(self.a, n)?;
        if !spec.bounded_along_rays() {
            return Err(Error::InvalidConfig(format!(
                "a = {} is below sqrt(n - 1) = {}",
                self.a,
                ((n - 1) as f64).sqrt()
            )));
        }
        Ok(spec)
    }
}

/// Binary outcome of one experimental run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Failure => "failure",
        }
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed derived from the experiment seed and the trial's position.
pub fn mix_seed(base_seed: u64, grid_index: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ grid_index) ^ trial_index)
}

pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a starting point, redrawing in the (probability-zero) event `x1 = 0`.
pub fn sample_start<R: Rng + ?Sized>(kind: StartDistribution, n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let x: Vec<f64> = match kind {
            StartDistribution::NormalStd => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
            StartDistribution::UniformBox { lo, hi } => {
                let dist = Uniform::new(lo, hi);
                (0..n)
                    .map(|_| loop {
                        let v = rng.sample(dist);
                        if v != lo {
                            break v;
                        }
                    })
                    .collect()
            }
        };
        if x[0] != 0.0 {
            return x;
        }
    }
}

/// Failure iff some line search hit its bisection cap within the iteration bound.
pub fn classify_run(trace: &RunTrace, stop: &StopRule) -> Outcome {
    let bound = stop.max_iterations.unwrap_or(usize::MAX);
    let failed = trace
        .records
        .iter()
        .any(|r| r.k <= bound && r.linesearch == Some(LineSearchStatus::BisectionCapReached));
    if failed {
        Outcome::Failure
    } else {
        Outcome::Success
    }
}

/// One seeded gradient-method run on the abs-plus-linear objective.
pub fn run_trial(
    config: &ExperimentConfig,
    params: ProblemParams,
    grid_index: u64,
    trial_index: u64,
) -> Result<RunTrace> {
    let spec = params.check(config.n)?;
    let seed = mix_seed(config.base_seed, grid_index, trial_index);
    let mut rng = trial_rng(seed);
    let x0 = sample_start(config.start, config.n, &mut rng);
    let ls = config.ls.with_c1(params.c1);
    let mut trace = run_gradient_method(&spec, &x0, &ls, &config.stop)?;
    trace.seed = seed;
    Ok(trace)
}

/// Single trajectory from a standard-normal start.
pub fn run_trajectory(config: &ExperimentConfig, params: ProblemParams) -> Result<RunTrace> {
    config.validate()?;
    run_trial(config, params, 0, 0)
}
