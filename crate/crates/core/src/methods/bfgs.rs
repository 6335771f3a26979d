use super::{run_with_rule, DirectionRule, Method, RunTrace, StopRule};
use crate::error::Result;
use crate::linesearch::LineSearchConfig;
use crate::objective::Objective;
use crate::vector::{self, dot_unchecked};

/// Relative threshold below which a curvature pair is ignored.
pub(crate) const SKIP_THRESHOLD: f64 = 1e-12;

/// Dense inverse-Hessian approximation, row-major, started at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseHessian {
    n: usize,
    h: Vec<f64>,
    skipped: usize,
}

impl InverseHessian {
    pub fn identity(n: usize) -> Self {
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            h[i * n + i] = 1.0;
        }
        Self { n, h, skipped: 0 }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| dot_unchecked(&self.h[i * self.n..(i + 1) * self.n], v))
            .collect()
    }

    /// Number of pairs rejected by the `s'y` safeguard.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// `H <- (I - rho s y') H (I - rho y s') + rho s s'` with `rho = 1 / s'y`.
    ///
    /// Returns false (and leaves `H` alone) when `s'y <= 1e-12 |s| |y|`.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> bool {
        let sy = dot_unchecked(s, y);
        if sy <= SKIP_THRESHOLD * vector::norm2(s) * vector::norm2(y) {
            self.skipped += 1;
            return false;
        }
        let rho = 1.0 / sy;
        let hy = self.apply(y);
        let yhy = dot_unchecked(y, &hy);
        let coef = rho * rho * yhy + rho;
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                self.h[i * n + j] += coef * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
            }
        }
        true
    }
}

impl DirectionRule for InverseHessian {
    fn direction(&self, gradient: &[f64]) -> Vec<f64> {
        vector::scale(-1.0, &self.apply(gradient))
    }

    fn update(&mut self, s: &[f64], y: &[f64]) {
        InverseHessian::update(self, s, y);
    }

    fn reset(&mut self) {
        let skipped = self.skipped;
        *self = Self::identity(self.n);
        self.skipped = skipped;
    }
}

/// Full BFGS with the bracketing line search, `d_k = -H_k g_k`.
pub fn run_bfgs<O: Objective + ?Sized>(
    objective: &O,
    x0: &[f64],
    ls: &LineSearchConfig,
    stop: &StopRule,
) -> Result<RunTrace> {
    run_with_rule(
        objective,
        x0,
        InverseHessian::identity(objective.dim()),
        Method::Bfgs,
        ls,
        stop,
    )
}
