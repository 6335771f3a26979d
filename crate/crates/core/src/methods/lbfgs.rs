use std::collections::VecDeque;

use super::bfgs::SKIP_THRESHOLD;
use super::{run_with_rule, DirectionRule, Method, RunTrace, StopRule};
use crate::error::{Error, Result};
use crate::linesearch::LineSearchConfig;
use crate::objective::Objective;
use crate::vector::{self, dot_unchecked};

#[derive(Debug, Clone)]
struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// The last `m` curvature pairs, applied with the two-loop recursion.
#[derive(Debug, Clone)]
pub struct LbfgsMemory {
    capacity: usize,
    scaled: bool,
    pairs: VecDeque<Pair>,
}

impl LbfgsMemory {
    pub fn new(capacity: usize, scaled: bool) -> Result<Self> {
        if capacity < 1 {
            return Err(Error::InvalidConfig("L-BFGS memory must be at least 1".into()));
        }
        Ok(Self {
            capacity,
            scaled,
            pairs: VecDeque::with_capacity(capacity),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Stores `(s, y)` unless `s'y <= 1e-12 |s| |y|`, evicting the oldest pair when full.
    pub fn push(&mut self, s: &[f64], y: &[f64]) -> bool {
        let sy = dot_unchecked(s, y);
        if sy <= SKIP_THRESHOLD * vector::norm2(s) * vector::norm2(y) {
            return false;
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back(Pair {
            s: s.to_vec(),
            y: y.to_vec(),
            rho: 1.0 / sy,
        });
        true
    }

    /// `H_k g` where the initial matrix is `gamma I`, `gamma = s'y / y'y` of the
    /// newest pair when scaling is on, otherwise the identity.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let mut q = g.to_vec();
        let mut alphas = vec![0.0; self.pairs.len()];
        for (i, p) in self.pairs.iter().enumerate().rev() {
            let alpha = p.rho * dot_unchecked(&p.s, &q);
            alphas[i] = alpha;
            for (qj, yj) in q.iter_mut().zip(&p.y) {
                *qj -= alpha * yj;
            }
        }
        let gamma = match (self.scaled, self.pairs.back()) {
            (true, Some(p)) => 1.0 / (p.rho * dot_unchecked(&p.y, &p.y)),
            _ => 1.0,
        };
        let mut r = vector::scale(gamma, &q);
        for (p, alpha) in self.pairs.iter().zip(&alphas) {
            let beta = p.rho * dot_unchecked(&p.y, &r);
            for (rj, sj) in r.iter_mut().zip(&p.s) {
                *rj += (alpha - beta) * sj;
            }
        }
        r
    }
}

impl DirectionRule for LbfgsMemory {
    fn direction(&self, gradient: &[f64]) -> Vec<f64> {
        vector::scale(-1.0, &self.apply(gradient))
    }

    fn update(&mut self, s: &[f64], y: &[f64]) {
        self.push(s, y);
    }

    fn reset(&mut self) {
        self.pairs.clear();
    }
}

/// Limited-memory BFGS with the bracketing line search.
pub fn run_lbfgs<O: Objective + ?Sized>(
    objective: &O,
    x0: &[f64],
    memory: usize,
    scaled: bool,
    ls: &LineSearchConfig,
    stop: &StopRule,
) -> Result<RunTrace> {
    let rule = LbfgsMemory::new(memory, scaled)?;
    run_with_rule(
        objective,
        x0,
        rule,
        Method::Lbfgs { memory, scaled },
        ls,
        stop,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{run_bfgs, run_gradient_method, InverseHessian};
    use crate::objective::{Evaluation, ObjectiveSpec};

    /// `0.5 x'Ax - b'x` with a fixed SPD `A`.
    struct Quadratic {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    }

    impl Quadratic {
        fn probe() -> Self {
            Self {
                a: vec![
                    vec![4.0, 1.0, 0.0, 0.5],
                    vec![1.0, 3.0, 0.2, 0.0],
                    vec![0.0, 0.2, 2.0, 0.3],
                    vec![0.5, 0.0, 0.3, 1.5],
                ],
                b: vec![1.0, -2.0, 0.5, 3.0],
            }
        }
    }

    impl Objective for Quadratic {
        fn dim(&self) -> usize {
            self.b.len()
        }

        fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
            let ax: Vec<f64> = self.a.iter().map(|row| dot_unchecked(row, x)).collect();
            let value = 0.5 * dot_unchecked(x, &ax) - dot_unchecked(&self.b, x);
            let gradient = ax.iter().zip(&self.b).map(|(p, q)| p - q).collect();
            Ok(Evaluation {
                value,
                gradient,
                differentiable: true,
            })
        }
    }

    fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
        let scale = vector::norm2(a).max(vector::norm2(b)).max(1e-300);
        vector::norm2(&vector::sub(a, b).unwrap()) <= tol * scale
    }

    #[test]
    fn unscaled_two_loop_matches_dense_bfgs_directions() {
        let q = Quadratic::probe();
        let x0 = [2.0, 1.0, -1.0, 0.5];
        let ls = LineSearchConfig::default();
        let trace = run_bfgs(&q, &x0, &ls, &StopRule::iterations(5)).unwrap();
        let mut dense = InverseHessian::identity(4);
        let mut memory = LbfgsMemory::new(10, false).unwrap();
        for pair in trace.records.windows(2) {
            let g0 = q.evaluate(&pair[0].point).unwrap().gradient;
            assert!(rel_close(&dense.apply(&g0), &memory.apply(&g0), 1e-10));
            let g1 = q.evaluate(&pair[1].point).unwrap().gradient;
            let s = vector::sub(&pair[1].point, &pair[0].point).unwrap();
            let y = vector::sub(&g1, &g0).unwrap();
            dense.update(&s, &y);
            memory.push(&s, &y);
        }

        let limited = run_lbfgs(&q, &x0, 10, false, &ls, &StopRule::iterations(5)).unwrap();
        assert_eq!(limited.records.len(), trace.records.len());
        for (a, b) in limited.records.iter().zip(&trace.records) {
            assert!(rel_close(&a.point, &b.point, 1e-10));
        }
    }

    #[test]
    fn empty_memory_gives_gradient_step() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 3).unwrap();
        let x0 = [1.7, 0.2, -0.4];
        let ls = LineSearchConfig::default();
        let stop = StopRule::iterations(1);
        let l = run_lbfgs(&spec, &x0, 5, false, &ls, &stop).unwrap();
        let g = run_gradient_method(&spec, &x0, &ls, &stop).unwrap();
        assert_eq!(l.records, g.records);
        let l = run_lbfgs(&spec, &x0, 5, true, &ls, &stop).unwrap();
        assert_eq!(l.records, g.records);
    }

    #[test]
    fn memory_is_bounded_and_scaling_uses_newest_pair() {
        let mut m = LbfgsMemory::new(2, true).unwrap();
        assert!(m.is_empty());
        m.push(&[1.0, 0.0], &[2.0, 0.0]);
        m.push(&[0.0, 1.0], &[0.0, 4.0]);
        m.push(&[1.0, 1.0], &[1.0, 3.0]);
        assert_eq!(m.len(), 2);
        assert!(!m.push(&[1.0, 0.0], &[-1.0, 0.0]));
        assert_eq!(m.len(), 2);

        // one pair, scaled: H g = gamma g + corrections with gamma = s'y / y'y
        let mut one = LbfgsMemory::new(3, true).unwrap();
        one.push(&[1.0, 0.0], &[2.0, 0.0]);
        let hg = one.apply(&[0.0, 1.0]);
        assert_eq!(hg, vec![0.0, 0.5]);
        assert!(LbfgsMemory::new(0, true).is_err());
    }
}
