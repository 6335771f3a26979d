//! Objective functions and their (sub)gradients.
//!
//! Two objectives are provided: `a|x1| + x2 + ... + xn`, which is unbounded
//! below and kinked along `x1 = 0`, and Nesterov's ill-conditioned max
//! function `max{|x1|, |x_i - 2 x_{i-1}|}`.

use crate::error::{Error, Result};

/// Value, gradient and differentiability flag at a query point.
///
/// When `differentiable` is false the gradient is a fixed subgradient
/// selection (sgn(0) = +1, lowest maximizing index).
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub differentiable: bool,
}

/// Anything the solvers can minimize.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> Result<Evaluation>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind {
    AbsPlusLinear { a: f64 },
    NesterovMax,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub n: usize,
}

impl ObjectiveSpec {
    pub fn abs_plus_linear(a: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "abs-plus-linear objective needs n >= 2, got {n}"
            )));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidConfig(format!("a must be positive, got {a}")));
        }
        Ok(Self {
            kind: ObjectiveKind::AbsPlusLinear { a },
            n,
        })
    }

    pub fn nesterov_max(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("nesterov objective needs n >= 1".into()));
        }
        Ok(Self {
            kind: ObjectiveKind::NesterovMax,
            n,
        })
    }

    /// The slope parameter `a` for the abs-plus-linear objective.
    pub fn a(&self) -> Option<f64> {
        match self.kind {
            ObjectiveKind::AbsPlusLinear { a } => Some(a),
            ObjectiveKind::NesterovMax => None,
        }
    }

    /// Whether `a >= sqrt(n-1)`, i.e. the objective is bounded below along
    /// every negative gradient ray. Always true for the max function.
    pub fn bounded_along_rays(&self) -> bool {
        match self.kind {
            ObjectiveKind::AbsPlusLinear { a } => a * a >= (self.n - 1) as f64,
            ObjectiveKind::NesterovMax => true,
        }
    }
}

impl Objective for ObjectiveSpec {
    fn dim(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        match self.kind {
            ObjectiveKind::AbsPlusLinear { a } => eval_abs_plus_linear(a, x),
            ObjectiveKind::NesterovMax => eval_nesterov_max(x),
        }
    }
}

/// `sgn` with the convention sgn(0) = +1.
pub fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn eval_abs_plus_linear(a: f64, x: &[f64]) -> Result<Evaluation> {
    if x.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: x.len(),
        });
    }
    let mut value = a * x[0].abs();
    for xi in &x[1..] {
        value += xi;
    }
    let mut gradient = vec![1.0; x.len()];
    gradient[0] = sign(x[0]) * a;
    Ok(Evaluation {
        value,
        gradient,
        differentiable: x[0] != 0.0,
    })
}

pub fn eval_nesterov_max(x: &[f64]) -> Result<Evaluation> {
    let n = x.len();
    if n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    // Term 0 is |x_1|; term i (i >= 1) is |x_{i+1} - 2 x_i| in 1-based notation.
    let inner = |i: usize| if i == 0 { x[0] } else { x[i] - 2.0 * x[i - 1] };
    let mut best = 0;
    let mut best_value = inner(0).abs();
    let mut tied = false;
    for i in 1..n {
        let v = inner(i).abs();
        if v > best_value {
            best = i;
            best_value = v;
            tied = false;
        } else if v == best_value {
            tied = true;
        }
    }
    let s = sign(inner(best));
    let mut gradient = vec![0.0; n];
    gradient[best] = s;
    if best > 0 {
        gradient[best - 1] = -2.0 * s;
    }
    Ok(Evaluation {
        value: best_value,
        gradient,
        differentiable: !tied && inner(best) != 0.0,
    })
}

/// The point `x_1 = 1, x_i = 2 x_{i-1} + 1`, i.e. `x_i = 2^i - 1`, on which
/// the max function equals 1 despite an inf-norm near `2^n`.
pub fn nesterov_hard_point(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidConfig("hard point needs n >= 1".into()));
    }
    if n > 62 {
        return Err(Error::HardPointOverflow(n));
    }
    Ok((1..=n).map(|i| ((1u64 << i) - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;
    use proptest::prelude::*;

    #[test]
    fn abs_plus_linear_examples() {
        let e = eval_abs_plus_linear(2.0, &[5.0, 1.0]).unwrap();
        assert_eq!(e.value, 11.0);
        assert_eq!(e.gradient, vec![2.0, 1.0]);
        assert!(e.differentiable);

        let e = eval_abs_plus_linear(2.0, &[0.0, 0.0]).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.gradient, vec![2.0, 1.0]);
        assert!(!e.differentiable);

        let e = eval_abs_plus_linear(5.0, &[-1.0, 3.0, 4.0]).unwrap();
        assert_eq!(e.value, 12.0);
        assert_eq!(e.gradient, vec![-5.0, 1.0, 1.0]);
        assert!(e.differentiable);
    }

    #[test]
    fn spec_rejects_wrong_dimension() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 3).unwrap();
        assert!(matches!(
            spec.evaluate(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert!(ObjectiveSpec::abs_plus_linear(2.0, 1).is_err());
    }

    #[test]
    fn nesterov_examples() {
        let e = eval_nesterov_max(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(e.value, 1.0);

        let e = eval_nesterov_max(&[1.0, 3.0, 7.0]).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(!e.differentiable);
        // lowest maximizing index is |x1|
        assert_eq!(e.gradient, vec![1.0, 0.0, 0.0]);

        let e = eval_nesterov_max(&[0.0; 4]).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(!e.differentiable);

        let e = eval_nesterov_max(&[0.5, 3.0, 1.0]).unwrap();
        // terms: 0.5, |3 - 1| = 2, |1 - 6| = 5
        assert_eq!(e.value, 5.0);
        assert_eq!(e.gradient, vec![0.0, 2.0, -1.0]);
        assert!(e.differentiable);
    }

    #[test]
    fn hard_point() {
        assert_eq!(nesterov_hard_point(1).unwrap(), vec![1.0]);
        assert_eq!(nesterov_hard_point(3).unwrap(), vec![1.0, 3.0, 7.0]);
        let x = nesterov_hard_point(10).unwrap();
        assert_eq!(*x.last().unwrap(), 1023.0);
        assert_eq!(eval_nesterov_max(&x).unwrap().value, 1.0);
        assert!(matches!(
            nesterov_hard_point(63),
            Err(Error::HardPointOverflow(63))
        ));
    }

    #[test]
    fn directional_derivative_along_negative_gradient() {
        for (a, x) in [(2.0, vec![5.0, 1.0]), (3.0, vec![-0.2, 4.0, -1.0, 2.0])] {
            let e = eval_abs_plus_linear(a, &x).unwrap();
            let d = vector::scale(-1.0, &e.gradient);
            let slope = vector::dot(&e.gradient, &d).unwrap();
            assert_eq!(slope, -(a * a + (x.len() - 1) as f64));
        }
    }

    fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, n)
    }

    fn specs() -> impl Strategy<Value = (ObjectiveSpec, usize)> {
        (2usize..6, 1.0f64..8.0, any::<bool>()).prop_map(|(n, a, nesterov)| {
            let spec = if nesterov {
                ObjectiveSpec::nesterov_max(n).unwrap()
            } else {
                ObjectiveSpec::abs_plus_linear(a, n).unwrap()
            };
            (spec, n)
        })
    }

    proptest! {
        #[test]
        fn convex_along_segments(
            (spec, x, y) in specs().prop_flat_map(|(s, n)| (Just(s), point(n), point(n))),
            lambda in 0.0f64..=1.0,
        ) {
            let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
            let fz = spec.evaluate(&z).unwrap().value;
            let fx = spec.evaluate(&x).unwrap().value;
            let fy = spec.evaluate(&y).unwrap().value;
            let scale = 1.0 + fx.abs() + fy.abs();
            prop_assert!(fz <= lambda * fx + (1.0 - lambda) * fy + 1e-12 * scale);
        }

        #[test]
        fn subgradient_inequality(
            (spec, x, z) in specs().prop_flat_map(|(s, n)| (Just(s), point(n), point(n))),
        ) {
            let e = spec.evaluate(&x).unwrap();
            let xz = vector::axpy(1.0, &z, &x).unwrap();
            let fxz = spec.evaluate(&xz).unwrap().value;
            let lin = e.value + vector::dot(&e.gradient, &z).unwrap();
            prop_assert!(fxz >= lin - 1e-12 * (1.0 + fxz.abs() + lin.abs()));
        }

        #[test]
        fn gradient_matches_central_differences(
            (spec, x) in specs().prop_flat_map(|(s, n)| (Just(s), point(n))),
        ) {
            let e = spec.evaluate(&x).unwrap();
            let h = 1e-7 * (1.0 + vector::inf_norm(&x));
            for i in 0..x.len() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let ep = spec.evaluate(&xp).unwrap();
                let em = spec.evaluate(&xm).unwrap();
                // Only compare where the same smooth piece is active on the whole stencil.
                prop_assume!(e.differentiable && ep.gradient == e.gradient && em.gradient == e.gradient);
                let fd = (ep.value - em.value) / (2.0 * h);
                let g = e.gradient[i];
                prop_assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "component {i}: fd {fd} vs {g}");
            }
        }
    }
}
