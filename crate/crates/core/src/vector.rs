//! Dense vector helpers over `f64` slices.
//!
//! Every reduction sums left to right so that traces are bit-reproducible.

use crate::error::{Error, Result};

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x.len(), y.len())?;
    Ok(dot_unchecked(x, y))
}

/// Returns `x + t * d`.
pub fn axpy(t: f64, d: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_len(x.len(), d.len())?;
    Ok(x.iter().zip(d).map(|(xi, di)| xi + t * di).collect())
}

pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn norm2(x: &[f64]) -> f64 {
    dot_unchecked(x, x).sqrt()
}

/// Returns `x - y`.
pub fn sub(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_len(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(a, b)| a - b).collect())
}

pub fn scale(t: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| t * v).collect()
}

pub(crate) fn dot_unchecked(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}
