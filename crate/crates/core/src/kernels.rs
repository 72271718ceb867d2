//! Closed-form expectation matrices of the normalized Grams.
//!
//! * over the data, with `x ~ N(0, (γ²/d)I)`: entries `exp(−γ²‖ω_j − ω_k‖²/(2d))`;
//! * over the weights, with `ω ~ N(0, σ²I)`: the Gaussian kernel `exp(−σ²‖x_j − x_k‖²/2)`;
//! * over both: the constant off-diagonal `(2γ²σ²/d + 1)^(−d/2)`.
//!
//! All three are stored as [`HermitianMatrix`] with zero imaginary parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::sampling::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationKind {
    /// `E_x[(1/m)A*A]`, indexed by weights.
    OverData,
    /// `E_ω[(1/N)AA*]`, indexed by data points.
    OverWeights,
    /// `E_{x,ω}` of either normalized Gram.
    FullGaussian,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

/// `E_x[(1/m)A*A]` for Gaussian data with per-component variance `γ²/d`.
pub fn expected_gram_over_data(weights: &PointCloud, gamma: f64) -> Result<HermitianMatrix> {
    positive("gamma", gamma)?;
    let d = weights.dim() as f64;
    let rate = gamma * gamma / (2.0 * d);
    Ok(HermitianMatrix::real_symmetric(weights.len(), |j, k| {
        if j == k {
            1.0
        } else {
            (-rate * weights.sq_distance(j, k)).exp()
        }
    }))
}

/// `E_ω[(1/N)AA*]` for Gaussian weights `N(0, σ²I)`: the Gaussian kernel matrix of the data.
pub fn gaussian_kernel_over_weights(data: &PointCloud, sigma: f64) -> Result<HermitianMatrix> {
    positive("sigma", sigma)?;
    let rate = sigma * sigma / 2.0;
    Ok(HermitianMatrix::real_symmetric(data.len(), |j, k| {
        if j == k {
            1.0
        } else {
            (-rate * data.sq_distance(j, k)).exp()
        }
    }))
}

/// `(2γ²σ²/d + 1)^(−d/2)`, evaluated as `exp(−(d/2)·ln1p(2γ²σ²/d))`.
pub fn full_expectation_entry(gamma: f64, sigma: f64, d: usize) -> Result<f64> {
    positive("gamma", gamma)?;
    positive("sigma", sigma)?;
    if d == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    let d = d as f64;
    let x = 2.0 * gamma * gamma * sigma * sigma / d;
    Ok((-(d / 2.0) * x.ln_1p()).exp())
}

/// `n × n` matrix with unit diagonal and constant off-diagonal [`full_expectation_entry`].
pub fn full_expectation_matrix(
    n: usize,
    gamma: f64,
    sigma: f64,
    d: usize,
) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::Config("matrix size must be positive".into()));
    }
    let v = full_expectation_entry(gamma, sigma, d)?;
    Ok(HermitianMatrix::real_symmetric(n, |j, k| {
        if j == k {
            1.0
        } else {
            v
        }
    }))
}

/// Build the expectation matrix of the given kind.
///
/// `points` are the weights for [`ExpectationKind::OverData`] and the data for
/// [`ExpectationKind::OverWeights`]; for the full expectation only their
/// count and dimension matter.
pub fn expectation(
    kind: ExpectationKind,
    points: &PointCloud,
    gamma: f64,
    sigma: f64,
) -> Result<HermitianMatrix> {
    match kind {
        ExpectationKind::OverData => expected_gram_over_data(points, gamma),
        ExpectationKind::OverWeights => gaussian_kernel_over_weights(points, sigma),
        ExpectationKind::FullGaussian => {
            full_expectation_matrix(points.len(), gamma, sigma, points.dim())
        }
    }
}
