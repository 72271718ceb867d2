//! # rfspectra
//!
//! Spectra of complex-exponential random feature matrices
//! `A_{j,k} = exp(i⟨x_j, ω_k⟩)`: construction, Gram matrices, closed-form
//! expectation matrices, concentration bounds with explicit hypothesis
//! checks, and seeded Monte Carlo campaigns.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`sampling`] | seeded point clouds, separation diagnostics |
//! | [`features`] | the feature matrix and its two normalized Grams |
//! | [`kernels`] | closed-form expectation matrices |
//! | [`spectra`] | Hermitian eigenvalues, singular values, norms |
//! | [`bounds`] | tail bounds and hypothesis checks as [`bounds::BoundReport`]s |
//! | [`experiments`] | Monte Carlo campaigns with CSV/SVG output |
//! | [`cli`] | the `rfspectra` command-line front end |
//!
//! ```
//! use rfspectra::sampling::{sample_cloud, DistributionSpec, Family};
//! use rfspectra::features::{build_feature_matrix, gram_over_data};
//! use rfspectra::spectra::deviation_from_identity;
//!
//! let d = 12;
//! let data = sample_cloud(&DistributionSpec::data(Family::Gaussian, 1.0, d).unwrap(), 20, 1).unwrap();
//! let weights = sample_cloud(&DistributionSpec::weights(Family::Gaussian, 3.0, d).unwrap(), 2000, 2).unwrap();
//! let a = build_feature_matrix(&data, &weights).unwrap();
//! let gram = gram_over_data(&a).unwrap();
//! assert!(deviation_from_identity(&gram).unwrap() < 0.5);
//! ```

pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod features;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod plot;
pub mod rng;
pub mod sampling;
pub mod spectra;

pub use error::{Error, Result};
pub use features::FeatureMatrix;
pub use matrix::{DenseMatrix, HermitianMatrix};
pub use num_complex::Complex64;
pub use sampling::{DistributionSpec, Family, PointCloud};
pub use spectra::SpectrumResult;
