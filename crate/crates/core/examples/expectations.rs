//! Closed-form expectation matrices next to their Monte Carlo averages.

use rfspectra::features::{build_feature_matrix, gram_over_data, gram_over_weights};
use rfspectra::kernels::{
    expected_gram_over_data, full_expectation_entry, gaussian_kernel_over_weights,
};
use rfspectra::sampling::{sample_cloud, DistributionSpec, Family};

fn main() -> rfspectra::Result<()> {
    let (d, gamma, sigma) = (4, 1.0, 1.5);
    let weights = sample_cloud(
        &DistributionSpec::weights(Family::Gaussian, sigma, d)?,
        3,
        11,
    )?;
    let data = sample_cloud(&DistributionSpec::data(Family::Gaussian, gamma, d)?, 3, 12)?;

    let exact = expected_gram_over_data(&weights, gamma)?;
    let many_x = sample_cloud(
        &DistributionSpec::data(Family::Gaussian, gamma, d)?,
        200_000,
        13,
    )?;
    let empirical = gram_over_weights(&build_feature_matrix(&many_x, &weights)?)?;
    println!(
        "E_x[(1/m)A*A] entry (0,1): closed form {:.5}, average {:.5}",
        exact.get(0, 1).re,
        empirical.get(0, 1).re
    );

    let exact = gaussian_kernel_over_weights(&data, sigma)?;
    let many_w = sample_cloud(
        &DistributionSpec::weights(Family::Gaussian, sigma, d)?,
        200_000,
        14,
    )?;
    let empirical = gram_over_data(&build_feature_matrix(&data, &many_w)?)?;
    println!(
        "Gaussian kernel entry (0,1): closed form {:.5}, average {:.5}",
        exact.get(0, 1).re,
        empirical.get(0, 1).re
    );

    for d in [1, 4, 16, 64, 256] {
        println!(
            "d = {d:>3}: E_(x,ω) off-diagonal = {:.6}",
            full_expectation_entry(gamma, sigma, d)?
        );
    }
    Ok(())
}
