//! Build a feature matrix, normalize it, and form both normalized Grams.

use rfspectra::features::{
    build_feature_matrix, gram_over_data, gram_over_weights, normalize_columns,
};
use rfspectra::sampling::{sample_cloud, DistributionSpec, Family};
use rfspectra::spectra::deviation_from_identity;
use rfspectra::PointCloud;

fn main() -> rfspectra::Result<()> {
    // x ∈ {0, π}, ω ∈ {1, 2}: A = [[1, 1], [−1, 1]] and both Grams are I.
    let x = PointCloud::from_points(&[vec![0.0], vec![std::f64::consts::PI]])?;
    let w = PointCloud::from_points(&[vec![1.0], vec![2.0]])?;
    let a = build_feature_matrix(&x, &w)?;
    print!("A =\n{}", a.to_csv());
    println!(
        "‖(1/m)A*A − I‖ = {:.2e}",
        deviation_from_identity(&gram_over_weights(&a)?)?
    );

    let d = 16;
    let data = sample_cloud(&DistributionSpec::data(Family::Gaussian, 1.0, d)?, 400, 1)?;
    let weights = sample_cloud(&DistributionSpec::weights(Family::Gaussian, 3.0, d)?, 20, 2)?;
    let a = build_feature_matrix(&data, &weights)?;
    println!(
        "m = {}, N = {}: ‖(1/m)A*A − I_N‖ = {:.4}",
        a.m(),
        a.n(),
        deviation_from_identity(&gram_over_weights(&a)?)?
    );
    let b = normalize_columns(&a)?;
    println!(
        "normalized column 0 norm² = {:.15}",
        (0..b.m()).map(|j| b.get(j, 0).norm_sqr()).sum::<f64>()
    );

    let data = sample_cloud(&DistributionSpec::data(Family::Gaussian, 1.0, d)?, 20, 3)?;
    let weights = sample_cloud(
        &DistributionSpec::weights(Family::Gaussian, 3.0, d)?,
        400,
        4,
    )?;
    let a = build_feature_matrix(&data, &weights)?;
    println!(
        "m = {}, N = {}: ‖(1/N)AA* − I_m‖ = {:.4}",
        a.m(),
        a.n(),
        deviation_from_identity(&gram_over_data(&a)?)?
    );
    Ok(())
}
