//! Sample weights from each subgaussian family and compare their pairwise
//! separation with the `(1 − 2t)σ²d` threshold and the dimension condition.

use rfspectra::bounds::check_separation;
use rfspectra::sampling::{sample_cloud, separation_report, DistributionSpec, Family};

fn main() -> rfspectra::Result<()> {
    let (n, d, sigma, t) = (100, 50, 1.0, 0.25);
    let threshold = (1.0 - 2.0 * t) * sigma * sigma * d as f64;
    for family in Family::ALL {
        let spec = DistributionSpec::weights(family, sigma, d)?;
        let cloud = sample_cloud(&spec, n, 7)?;
        let r = separation_report(&cloud)?;
        println!(
            "{:<10} min ‖ω_j − ω_k‖² = {:7.2} (threshold {threshold}), δ₂ = {:.3}, min ‖ω‖² = {:.2}",
            family.name(),
            r.min_pairwise_sq_distance,
            r.delta2,
            r.min_sq_norm
        );
    }
    println!();
    print!("{}", check_separation(d, n, 0.05, t, 1.0)?);
    Ok(())
}
