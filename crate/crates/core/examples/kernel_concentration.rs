//! Distance of `(1/N)AA*` from the Gaussian kernel matrix as N grows,
//! with the data frozen across trials.

use rfspectra::experiments::{verify_kernel_concentration, ExperimentConfig, ExperimentKind};
use serde_json::json;

fn main() -> rfspectra::Result<()> {
    let cfg = ExperimentConfig::from_layers(
        Some(ExperimentKind::VerifyThm3),
        &[json!({"m": 20, "N_grid": [250, 1000, 4000], "d": 10, "sigma": 3.0})],
    )?;
    let result = verify_kernel_concentration(&cfg)?;
    let mut prev: Option<f64> = None;
    for p in &result.points {
        let n = p.param("N").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        let ratio = prev.map(|q| p.mean[0] / q).unwrap_or(f64::NAN);
        println!("N = {n:>5}: mean ‖(1/N)AA* − K‖ = {:.4}  (ratio to previous {ratio:.3}, rate predicts 0.5)", p.mean[0]);
        prev = Some(p.mean[0]);
    }
    if let Some(r) = result.points.last().and_then(|p| p.report.as_ref()) {
        print!("{r}");
    }
    Ok(())
}
