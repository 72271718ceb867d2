//! Concentration of the Euclidean norm of unit-variance subgaussian vectors
//! around √d, with the largest tail constant consistent with the sample.

use rfspectra::experiments::{lemma2_tail, ExperimentConfig, ExperimentKind};
use serde_json::json;

fn main() -> rfspectra::Result<()> {
    for t in [0.5, 1.0, 2.0] {
        let cfg = ExperimentConfig::from_layers(
            Some(ExperimentKind::Lemma2Tail),
            &[json!({"t": t, "d_grid": [10, 100], "trials": 2})],
        )?;
        let result = lemma2_tail(&cfg)?;
        for p in &result.points {
            let label: Vec<String> = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!(
                "t = {t}: {:<40} P(|‖X‖ − √d| ≥ t) ≈ {:.4}, fitted C = {:.3}",
                label.join(" "),
                p.mean[0],
                p.mean[1]
            );
        }
    }
    Ok(())
}
