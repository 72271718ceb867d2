//! Ascending singular value distributions for the second and third figure
//! campaigns. Pass a trial count as the first argument (default 3) and an
//! output directory as the second.

use std::path::PathBuf;

use rfspectra::experiments::{run_sv_distribution, ExperimentConfig, ExperimentKind};
use rfspectra::io::write_atomic;
use serde_json::json;

fn main() -> rfspectra::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);
    let out = PathBuf::from(std::env::args().nth(2).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&out)?;
    for kind in [
        ExperimentKind::Fig2SvDistributionVsN,
        ExperimentKind::Fig3SvDistributionVsSigma,
    ] {
        let cfg = ExperimentConfig::from_layers(
            Some(kind),
            &[json!({"trials": trials, "d_grid": [3, 6, 12]})],
        )?;
        let result = run_sv_distribution(&cfg)?;
        println!("{}", kind.name());
        for p in &result.points {
            let label: Vec<String> = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let first = p.mean[0];
            let last = p.mean[p.mean.len() - 1];
            println!(
                "  {:<50} s_min {first:.3}  s_max {last:.3}",
                label.join(" ")
            );
        }
        write_atomic(
            &out.join(format!("{}.csv", kind.name())),
            result.to_csv().as_bytes(),
        )?;
        if let Some(svg) = result.to_svg() {
            write_atomic(&out.join(format!("{}.svg", kind.name())), svg.as_bytes())?;
        }
    }
    Ok(())
}
