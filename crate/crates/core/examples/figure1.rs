//! Extreme singular values versus dimension at the default campaign
//! (m = 100, N = 5000, γ = 1, σ ∈ {2, 3}, 10 trials). Writes CSV and SVG
//! into the directory given as the first argument (default: current).

use std::path::PathBuf;
use std::time::Instant;

use rfspectra::experiments::{run_fig1, ExperimentConfig, ExperimentKind};
use rfspectra::io::write_atomic;

fn main() -> rfspectra::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let cfg = ExperimentConfig::for_kind(ExperimentKind::Fig1ExtremeSvVsD);
    let start = Instant::now();
    let result = run_fig1(&cfg)?;
    println!(
        "{} grid points in {:.1?}",
        result.points.len(),
        start.elapsed()
    );
    println!(
        "{:>6} {:>3} {:>10} {:>10} {:>10}",
        "sigma", "d", "min", "max", "cond"
    );
    for p in &result.points {
        let sigma = p
            .param("sigma")
            .and_then(|v| v.as_f64())
            .unwrap_or(f64::NAN);
        let d = p.param("d").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        println!(
            "{sigma:>6} {d:>3} {:>10.4} {:>10.4} {:>10.3}",
            p.mean[0], p.mean[1], p.mean[2]
        );
    }
    std::fs::create_dir_all(&out)?;
    write_atomic(
        &out.join("fig1_extreme_sv_vs_d.csv"),
        result.to_csv().as_bytes(),
    )?;
    if let Some(svg) = result.to_svg() {
        write_atomic(&out.join("fig1_extreme_sv_vs_d.svg"), svg.as_bytes())?;
    }
    Ok(())
}
