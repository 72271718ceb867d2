//! Drive the command-line front end in-process: a bound check and a tiny
//! figure campaign written into a temporary directory.

use std::fs;

fn main() -> std::io::Result<()> {
    let out = std::env::temp_dir().join("rfspectra-cli-example");
    let config = out.join("thm1.json");
    fs::create_dir_all(&out)?;
    fs::write(
        &config,
        r#"{"theorem": "thm1", "d": 10, "m": 100, "N": 5000, "gamma": 1.0, "sigma": 3.0, "delta": 0.05, "eta": 0.5}"#,
    )?;
    let out_arg = out.to_string_lossy().into_owned();
    let config_arg = config.to_string_lossy().into_owned();
    let code = rfspectra::cli::run([
        "rfspectra",
        "bounds",
        "--config",
        &config_arg,
        "--out",
        &out_arg,
    ]);
    println!("bounds exit status {code}");

    let code = rfspectra::cli::run([
        "rfspectra",
        "figure1",
        "--out",
        &out_arg,
        "--set",
        "trials=1",
        "--set",
        "d_grid=[2]",
        "--set",
        "N=500",
    ]);
    println!("figure1 exit status {code}");
    print!(
        "{}",
        fs::read_to_string(out.join("fig1_extreme_sv_vs_d.csv"))?
    );
    Ok(())
}
