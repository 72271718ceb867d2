//! `rfspectra` command-line front end.
//!
//! Every subcommand reads an optional JSON config (`--config`), applies
//! `--seed` and repeatable `--set key=value` overrides, computes all of its
//! artifacts in memory and only then writes them to `--out` with
//! temp-then-rename. Exit status: 0 on success, 2 on configuration or I/O
//! errors, 3 on numerical failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::bounds::{
    bernstein_tail, check_separation, check_theorem1, check_theorem2, check_theorem3,
    check_theorem4, check_theorem6, chi_square_chernoff, gershgorin_bound, simplified_gram_tail,
    BoundReport, ExpectationParams, KernelParams, RegimeParams, SeparatedParams, TheoremId,
};
use crate::error::{Error, Result};
use crate::experiments::{run_with_threads, ExperimentConfig, ExperimentKind};
use crate::features::{build_feature_matrix, normalize_columns};
use crate::io::write_atomic;
use crate::kernels::{expectation, ExpectationKind};
use crate::matrix::HermitianMatrix;
use crate::sampling::{sample_cloud, DistributionSpec, Family};
use crate::spectra::{hermitian_eigenvalues, singular_values};
use crate::Complex64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rfspectra",
    version,
    about = "Spectra of random feature matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Base seed, overriding the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// `key=value` override; the value is parsed as JSON, else taken as a string.
    /// Dotted keys reach into nested objects, e.g. `constants.c2=6`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular values of one normalized feature matrix.
    Spectrum(Common),
    /// Extreme singular values versus dimension.
    Figure1(Common),
    /// Singular value distributions versus dimension and N.
    Figure2(Common),
    /// Singular value distributions versus dimension and sigma.
    Figure3(Common),
    /// Empirical concentration campaign with its bound report.
    Verify(Common),
    /// Evaluate one bound or hypothesis check.
    Bounds(Common),
    /// Closed-form expectation matrix and its eigenvalues.
    Kernel(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Spectrum(c)
            | Command::Figure1(c)
            | Command::Figure2(c)
            | Command::Figure3(c)
            | Command::Verify(c)
            | Command::Bounds(c)
            | Command::Kernel(c) => c,
        }
    }
}

/// Files to write, named relative to the output directory.
pub type Artifacts = Vec<(String, Vec<u8>)>;

fn set_path(root: &mut Map<String, Value>, key: &str, value: Value) {
    match key.split_once('.') {
        None => {
            root.insert(key.to_string(), value);
        }
        Some((head, rest)) => {
            let slot = root
                .entry(head.to_string())
                .or_insert_with(|| Value::Object(Map::new()));
            if !slot.is_object() {
                *slot = Value::Object(Map::new());
            }
            if let Value::Object(inner) = slot {
                set_path(inner, rest, value);
            }
        }
    }
}

/// The config file (or `{}`), then the overrides as a second layer.
fn load_layers(common: &Common) -> Result<Vec<Value>> {
    let base = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => Value::Object(Map::new()),
    };
    if !base.is_object() {
        return Err(Error::Config("configuration must be a JSON object".into()));
    }
    let mut overrides = Map::new();
    for o in &common.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
        let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        set_path(&mut overrides, k.trim(), value);
    }
    if let Some(seed) = common.seed {
        overrides.insert("seed".into(), Value::from(seed));
    }
    Ok(vec![base, Value::Object(overrides)])
}

/// Merge layers into one flat object (for the small non-campaign configs).
fn merged(layers: Vec<Value>) -> Value {
    let mut out = Map::new();
    for l in layers {
        if let Value::Object(m) = l {
            for (k, v) in m {
                match (out.get_mut(&k), v) {
                    (Some(Value::Object(a)), Value::Object(b)) => a.extend(b),
                    (_, v) => {
                        out.insert(k, v);
                    }
                }
            }
        }
    }
    Value::Object(out)
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
}

fn campaign(kind: Option<ExperimentKind>, common: &Common) -> Result<Artifacts> {
    let cfg = ExperimentConfig::from_layers(kind, &load_layers(common)?)?;
    if kind.is_none() && cfg.experiment.is_figure() {
        return Err(Error::Config(format!(
            "`verify` runs verification campaigns; use a figure subcommand for `{}`",
            cfg.experiment.name()
        )));
    }
    let result = run_with_threads(&cfg, common.threads)?;
    let name = cfg.experiment.name();
    let mut files = vec![(format!("{name}.csv"), result.to_csv().into_bytes())];
    if let Some(svg) = result.to_svg() {
        files.push((format!("{name}.svg"), svg.into_bytes()));
    }
    if let Some(json) = result.bounds_json() {
        files.push((format!("{name}_bounds.json"), json.into_bytes()));
    }
    Ok(files)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumConfig {
    #[serde(default = "default_m")]
    m: usize,
    #[serde(default = "default_n", alias = "N")]
    n: usize,
    #[serde(default = "default_d")]
    d: usize,
    #[serde(default = "one")]
    gamma: f64,
    #[serde(default = "three")]
    sigma: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "gaussian")]
    data_family: Family,
    #[serde(default = "gaussian")]
    weight_family: Family,
    #[serde(default = "yes")]
    normalize: bool,
}

fn default_m() -> usize {
    100
}
fn default_n() -> usize {
    5000
}
fn default_d() -> usize {
    10
}
fn one() -> f64 {
    1.0
}
fn three() -> f64 {
    3.0
}
fn six() -> f64 {
    6.0
}
fn yes() -> bool {
    true
}
fn gaussian() -> Family {
    Family::Gaussian
}

fn spectrum(common: &Common) -> Result<Artifacts> {
    let c: SpectrumConfig = parse(merged(load_layers(common)?))?;
    let data = sample_cloud(
        &DistributionSpec::data(c.data_family, c.gamma, c.d)?,
        c.m,
        crate::rng::trial_seed(c.seed, 1),
    )?;
    let weights = sample_cloud(
        &DistributionSpec::weights(c.weight_family, c.sigma, c.d)?,
        c.n,
        crate::rng::trial_seed(c.seed, 2),
    )?;
    // Weights as rows: unit columns carry the 1/√N scaling.
    let a = build_feature_matrix(&weights, &data)?;
    let a = if c.normalize {
        normalize_columns(&a)?
    } else {
        a
    };
    let s = singular_values(&a)?;
    let summary = serde_json::json!({
        "sigma_min": s.sigma_min,
        "sigma_max": s.sigma_max,
        "condition_number": s.condition_number,
        "pairing_residue": s.pairing_residue,
    });
    Ok(vec![
        ("spectrum.csv".into(), s.to_csv().into_bytes()),
        (
            "spectrum.json".into(),
            serde_json::to_string_pretty(&summary)?.into_bytes(),
        ),
    ])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelConfig {
    kind: ExpectationKind,
    #[serde(alias = "N")]
    n: usize,
    d: usize,
    #[serde(default = "one")]
    gamma: f64,
    #[serde(default = "three")]
    sigma: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "gaussian")]
    family: Family,
}

fn kernel(common: &Common) -> Result<Artifacts> {
    let c: KernelConfig = parse(merged(load_layers(common)?))?;
    // Weights index the over-data expectation, data points the kernel.
    let spec = match c.kind {
        ExpectationKind::OverWeights => DistributionSpec::data(c.family, c.gamma, c.d)?,
        _ => DistributionSpec::weights(c.family, c.sigma, c.d)?,
    };
    let points = sample_cloud(&spec, c.n, c.seed)?;
    let m = expectation(c.kind, &points, c.gamma, c.sigma)?;
    let eig = hermitian_eigenvalues(&m)?;
    Ok(vec![
        ("kernel.csv".into(), m.to_csv().into_bytes()),
        ("kernel_eigenvalues.csv".into(), eig.to_csv().into_bytes()),
    ])
}

/// One bound evaluation, selected by `"theorem"`.
#[derive(Debug, Deserialize)]
#[serde(tag = "theorem", rename_all = "snake_case", deny_unknown_fields)]
enum BoundsRequest {
    Thm1 {
        d: usize,
        m: usize,
        #[serde(alias = "N")]
        n: usize,
        gamma: f64,
        sigma: f64,
        delta: f64,
        eta: f64,
        #[serde(default = "one")]
        c1: f64,
        #[serde(default = "one")]
        c2: f64,
    },
    Thm2 {
        d: usize,
        m: usize,
        #[serde(alias = "N")]
        n: usize,
        gamma: f64,
        sigma: f64,
        delta: f64,
        eta: f64,
        #[serde(default = "one")]
        c1: f64,
        #[serde(default = "one")]
        c2: f64,
    },
    Thm3 {
        #[serde(alias = "N")]
        n: usize,
        m: usize,
        sigma: f64,
        #[serde(alias = "R")]
        r: f64,
        delta: f64,
        eta: f64,
        #[serde(default = "one")]
        c: f64,
    },
    Thm4 {
        m: usize,
        #[serde(alias = "N")]
        n: usize,
        gamma: f64,
        #[serde(alias = "R")]
        r: f64,
        delta: f64,
        eta: f64,
        #[serde(default = "six")]
        c: f64,
    },
    Thm5 {
        d: usize,
        #[serde(alias = "N")]
        n: usize,
        delta: f64,
        t: f64,
        #[serde(default = "one")]
        c: f64,
    },
    Thm6 {
        d: usize,
        #[serde(alias = "N")]
        n: usize,
        gamma: f64,
        sigma: f64,
        delta: f64,
        eta: f64,
        #[serde(default = "one")]
        c: f64,
    },
    Bernstein {
        #[serde(alias = "N")]
        n: usize,
        k: f64,
        variance: f64,
        t: f64,
    },
    Chi2 {
        z: f64,
        d: usize,
    },
    SimplifiedTail {
        m: usize,
        #[serde(alias = "N")]
        n: usize,
        eta: f64,
    },
    Gershgorin {
        /// Rows of `[re, im]` pairs.
        matrix: Vec<Vec<[f64; 2]>>,
        #[serde(default)]
        reference: f64,
    },
}

fn positive_inputs(values: &[(&str, f64)]) -> Result<()> {
    for (k, v) in values {
        if !(*v > 0.0 && v.is_finite()) {
            return Err(Error::Config(format!("{k} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn evaluate(req: BoundsRequest) -> Result<BoundReport> {
    match req {
        BoundsRequest::Thm1 {
            d,
            m,
            n,
            gamma,
            sigma,
            delta,
            eta,
            c1,
            c2,
        } => check_theorem1(
            &RegimeParams {
                d,
                m,
                n,
                gamma,
                sigma,
                delta,
                eta,
            },
            c1,
            c2,
        ),
        BoundsRequest::Thm2 {
            d,
            m,
            n,
            gamma,
            sigma,
            delta,
            eta,
            c1,
            c2,
        } => check_theorem2(
            &RegimeParams {
                d,
                m,
                n,
                gamma,
                sigma,
                delta,
                eta,
            },
            c1,
            c2,
        ),
        BoundsRequest::Thm3 {
            n,
            m,
            sigma,
            r,
            delta,
            eta,
            c,
        } => check_theorem3(
            &KernelParams {
                n,
                m,
                sigma,
                r,
                delta,
                eta,
            },
            c,
        ),
        BoundsRequest::Thm4 {
            m,
            n,
            gamma,
            r,
            delta,
            eta,
            c,
        } => check_theorem4(
            &SeparatedParams {
                m,
                n,
                gamma,
                r,
                delta,
                eta,
            },
            c,
        ),
        BoundsRequest::Thm5 { d, n, delta, t, c } => check_separation(d, n, delta, t, c),
        BoundsRequest::Thm6 {
            d,
            n,
            gamma,
            sigma,
            delta,
            eta,
            c,
        } => check_theorem6(
            &ExpectationParams {
                d,
                n,
                gamma,
                sigma,
                delta,
                eta,
            },
            c,
        ),
        BoundsRequest::Bernstein { n, k, variance, t } => {
            positive_inputs(&[("k", k), ("variance", variance), ("t", t), ("N", n as f64)])?;
            Ok(BoundReport::scalar(
                TheoremId::Bernstein,
                bernstein_tail(n, k, variance, t),
                &[("K", k), ("variance", variance), ("t", t)],
            ))
        }
        BoundsRequest::Chi2 { z, d } => Ok(BoundReport::scalar(
            TheoremId::Chi2,
            chi_square_chernoff(z, d)?,
            &[("z", z)],
        )),
        BoundsRequest::SimplifiedTail { m, n, eta } => Ok(BoundReport::scalar(
            TheoremId::SimplifiedTail,
            simplified_gram_tail(m, n, eta)?,
            &[("eta", eta)],
        )),
        BoundsRequest::Gershgorin { matrix, reference } => {
            let rows: Vec<Vec<Complex64>> = matrix
                .iter()
                .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                .collect();
            let m = HermitianMatrix::from_rows(&rows)?;
            Ok(BoundReport::scalar(
                TheoremId::Gershgorin,
                gershgorin_bound(&m, reference),
                &[("reference", reference)],
            ))
        }
    }
}

fn bounds(common: &Common) -> Result<(Artifacts, String)> {
    let req: BoundsRequest = parse(merged(load_layers(common)?))?;
    let report = evaluate(req)?;
    Ok((
        vec![("bounds.json".into(), report.to_json()?.into_bytes())],
        report.to_string(),
    ))
}

/// Compute the artifacts of a parsed invocation without touching the disk.
/// The string is a human-readable summary for standard output.
pub fn execute(command: &Command) -> Result<(Artifacts, String)> {
    let common = command.common();
    let files = match command {
        Command::Spectrum(c) => spectrum(c)?,
        Command::Figure1(c) => campaign(Some(ExperimentKind::Fig1ExtremeSvVsD), c)?,
        Command::Figure2(c) => campaign(Some(ExperimentKind::Fig2SvDistributionVsN), c)?,
        Command::Figure3(c) => campaign(Some(ExperimentKind::Fig3SvDistributionVsSigma), c)?,
        Command::Verify(c) => campaign(None, c)?,
        Command::Bounds(c) => return bounds(c),
        Command::Kernel(c) => kernel(c)?,
    };
    let summary = files
        .iter()
        .map(|(name, _)| common.out.join(name).display().to_string())
        .collect::<Vec<_>>()
        .join("\n");
    Ok((files, summary))
}

pub fn write_artifacts(out: &Path, files: &Artifacts) -> Result<()> {
    fs::create_dir_all(out)?;
    for (name, bytes) in files {
        write_atomic(&out.join(name), bytes)?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli.command).and_then(|(files, summary)| {
        write_artifacts(&cli.command.common().out, &files)?;
        Ok(summary)
    });
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("rfspectra: {e}");
            exit_code(&e)
        }
    }
}
