//! Seeded Monte Carlo campaigns: the three figure reproductions, empirical
//! checks of each concentration statement, and the norm-tail experiment.
//!
//! A campaign is a grid of parameter points times `trials` independent
//! trials. Trial `i` draws from the stream `trial_seed(seed, i)`; within a
//! trial the data use sub-stream 1 and the weights sub-stream 2. Trials run
//! on the rayon pool and are collected in `(grid point, trial)` order, so the
//! output does not depend on the number of workers.
//!
//! Figure campaigns build the `N × m` matrix with the weights as rows, so that
//! normalizing its columns to unit norm scales by `1/√N` and its singular
//! values are those of `A/√N`, the roots of the eigenvalues of `(1/N)AA*`.

use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bounds::{
    check_separation, check_theorem1, check_theorem2, check_theorem3, check_theorem4,
    check_theorem6, BoundReport, ExpectationParams, KernelParams, RegimeParams, SeparatedParams,
};
use crate::error::{Error, Result};
use crate::features::{build_feature_matrix, normalize_columns};
use crate::io::fmt_f64;
use crate::kernels::{
    expected_gram_over_data, full_expectation_matrix, gaussian_kernel_over_weights,
};
use crate::matrix::{DenseMatrix, HermitianMatrix};
use crate::plot::{Plot, Series};
use crate::rng::trial_seed;
use crate::sampling::{
    empirical_norm_tail, fitted_tail_constant, sample_cloud, separation_report, DistributionSpec,
    Family, PointCloud,
};
use crate::spectra::{singular_values, spectral_norm_hermitian};

/// Dimension grid used when a configuration does not give one.
pub const DEFAULT_D_GRID: [usize; 10] = [1, 2, 3, 4, 6, 8, 10, 12, 16, 20];

const DATA_STREAM: u64 = 1;
const WEIGHT_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[serde(rename = "fig1_extreme_sv_vs_d")]
    Fig1ExtremeSvVsD,
    #[serde(rename = "fig2_sv_distribution_vs_N")]
    Fig2SvDistributionVsN,
    #[serde(rename = "fig3_sv_distribution_vs_sigma")]
    Fig3SvDistributionVsSigma,
    VerifyThm1,
    VerifyThm2,
    VerifyThm3,
    VerifyThm4,
    VerifyThm5,
    VerifyThm6,
    Lemma2Tail,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Fig1ExtremeSvVsD,
        ExperimentKind::Fig2SvDistributionVsN,
        ExperimentKind::Fig3SvDistributionVsSigma,
        ExperimentKind::VerifyThm1,
        ExperimentKind::VerifyThm2,
        ExperimentKind::VerifyThm3,
        ExperimentKind::VerifyThm4,
        ExperimentKind::VerifyThm5,
        ExperimentKind::VerifyThm6,
        ExperimentKind::Lemma2Tail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fig1ExtremeSvVsD => "fig1_extreme_sv_vs_d",
            ExperimentKind::Fig2SvDistributionVsN => "fig2_sv_distribution_vs_N",
            ExperimentKind::Fig3SvDistributionVsSigma => "fig3_sv_distribution_vs_sigma",
            ExperimentKind::VerifyThm1 => "verify_thm1",
            ExperimentKind::VerifyThm2 => "verify_thm2",
            ExperimentKind::VerifyThm3 => "verify_thm3",
            ExperimentKind::VerifyThm4 => "verify_thm4",
            ExperimentKind::VerifyThm5 => "verify_thm5",
            ExperimentKind::VerifyThm6 => "verify_thm6",
            ExperimentKind::Lemma2Tail => "lemma2_tail",
        }
    }

    pub fn is_figure(self) -> bool {
        matches!(
            self,
            ExperimentKind::Fig1ExtremeSvVsD
                | ExperimentKind::Fig2SvDistributionVsN
                | ExperimentKind::Fig3SvDistributionVsSigma
        )
    }

    fn uses_m(self) -> bool {
        !matches!(
            self,
            ExperimentKind::VerifyThm5 | ExperimentKind::VerifyThm6 | ExperimentKind::Lemma2Tail
        )
    }

    fn uses_n(self) -> bool {
        self != ExperimentKind::Lemma2Tail
    }

    fn uses_families(self) -> bool {
        matches!(
            self,
            ExperimentKind::VerifyThm5 | ExperimentKind::Lemma2Tail
        )
    }
}

/// Which Hermitian difference a concentration campaign measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deviation {
    /// Normalized Gram minus the identity.
    GramMinusIdentity,
    /// `(1/m)A*A − E_x[(1/m)A*A]`.
    GramMinusConditional,
    /// `E_x[(1/m)A*A] − I`.
    ConditionalMinusIdentity,
    /// `E_x[(1/m)A*A] − E_{x,ω}[(1/m)A*A]`.
    ConditionalMinusFull,
    /// Normalized Gram minus the full Gaussian expectation.
    GramMinusFull,
}

/// Which normalized Gram a deviation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `(1/m)A*A`, `N × N`, averaging over the data.
    OverData,
    /// `(1/N)AA*`, `m × m`, averaging over the weights.
    OverWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
}

/// A fully resolved campaign description.
///
/// Built from JSON layers over per-kind defaults (see [`ExperimentConfig::from_layers`]).
/// The scalar keys `m`, `N`, `d` and `sigma` are accepted as one-point grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub m_grid: Vec<usize>,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<usize>,
    pub d_grid: Vec<usize>,
    pub gamma: f64,
    pub sigma_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub normalize: bool,
    pub data_family: Family,
    pub weight_family: Family,
    pub families: Vec<Family>,
    pub eta: f64,
    pub delta: f64,
    /// Separation parameter for `verify_thm5`, norm threshold for `lemma2_tail`.
    pub t: f64,
    pub constants: Constants,
    pub deviation: Option<Deviation>,
    /// Keep the deterministic cloud (data for `verify_thm3`, weights for
    /// `verify_thm4`) fixed across trials.
    pub frozen: bool,
    /// Draws per trial for `lemma2_tail`.
    pub samples: usize,
}

fn defaults(kind: ExperimentKind) -> Value {
    let mut base = json!({
        "experiment": kind,
        "m_grid": [100],
        "N_grid": [5000],
        "d_grid": DEFAULT_D_GRID,
        "gamma": 1.0,
        "sigma_grid": [3.0],
        "trials": 10,
        "seed": 0,
        "normalize": true,
        "data_family": "gaussian",
        "weight_family": "gaussian",
        "families": ["gaussian", "rademacher", "uniform"],
        "eta": 0.5,
        "delta": 0.05,
        "t": 0.25,
        "constants": {"c1": 1.0, "c2": 1.0, "c": 1.0},
        "deviation": null,
        "frozen": true,
        "samples": 10000
    });
    let specific = match kind {
        ExperimentKind::Fig1ExtremeSvVsD => json!({"sigma_grid": [2.0, 3.0]}),
        ExperimentKind::Fig2SvDistributionVsN => json!({"N_grid": [500, 5000]}),
        ExperimentKind::Fig3SvDistributionVsSigma => json!({"sigma_grid": [2.0, 4.0]}),
        ExperimentKind::VerifyThm1 => json!({
            "m_grid": [600], "N_grid": [20], "d_grid": [20], "sigma_grid": [5.0],
            "deviation": "gram_minus_identity"
        }),
        ExperimentKind::VerifyThm2 => json!({
            "m_grid": [20], "N_grid": [600], "d_grid": [20], "sigma_grid": [5.0],
            "deviation": "gram_minus_identity"
        }),
        ExperimentKind::VerifyThm3 => json!({
            "m_grid": [20], "N_grid": [2000], "d_grid": [10], "sigma_grid": [3.0]
        }),
        ExperimentKind::VerifyThm4 => json!({
            "m_grid": [3300], "N_grid": [20], "d_grid": [10], "sigma_grid": [3.0],
            "constants": {"c": 6.0}, "deviation": "gram_minus_conditional"
        }),
        ExperimentKind::VerifyThm5 => json!({
            "N_grid": [100], "d_grid": [50], "sigma_grid": [1.0], "trials": 100
        }),
        ExperimentKind::VerifyThm6 => json!({
            "N_grid": [50], "d_grid": [20], "sigma_grid": [5.0],
            "deviation": "conditional_minus_identity"
        }),
        ExperimentKind::Lemma2Tail => json!({"d_grid": [100], "t": 3.0}),
    };
    merge(&mut base, specific);
    base
}

/// Deep merge of JSON objects; non-object values replace.
fn merge(into: &mut Value, layer: Value) {
    match (into, layer) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, v) in b {
                match a.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        a.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Rewrite scalar shorthands (`m`, `N`, `d`, `sigma`) into one-point grids.
fn expand_scalars(layer: Value) -> Result<Value> {
    let Value::Object(map) = layer else {
        return Err(Error::Config("configuration must be a JSON object".into()));
    };
    let mut out = Map::new();
    for (k, v) in map {
        let grid = match k.as_str() {
            "m" => Some("m_grid"),
            "N" | "n" => Some("N_grid"),
            "d" => Some("d_grid"),
            "sigma" => Some("sigma_grid"),
            "n_grid" => {
                out.insert("N_grid".into(), v);
                continue;
            }
            _ => None,
        };
        match grid {
            Some(g) => {
                if out.contains_key(g) {
                    return Err(Error::Config(format!("both `{k}` and `{g}` given")));
                }
                out.insert(g.into(), Value::Array(vec![v]));
            }
            None => {
                if out.contains_key(&k) {
                    return Err(Error::Config(format!("`{k}` given twice")));
                }
                out.insert(k, v);
            }
        }
    }
    Ok(Value::Object(out))
}

fn kind_of(v: &Value) -> Result<Option<ExperimentKind>> {
    match v.get("experiment") {
        None | Some(Value::Null) => Ok(None),
        Some(k) => serde_json::from_value(k.clone())
            .map(Some)
            .map_err(|e| Error::Config(format!("experiment: {e}"))),
    }
}

impl ExperimentConfig {
    /// Defaults for `kind`.
    pub fn for_kind(kind: ExperimentKind) -> Self {
        Self::from_layers(Some(kind), &[]).expect("defaults are valid")
    }

    /// Resolve JSON layers over the defaults of the experiment they name.
    ///
    /// Later layers override earlier ones. `expected`, if given, is the kind a
    /// caller insists on; a layer naming a different kind is an error.
    pub fn from_layers(expected: Option<ExperimentKind>, layers: &[Value]) -> Result<Self> {
        let mut named = None;
        for l in layers {
            if let Some(k) = kind_of(l)? {
                named = Some(k);
            }
        }
        let kind = match (expected, named) {
            (Some(e), Some(n)) if e != n => {
                return Err(Error::Config(format!(
                    "configuration names experiment `{}`, expected `{}`",
                    n.name(),
                    e.name()
                )))
            }
            (Some(e), _) => e,
            (None, Some(n)) => n,
            (None, None) => return Err(Error::Config("missing `experiment`".into())),
        };
        let mut merged = defaults(kind);
        for l in layers {
            merge(&mut merged, expand_scalars(l.clone())?);
        }
        let cfg: Self = serde_json::from_value(merged).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_layers(None, &[v])
    }

    /// Compact JSON of the resolved configuration.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        for (name, empty) in [
            ("m_grid", self.m_grid.is_empty()),
            ("N_grid", self.n_grid.is_empty()),
            ("d_grid", self.d_grid.is_empty()),
            ("sigma_grid", self.sigma_grid.is_empty()),
            ("families", self.families.is_empty()),
        ] {
            if empty {
                return fail(format!("{name} must be nonempty"));
            }
        }
        if self.m_grid.contains(&0) || self.n_grid.contains(&0) || self.d_grid.contains(&0) {
            return fail("m, N and d must be positive".into());
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        if let Some(s) = self
            .sigma_grid
            .iter()
            .find(|s| !(**s > 0.0 && s.is_finite()))
        {
            return fail(format!("sigma must be positive, got {s}"));
        }
        for (name, v) in [("eta", self.eta), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if self.samples == 0 {
            return fail("samples must be at least 1".into());
        }
        let kind = self.experiment;
        match kind {
            ExperimentKind::VerifyThm5 if !(self.t > 0.0 && self.t < 0.5) => {
                return fail(format!("t must lie in (0, 1/2), got {}", self.t))
            }
            ExperimentKind::Lemma2Tail if !(self.t >= 0.0 && self.t.is_finite()) => {
                return fail(format!("t must be nonnegative, got {}", self.t))
            }
            _ => {}
        }
        let allowed: &[Deviation] = match kind {
            ExperimentKind::VerifyThm1 | ExperimentKind::VerifyThm2 => {
                &[Deviation::GramMinusIdentity, Deviation::GramMinusFull]
            }
            ExperimentKind::VerifyThm4 => &[Deviation::GramMinusConditional],
            ExperimentKind::VerifyThm6 => &[
                Deviation::ConditionalMinusIdentity,
                Deviation::ConditionalMinusFull,
            ],
            _ => &[],
        };
        match self.deviation {
            None if !allowed.is_empty() => fail(format!("{} needs a deviation", kind.name())),
            Some(d) if !allowed.contains(&d) => {
                fail(format!("deviation {d:?} does not apply to {}", kind.name()))
            }
            _ => Ok(()),
        }
    }

    fn grid(&self) -> Vec<PointSpec> {
        let kind = self.experiment;
        let families: Vec<Option<Family>> = if kind.uses_families() {
            self.families.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let ms: Vec<Option<usize>> = if kind.uses_m() {
            self.m_grid.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let ns: Vec<Option<usize>> = if kind.uses_n() {
            self.n_grid.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let sigmas: Vec<Option<f64>> = if kind == ExperimentKind::Lemma2Tail {
            vec![None]
        } else {
            self.sigma_grid.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &family in &families {
            for &m in &ms {
                for &n in &ns {
                    for &sigma in &sigmas {
                        for &d in &self.d_grid {
                            let mut params = Vec::new();
                            if let Some(f) = family {
                                params.push(("family".to_string(), Param::Text(f.name().into())));
                            }
                            if let Some(m) = m {
                                params.push(("m".to_string(), Param::Int(m)));
                            }
                            if let Some(n) = n {
                                params.push(("N".to_string(), Param::Int(n)));
                            }
                            if let Some(s) = sigma {
                                params.push(("sigma".to_string(), Param::Real(s)));
                            }
                            params.push(("d".to_string(), Param::Int(d)));
                            out.push(PointSpec {
                                family: family.unwrap_or(self.weight_family),
                                m: m.unwrap_or(1),
                                n: n.unwrap_or(1),
                                sigma: sigma.unwrap_or(1.0),
                                d,
                                params,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn stat_names(&self, grid: &[PointSpec]) -> Result<Vec<String>> {
        let names: Vec<&str> = match self.experiment {
            ExperimentKind::Fig1ExtremeSvVsD => vec!["sigma_min", "sigma_max", "condition"],
            ExperimentKind::Fig2SvDistributionVsN | ExperimentKind::Fig3SvDistributionVsSigma => {
                let len = grid[0].m.min(grid[0].n);
                if grid.iter().any(|p| p.m.min(p.n) != len) {
                    return Err(Error::Config(
                        "min(m, N) must be the same at every grid point".into(),
                    ));
                }
                return Ok((0..len).map(|i| format!("s{i}")).collect());
            }
            ExperimentKind::VerifyThm3 | ExperimentKind::VerifyThm4 => vec!["deviation", "R"],
            ExperimentKind::VerifyThm5 => vec!["min_sq_distance", "separated"],
            ExperimentKind::Lemma2Tail => vec!["fraction", "fitted_c"],
            _ => vec!["deviation"],
        };
        Ok(names.into_iter().map(String::from).collect())
    }
}

/// One grid coordinate value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(usize),
    Real(f64),
    Text(String),
}

impl Param {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Param::Int(v) => Some(*v as f64),
            Param::Real(v) => Some(*v),
            Param::Text(_) => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Param::Int(v) => v.to_string(),
            Param::Real(v) => fmt_f64(*v),
            Param::Text(s) => s.clone(),
        }
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Real(v) => write!(f, "{v}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone)]
struct PointSpec {
    family: Family,
    m: usize,
    n: usize,
    sigma: f64,
    d: usize,
    params: Vec<(String, Param)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub params: Vec<(String, Param)>,
    /// One statistic vector per trial, in trial order.
    pub trials: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Unbiased (`n − 1`) standard deviation; zero for a single trial.
    pub std: Vec<f64>,
    /// Fraction of trials violating the guaranteed conclusion.
    pub exceedance: Option<f64>,
    pub report: Option<BoundReport>,
}

impl GridPoint {
    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    /// Statistic `index` across trials.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.trials.iter().map(|t| t[index]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateResult {
    pub config: ExperimentConfig,
    pub stat_names: Vec<String>,
    pub points: Vec<GridPoint>,
}

/// Mean and unbiased standard deviation, summed in the given order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

impl AggregateResult {
    /// First grid point whose numeric parameters match every `(name, value)`.
    pub fn point(&self, coords: &[(&str, f64)]) -> Option<&GridPoint> {
        self.points.iter().find(|p| {
            coords
                .iter()
                .all(|(k, v)| p.param(k).and_then(Param::as_f64) == Some(*v))
        })
    }

    pub fn stat_index(&self, name: &str) -> Option<usize> {
        self.stat_names.iter().position(|s| s == name)
    }

    /// CSV: a `# config:` comment line, a header, then per grid point one row
    /// per trial followed by `mean` and `std` rows (and, for verification
    /// campaigns, `exceedance`, `bound` and `conditions_hold`).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# config: {}", self.config.to_json());
        let Some(first) = self.points.first() else {
            return out;
        };
        let mut header: Vec<&str> = first.params.iter().map(|(k, _)| k.as_str()).collect();
        header.push("trial");
        header.extend(self.stat_names.iter().map(String::as_str));
        let _ = writeln!(out, "{}", header.join(","));
        let width = self.stat_names.len();
        for p in &self.points {
            let prefix: Vec<String> = p.params.iter().map(|(_, v)| v.csv()).collect();
            let prefix = prefix.join(",");
            let mut row = |label: &str, values: &[f64]| {
                let mut cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
                cells.resize(width, String::new());
                let _ = writeln!(out, "{prefix},{label},{}", cells.join(","));
            };
            for (i, t) in p.trials.iter().enumerate() {
                row(&i.to_string(), t);
            }
            row("mean", &p.mean);
            row("std", &p.std);
            if let Some(e) = p.exceedance {
                row("exceedance", &[e]);
            }
            if let Some(r) = &p.report {
                row("bound", &[r.conclusion_bound]);
                row("conditions_hold", &[if r.all_hold() { 1.0 } else { 0.0 }]);
            }
        }
        out
    }

    /// JSON array of `{params, report}` for every grid point carrying a report.
    pub fn bounds_json(&self) -> Option<String> {
        let entries: Vec<Value> = self
            .points
            .iter()
            .filter_map(|p| {
                let params: Map<String, Value> = p
                    .params
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::to_value(v).unwrap_or(Value::Null)))
                    .collect();
                p.report
                    .as_ref()
                    .map(|r| json!({"params": params, "report": r}))
            })
            .collect();
        if entries.is_empty() {
            None
        } else {
            serde_json::to_string_pretty(&entries).ok()
        }
    }

    /// Line/band plot for figure campaigns.
    pub fn to_svg(&self) -> Option<String> {
        let kind = self.config.experiment;
        if !kind.is_figure() {
            return None;
        }
        let label_of = |p: &GridPoint, skip: &[&str]| -> String {
            p.params
                .iter()
                .filter(|(k, _)| !skip.contains(&k.as_str()))
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut plot = Plot::default();
        if kind == ExperimentKind::Fig1ExtremeSvVsD {
            plot.title = "Extreme singular values versus dimension".into();
            plot.x_label = "d".into();
            plot.y_label = "singular value".into();
            let mut groups: Vec<(String, Vec<&GridPoint>)> = Vec::new();
            for p in &self.points {
                let key = label_of(p, &["d"]);
                match groups.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, v)) => v.push(p),
                    None => groups.push((key, vec![p])),
                }
            }
            for (key, pts) in groups {
                for (idx, which) in [(0usize, "min"), (1, "max")] {
                    let xs: Vec<f64> = pts
                        .iter()
                        .filter_map(|p| p.param("d").and_then(Param::as_f64))
                        .collect();
                    plot.series.push(Series {
                        label: format!("{key} {which}"),
                        points: xs
                            .iter()
                            .zip(&pts)
                            .map(|(x, p)| (*x, p.mean[idx]))
                            .collect(),
                        band: Some(
                            xs.iter()
                                .zip(&pts)
                                .map(|(x, p)| {
                                    (*x, p.mean[idx] - p.std[idx], p.mean[idx] + p.std[idx])
                                })
                                .collect(),
                        ),
                    });
                }
            }
        } else {
            plot.title = "Singular values in ascending order".into();
            plot.x_label = "index".into();
            plot.y_label = "mean singular value".into();
            for p in &self.points {
                plot.series.push(Series {
                    label: label_of(p, &["m"]),
                    points: p
                        .mean
                        .iter()
                        .enumerate()
                        .map(|(i, v)| ((i + 1) as f64, *v))
                        .collect(),
                    band: None,
                });
            }
        }
        Some(plot.render_svg())
    }
}

/// `scale·Gram` of the chosen side with the diagonal set to exactly 1, which
/// it is for unimodular entries and the matching `scale`.
fn unit_diagonal_gram(a: &DenseMatrix, over_cols: bool) -> HermitianMatrix {
    let (n, scale) = if over_cols {
        (a.cols(), a.rows() as f64)
    } else {
        (a.rows(), a.cols() as f64)
    };
    let g = if over_cols {
        a.gram_cols(1.0)
    } else {
        a.gram_rows(1.0)
    };
    HermitianMatrix::from_upper(n, |j, k| {
        if j == k {
            1.0.into()
        } else {
            g.get(j, k) / scale
        }
    })
}

/// `‖G − I‖₂` for the normalized Gram `G` on the chosen side, through the
/// smaller Gram when that side is the larger one (the extra eigenvalues are 0).
fn gram_identity_deviation(a: &DenseMatrix, over_cols: bool) -> Result<f64> {
    let (side, other) = if over_cols {
        (a.cols(), a.rows())
    } else {
        (a.rows(), a.cols())
    };
    if side <= other {
        return spectral_norm_hermitian(&unit_diagonal_gram(a, over_cols).shift_diagonal(1.0));
    }
    // Nonzero eigenvalues of (1/s)A*A equal those of (1/s)AA*.
    let g = if over_cols {
        a.gram_rows(1.0)
    } else {
        a.gram_cols(1.0)
    };
    let small = g.scaled(1.0 / other as f64).shift_diagonal(1.0);
    Ok(spectral_norm_hermitian(&small)?.max(1.0))
}

/// Spectral norm of the selected deviation.
///
/// `orientation` picks the Gram for the Gram-based deviations: over the data
/// it is `(1/m)A*A` indexed by weights, over the weights `(1/N)AA*` indexed by
/// data. The conditional deviations only use `weights`.
pub fn measure_deviation(
    deviation: Deviation,
    orientation: Orientation,
    data: &PointCloud,
    weights: &PointCloud,
    gamma: f64,
    sigma: f64,
) -> Result<f64> {
    let over_data = orientation == Orientation::OverData;
    let gram =
        || -> Result<DenseMatrix> { Ok(build_feature_matrix(data, weights)?.entries().clone()) };
    let indexed = if over_data { weights } else { data };
    match deviation {
        Deviation::GramMinusIdentity => gram_identity_deviation(&gram()?, over_data),
        Deviation::GramMinusFull => {
            let g = unit_diagonal_gram(&gram()?, over_data);
            let full = full_expectation_matrix(indexed.len(), gamma, sigma, indexed.dim())?;
            spectral_norm_hermitian(&g.sub(&full)?)
        }
        Deviation::GramMinusConditional => {
            let g = unit_diagonal_gram(&gram()?, true);
            spectral_norm_hermitian(&g.sub(&expected_gram_over_data(weights, gamma)?)?)
        }
        Deviation::ConditionalMinusIdentity => {
            spectral_norm_hermitian(&expected_gram_over_data(weights, gamma)?.shift_diagonal(1.0))
        }
        Deviation::ConditionalMinusFull => {
            let e = expected_gram_over_data(weights, gamma)?;
            let full = full_expectation_matrix(weights.len(), gamma, sigma, weights.dim())?;
            spectral_norm_hermitian(&e.sub(&full)?)
        }
    }
}

/// `‖(1/N)AA* − K‖₂` with `K` the Gaussian kernel matrix of the data.
pub fn kernel_deviation(data: &PointCloud, weights: &PointCloud, sigma: f64) -> Result<f64> {
    let a = build_feature_matrix(data, weights)?;
    let g = unit_diagonal_gram(a.entries(), false);
    spectral_norm_hermitian(&g.sub(&gaussian_kernel_over_weights(data, sigma)?)?)
}

fn min_sq_distance(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Ok(f64::INFINITY);
    }
    Ok(separation_report(cloud)?.min_pairwise_sq_distance)
}

struct Seeds {
    data: u64,
    weights: u64,
    frozen_data: u64,
    frozen_weights: u64,
    trial: u64,
}

impl Seeds {
    fn new(base: u64, trial: usize) -> Self {
        let s = trial_seed(base, trial as u64);
        let s0 = trial_seed(base, 0);
        Self {
            data: trial_seed(s, DATA_STREAM),
            weights: trial_seed(s, WEIGHT_STREAM),
            frozen_data: trial_seed(s0, DATA_STREAM),
            frozen_weights: trial_seed(s0, WEIGHT_STREAM),
            trial: s,
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, p: &PointSpec, trial: usize) -> Result<Vec<f64>> {
    let seeds = Seeds::new(cfg.seed, trial);
    let data_spec = DistributionSpec::data(cfg.data_family, cfg.gamma, p.d)?;
    let weight_spec = DistributionSpec::weights(cfg.weight_family, p.sigma, p.d)?;
    let data = |seed| sample_cloud(&data_spec, p.m, seed);
    let weights = |seed| sample_cloud(&weight_spec, p.n, seed);
    match cfg.experiment {
        ExperimentKind::Fig1ExtremeSvVsD
        | ExperimentKind::Fig2SvDistributionVsN
        | ExperimentKind::Fig3SvDistributionVsSigma => {
            let a = build_feature_matrix(&weights(seeds.weights)?, &data(seeds.data)?)?;
            let a = if cfg.normalize {
                normalize_columns(&a)?
            } else {
                a
            };
            let s = singular_values(&a)?;
            if cfg.experiment == ExperimentKind::Fig1ExtremeSvVsD {
                Ok(vec![s.sigma_min, s.sigma_max, s.condition()])
            } else {
                Ok(s.values)
            }
        }
        ExperimentKind::VerifyThm1 | ExperimentKind::VerifyThm2 | ExperimentKind::VerifyThm6 => {
            let orientation = if cfg.experiment == ExperimentKind::VerifyThm2 {
                Orientation::OverWeights
            } else {
                Orientation::OverData
            };
            let dev = cfg.deviation.expect("validated");
            let w = weights(seeds.weights)?;
            let x = if cfg.experiment == ExperimentKind::VerifyThm6 {
                w.clone()
            } else {
                data(seeds.data)?
            };
            Ok(vec![measure_deviation(
                dev,
                orientation,
                &x,
                &w,
                cfg.gamma,
                p.sigma,
            )?])
        }
        ExperimentKind::VerifyThm3 => {
            let x = data(if cfg.frozen {
                seeds.frozen_data
            } else {
                seeds.data
            })?;
            let w = weights(seeds.weights)?;
            Ok(vec![
                kernel_deviation(&x, &w, p.sigma)?,
                min_sq_distance(&x)?,
            ])
        }
        ExperimentKind::VerifyThm4 => {
            let w = weights(if cfg.frozen {
                seeds.frozen_weights
            } else {
                seeds.weights
            })?;
            let x = data(seeds.data)?;
            let dev = measure_deviation(
                Deviation::GramMinusConditional,
                Orientation::OverData,
                &x,
                &w,
                cfg.gamma,
                p.sigma,
            )?;
            Ok(vec![dev, min_sq_distance(&w)? / p.d as f64])
        }
        ExperimentKind::VerifyThm5 => {
            let spec = DistributionSpec::weights(p.family, p.sigma, p.d)?;
            let w = sample_cloud(&spec, p.n, seeds.weights)?;
            let min_sq = min_sq_distance(&w)?;
            let threshold = (1.0 - 2.0 * cfg.t) * p.sigma * p.sigma * p.d as f64;
            Ok(vec![min_sq, if min_sq >= threshold { 1.0 } else { 0.0 }])
        }
        ExperimentKind::Lemma2Tail => {
            let spec = DistributionSpec::new(p.family, 1.0, p.d)?;
            let fraction = empirical_norm_tail(&spec, cfg.samples, cfg.t, seeds.trial)?;
            Ok(vec![fraction, fitted_tail_constant(fraction, cfg.t)])
        }
    }
}

fn point_report(
    cfg: &ExperimentConfig,
    p: &PointSpec,
    trials: &[Vec<f64>],
) -> Result<Option<BoundReport>> {
    let c = cfg.constants;
    let min_r = || trials.iter().map(|t| t[1]).fold(f64::INFINITY, f64::min);
    let regime = RegimeParams {
        d: p.d,
        m: p.m,
        n: p.n,
        gamma: cfg.gamma,
        sigma: p.sigma,
        delta: cfg.delta,
        eta: cfg.eta,
    };
    Ok(match cfg.experiment {
        ExperimentKind::VerifyThm1 => Some(check_theorem1(&regime, c.c1, c.c2)?),
        ExperimentKind::VerifyThm2 => Some(check_theorem2(&regime, c.c1, c.c2)?),
        ExperimentKind::VerifyThm3 => {
            let r = min_r();
            if r.is_finite() && r > 0.0 {
                Some(check_theorem3(
                    &KernelParams {
                        n: p.n,
                        m: p.m,
                        sigma: p.sigma,
                        r,
                        delta: cfg.delta,
                        eta: cfg.eta,
                    },
                    c.c,
                )?)
            } else {
                None
            }
        }
        ExperimentKind::VerifyThm4 => {
            let r = min_r();
            if r.is_finite() && r > 0.0 {
                Some(check_theorem4(
                    &SeparatedParams {
                        m: p.m,
                        n: p.n,
                        gamma: cfg.gamma,
                        r,
                        delta: cfg.delta,
                        eta: cfg.eta,
                    },
                    c.c,
                )?)
            } else {
                None
            }
        }
        ExperimentKind::VerifyThm5 => Some(check_separation(p.d, p.n, cfg.delta, cfg.t, c.c)?),
        ExperimentKind::VerifyThm6 => Some(check_theorem6(
            &ExpectationParams {
                d: p.d,
                n: p.n,
                gamma: cfg.gamma,
                sigma: p.sigma,
                delta: cfg.delta,
                eta: cfg.eta,
            },
            c.c,
        )?),
        _ => None,
    })
}

fn exceedance(
    cfg: &ExperimentConfig,
    trials: &[Vec<f64>],
    report: Option<&BoundReport>,
) -> Option<f64> {
    let n = trials.len() as f64;
    match cfg.experiment {
        ExperimentKind::VerifyThm5 => {
            Some(trials.iter().filter(|t| t[1] == 0.0).count() as f64 / n)
        }
        ExperimentKind::VerifyThm3 | ExperimentKind::VerifyThm4 => {
            Some(trials.iter().filter(|t| t[0] > cfg.eta).count() as f64 / n)
        }
        ExperimentKind::VerifyThm1 | ExperimentKind::VerifyThm2 | ExperimentKind::VerifyThm6 => {
            let bound = report.map(|r| r.conclusion_bound)?;
            Some(trials.iter().filter(|t| t[0] > bound).count() as f64 / n)
        }
        _ => None,
    }
}

/// Run any campaign on the current rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<AggregateResult> {
    config.validate()?;
    let grid = config.grid();
    let stat_names = config.stat_names(&grid)?;
    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|p| (0..config.trials).map(move |t| (p, t)))
        .collect();
    let results: Vec<Result<Vec<f64>>> = tasks
        .par_iter()
        .map(|&(p, t)| run_trial(config, &grid[p], t))
        .collect();
    let mut results = results.into_iter();
    let mut points = Vec::with_capacity(grid.len());
    for spec in &grid {
        let trials: Vec<Vec<f64>> = results
            .by_ref()
            .take(config.trials)
            .collect::<Result<_>>()?;
        let (mean, std): (Vec<f64>, Vec<f64>) = (0..stat_names.len())
            .map(|i| mean_std(&trials.iter().map(|t| t[i]).collect::<Vec<_>>()))
            .unzip();
        let report = point_report(config, spec, &trials)?;
        let exceedance = exceedance(config, &trials, report.as_ref());
        points.push(GridPoint {
            params: spec.params.clone(),
            trials,
            mean,
            std,
            exceedance,
            report,
        });
    }
    Ok(AggregateResult {
        config: config.clone(),
        stat_names,
        points,
    })
}

/// Run on a dedicated pool of `threads` workers (the global pool if `None`).
pub fn run_with_threads(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<AggregateResult> {
    match threads {
        None => run(config),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run(config)),
    }
}

fn require(config: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<()> {
    if kinds.contains(&config.experiment) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "experiment `{}` is not valid here",
            config.experiment.name()
        )))
    }
}

/// Extreme singular values versus dimension.
pub fn run_fig1(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(config, &[ExperimentKind::Fig1ExtremeSvVsD])?;
    run(config)
}

/// Ascending singular values, averaged entrywise over trials.
pub fn run_sv_distribution(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(
        config,
        &[
            ExperimentKind::Fig2SvDistributionVsN,
            ExperimentKind::Fig3SvDistributionVsSigma,
        ],
    )?;
    run(config)
}

/// Spectral norms of the configured deviation, with the matching bound report.
pub fn verify_concentration(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(
        config,
        &[
            ExperimentKind::VerifyThm1,
            ExperimentKind::VerifyThm2,
            ExperimentKind::VerifyThm4,
            ExperimentKind::VerifyThm6,
        ],
    )?;
    run(config)
}

/// `‖(1/N)AA* − K‖₂` with the data frozen (or resampled) and weights resampled.
pub fn verify_kernel_concentration(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(config, &[ExperimentKind::VerifyThm3])?;
    run(config)
}

/// Fraction of trials whose weights are `(1 − 2t)σ²d`-separated, per family.
pub fn verify_separation(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(config, &[ExperimentKind::VerifyThm5])?;
    run(config)
}

/// Empirical `P(|‖X‖₂ − √d| ≥ t)` per family with the fitted tail constant.
pub fn lemma2_tail(config: &ExperimentConfig) -> Result<AggregateResult> {
    require(config, &[ExperimentKind::Lemma2Tail])?;
    run(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: ExperimentKind, layer: Value) -> ExperimentConfig {
        ExperimentConfig::from_layers(Some(kind), &[layer]).unwrap()
    }

    #[test]
    fn defaults_resolve_for_every_kind() {
        for k in ExperimentKind::ALL {
            let c = ExperimentConfig::for_kind(k);
            assert_eq!(c.experiment, k);
            assert_eq!(
                c.trials,
                if k == ExperimentKind::VerifyThm5 {
                    100
                } else {
                    10
                }
            );
            let back = ExperimentConfig::from_json_str(&c.to_json()).unwrap();
            assert_eq!(back, c);
        }
        let f1 = ExperimentConfig::for_kind(ExperimentKind::Fig1ExtremeSvVsD);
        assert_eq!(f1.m_grid, vec![100]);
        assert_eq!(f1.n_grid, vec![5000]);
        assert_eq!(f1.d_grid, DEFAULT_D_GRID.to_vec());
        assert_eq!(f1.gamma, 1.0);
    }

    #[test]
    fn scalar_shorthands_and_errors() {
        let c = cfg(
            ExperimentKind::Fig1ExtremeSvVsD,
            json!({"m": 3, "N": 7, "d": 2, "sigma": 1.5}),
        );
        assert_eq!(
            (c.m_grid.clone(), c.n_grid.clone(), c.d_grid.clone()),
            (vec![3], vec![7], vec![2])
        );
        assert_eq!(c.sigma_grid, vec![1.5]);
        let bad = |v: Value| {
            ExperimentConfig::from_layers(Some(ExperimentKind::Fig1ExtremeSvVsD), &[v]).is_err()
        };
        assert!(bad(json!({"m": 3, "m_grid": [4]})));
        assert!(bad(json!({"trials": 0})));
        assert!(bad(json!({"d_grid": []})));
        assert!(bad(json!({"gamma": 0.0})));
        assert!(bad(json!({"bogus": 1})));
        assert!(bad(json!({"experiment": "verify_thm1"})));
        assert!(ExperimentConfig::from_json_str("{}").is_err());
        assert!(ExperimentConfig::from_json_str(
            r#"{"experiment": "verify_thm4", "deviation": "gram_minus_identity"}"#
        )
        .is_err());
    }

    #[test]
    fn std_is_unbiased() {
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_single_entry() {
        let c = cfg(
            ExperimentKind::Fig1ExtremeSvVsD,
            json!({"m": 1, "N": 1, "d": 3, "sigma": 2.0, "trials": 1}),
        );
        let r = run(&c).unwrap();
        assert_eq!(r.points.len(), 1);
        let p = &r.points[0];
        assert!((p.mean[0] - 1.0).abs() < 1e-15);
        assert!((p.mean[1] - 1.0).abs() < 1e-15);
        assert_eq!(p.std, vec![0.0; 3]);
    }

    #[test]
    fn small_figure_csv_shape() {
        let c = cfg(
            ExperimentKind::Fig1ExtremeSvVsD,
            json!({"m": 5, "N": 40, "d": 2, "sigma": 3.0, "trials": 1}),
        );
        let csv = run(&c).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config: {"));
        assert_eq!(lines[1], "m,N,sigma,d,trial,sigma_min,sigma_max,condition");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("5,40,3.0000000000000000e0,2,0,"));
        assert!(lines[4].starts_with("5,40,3.0000000000000000e0,2,std,0.0000000000000000e0,"));
    }

    #[test]
    fn kernel_deviation_single_point_is_zero() {
        let c = cfg(
            ExperimentKind::VerifyThm3,
            json!({"m": 1, "N": 49, "trials": 2}),
        );
        let r = run(&c).unwrap();
        assert_eq!(r.points[0].mean[0], 0.0);
        assert!(r.points[0].report.is_none());
    }

    #[test]
    fn repeated_weights_give_all_ones_block() {
        let n = 6;
        let w = PointCloud::from_points(&vec![vec![0.3, -1.0, 2.0]; n]).unwrap();
        let dev = measure_deviation(
            Deviation::ConditionalMinusIdentity,
            Orientation::OverData,
            &w,
            &w,
            1.0,
            1.0,
        )
        .unwrap();
        assert!((dev - (n as f64 - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn large_bandwidth_conditional_deviation_vanishes() {
        let c = cfg(
            ExperimentKind::VerifyThm6,
            json!({"N": 30, "d": 20, "sigma": 10.0, "gamma": 1.0, "trials": 3}),
        );
        let r = run(&c).unwrap();
        // Gershgorin: every off-diagonal is at most exp(-γ²‖Δω‖²/(2d)) and ‖Δω‖² ≈ 2σ²d.
        for t in &r.points[0].trials {
            assert!(t[0] < 30.0 * (-25.0f64).exp() + 1e-10);
        }
    }

    #[test]
    fn gram_identity_deviation_through_smaller_side() {
        let data = sample_cloud(
            &DistributionSpec::data(Family::Gaussian, 1.0, 4).unwrap(),
            3,
            1,
        )
        .unwrap();
        let weights = sample_cloud(
            &DistributionSpec::weights(Family::Gaussian, 2.0, 4).unwrap(),
            8,
            2,
        )
        .unwrap();
        let a = build_feature_matrix(&data, &weights).unwrap();
        // (1/3)A*A is 8×8 of rank ≤ 3: deviation is at least 1.
        let small = gram_identity_deviation(a.entries(), true).unwrap();
        let big =
            spectral_norm_hermitian(&a.entries().gram_cols(1.0 / 3.0).shift_diagonal(1.0)).unwrap();
        assert!((small - big).abs() < 1e-10);
        assert!(small >= 1.0);
    }
}
