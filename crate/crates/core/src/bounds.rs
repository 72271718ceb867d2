//! Tail bounds and complexity conditions, evaluated as explicit numbers.
//!
//! Every theorem check returns a [`BoundReport`] listing each hypothesis as
//! `(name, lhs, rhs, direction, holds)` together with the guaranteed
//! deviation and the failure probability. Unspecified constants (`C₁`, `C₂`,
//! `C`) are inputs and are always echoed in `constants_used`. The only fixed
//! constant is `C = 6` for the sample-size condition under separated weights,
//! which makes [`simplified_gram_tail`] at most `δ` (for `N ≥ 9`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;

/// Sample-size constant under which the simplified Gram tail is at most `δ`.
pub const SEPARATED_SAMPLE_CONSTANT: f64 = 6.0;
/// Smallest `N` for which the simplified Gram tail holds.
pub const SIMPLIFIED_TAIL_MIN_N: usize = 9;
/// Relative slack applied to `lhs` vs `rhs` so that exact boundaries pass.
pub const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Bernstein,
    Chi2,
    Gershgorin,
    SimplifiedTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs ≤ rhs`
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    pub holds: bool,
}

impl Condition {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let slack = BOUNDARY_SLACK * lhs.abs().max(rhs.abs());
        let holds = match direction {
            Direction::AtLeast => lhs >= rhs - slack,
            Direction::AtMost => lhs <= rhs + slack,
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            direction,
            holds,
        }
    }

    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, Direction::AtLeast)
    }

    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, Direction::AtMost)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub conditions: Vec<Condition>,
    /// Guaranteed deviation (or bound value for scalar reports), nonnegative.
    pub conclusion_bound: f64,
    /// Probability with which the conclusion may fail, when the theorem states one.
    pub failure_probability: Option<f64>,
    pub constants_used: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(theorem_id: TheoremId, conclusion_bound: f64) -> Self {
        Self {
            theorem_id,
            conditions: Vec::new(),
            conclusion_bound,
            failure_probability: None,
            constants_used: BTreeMap::new(),
        }
    }

    fn constant(mut self, name: &str, value: f64) -> Self {
        self.constants_used.insert(name.to_string(), value);
        self
    }

    fn condition(mut self, c: Condition) -> Self {
        self.conditions.push(c);
        self
    }

    fn failure(mut self, p: f64) -> Self {
        self.failure_probability = Some(p);
        self
    }

    /// Report for a bare scalar bound such as a tail probability.
    pub fn scalar(theorem_id: TheoremId, value: f64, constants: &[(&str, f64)]) -> Self {
        let mut r = Self::new(theorem_id, value);
        for (k, v) in constants {
            r.constants_used.insert((*k).to_string(), *v);
        }
        r
    }

    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn condition_named(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = serde_json::to_value(self.theorem_id)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        write!(f, "{id}: conclusion bound {:.6}", self.conclusion_bound)?;
        if let Some(p) = self.failure_probability {
            write!(f, ", failure probability {p:.4}")?;
        }
        writeln!(f)?;
        if !self.constants_used.is_empty() {
            let cs: Vec<String> = self
                .constants_used
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(f, "constants: {}", cs.join(", "))?;
        }
        if self.conditions.is_empty() {
            return Ok(());
        }
        let width = self
            .conditions
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(9);
        writeln!(
            f,
            "{:<width$}  {:>14}  {:>14}  holds",
            "condition", "lhs", "rhs"
        )?;
        for c in &self.conditions {
            writeln!(
                f,
                "{:<width$}  {:>14.6}  {:>14.6}  {}",
                c.name,
                c.lhs,
                c.rhs,
                if c.holds { "yes" } else { "NO" }
            )?;
        }
        Ok(())
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

/// `min(1, 2N·exp(−(t²/2)/(v + K·t/3)))` for independent mean-zero self-adjoint
/// `N × N` summands bounded by `K` with variance parameter `v`.
pub fn bernstein_tail(dim: usize, k: f64, variance: f64, t: f64) -> f64 {
    let exponent = -(t * t / 2.0) / (variance + k * t / 3.0);
    log_prefactor_tail(dim, exponent)
}

/// `min(1, 2N·exp(exponent))`, with the prefactor kept in log space.
fn log_prefactor_tail(n: usize, exponent: f64) -> f64 {
    ((2.0 * n as f64).ln() + exponent).exp().min(1.0)
}

/// `min(1, 2N·exp(−mη²/(5N + 9)))`: failure probability of
/// `‖(1/m)A*A − E_x[(1/m)A*A]‖₂ ≥ η` under separated weights.
pub fn simplified_gram_tail(m: usize, n: usize, eta: f64) -> Result<f64> {
    if n < SIMPLIFIED_TAIL_MIN_N {
        return Err(Error::Precondition(format!(
            "the simplified Gram tail assumes N >= {SIMPLIFIED_TAIL_MIN_N}, got N = {n}"
        )));
    }
    unit_interval("eta", eta)?;
    let exponent = -(m as f64) * eta * eta / (5.0 * n as f64 + 9.0);
    Ok(log_prefactor_tail(n, exponent))
}

/// `(z·e^{1−z})^{d/2}`: Chernoff bound on `P(‖ω‖² ≤ zσ²d)` for `ω ~ N(0, σ²I_d)`.
pub fn chi_square_chernoff(z: f64, d: usize) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Config(format!("z must lie in (0, 1], got {z}")));
    }
    Ok(((d as f64 / 2.0) * (z.ln() + 1.0 - z)).exp())
}

/// `C·η⁻²·n·log(2n/δ)`: the sample count demanded by the complexity conditions.
pub fn required_samples(c: f64, eta: f64, n: usize, delta: f64) -> f64 {
    c / (eta * eta) * n as f64 * (2.0 * n as f64 / delta).ln()
}

/// Parameters shared by the two randomized-input regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub d: usize,
    pub m: usize,
    #[serde(alias = "N")]
    pub n: usize,
    pub gamma: f64,
    pub sigma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl RegimeParams {
    /// Swap the roles of data and weights: `(m, γ) ↔ (N, σ)`.
    pub fn mirrored(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
            gamma: self.sigma,
            sigma: self.gamma,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        unit_interval("delta", self.delta)?;
        unit_interval("eta", self.eta)?;
        positive("gamma", self.gamma)?;
        positive("sigma", self.sigma)?;
        if self.d == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::Config("d, m and N must be positive".into()));
        }
        Ok(())
    }
}

/// Conditions for concentration of the Gram normalized over `samples`,
/// indexed by `indexed` points. `labels` are (indexed-size, sample-size) symbols.
fn regime_report(
    id: TheoremId,
    p: &RegimeParams,
    samples: usize,
    indexed: usize,
    labels: (&str, &str),
    c1: f64,
    c2: f64,
) -> BoundReport {
    let (k, s) = labels;
    let idx = indexed as f64;
    BoundReport::new(id, 2.0 * p.eta)
        .condition(Condition::at_least(
            format!("d >= C1 log({k}/delta)"),
            p.d as f64,
            c1 * (idx / p.delta).ln(),
        ))
        .condition(Condition::at_least(
            format!("gamma^2 sigma^2 >= 4 log(2{k}/eta)"),
            p.gamma * p.gamma * p.sigma * p.sigma,
            4.0 * (2.0 * idx / p.eta).ln(),
        ))
        .condition(Condition::at_least(
            format!("{s} >= C2 eta^-2 {k} log(2{k}/delta)"),
            samples as f64,
            required_samples(c2, p.eta, indexed, p.delta),
        ))
        .condition(Condition::at_least("eta >= 2 delta", p.eta, 2.0 * p.delta))
        .failure(5.0 * p.delta)
        .constant("C1", c1)
        .constant("C2", c2)
}

/// Underparameterized regime: `‖(1/m)A*A − I_N‖₂ ≤ 2η` w.p. `≥ 1 − 5δ`.
pub fn check_theorem1(p: &RegimeParams, c1: f64, c2: f64) -> Result<BoundReport> {
    p.validate()?;
    Ok(regime_report(
        TheoremId::Thm1,
        p,
        p.m,
        p.n,
        ("N", "m"),
        c1,
        c2,
    ))
}

/// Overparameterized regime: `‖(1/N)AA* − I_m‖₂ ≤ 2η` w.p. `≥ 1 − 5δ`.
pub fn check_theorem2(p: &RegimeParams, c1: f64, c2: f64) -> Result<BoundReport> {
    p.validate()?;
    Ok(regime_report(
        TheoremId::Thm2,
        p,
        p.n,
        p.m,
        ("m", "N"),
        c1,
        c2,
    ))
}

/// Fixed, separated data with Gaussian weights:
/// `‖(1/N)AA* − K‖₂ ≤ η` w.p. `≥ 1 − δ`, `K` the Gaussian kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    #[serde(alias = "N")]
    pub n: usize,
    pub m: usize,
    pub sigma: f64,
    /// Separation: minimum pairwise squared distance of the data.
    #[serde(alias = "R")]
    pub r: f64,
    pub delta: f64,
    pub eta: f64,
}

pub fn check_theorem3(p: &KernelParams, c: f64) -> Result<BoundReport> {
    unit_interval("delta", p.delta)?;
    unit_interval("eta", p.eta)?;
    positive("sigma", p.sigma)?;
    positive("R", p.r)?;
    let m = p.m as f64;
    Ok(BoundReport::new(TheoremId::Thm3, p.eta)
        .condition(Condition::at_least(
            "N >= C eta^-2 m log(2m/delta)",
            p.n as f64,
            required_samples(c, p.eta, p.m, p.delta),
        ))
        .condition(Condition::at_least(
            "sigma^2 >= (2/R) log(m/eta)",
            p.sigma * p.sigma,
            2.0 / p.r * (m / p.eta).ln(),
        ))
        .failure(p.delta)
        .constant("C", c))
}

/// Gaussian data against separated weights:
/// `‖(1/m)A*A − E_x[(1/m)A*A]‖₂ ≤ η` w.p. `≥ 1 − δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatedParams {
    pub m: usize,
    #[serde(alias = "N")]
    pub n: usize,
    pub gamma: f64,
    /// Separation: `min ‖ω_j − ω_k‖² / d`.
    #[serde(alias = "R")]
    pub r: f64,
    pub delta: f64,
    pub eta: f64,
}

pub fn check_theorem4(p: &SeparatedParams, c: f64) -> Result<BoundReport> {
    unit_interval("delta", p.delta)?;
    unit_interval("eta", p.eta)?;
    positive("gamma", p.gamma)?;
    positive("R", p.r)?;
    let n = p.n as f64;
    Ok(BoundReport::new(TheoremId::Thm4, p.eta)
        .condition(Condition::at_least(
            "m >= C eta^-2 N log(2N/delta)",
            p.m as f64,
            required_samples(c, p.eta, p.n, p.delta),
        ))
        .condition(Condition::at_least(
            "gamma^2 >= (2/R) log(N/eta)",
            p.gamma * p.gamma,
            2.0 / p.r * (n / p.eta).ln(),
        ))
        .condition(Condition::at_least(
            "N >= 9",
            n,
            SIMPLIFIED_TAIL_MIN_N as f64,
        ))
        .failure(p.delta)
        .constant("C", c))
}

/// Subgaussian weights: `‖E_x[(1/m)A*A] − I‖₂ ≤ η` (and, if `η ≥ 2δ`, the same
/// distance to the full expectation) w.p. `≥ 1 − 2δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationParams {
    pub d: usize,
    #[serde(alias = "N")]
    pub n: usize,
    pub gamma: f64,
    pub sigma: f64,
    pub delta: f64,
    pub eta: f64,
}

pub fn check_theorem6(p: &ExpectationParams, c: f64) -> Result<BoundReport> {
    unit_interval("delta", p.delta)?;
    unit_interval("eta", p.eta)?;
    positive("gamma", p.gamma)?;
    positive("sigma", p.sigma)?;
    let n = p.n as f64;
    Ok(BoundReport::new(TheoremId::Thm6, p.eta)
        .condition(Condition::at_least(
            "d >= C log(N/delta)",
            p.d as f64,
            c * (n / p.delta).ln(),
        ))
        .condition(Condition::at_least(
            "gamma^2 sigma^2 >= 4 log(2N/eta)",
            p.gamma * p.gamma * p.sigma * p.sigma,
            4.0 * (2.0 * n / p.eta).ln(),
        ))
        .condition(Condition::at_least("eta >= 2 delta", p.eta, 2.0 * p.delta))
        .failure(2.0 * p.delta)
        .constant("C", c))
}

/// Separation of unit-variance subgaussian weights:
/// `‖ω_j − ω_k‖² ≥ (1 − 2t)d` for all pairs w.p. `≥ 1 − 2δ`.
///
/// The conclusion bound is the squared-distance threshold `(1 − 2t)d`.
pub fn check_separation(d: usize, n: usize, delta: f64, t: f64, c: f64) -> Result<BoundReport> {
    unit_interval("delta", delta)?;
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::Config(format!("t must lie in (0, 1/2), got {t}")));
    }
    Ok(
        BoundReport::new(TheoremId::Thm5, (1.0 - 2.0 * t) * d as f64)
            .condition(Condition::at_least(
                "d >= C t^-2 log(N/delta)",
                d as f64,
                c / (t * t) * (n as f64 / delta).ln(),
            ))
            .failure(2.0 * delta)
            .constant("C", c)
            .constant("t", t),
    )
}

/// Gershgorin radius of `M − reference·I`:
/// `max_j Σ_{k≠j} |M_jk| + |M_jj − reference|`.
pub fn gershgorin_bound(m: &HermitianMatrix, diagonal_reference: f64) -> f64 {
    (0..m.n())
        .map(|j| {
            let off: f64 = m
                .row(j)
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, z)| z.norm())
                .sum();
            off + (m.get(j, j).re - diagonal_reference).abs()
        })
        .fold(0.0, f64::max)
}
