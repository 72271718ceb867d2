//! Seeded point clouds for data points and feature weights, and pairwise
//! separation diagnostics.
//!
//! Every component is drawn independently with mean zero and an exact
//! per-component variance. Data points use variance `γ²/d` so that
//! `E‖x‖² = γ²` independently of the dimension; weights use `σ²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    /// `±sqrt(variance)` with equal probability.
    Rademacher,
    /// Uniform on `[-a, a]` with `a = sqrt(3·variance)`.
    Uniform,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Gaussian, Family::Rademacher, Family::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Rademacher => "rademacher",
            Family::Uniform => "uniform",
        }
    }
}

/// Component distribution of a point cloud.
///
/// Serialized as `{"family": "gaussian", "variance": 1.0, "d": 10}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub family: Family,
    /// Per-component variance, strictly positive.
    pub variance: f64,
    #[serde(rename = "d")]
    pub dimension: usize,
}

impl DistributionSpec {
    pub fn new(family: Family, variance: f64, dimension: usize) -> Result<Self> {
        let spec = Self {
            family,
            variance,
            dimension,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Data distribution with the dimensional scaling `variance = γ²/d`.
    pub fn data(family: Family, gamma: f64, dimension: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if dimension == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        Self::new(family, gamma * gamma / dimension as f64, dimension)
    }

    /// Weight distribution with `variance = σ²`.
    pub fn weights(family: Family, sigma: f64, dimension: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Config(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Self::new(family, sigma * sigma, dimension)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(Error::Config(format!(
                "per-component variance must be positive and finite, got {}",
                self.variance
            )));
        }
        if self.dimension == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        Ok(())
    }

    /// Draw one component from `rng`.
    #[inline]
    pub fn draw(&self, rng: &mut Rng) -> f64 {
        match self.family {
            Family::Gaussian => self.variance.sqrt() * rng.standard_normal(),
            Family::Rademacher => self.variance.sqrt() * rng.sign(),
            Family::Uniform => {
                let half_width = (3.0 * self.variance).sqrt();
                half_width * (2.0 * rng.uniform() - 1.0)
            }
        }
    }
}

/// Where a point cloud came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: DistributionSpec,
    pub seed: u64,
}

/// `n` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    len: usize,
    dim: usize,
    provenance: Option<Provenance>,
}

impl PointCloud {
    /// Wrap explicit points. All rows must share one nonzero dimension.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Config("point cloud must be nonempty".into()))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Config("points must have positive dimension".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self {
            coords,
            len: points.len(),
            dim,
            provenance: None,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Same points, reordered so that new point `i` is old point `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in order {
            coords.extend_from_slice(self.point(i));
        }
        Self {
            coords,
            len: order.len(),
            dim: self.dim,
            provenance: self.provenance,
        }
    }

    pub fn sq_distance(&self, j: usize, k: usize) -> f64 {
        sq_distance(self.point(j), self.point(k))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn sq_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

/// Draw `n` i.i.d. points. Deterministic in `(spec, n, seed)`.
pub fn sample_cloud(spec: &DistributionSpec, n: usize, seed: u64) -> Result<PointCloud> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Config("cloud size n must be at least 1".into()));
    }
    let mut rng = Rng::new(seed);
    let coords: Vec<f64> = (0..n * spec.dimension)
        .map(|_| spec.draw(&mut rng))
        .collect();
    Ok(PointCloud {
        coords,
        len: n,
        dim: spec.dimension,
        provenance: Some(Provenance { spec: *spec, seed }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// `min_{j≠k} ‖p_j − p_k‖²`.
    pub min_pairwise_sq_distance: f64,
    /// `max_{j≠k} |⟨p_j, p_k⟩|`.
    pub max_offdiag_inner: f64,
    /// Largest column coherence of the `1/√d`-scaled points, `max_offdiag_inner / d`.
    pub delta2: f64,
    /// `min_k ‖p_k‖²`.
    pub min_sq_norm: f64,
}

impl SeparationReport {
    /// Minimum pairwise Euclidean distance.
    pub fn min_pairwise_distance(&self) -> f64 {
        self.min_pairwise_sq_distance.sqrt()
    }
}

/// Exact O(n²d) separation statistics of a cloud with at least two points.
pub fn separation_report(cloud: &PointCloud) -> Result<SeparationReport> {
    if cloud.len() < 2 {
        return Err(Error::Precondition(
            "separation needs at least two points".into(),
        ));
    }
    let mut min_sq = f64::INFINITY;
    let mut max_inner = 0.0f64;
    let mut min_norm = f64::INFINITY;
    for j in 0..cloud.len() {
        let pj = cloud.point(j);
        min_norm = min_norm.min(dot(pj, pj));
        for k in (j + 1)..cloud.len() {
            let pk = cloud.point(k);
            min_sq = min_sq.min(sq_distance(pj, pk));
            max_inner = max_inner.max(dot(pj, pk).abs());
        }
    }
    Ok(SeparationReport {
        min_pairwise_sq_distance: min_sq,
        max_offdiag_inner: max_inner,
        delta2: max_inner / cloud.dim() as f64,
        min_sq_norm: min_norm,
    })
}

/// Fraction of `trials` draws `X` with `|‖X‖₂ − √d| ≥ t`.
///
/// Requires unit per-component variance.
pub fn empirical_norm_tail(
    spec: &DistributionSpec,
    trials: usize,
    t: f64,
    seed: u64,
) -> Result<f64> {
    spec.validate()?;
    if (spec.variance - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "norm tail requires unit component variance, got {}",
            spec.variance
        )));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Config(format!(
            "threshold must be nonnegative, got {t}"
        )));
    }
    let mut rng = Rng::new(seed);
    let root_d = (spec.dimension as f64).sqrt();
    let mut hits = 0usize;
    for _ in 0..trials {
        let sq: f64 = (0..spec.dimension)
            .map(|_| {
                let v = spec.draw(&mut rng);
                v * v
            })
            .sum();
        if (sq.sqrt() - root_d).abs() >= t {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Largest `C` with `fraction ≤ 2·exp(−C t²)`; infinite when no draw exceeded `t`.
pub fn fitted_tail_constant(fraction: f64, t: f64) -> f64 {
    if fraction <= 0.0 {
        return f64::INFINITY;
    }
    (2.0 / fraction).ln() / (t * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configs() {
        assert!(DistributionSpec::new(Family::Gaussian, 0.0, 3).is_err());
        assert!(DistributionSpec::new(Family::Gaussian, -1.0, 3).is_err());
        assert!(DistributionSpec::new(Family::Gaussian, 1.0, 0).is_err());
        let spec = DistributionSpec::new(Family::Gaussian, 1.0, 3).unwrap();
        assert!(matches!(sample_cloud(&spec, 0, 1), Err(Error::Config(_))));
        let bad = DistributionSpec {
            family: Family::Uniform,
            variance: 0.0,
            dimension: 2,
        };
        assert!(sample_cloud(&bad, 5, 1).is_err());
    }

    #[test]
    fn rademacher_components_are_signs() {
        let spec = DistributionSpec::new(Family::Rademacher, 1.0, 4).unwrap();
        let cloud = sample_cloud(&spec, 1, 99).unwrap();
        assert!(cloud.point(0).iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn uniform_components_within_half_width() {
        let spec = DistributionSpec::new(Family::Uniform, 2.0, 5).unwrap();
        let a = 6.0f64.sqrt();
        let cloud = sample_cloud(&spec, 200, 3).unwrap();
        assert!(cloud.iter().flatten().all(|v| v.abs() <= a));
    }

    #[test]
    fn data_scaling() {
        let spec = DistributionSpec::data(Family::Gaussian, 2.0, 8).unwrap();
        assert_eq!(spec.variance, 0.5);
        let w = DistributionSpec::weights(Family::Gaussian, 3.0, 8).unwrap();
        assert_eq!(w.variance, 9.0);
        assert!(DistributionSpec::data(Family::Gaussian, 0.0, 8).is_err());
    }

    #[test]
    fn mean_sq_norm_matches_gamma() {
        // E‖x‖² = d·γ²/d = γ² = 1; Var‖x‖² = d·2(γ²/d)² = 2/d.
        let spec = DistributionSpec::data(Family::Gaussian, 1.0, 100).unwrap();
        let n = 10_000;
        let cloud = sample_cloud(&spec, n, 11).unwrap();
        let norms: Vec<f64> = cloud.iter().map(|p| dot(p, p)).collect();
        let mean = norms.iter().sum::<f64>() / n as f64;
        let var = norms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn json_shape() {
        let spec = DistributionSpec::new(Family::Rademacher, 0.25, 7).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"family":"rademacher","variance":0.25,"d":7}"#);
        let back: DistributionSpec =
            serde_json::from_str(r#"{"family":"uniform","variance":3,"d":2}"#).unwrap();
        assert_eq!(back.family, Family::Uniform);
        assert_eq!(back.dimension, 2);
    }

    #[test]
    fn separation_edge_cases() {
        let single = PointCloud::from_points(&[vec![1.0, 2.0]]).unwrap();
        assert!(separation_report(&single).is_err());

        let same = PointCloud::from_points(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(
            separation_report(&same).unwrap().min_pairwise_sq_distance,
            0.0
        );

        let basis = PointCloud::from_points(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = separation_report(&basis).unwrap();
        assert_eq!(r.min_pairwise_sq_distance, 2.0);
        assert_eq!(r.max_offdiag_inner, 0.0);
        assert_eq!(r.delta2, 0.0);
        assert_eq!(r.min_sq_norm, 1.0);
    }

    #[test]
    fn ragged_points_rejected() {
        assert!(matches!(
            PointCloud::from_points(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(PointCloud::from_points(&[]).is_err());
    }

    #[test]
    fn norm_tail_zero_threshold_is_one() {
        let spec = DistributionSpec::new(Family::Gaussian, 1.0, 10).unwrap();
        assert_eq!(empirical_norm_tail(&spec, 500, 0.0, 1).unwrap(), 1.0);
        let scaled = DistributionSpec::new(Family::Gaussian, 2.0, 10).unwrap();
        assert!(empirical_norm_tail(&scaled, 10, 1.0, 1).is_err());
        assert!(empirical_norm_tail(&spec, 0, 1.0, 1).is_err());
    }

    #[test]
    fn tail_constant_inverts_bound() {
        let c = fitted_tail_constant(2.0 * (-0.5f64 * 9.0).exp(), 3.0);
        assert!((c - 0.5).abs() < 1e-12);
        assert!(fitted_tail_constant(0.0, 3.0).is_infinite());
    }
}
