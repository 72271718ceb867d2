//! The complex random feature matrix `A_{j,k} = exp(i⟨x_j, ω_k⟩)` and its
//! two normalized Gram matrices.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, HermitianMatrix};
use crate::sampling::{dot, PointCloud};

/// An `m × N` matrix of unimodular entries (or `1/√m`-modulus entries once
/// its columns are normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    entries: DenseMatrix,
    normalized: bool,
}

impl FeatureMatrix {
    /// Number of data points (rows).
    pub fn m(&self) -> usize {
        self.entries.rows()
    }

    /// Number of feature weights (columns).
    pub fn n(&self) -> usize {
        self.entries.cols()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries.get(j, k)
    }

    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn to_csv(&self) -> String {
        self.entries.to_csv()
    }
}

/// `A_{j,k} = (cos⟨x_j, ω_k⟩, sin⟨x_j, ω_k⟩)` for `m` data points and `N` weights.
pub fn build_feature_matrix(data: &PointCloud, weights: &PointCloud) -> Result<FeatureMatrix> {
    if data.dim() != weights.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: weights.dim(),
        });
    }
    let m = data.len();
    let n = weights.len();
    let mut entries = DenseMatrix::from_vec(m, n, vec![Complex64::new(0.0, 0.0); m * n])?;
    // Each entry depends only on its own pair, so the schedule cannot change the result.
    entries
        .as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, row)| {
            let x = data.point(j);
            for (k, cell) in row.iter_mut().enumerate() {
                let (s, c) = dot(x, weights.point(k)).sin_cos();
                *cell = Complex64::new(c, s);
            }
        });
    Ok(FeatureMatrix {
        entries,
        normalized: false,
    })
}

/// Divide every column by its exact ℓ² norm (`√m` for unimodular entries).
pub fn normalize_columns(a: &FeatureMatrix) -> Result<FeatureMatrix> {
    if a.normalized {
        return Err(Error::Precondition(
            "feature matrix is already normalized".into(),
        ));
    }
    let (m, n) = (a.m(), a.n());
    let t = a.entries.transpose();
    let mut norms = Vec::with_capacity(n);
    for k in 0..n {
        let col = t.row(k);
        let norm = crate::matrix::pairwise_dot_conj(col, col).re.sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::Precondition(format!("column {k} has zero norm")));
        }
        norms.push(norm);
    }
    let mut data = Vec::with_capacity(m * n);
    for j in 0..m {
        for (k, norm) in norms.iter().enumerate() {
            data.push(a.get(j, k) / norm);
        }
    }
    Ok(FeatureMatrix {
        entries: DenseMatrix::from_vec(m, n, data)?,
        normalized: true,
    })
}

fn require_raw(a: &FeatureMatrix) -> Result<()> {
    if a.normalized {
        return Err(Error::Precondition(
            "Gram normalization expects a raw (unnormalized) feature matrix".into(),
        ));
    }
    Ok(())
}

/// `(1/m)·A*A`, size `N × N`.
pub fn gram_over_weights(a: &FeatureMatrix) -> Result<HermitianMatrix> {
    require_raw(a)?;
    Ok(a.entries.gram_cols(1.0 / a.m() as f64))
}

/// `(1/N)·A·A*`, size `m × m`.
pub fn gram_over_data(a: &FeatureMatrix) -> Result<HermitianMatrix> {
    require_raw(a)?;
    Ok(a.entries.gram_rows(1.0 / a.n() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cloud(points: &[&[f64]]) -> PointCloud {
        PointCloud::from_points(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_data_point_gives_unit_row() {
        let data = cloud(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let weights = cloud(&[&[0.3, -2.0], &[5.0, 1.0], &[-1.0, 0.5]]);
        let a = build_feature_matrix(&data, &weights).unwrap();
        for k in 0..3 {
            assert_eq!(a.get(0, k), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn euler_identity_entry() {
        let a = build_feature_matrix(&cloud(&[&[PI]]), &cloud(&[&[1.0]])).unwrap();
        let z = a.get(0, 0);
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    #[test]
    fn two_dimensional_entry() {
        // ⟨(1,2), (3,−1)⟩ = 1
        let a = build_feature_matrix(&cloud(&[&[1.0, 2.0]]), &cloud(&[&[3.0, -1.0]])).unwrap();
        let z = a.get(0, 0);
        assert!((z.re - 0.540_302_305_868_139_8).abs() < 1e-15);
        assert!((z.im - 0.841_470_984_807_896_5).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let r = build_feature_matrix(&cloud(&[&[1.0, 2.0]]), &cloud(&[&[3.0]]));
        assert!(matches!(
            r,
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn normalization_m4() {
        let data = cloud(&[&[0.1], &[0.7], &[-1.3], &[2.2]]);
        let weights = cloud(&[&[1.0], &[2.5], &[-0.4]]);
        let a = build_feature_matrix(&data, &weights).unwrap();
        let b = normalize_columns(&a).unwrap();
        assert!(b.is_normalized());
        for k in 0..3 {
            let norm: f64 = (0..4).map(|j| b.get(j, k).norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            for j in 0..4 {
                assert!((b.get(j, k) - a.get(j, k) * 0.5).norm() < 1e-15);
            }
        }
        assert!(matches!(normalize_columns(&b), Err(Error::Precondition(_))));
        assert!(gram_over_weights(&b).is_err());
        assert!(gram_over_data(&b).is_err());
    }

    #[test]
    fn single_column_and_single_row_grams() {
        let data = cloud(&[&[0.2], &[1.1], &[-0.5]]);
        let w1 = cloud(&[&[1.7]]);
        let a = build_feature_matrix(&data, &w1).unwrap();
        let g = gram_over_weights(&a).unwrap();
        assert_eq!(g.n(), 1);
        assert!((g.get(0, 0).re - 1.0).abs() < 1e-15);

        let row =
            build_feature_matrix(&cloud(&[&[0.4]]), &cloud(&[&[1.0], &[2.0], &[-3.0]])).unwrap();
        let gd = gram_over_data(&row).unwrap();
        assert_eq!(gd.n(), 1);
        assert!((gd.get(0, 0).re - 1.0).abs() < 1e-15);
        let gw = gram_over_weights(&row).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((gw.get(j, k).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hand_computed_two_by_two() {
        // x = 0, π; ω = 1, 2 → A = [[1, 1], [−1, 1]]
        let data = cloud(&[&[0.0], &[PI]]);
        let weights = cloud(&[&[1.0], &[2.0]]);
        let a = build_feature_matrix(&data, &weights).unwrap();
        let expect = [[1.0, 1.0], [-1.0, 1.0]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((a.get(j, k) - Complex64::new(expect[j][k], 0.0)).norm() < 1e-15);
            }
        }
        // Direct 2×2 products.
        let mut ata = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut aat = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    ata[j][k] += a.get(l, j).conj() * a.get(l, k) / 2.0;
                    aat[j][k] += a.get(j, l) * a.get(k, l).conj() / 2.0;
                }
            }
        }
        let gw = gram_over_weights(&a).unwrap();
        let gd = gram_over_data(&a).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                assert!((gw.get(j, k) - ata[j][k]).norm() < 1e-15);
                assert!((gd.get(j, k) - aat[j][k]).norm() < 1e-15);
                let id = if j == k { 1.0 } else { 0.0 };
                assert!((gw.get(j, k).re - id).abs() < 1e-15);
            }
        }
    }
}
