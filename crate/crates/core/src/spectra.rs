//! Hermitian eigenvalues and everything derived from them.
//!
//! A complex Hermitian `M = R + iJ` is solved through the real symmetric
//! embedding `[[R, −J], [J, R]]` of twice the size, whose spectrum is that of
//! `M` with every eigenvalue doubled. The embedding is diagonalized with
//! cyclic Jacobi rotations; the sorted values are then collapsed pairwise and
//! the pairing residue is checked.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::matrix::{DenseMatrix, HermitianMatrix, HERMITIAN_TOLERANCE};

/// Jacobi stops once the off-diagonal Frobenius norm is this fraction of `‖M‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 64;
/// Largest tolerated gap inside an embedded eigenvalue pair, relative to `max(1, ‖M‖_F)`.
pub const PAIRING_TOLERANCE: f64 = 1e-10;
/// Gram eigenvalues down to `-CLAMP_TOLERANCE·max(1, λ_max)` are rounding and clamp to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-10;
/// `σ_min` below this fraction of `σ_max` flags an infinite condition number.
pub const RANK_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    SingularValues,
    Eigenvalues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Sorted ascending.
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `None` when the spectrum is numerically rank deficient.
    pub condition_number: Option<f64>,
    /// Largest gap inside an embedded eigenvalue pair.
    pub pairing_residue: f64,
}

impl SpectrumResult {
    fn from_sorted(values: Vec<f64>, kind: SpectrumKind, pairing_residue: f64) -> Self {
        let sigma_min = values[0];
        let sigma_max = values[values.len() - 1];
        let condition_number = if sigma_min > RANK_TOLERANCE * sigma_max {
            Some(sigma_max / sigma_min)
        } else {
            None
        };
        Self {
            values,
            kind,
            sigma_min,
            sigma_max,
            condition_number,
            pairing_residue,
        }
    }

    /// Condition number with the rank-deficient case mapped to `+∞`.
    pub fn condition(&self) -> f64 {
        self.condition_number.unwrap_or(f64::INFINITY)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV with `index,value` columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", crate::io::fmt_f64(*v)));
        }
        out
    }
}

/// Eigen-decomposition of a real symmetric matrix stored row-major in `a`.
///
/// `a` is destroyed. Returns the (unsorted) eigenvalues and, if requested,
/// the eigenvectors as the columns of a row-major `n × n` matrix.
pub fn jacobi_symmetric(
    a: &mut [f64],
    n: usize,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    assert_eq!(a.len(), n * n);
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOLERANCE * frob;

    let mut sweep = 0;
    loop {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= target {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        // Early sweeps skip small pivots; later sweeps rotate everything above noise.
        let threshold = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if sweep > 3
                    && apq.abs() <= f64::EPSILON * 1e-2 * app.abs()
                    && apq.abs() <= f64::EPSILON * 1e-2 * aqq.abs()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                rotate(a, v.as_deref_mut(), n, p, q);
            }
        }
        sweep += 1;
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

#[inline]
fn rotate(a: &mut [f64], v: Option<&mut [f64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    // Update rows p and q (contiguous), then mirror them into columns p and q.
    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for r in 0..n {
        let arp = row_p[r];
        let arq = row_q[r];
        row_p[r] = arp - s * (arq + tau * arp);
        row_q[r] = arq + s * (arp - tau * arq);
    }
    // The loop above also touched the 2×2 pivot block; restore it.
    row_p[p] = app - t * apq;
    row_p[q] = 0.0;
    row_q[p] = 0.0;
    row_q[q] = aqq + t * apq;
    for r in 0..n {
        if r != p && r != q {
            a[r * n + p] = a[p * n + r];
            a[r * n + q] = a[q * n + r];
        }
    }
    if let Some(v) = v {
        for r in 0..n {
            let vrp = v[r * n + p];
            let vrq = v[r * n + q];
            v[r * n + p] = vrp - s * (vrq + tau * vrp);
            v[r * n + q] = vrq + s * (vrp - tau * vrq);
        }
    }
}

fn embed(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.n();
    let size = 2 * n;
    let mut e = vec![0.0; size * size];
    for j in 0..n {
        for k in 0..n {
            let z = m.get(j, k);
            e[j * size + k] = z.re;
            e[(j + n) * size + (k + n)] = z.re;
            e[j * size + (k + n)] = -z.im;
            e[(j + n) * size + k] = z.im;
        }
    }
    e
}

fn check_hermitian(m: &HermitianMatrix) -> Result<()> {
    let residue = m.symmetry_residue();
    if residue > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { residue });
    }
    Ok(())
}

/// Collapse the doubled, sorted embedding spectrum into `n` values.
fn collapse_pairs(mut doubled: Vec<f64>, scale: f64) -> Result<(Vec<f64>, f64, Vec<usize>)> {
    let mut order: Vec<usize> = (0..doubled.len()).collect();
    order.sort_by(|&i, &j| doubled[i].total_cmp(&doubled[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| doubled[i]).collect();
    doubled.clear();
    let mut residue = 0.0f64;
    let mut values = Vec::with_capacity(sorted.len() / 2);
    for pair in sorted.chunks_exact(2) {
        residue = residue.max(pair[1] - pair[0]);
        values.push(0.5 * (pair[0] + pair[1]));
    }
    if residue > PAIRING_TOLERANCE * scale.max(1.0) {
        return Err(Error::Pairing { residue });
    }
    // First index of each pair, for eigenvector extraction.
    let firsts = order.chunks_exact(2).map(|p| p[0]).collect();
    Ok((values, residue, firsts))
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<SpectrumResult> {
    check_hermitian(m)?;
    let n = m.n();
    let mut e = embed(m);
    let (doubled, _) = jacobi_symmetric(&mut e, 2 * n, false)?;
    let (values, residue, _) = collapse_pairs(doubled, m.frobenius_norm())?;
    Ok(SpectrumResult::from_sorted(
        values,
        SpectrumKind::Eigenvalues,
        residue,
    ))
}

/// Eigenvalues together with unit eigenvectors (one per eigenvalue, in the same order).
pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<(SpectrumResult, Vec<Vec<Complex64>>)> {
    check_hermitian(m)?;
    let n = m.n();
    let size = 2 * n;
    let mut e = embed(m);
    let (doubled, vecs) = jacobi_symmetric(&mut e, size, true)?;
    let vecs = vecs.expect("vectors requested");
    let (values, residue, firsts) = collapse_pairs(doubled, m.frobenius_norm())?;
    let vectors = firsts
        .iter()
        .map(|&col| {
            // Embedded eigenvector [u; w] ↦ u + i·w.
            let z: Vec<Complex64> = (0..n)
                .map(|r| Complex64::new(vecs[r * size + col], vecs[(r + n) * size + col]))
                .collect();
            let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            z.into_iter().map(|c| c / norm).collect()
        })
        .collect();
    Ok((
        SpectrumResult::from_sorted(values, SpectrumKind::Eigenvalues, residue),
        vectors,
    ))
}

/// Singular values of a dense matrix: roots of the eigenvalues of its smaller
/// unscaled Gram, `min(rows, cols)` of them, ascending.
pub fn singular_values_dense(a: &DenseMatrix) -> Result<SpectrumResult> {
    let gram = a.smaller_gram();
    let eig = hermitian_eigenvalues(&gram)?;
    let floor = -CLAMP_TOLERANCE * eig.sigma_max.abs().max(1.0);
    let mut values = Vec::with_capacity(eig.values.len());
    for &lambda in &eig.values {
        if lambda < floor {
            return Err(Error::NegativeEigenvalue(lambda));
        }
        values.push(lambda.max(0.0).sqrt());
    }
    Ok(SpectrumResult::from_sorted(
        values,
        SpectrumKind::SingularValues,
        eig.pairing_residue,
    ))
}

pub fn singular_values(a: &FeatureMatrix) -> Result<SpectrumResult> {
    singular_values_dense(a.entries())
}

/// `‖M‖₂ = max |λ|` for Hermitian `M`.
pub fn spectral_norm_hermitian(m: &HermitianMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(m)?;
    Ok(eig.sigma_min.abs().max(eig.sigma_max.abs()))
}

/// `‖M − I‖₂ = max |λ − 1|` for Hermitian `M`.
pub fn deviation_from_identity(m: &HermitianMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(m)?;
    Ok((eig.sigma_min - 1.0).abs().max((eig.sigma_max - 1.0).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_three() {
        let s = hermitian_eigenvalues(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.condition_number, Some(1.0));
    }

    #[test]
    fn real_two_by_two() {
        let m = HermitianMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let s = hermitian_eigenvalues(&m).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        assert!((s.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // λ² − 2λ = 0
        let m = HermitianMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let s = hermitian_eigenvalues(&m).unwrap();
        assert!(s.values[0].abs() < 1e-14);
        assert!((s.values[1] - 2.0).abs() < 1e-14);
        assert!(s.condition_number.is_none());
        assert!(s.pairing_residue < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let bad = HermitianMatrix::from_raw_unchecked(
            2,
            vec![c(1.0, 0.0), c(1e-3, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert!(matches!(
            hermitian_eigenvalues(&bad),
            Err(Error::NotHermitian { .. })
        ));
        let slight = HermitianMatrix::from_raw_unchecked(
            2,
            vec![c(1.0, 0.0), c(1e-10, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert!(hermitian_eigenvalues(&slight).is_ok());
    }

    #[test]
    fn norms_and_deviation() {
        let zero = HermitianMatrix::diagonal(&[0.0, 0.0, 0.0]);
        assert_eq!(spectral_norm_hermitian(&zero).unwrap(), 0.0);
        assert_eq!(
            spectral_norm_hermitian(&HermitianMatrix::diagonal(&[-3.0, 2.0])).unwrap(),
            3.0
        );
        assert_eq!(
            deviation_from_identity(&HermitianMatrix::identity(4)).unwrap(),
            0.0
        );
        let d = deviation_from_identity(&HermitianMatrix::diagonal(&[0.5, 1.9])).unwrap();
        assert!((d - 0.9).abs() < 1e-15);
    }

    #[test]
    fn eigenvectors_satisfy_backward_error() {
        let m = HermitianMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -0.5), c(0.0, 0.3)],
            vec![c(1.0, 0.5), c(-1.0, 0.0), c(0.7, 0.0)],
            vec![c(0.0, -0.3), c(0.7, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let (s, vecs) = hermitian_eigen(&m).unwrap();
        let fro = m.frobenius_norm();
        for (lambda, v) in s.values.iter().zip(&vecs) {
            let mv = m.mul_vec(v);
            let res: f64 = mv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * fro, "residual {res}");
        }
    }

    #[test]
    fn singular_values_of_single_row() {
        let a = DenseMatrix::from_vec(
            1,
            4,
            vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.6, 0.8)],
        )
        .unwrap();
        let s = singular_values_dense(&a).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.values[0] - 2.0).abs() < 1e-14);
        assert_eq!(s.kind, SpectrumKind::SingularValues);
    }

    #[test]
    fn spectrum_csv() {
        let s = hermitian_eigenvalues(&HermitianMatrix::diagonal(&[2.0, 1.0])).unwrap();
        assert_eq!(
            s.to_csv(),
            "index,value\n0,1.0000000000000000e0\n1,2.0000000000000000e0\n"
        );
    }

    #[test]
    fn jacobi_diagonal_input_is_immediate() {
        let mut a = vec![3.0, 0.0, 0.0, -1.0];
        let (vals, _) = jacobi_symmetric(&mut a, 2, false).unwrap();
        assert_eq!(vals, vec![3.0, -1.0]);
    }
}
