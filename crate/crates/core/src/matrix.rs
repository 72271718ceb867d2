//! Dense complex matrices: a general rectangular container and the Hermitian
//! matrices that every spectral routine consumes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::fmt_complex;

/// Symmetry residue above which a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;

const PAIRWISE_BLOCK: usize = 64;

/// `Σ conj(a_i)·b_i` with pairwise summation.
pub(crate) fn pairwise_dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= PAIRWISE_BLOCK {
        let mut re = 0.0;
        let mut im = 0.0;
        for (x, y) in a.iter().zip(b) {
            // conj(x)·y
            re += x.re * y.re + x.im * y.im;
            im += x.re * y.im - x.im * y.re;
        }
        return Complex64::new(re, im);
    }
    let mid = a.len() / 2;
    pairwise_dot_conj(&a[..mid], &b[..mid]) + pairwise_dot_conj(&a[mid..], &b[mid..])
}

/// `Σ x_i` with pairwise summation.
pub(crate) fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= PAIRWISE_BLOCK {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `scale · A·A*` (size `rows × rows`).
    pub fn gram_rows(&self, scale: f64) -> HermitianMatrix {
        // (AA*)_{jk} = Σ_l A_jl conj(A_kl) = conj(Σ_l conj(A_jl) A_kl)
        let n = self.rows;
        HermitianMatrix::from_upper(n, |j, k| {
            pairwise_dot_conj(self.row(j), self.row(k)).conj() * scale
        })
    }

    /// `scale · A*·A` (size `cols × cols`).
    pub fn gram_cols(&self, scale: f64) -> HermitianMatrix {
        // (A*A)_{jk} = Σ_l conj(A_lj) A_lk; columns of A are rows of Aᵀ.
        let t = self.transpose();
        let n = self.cols;
        HermitianMatrix::from_upper(n, |j, k| pairwise_dot_conj(t.row(j), t.row(k)) * scale)
    }

    /// Unscaled Gram of the smaller side: `A*A` when `cols ≤ rows`, else `AA*`.
    pub fn smaller_gram(&self) -> HermitianMatrix {
        if self.cols <= self.rows {
            self.gram_cols(1.0)
        } else {
            self.gram_rows(1.0)
        }
    }

    /// CSV: header of column indices, then one line per row of `re+imj` cells.
    pub fn to_csv(&self) -> String {
        matrix_csv(self.rows, self.cols, |r, c| self.get(r, c))
    }
}

pub(crate) fn matrix_csv(
    rows: usize,
    cols: usize,
    get: impl Fn(usize, usize) -> Complex64,
) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..cols).map(|c| c.to_string()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in 0..rows {
        let line: Vec<String> = (0..cols).map(|c| fmt_complex(get(r, c))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Dense complex Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Build from the upper triangle (including the diagonal); the lower
    /// triangle is the mirrored conjugate and the diagonal is made real.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            data[j * n + j] = Complex64::new(f(j, j).re, 0.0);
            for k in (j + 1)..n {
                let z = f(j, k);
                data[j * n + k] = z;
                data[k * n + j] = z.conj();
            }
        }
        Self { n, data }
    }

    /// Real symmetric matrix from the upper triangle of `f`.
    pub fn real_symmetric(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_upper(n, |j, k| Complex64::new(f(j, k), 0.0))
    }

    /// Take a full row-major matrix, rejecting it if its symmetry residue
    /// exceeds [`HERMITIAN_TOLERANCE`].
    pub fn from_entries(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("matrix dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let m = Self { n, data };
        let residue = m.symmetry_residue();
        if residue > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { residue });
        }
        Ok(m)
    }

    #[cfg(test)]
    pub(crate) fn from_raw_unchecked(n: usize, data: Vec<Complex64>) -> Self {
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_entries(n, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::real_symmetric(n, |j, k| if j == k { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::real_symmetric(values.len(), |j, k| if j == k { values[j] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.data[j * self.n + k]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest componentwise `|M_jk − conj(M_kj)|`, diagonal imaginary parts included.
    pub fn symmetry_residue(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                let d = self.get(j, k) - self.get(k, j).conj();
                worst = worst.max(d.re.abs()).max(d.im.abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        let diag: Vec<f64> = (0..self.n).map(|j| self.get(j, j).re).collect();
        pairwise_sum(&diag)
    }

    pub fn frobenius_norm(&self) -> f64 {
        let sq: Vec<f64> = self.data.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&sq).sqrt()
    }

    /// Largest imaginary magnitude over all entries.
    pub fn max_imaginary(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.im.abs()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `M − c·I`.
    pub fn shift_diagonal(&self, c: f64) -> Self {
        let mut out = self.clone();
        for j in 0..self.n {
            out.data[j * self.n + j] -= c;
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `M·v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|j| self.row(j).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Same matrix with rows and columns reordered: new `(j,k)` is old `(order[j], order[k])`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_upper(self.n, |j, k| self.get(order[j], order[k]))
    }

    pub fn to_csv(&self) -> String {
        matrix_csv(self.n, self.n, |r, c| self.get(r, c))
    }
}
