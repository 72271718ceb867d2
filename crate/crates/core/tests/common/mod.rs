//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rfspectra::HermitianMatrix;

pub fn chacha(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random Hermitian matrix with entries in the unit square.
pub fn random_hermitian(n: usize, rng: &mut ChaCha20Rng) -> HermitianMatrix {
    HermitianMatrix::from_upper(n, |j, k| {
        if j == k {
            Complex64::new(rng.gen_range(-2.0..2.0), 0.0)
        } else {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }
    })
}

fn to_rows(m: &HermitianMatrix) -> Vec<Vec<Complex64>> {
    (0..m.n()).map(|j| m.row(j).to_vec()).collect()
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Characteristic polynomial coefficients `[1, c₁, …, c_n]` of
/// `λⁿ + c₁λⁿ⁻¹ + … + c_n` by Faddeev–LeVerrier.
pub fn char_poly(m: &HermitianMatrix) -> Vec<f64> {
    let a = to_rows(m);
    let n = a.len();
    let mut coeffs = vec![1.0];
    let mut mk = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut c_prev = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{k−1}·I
        let mut next = matmul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c_prev;
        }
        mk = next;
        let am = matmul(&a, &mk);
        let tr: Complex64 = (0..n).map(|i| am[i][i]).sum();
        let c = -tr / k as f64;
        coeffs.push(c.re);
        c_prev = c;
    }
    coeffs
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Roots of a monic real polynomial by Durand–Kerner, then Newton polishing
/// of the real parts. Sorted ascending.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let scale = 1.0 + coeffs.iter().skip(1).map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * scale).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(coeffs, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    let deriv: Vec<f64> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (n - i) as f64)
        .collect();
    let mut roots: Vec<f64> = z
        .iter()
        .map(|r| {
            let mut x = r.re;
            for _ in 0..5 {
                let f = horner(coeffs, Complex64::new(x, 0.0)).re;
                let df = horner(&deriv, Complex64::new(x, 0.0)).re;
                if df.abs() < 1e-300 {
                    break;
                }
                let nx = x - f / df;
                // Keep the polish only when it does not increase the residual.
                if horner(coeffs, Complex64::new(nx, 0.0)).re.abs() <= f.abs() {
                    x = nx;
                } else {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(a: &[Vec<Complex64>]) -> Complex64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    let mut total = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Vec<Complex64>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += a[0][col] * det_cofactor(&minor) * sign;
    }
    total
}

pub fn det(m: &HermitianMatrix) -> f64 {
    det_cofactor(&to_rows(m)).re
}

/// Arbitrary-precision scalar evaluation (256-bit mantissa).
pub struct HighPrecision {
    cc: Consts,
}

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

impl HighPrecision {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn decimal(&mut self, x: &BigFloat) -> f64 {
        let s = x
            .format(astro_float::Radix::Dec, RM, &mut self.cc)
            .expect("format");
        s.parse().expect("decimal parses")
    }

    /// `min(1, 2N·exp(−(t²/2)/(v + K·t/3)))`.
    pub fn bernstein(&mut self, n: usize, k: f64, v: f64, t: f64) -> f64 {
        let t_ = self.f(t);
        let num = t_.mul(&t_, P, RM).div(&self.f(2.0), P, RM);
        let den = self
            .f(v)
            .add(&self.f(k).mul(&t_, P, RM).div(&self.f(3.0), P, RM), P, RM);
        let e = num.div(&den, P, RM).neg().exp(P, RM, &mut self.cc);
        let val = self.f(2.0 * n as f64).mul(&e, P, RM);
        self.decimal(&val).min(1.0)
    }

    /// `(z·e^{1−z})^{d/2}` as `exp((d/2)(ln z + 1 − z))`.
    pub fn chernoff(&mut self, z: f64, d: usize) -> f64 {
        let z_ = self.f(z);
        let inner = z_
            .ln(P, RM, &mut self.cc)
            .add(&self.f(1.0), P, RM)
            .sub(&z_, P, RM);
        let e = self
            .f(d as f64 / 2.0)
            .mul(&inner, P, RM)
            .exp(P, RM, &mut self.cc);
        self.decimal(&e)
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean) * nf / (nf - 1.0);
    (mean, (var.max(0.0) / nf).sqrt())
}
