mod common;

use common::{chacha, mean_se};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rfspectra::kernels::{
    expected_gram_over_data, full_expectation_entry, gaussian_kernel_over_weights,
};
use rfspectra::rng::Rng as Xoshiro;
use rfspectra::sampling::{
    empirical_norm_tail, fitted_tail_constant, sample_cloud, DistributionSpec, Family, PointCloud,
};

const DRAWS: usize = 200_000;

fn points(rows: &[&[f64]]) -> PointCloud {
    PointCloud::from_points(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Empirical `E exp(i⟨z, Δ⟩)` for `z ~ N(0, s²I)`: (re mean, re se, im mean, im se).
fn characteristic(delta: &[f64], s: f64, seed: u64) -> (f64, f64, f64, f64) {
    let mut rng = chacha(seed);
    let normal = Normal::new(0.0, s).unwrap();
    let (mut re, mut re2, mut im, mut im2) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..DRAWS {
        let phase: f64 = delta.iter().map(|d| d * normal.sample(&mut rng)).sum();
        let (c, sn) = (phase.cos(), phase.sin());
        re += c;
        re2 += c * c;
        im += sn;
        im2 += sn * sn;
    }
    let (rm, rse) = mean_se(re, re2, DRAWS);
    let (imm, ise) = mean_se(im, im2, DRAWS);
    (rm, rse, imm, ise)
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[test]
fn conditional_expectation_matches_empirical_average() {
    let (gamma, d) = (1.3, 3usize);
    let w = points(&[&[0.0, 0.5, -1.0], &[1.0, 0.2, 0.3], &[-0.7, 1.1, 0.4]]);
    let e = expected_gram_over_data(&w, gamma).unwrap();
    for j in 0..3 {
        for k in (j + 1)..3 {
            let delta = diff(w.point(k), w.point(j));
            let (re, rse, im, ise) = characteristic(
                &delta,
                gamma / (d as f64).sqrt(),
                100 + j as u64 * 3 + k as u64,
            );
            assert!(
                (re - e.get(j, k).re).abs() <= 3.0 * rse,
                "{re} ± {rse} vs {}",
                e.get(j, k).re
            );
            assert!(im.abs() <= 3.0 * ise);
        }
    }
}

#[test]
fn kernel_matches_empirical_average() {
    let sigma = 0.8;
    let x = points(&[&[0.1, -0.3], &[0.9, 0.4], &[-0.5, -1.2]]);
    let k = gaussian_kernel_over_weights(&x, sigma).unwrap();
    for a in 0..3 {
        for b in (a + 1)..3 {
            let delta = diff(x.point(a), x.point(b));
            let (re, rse, im, ise) = characteristic(&delta, sigma, 200 + a as u64 * 3 + b as u64);
            assert!((re - k.get(a, b).re).abs() <= 3.0 * rse);
            assert!(im.abs() <= 3.0 * ise);
        }
    }
}

#[test]
fn full_expectation_matches_empirical_average() {
    for &(gamma, sigma, d) in &[(1.0, 1.0, 2usize), (0.7, 1.5, 5)] {
        let mut rng = chacha(300 + d as u64);
        let normal = Normal::<f64>::new(0.0, sigma).unwrap();
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..DRAWS {
            let sq: f64 = (0..d)
                .map(|_| (normal.sample(&mut rng) - normal.sample(&mut rng)).powi(2))
                .sum();
            let v = (-gamma * gamma * sq / (2.0 * d as f64)).exp();
            s += v;
            s2 += v * v;
        }
        let (mean, se) = mean_se(s, s2, DRAWS);
        let want = full_expectation_entry(gamma, sigma, d).unwrap();
        assert!((mean - want).abs() <= 3.0 * se, "{mean} ± {se} vs {want}");
    }
}

#[test]
fn full_expectation_large_dimension_limit() {
    let v = full_expectation_entry(1.0, 1.0, 1_000_000).unwrap();
    assert!((v - (-1.0f64).exp()).abs() < 1e-5);
    assert_eq!(full_expectation_entry(1.0, 1.0, 2).unwrap(), 0.5);
}

#[test]
fn families_are_calibrated() {
    let n = 100_000;
    for fam in Family::ALL {
        let variance = 2.5;
        let c = sample_cloud(&DistributionSpec::new(fam, variance, 3).unwrap(), n, 41).unwrap();
        for axis in 0..3 {
            let (s, s2, s4) = c.iter().fold((0.0, 0.0, 0.0), |(a, b, q), p| {
                let v: f64 = p[axis];
                (a + v, b + v * v, q + v.powi(4))
            });
            let (mean, se) = mean_se(s, s2, n);
            assert!(mean.abs() <= 3.0 * se, "{fam:?} mean {mean} ± {se}");
            let (var, var_se) = mean_se(s2, s4, n);
            // Rademacher squares are constant: the sample variance is exact.
            assert!(
                (var - variance).abs() <= 3.0 * var_se + 1e-12,
                "{fam:?} variance {var} ± {var_se}"
            );
        }
    }
}

#[test]
fn data_norm_has_expected_mean() {
    let n = 10_000;
    let c = sample_cloud(
        &DistributionSpec::data(Family::Gaussian, 1.0, 100).unwrap(),
        n,
        5,
    )
    .unwrap();
    let (s, s2) = c.iter().fold((0.0, 0.0), |(a, b), p| {
        let q: f64 = p.iter().map(|v| v * v).sum();
        (a + q, b + q * q)
    });
    let (mean, se) = mean_se(s, s2, n);
    assert!((mean - 1.0).abs() <= 3.0 * se);
}

#[test]
fn rademacher_norm_tail_matches_enumeration() {
    let mut exact = 0usize;
    for bits in 0u32..16 {
        let norm = (0..4)
            .map(|i| if bits >> i & 1 == 1 { 1.0f64 } else { -1.0 })
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        if (norm - 2.0).abs() >= 0.1 {
            exact += 1;
        }
    }
    let spec = DistributionSpec::new(Family::Rademacher, 1.0, 4).unwrap();
    let f = empirical_norm_tail(&spec, 10_000, 0.1, 9).unwrap();
    assert_eq!(f, exact as f64 / 16.0);
    assert_eq!(fitted_tail_constant(f, 0.1), f64::INFINITY);
}

#[test]
fn gaussian_norm_tail_fits_positive_constant() {
    let spec = DistributionSpec::new(Family::Gaussian, 1.0, 100).unwrap();
    let f = empirical_norm_tail(&spec, 100_000, 3.0, 17).unwrap();
    let c = fitted_tail_constant(f, 3.0);
    assert!(f > 0.0 && c > 0.0 && c.is_finite());
    assert!(f <= 2.0 * (-c * 9.0).exp() * (1.0 + 1e-12));
}

#[test]
fn in_repo_generator_is_uniform() {
    // Chi-square on 16 cells against an independent reference stream.
    let mut ours = Xoshiro::new(77);
    let mut theirs = chacha(77);
    let mut a = [0usize; 16];
    let mut b = [0usize; 16];
    let n = 160_000;
    for _ in 0..n {
        a[(ours.uniform() * 16.0) as usize] += 1;
        b[theirs.gen_range(0..16)] += 1;
    }
    let chi = |h: &[usize; 16]| {
        h.iter()
            .map(|&c| (c as f64 - 10_000.0).powi(2) / 10_000.0)
            .sum::<f64>()
    };
    // 15 degrees of freedom: the 99.9% quantile is about 37.7.
    assert!(chi(&a) < 37.7, "{}", chi(&a));
    assert!(chi(&b) < 37.7);
}
