//! Eigenvalues of a Hermitian matrix and singular values of a feature matrix.

use rfspectra::features::{build_feature_matrix, normalize_columns};
use rfspectra::sampling::{sample_cloud, DistributionSpec, Family};
use rfspectra::spectra::{hermitian_eigen, hermitian_eigenvalues, singular_values};
use rfspectra::{Complex64, HermitianMatrix};

fn main() -> rfspectra::Result<()> {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let m = HermitianMatrix::from_rows(&[vec![one, i], vec![-i, one]])?;
    println!(
        "eigenvalues of [[1, i], [−i, 1]]: {:?}",
        hermitian_eigenvalues(&m)?.values
    );
    let (s, vecs) = hermitian_eigen(&m)?;
    for (lambda, v) in s.values.iter().zip(&vecs) {
        let mv = m.mul_vec(v);
        let r: f64 = mv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!("λ = {lambda:.3}: ‖Mv − λv‖ = {r:.1e}");
    }

    for d in [3, 12] {
        let data = sample_cloud(&DistributionSpec::data(Family::Gaussian, 1.0, d)?, 100, 1)?;
        let weights = sample_cloud(
            &DistributionSpec::weights(Family::Gaussian, 3.0, d)?,
            5000,
            2,
        )?;
        // Weights as rows: unit columns give the singular values of A/√N.
        let a = normalize_columns(&build_feature_matrix(&weights, &data)?)?;
        let s = singular_values(&a)?;
        println!(
            "d = {d:>2}: σ_min = {:.4}, σ_max = {:.4}, condition = {:.2}",
            s.sigma_min,
            s.sigma_max,
            s.condition()
        );
    }
    Ok(())
}
