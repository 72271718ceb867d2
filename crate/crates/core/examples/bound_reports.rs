//! Hypothesis checks and tail bounds at the figure regime and at a regime
//! where the sufficient conditions hold.

use rfspectra::bounds::{
    bernstein_tail, check_theorem1, check_theorem2, check_theorem3, check_theorem4, check_theorem6,
    chi_square_chernoff, required_samples, simplified_gram_tail, ExpectationParams, KernelParams,
    RegimeParams, SeparatedParams, SEPARATED_SAMPLE_CONSTANT,
};

fn main() -> rfspectra::Result<()> {
    let figure = RegimeParams {
        d: 10,
        m: 100,
        n: 5000,
        gamma: 1.0,
        sigma: 3.0,
        delta: 0.05,
        eta: 0.5,
    };
    println!("{}", check_theorem1(&figure, 1.0, 1.0)?);
    println!("{}", check_theorem2(&figure, 1.0, 6.0)?);

    let covered = RegimeParams {
        d: 20,
        m: 600,
        n: 20,
        gamma: 1.0,
        sigma: 5.0,
        delta: 0.05,
        eta: 0.5,
    };
    println!("{}", check_theorem1(&covered, 1.0, 1.0)?);
    println!(
        "{}",
        check_theorem3(
            &KernelParams {
                n: 100_000,
                m: 100,
                sigma: 4.0,
                r: 1.0,
                delta: 0.05,
                eta: 0.3
            },
            1.0
        )?
    );
    let m = required_samples(SEPARATED_SAMPLE_CONSTANT, 0.5, 20, 0.05).ceil() as usize;
    println!(
        "{}",
        check_theorem4(
            &SeparatedParams {
                m,
                n: 20,
                gamma: 1.0,
                r: 9.0,
                delta: 0.05,
                eta: 0.5
            },
            6.0
        )?
    );
    println!(
        "{}",
        check_theorem6(
            &ExpectationParams {
                d: 20,
                n: 50,
                gamma: 1.0,
                sigma: 5.0,
                delta: 0.05,
                eta: 0.5
            },
            1.0
        )?
    );

    println!(
        "Bernstein tail (N=1, K=1, v=1, t=10): {:.4e}",
        bernstein_tail(1, 1.0, 1.0, 10.0)
    );
    println!(
        "simplified Gram tail at m = {m}, N = 20, η = 0.5: {:.4e} (δ = 0.05)",
        simplified_gram_tail(m, 20, 0.5)?
    );
    for d in [2, 10, 50] {
        println!(
            "chi-square Chernoff z = 0.5, d = {d:>2}: {:.4e}",
            chi_square_chernoff(0.5, d)?
        );
    }
    Ok(())
}
