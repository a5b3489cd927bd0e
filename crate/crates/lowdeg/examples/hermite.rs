//! Hermite toolbox: orthonormality of the normalized polynomials under
//! Gauss-Hermite quadrature, the mean-shift expansion that powers the
//! Gaussian moment computations, and its exact integer-level identity.

use lowdeg::hermite::{
    gauss_hermite_inner, hermite_h_f64, shift_identity_exact, shifted_mean, shifted_pair_inner,
};
use lowdeg::rat;

fn main() -> Result<(), lowdeg::Error> {
    // orthonormality: E[h_k(z) h_l(z)] = 1{k = l}
    println!("orthonormality errors (k, l <= 6):");
    let mut worst = 0.0f64;
    for k in 0..=6 {
        for l in 0..=6 {
            let inner =
                gauss_hermite_inner(&hermite_h_f64(k)?, &hermite_h_f64(l)?, 16)?;
            let target = f64::from(k == l);
            worst = worst.max((inner - target).abs());
        }
    }
    println!("  worst deviation: {worst:.2e}");
    assert!(worst < 1e-10);

    // shifted moments: E[h_k(z + mu)] = mu^k / sqrt(k!)
    let mu = 0.75;
    println!("\nshifted means at mu = {mu}:");
    for k in 0..=4 {
        println!("  E[h_{k}(z + mu)] = {:+.6}", shifted_mean(k, mu));
    }

    // pair inner products under the shift, used for the moment matrices
    let inner = shifted_pair_inner(2, 3, mu);
    println!("\nE[h_2(z+mu) h_3(z+mu)] = {inner:+.6}");

    // the identity behind the shift coefficients holds exactly over the
    // integers for rational mu
    for k in 0..=10 {
        assert!(shift_identity_exact(k, &rat(3, 7))?);
    }
    println!("\nshift identity verified exactly for k <= 10 at mu = 3/7");
    Ok(())
}
