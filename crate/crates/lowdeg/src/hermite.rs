//! Probabilists' Hermite polynomials and Gauss-Hermite quadrature.
//!
//! `H_k` follows the recurrence `H_{k+1}(z) = z H_k(z) - k H_{k-1}(z)` with
//! exact integer coefficients; the orthonormal family is `h_k = H_k /
//! sqrt(k!)` under the standard Gaussian. The `1/sqrt(k!)` factor is kept
//! symbolic (an integer-coefficient polynomial plus a normalization tag) so
//! products like `c_{a,l} c_{b,l}` stay rational up to a shared square
//! root. Quadrature nodes come from the symmetric tridiagonal Jacobi
//! matrix (Golub-Welsch).

use crate::error::{Error, Result};
use crate::multigraph::binomial;
use crate::Rat;
use nalgebra::DMatrix;
use num::{BigInt, One, Zero};

/// Cap on the Hermite index.
pub const HERMITE_CAP: usize = 60;
/// Default Gauss-Hermite node count (exact for degree <= 127).
pub const DEFAULT_NODES: usize = 64;

/// `h_k` stored exactly: integer-coefficient `H_k` plus the tag `1/sqrt(k!)`.
#[derive(Debug, Clone)]
pub struct NormalizedHermite {
    pub k: usize,
    /// Monomial coefficients of `H_k`, constant term first.
    pub h_coeffs: Vec<BigInt>,
}

/// Exact monomial coefficients of `H_k` (constant term first).
pub fn hermite_coeffs(k: usize) -> Result<Vec<BigInt>> {
    if k > HERMITE_CAP {
        return Err(Error::CapExceeded { got: k, cap: HERMITE_CAP });
    }
    let mut prev: Vec<BigInt> = vec![BigInt::one()]; // H_0 = 1
    if k == 0 {
        return Ok(prev);
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()]; // H_1 = z
    for j in 1..k {
        // H_{j+1} = z H_j - j H_{j-1}
        let mut next = vec![BigInt::zero(); j + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        let jf = BigInt::from(j);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * &jf;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `h_k` with the symbolic normalization tag.
pub fn hermite_h(k: usize) -> Result<NormalizedHermite> {
    Ok(NormalizedHermite {
        k,
        h_coeffs: hermite_coeffs(k)?,
    })
}

/// Float monomial coefficients of the orthonormal `h_k = H_k / sqrt(k!)`.
pub fn hermite_h_f64(k: usize) -> Result<Vec<f64>> {
    use num::ToPrimitive;
    let norm = (ln_factorial(k) / 2.0).exp();
    Ok(hermite_coeffs(k)?
        .iter()
        .map(|c| c.to_f64().unwrap() / norm)
        .collect())
}

/// Evaluate the orthonormal `h_k(z)` by the stable three-term recurrence
/// `h_{k+1} = (z h_k - sqrt(k) h_{k-1}) / sqrt(k+1)`.
pub fn eval_hermite_h(k: usize, z: f64) -> f64 {
    let mut prev = 1.0; // h_0
    if k == 0 {
        return prev;
    }
    let mut cur = z; // h_1
    for j in 1..k {
        let next = (z * cur - (j as f64).sqrt() * prev) / ((j + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// Horner evaluation of a monomial-coefficient polynomial.
pub fn eval_poly(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Shifted-expansion coefficient `c_{k,l}(mu) = sqrt(l!/k!) binom(k,l)
/// mu^{k-l}`, so that `h_k(z + mu) = sum_l c_{k,l}(mu) h_l(z)`.
pub fn shift_coeff(k: usize, l: usize, mu: f64) -> f64 {
    use num::ToPrimitive;
    if l > k {
        return 0.0;
    }
    let ln_ratio = (ln_factorial(l) - ln_factorial(k)) / 2.0;
    binomial(k, l).to_f64().unwrap() * ln_ratio.exp() * mu.powi((k - l) as i32)
}

/// All shifted-expansion coefficients `c_{k,0..k}(mu)`.
pub fn shift_coefficients(k: usize, mu: f64) -> Result<Vec<f64>> {
    if k > HERMITE_CAP {
        return Err(Error::CapExceeded { got: k, cap: HERMITE_CAP });
    }
    Ok((0..=k).map(|l| shift_coeff(k, l, mu)).collect())
}

/// `E[h_a(z + mu) h_b(z + mu)]` under `z ~ N(0,1)`:
/// `sum_l c_{a,l}(mu) c_{b,l}(mu)` by orthonormality.
pub fn shifted_pair_inner(a: usize, b: usize, mu: f64) -> f64 {
    (0..=a.min(b))
        .map(|l| shift_coeff(a, l, mu) * shift_coeff(b, l, mu))
        .sum()
}

/// `E[h_k(z + mu)] = mu^k / sqrt(k!)`.
pub fn shifted_mean(k: usize, mu: f64) -> f64 {
    mu.powi(k as i32) * (-ln_factorial(k) / 2.0).exp()
}

/// Gauss-Hermite nodes and weights for the standard Gaussian weight
/// (weights sum to 1); exact for polynomial degree `<= 2*nodes - 1`.
pub fn gauss_hermite(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(nodes >= 1);
    // Jacobi matrix: zero diagonal, off-diagonal sqrt(k)
    let mut j = DMatrix::<f64>::zeros(nodes, nodes);
    for k in 1..nodes {
        let v = (k as f64).sqrt();
        j[(k - 1, k)] = v;
        j[(k, k - 1)] = v;
    }
    let eig = nalgebra::SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..nodes)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = eig.eigenvectors[(0, i)].powi(2);
            (x, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// `E[f(z) g(z)]` under `z ~ N(0,1)` by Gauss-Hermite quadrature on the
/// monomial-coefficient polynomials.
pub fn gauss_hermite_inner(f: &[f64], g: &[f64], nodes: usize) -> Result<f64> {
    let deg = f.len().saturating_sub(1) + g.len().saturating_sub(1);
    if deg > 2 * nodes - 1 {
        return Err(Error::OutOfRange(format!(
            "combined degree {deg} exceeds quadrature exactness {}",
            2 * nodes - 1
        )));
    }
    let (xs, ws) = gauss_hermite(nodes);
    Ok(xs
        .iter()
        .zip(&ws)
        .map(|(&x, &w)| w * eval_poly(f, x) * eval_poly(g, x))
        .sum())
}

/// Exact check of the integer-level shift identity
/// `H_k(z + mu) = sum_l binom(k, l) mu^{k-l} H_l(z)` at rational `mu`.
pub fn shift_identity_exact(k: usize, mu: &Rat) -> Result<bool> {
    // left side: expand H_k(z + mu) in monomials via binomial expansion
    let hk = hermite_coeffs(k)?;
    let mut lhs = vec![Rat::zero(); k + 1];
    for (p, c) in hk.iter().enumerate() {
        // (z + mu)^p = sum_j binom(p, j) mu^{p-j} z^j
        for j in 0..=p {
            let mut term = Rat::from(BigInt::from(binomial(p, j)));
            for _ in 0..(p - j) {
                term *= mu;
            }
            lhs[j] += Rat::from(c.clone()) * term;
        }
    }
    // right side: sum_l binom(k,l) mu^{k-l} H_l(z)
    let mut rhs = vec![Rat::zero(); k + 1];
    for l in 0..=k {
        let mut coeff = Rat::from(BigInt::from(binomial(k, l)));
        for _ in 0..(k - l) {
            coeff *= mu;
        }
        for (j, c) in hermite_coeffs(l)?.iter().enumerate() {
            rhs[j] += Rat::from(c.clone()) * &coeff;
        }
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn low_order_coefficients() {
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.iter().map(|c| c.to_string().parse().unwrap()).collect()
        };
        assert_eq!(to_i64(hermite_coeffs(0).unwrap()), vec![1]);
        assert_eq!(to_i64(hermite_coeffs(1).unwrap()), vec![0, 1]);
        assert_eq!(to_i64(hermite_coeffs(2).unwrap()), vec![-1, 0, 1]);
        assert_eq!(to_i64(hermite_coeffs(3).unwrap()), vec![0, -3, 0, 1]);
    }

    #[test]
    fn shift_identity_small_k() {
        for k in 0..=10 {
            for mu in [rat(0, 1), rat(1, 2), rat(-3, 7), rat(2, 1)] {
                assert!(shift_identity_exact(k, &mu).unwrap(), "k={k} mu={mu}");
            }
        }
    }

    #[test]
    fn shift_coefficient_cases() {
        // mu = 0: only c_{kk} = 1 survives
        let c = shift_coefficients(5, 0.0).unwrap();
        assert_eq!(c[5], 1.0);
        assert!(c[..5].iter().all(|&x| x == 0.0));
        // k = 1: h_1(z + mu) = h_1(z) + mu h_0(z)
        let c = shift_coefficients(1, 0.7).unwrap();
        assert!((c[0] - 0.7).abs() < 1e-15 && (c[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormality_via_quadrature() {
        for k in 0..=12usize {
            for l in 0..=12usize {
                let f = hermite_h_f64(k).unwrap();
                let g = hermite_h_f64(l).unwrap();
                let inner = gauss_hermite_inner(&f, &g, DEFAULT_NODES).unwrap();
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!((inner - expect).abs() < 1e-10, "k={k} l={l} inner={inner}");
            }
        }
    }

    #[test]
    fn gaussian_second_moment() {
        let one = vec![1.0];
        let z2 = vec![0.0, 0.0, 1.0];
        let v = gauss_hermite_inner(&one, &z2, DEFAULT_NODES).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recurrence_matches_horner() {
        let mut z = -3.0;
        for k in (0..=30usize).step_by(3) {
            let coeffs = hermite_h_f64(k).unwrap();
            for i in 0..20 {
                let x = z + 0.3 * i as f64;
                let a = eval_hermite_h(k, x);
                let b = eval_poly(&coeffs, x);
                let scale = a.abs().max(1.0);
                assert!((a - b).abs() <= scale * 1e-9, "k={k} x={x}");
            }
            z += 0.1;
        }
    }

    #[test]
    fn shifted_mean_matches_quadrature() {
        let mu = 0.8;
        for k in 0..=8usize {
            // E h_k(z + mu) = sum over nodes of h_k(x + mu)
            let (xs, ws) = gauss_hermite(DEFAULT_NODES);
            let q: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(&x, &w)| w * eval_hermite_h(k, x + mu))
                .sum();
            assert!((q - shifted_mean(k, mu)).abs() < 1e-11, "k={k}");
            // and equals the l = 0 shifted coefficient
            assert!((shift_coeff(k, 0, mu) - shifted_mean(k, mu)).abs() < 1e-13);
        }
    }

    #[test]
    fn pair_inner_consistency() {
        // E[h_a(z+mu) h_b(z+mu)] computed two ways
        let mu = 0.6;
        let (xs, ws) = gauss_hermite(DEFAULT_NODES);
        for a in 0..=6usize {
            for b in 0..=6usize {
                let q: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(&x, &w)| w * eval_hermite_h(a, x + mu) * eval_hermite_h(b, x + mu))
                    .sum();
                assert!(
                    (q - shifted_pair_inner(a, b, mu)).abs() < 1e-10,
                    "a={a} b={b}"
                );
            }
        }
    }
}
