//! Exact `Corr_{<=D}` and `MMSE_{<=D}` on tiny instances.
//!
//! The maximum correlation of a degree-`D` polynomial with `x = v_0` has a
//! closed form: with `c_alpha = E[h_alpha(Y) x]` and `P_{alpha beta} =
//! E[h_alpha(Y) h_beta(Y)]`, `Corr^2 = c^T P^+ c` and the optimizer is
//! `f = P^+ c`. On instances small enough to enumerate the hidden
//! indicator exactly, both systems are computed in closed form:
//!
//! * Gaussian models in the product-Hermite basis, after rescaling the
//!   variance-2 diagonal to unit noise variance (an invertible
//!   degree-preserving reparametrization, so `Corr` is unchanged);
//! * binary models in the multilinear monomial basis, with exact rational
//!   `P`, `c` (`Y_e in {0,1}` makes `E[Y^a Y^b] = E[X^{a OR b}]`).
//!
//! `P` is a Gram matrix and can be singular (e.g. `Y^2 = Y` collapses
//! monomials), so the solve uses a symmetric-eigendecomposition
//! pseudo-inverse with a relative cutoff of `1e-10`.

use crate::cumulants::{cross_moment_subgraph, moment_subgraph, rat_from_f64};
use crate::error::{Error, Result};
use crate::hermite::{shift_coeff, shifted_pair_inner};
use crate::models::{CliqueParams, SubgraphParams, SubmatrixParams};
use crate::multigraph::Multigraph;
use crate::{rat_f64, Rat};
use nalgebra::{DMatrix, DVector};
use num::{One, Zero};

/// Guard on the polynomial-basis dimension.
pub const BASIS_GUARD: usize = 2000;
/// Relative singular-value cutoff for the pseudo-inverse.
pub const PINV_CUTOFF: f64 = 1e-10;
/// Outer caps from the module contract.
pub const GAUSSIAN_N_CAP: usize = 6;
pub const BINARY_N_CAP: usize = 7;
pub const DEGREE_CAP: usize = 4;

/// A Gaussian observation coordinate `mu_scale * v_i * v_j + z`,
/// `z ~ N(0,1)`; `i == j` encodes a (rescaled) diagonal entry.
#[derive(Debug, Clone, Copy)]
pub struct GaussCoord {
    pub i: usize,
    pub j: usize,
    pub mu_scale: f64,
}

/// Moment system `(P, c)` in float arithmetic, plus the basis it indexes.
#[derive(Debug, Clone)]
pub struct MomentSystem {
    pub p: DMatrix<f64>,
    pub c: DVector<f64>,
    /// Sparse exponent lists `(coordinate, exponent)` per basis element,
    /// graded by total degree.
    pub basis: Vec<Vec<(usize, u32)>>,
    /// `E[x^2] = rho` for `x = v_0`.
    pub e_x_sq: f64,
}

/// Exact rational moment system for binary models.
#[derive(Debug, Clone)]
pub struct BinarySystem {
    pub p: Vec<Vec<Rat>>,
    pub c: Vec<Rat>,
    pub basis: Vec<Multigraph>,
    pub rho: Rat,
}

// ---------------------------------------------------------------------------
// basis enumeration

/// Sparse multi-indices over `n_coords` coordinates with total degree
/// `<= d`, graded order.
fn enumerate_basis(n_coords: usize, d: usize, max_exp: u32) -> Vec<Vec<(usize, u32)>> {
    let mut out = vec![Vec::new()]; // degree 0
    let mut level: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
    for _ in 1..=d {
        let mut next = Vec::new();
        for idx in &level {
            // extend by a coordinate >= the last used one to avoid duplicates
            let start = idx.last().map_or(0, |&(c, _)| c);
            for c in start..n_coords {
                let mut e = idx.clone();
                match e.last_mut() {
                    Some(last) if last.0 == c => {
                        if last.1 >= max_exp {
                            continue;
                        }
                        last.1 += 1;
                    }
                    _ => e.push((c, 1)),
                }
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Gaussian systems

/// Build `(P, c)` for arbitrary Gaussian coordinates in the Hermite basis
/// (`hermite = true`) or raw monomial basis (`hermite = false`).
pub fn build_gaussian_generic(
    n_vertices: usize,
    coords: &[GaussCoord],
    rho: f64,
    d: usize,
    hermite: bool,
) -> Result<MomentSystem> {
    let basis = enumerate_basis(coords.len(), d, d as u32);
    let b = basis.len();
    if b > BASIS_GUARD {
        return Err(Error::SizeGuard(format!(
            "basis size {b} exceeds guard {BASIS_GUARD}"
        )));
    }
    let mut p = DMatrix::<f64>::zeros(b, b);
    let mut c = DVector::<f64>::zeros(b);
    // standard normal moments E[z^k] for the monomial basis
    let mut zmom = vec![0.0f64; 2 * d + 1];
    zmom[0] = 1.0;
    for k in (2..=2 * d).step_by(2) {
        zmom[k] = zmom[k - 2] * (k - 1) as f64;
    }
    // pair inner product per coordinate given the active flag
    let pair = |coord: &GaussCoord, active: bool, a: u32, b_: u32| -> f64 {
        let mu = if active { coord.mu_scale } else { 0.0 };
        if hermite {
            shifted_pair_inner(a as usize, b_ as usize, mu)
        } else {
            // E[(mu + z)^{a + b}]
            let m = (a + b_) as usize;
            (0..=m)
                .map(|k| {
                    crate::multigraph::binomial(m, k)
                        .to_string()
                        .parse::<f64>()
                        .unwrap()
                        * mu.powi((m - k) as i32)
                        * zmom[k]
                })
                .sum()
        }
    };
    let mean = |coord: &GaussCoord, active: bool, a: u32| -> f64 {
        let mu = if active { coord.mu_scale } else { 0.0 };
        if hermite {
            shift_coeff(a as usize, 0, mu)
        } else {
            // E[(mu + z)^a]
            (0..=a as usize)
                .map(|k| {
                    crate::multigraph::binomial(a as usize, k)
                        .to_string()
                        .parse::<f64>()
                        .unwrap()
                        * mu.powi((a as usize - k) as i32)
                        * zmom[k]
                })
                .sum()
        }
    };
    // marginalized enumeration over only the vertices a given entry touches
    let entry = |idx_a: &[(usize, u32)], idx_b: &[(usize, u32)], with_x: bool| -> f64 {
        let mut verts: Vec<usize> = Vec::new();
        let mut add = |v: usize| {
            if !verts.contains(&v) {
                verts.push(v);
            }
        };
        if with_x {
            add(0);
        }
        for &(ci, _) in idx_a.iter().chain(idx_b.iter()) {
            add(coords[ci].i);
            add(coords[ci].j);
        }
        // merged exponents per coordinate
        let mut merged: Vec<(usize, u32, u32)> = Vec::new();
        for &(ci, e) in idx_a {
            merged.push((ci, e, 0));
        }
        for &(ci, e) in idx_b {
            if let Some(m) = merged.iter_mut().find(|m| m.0 == ci) {
                m.2 = e;
            } else {
                merged.push((ci, 0, e));
            }
        }
        let m = verts.len();
        let pos = |v: usize| verts.iter().position(|&w| w == v).unwrap();
        let mut total = 0.0;
        for mask in 0u32..(1 << m) {
            let bit = |v: usize| (mask >> pos(v)) & 1 == 1;
            if with_x && !bit(0) {
                continue;
            }
            let ones = mask.count_ones();
            let weight =
                rho.powi(ones as i32) * (1.0 - rho).powi((m as u32 - ones) as i32);
            let mut prod = 1.0;
            for &(ci, ea, eb) in &merged {
                let active = bit(coords[ci].i) && bit(coords[ci].j);
                prod *= if with_x {
                    // c-vector path: eb is unused (0)
                    debug_assert_eq!(eb, 0);
                    mean(&coords[ci], active, ea)
                } else {
                    pair(&coords[ci], active, ea, eb)
                };
            }
            total += weight * prod;
        }
        total
    };
    for a in 0..b {
        for bidx in a..b {
            let v = entry(&basis[a], &basis[bidx], false);
            p[(a, bidx)] = v;
            p[(bidx, a)] = v;
        }
        c[a] = entry(&basis[a], &[], true);
    }
    let _ = n_vertices;
    Ok(MomentSystem {
        p,
        c,
        basis,
        e_x_sq: rho,
    })
}

/// Symmetric planted-submatrix coordinates: off-diagonal entries with mean
/// `lambda v_i v_j`, diagonal entries rescaled by `1/sqrt(2)` to unit
/// noise variance (mean `lambda v_i / sqrt(2)`).
pub fn submatrix_coords(n: usize, lambda: f64) -> Vec<GaussCoord> {
    let mut coords = Vec::new();
    for i in 0..n {
        for j in i..n {
            coords.push(GaussCoord {
                i,
                j,
                mu_scale: if i == j {
                    lambda / std::f64::consts::SQRT_2
                } else {
                    lambda
                },
            });
        }
    }
    coords
}

/// Hermite-basis moment system for the planted submatrix.
pub fn build_moment_system_gaussian(p: &SubmatrixParams, d: usize) -> Result<MomentSystem> {
    if p.n > GAUSSIAN_N_CAP || d > DEGREE_CAP {
        return Err(Error::SizeGuard(format!(
            "gaussian oracle caps: n <= {GAUSSIAN_N_CAP}, D <= {DEGREE_CAP}"
        )));
    }
    build_gaussian_generic(p.n, &submatrix_coords(p.n, p.lambda), p.rho, d, true)
}

/// Asymmetric variant: all `n^2` entries independent with mean
/// `lambda_asym * v_i v_j` and unit variance.
pub fn build_moment_system_asymmetric(
    n: usize,
    lambda_asym: f64,
    rho: f64,
    d: usize,
) -> Result<MomentSystem> {
    if n > 3 || d > DEGREE_CAP {
        return Err(Error::SizeGuard("asymmetric oracle caps: n <= 3".into()));
    }
    let mut coords = Vec::new();
    for i in 0..n {
        for j in 0..n {
            coords.push(GaussCoord {
                i,
                j,
                mu_scale: lambda_asym,
            });
        }
    }
    build_gaussian_generic(n, &coords, rho, d, true)
}

// ---------------------------------------------------------------------------
// binary systems

/// Exact rational moment system for the dense-subgraph / clique models in
/// the multilinear monomial basis.
pub fn build_moment_system_binary(p: &SubgraphParams, d: usize) -> Result<BinarySystem> {
    if p.n > BINARY_N_CAP || d > DEGREE_CAP {
        return Err(Error::SizeGuard(format!(
            "binary oracle caps: n <= {BINARY_N_CAP}, D <= {DEGREE_CAP}"
        )));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..p.n {
        for j in (i + 1)..p.n {
            pairs.push((i, j));
        }
    }
    let sparse = enumerate_basis(pairs.len(), d, 1);
    let b = sparse.len();
    if b > BASIS_GUARD {
        return Err(Error::SizeGuard(format!(
            "basis size {b} exceeds guard {BASIS_GUARD}"
        )));
    }
    let basis: Vec<Multigraph> = sparse
        .iter()
        .map(|idx| {
            let es: Vec<(usize, usize)> = idx.iter().map(|&(ci, _)| pairs[ci]).collect();
            Multigraph::from_pairs(&es)
        })
        .collect();
    let rho = rat_from_f64(p.rho);
    let q0 = rat_from_f64(p.q0);
    let q1 = rat_from_f64(p.q1);
    let mut pm = vec![vec![Rat::zero(); b]; b];
    let mut c = vec![Rat::zero(); b];
    for a in 0..b {
        for bi in a..b {
            let v = moment_subgraph(&basis[a].join(&basis[bi]), &rho, &q0, &q1);
            pm[a][bi] = v.clone();
            pm[bi][a] = v;
        }
        c[a] = cross_moment_subgraph(&basis[a], &rho, &q0, &q1);
    }
    Ok(BinarySystem {
        p: pm,
        c,
        basis,
        rho,
    })
}

pub fn build_moment_system_clique(p: &CliqueParams, d: usize) -> Result<BinarySystem> {
    build_moment_system_binary(&p.as_subgraph(), d)
}

impl BinarySystem {
    /// Float view for the pseudo-inverse solve.
    pub fn to_float(&self) -> MomentSystem {
        let b = self.basis.len();
        let mut p = DMatrix::<f64>::zeros(b, b);
        let mut c = DVector::<f64>::zeros(b);
        for a in 0..b {
            for bi in 0..b {
                p[(a, bi)] = rat_f64(&self.p[a][bi]);
            }
            c[a] = rat_f64(&self.c[a]);
        }
        MomentSystem {
            p,
            c,
            basis: self
                .basis
                .iter()
                .map(|g| {
                    g.edges()
                        .iter()
                        .enumerate()
                        .map(|(k, _)| (k, 1u32))
                        .collect()
                })
                .collect(),
            e_x_sq: rat_f64(&self.rho),
        }
    }

    /// Exact rational solve of `P f = c` (Gauss-Jordan; consistent singular
    /// systems get free variables set to zero). Returns `(f, corr_sq)`.
    pub fn solve_exact(&self) -> Result<(Vec<Rat>, Rat)> {
        let f = solve_rational(&self.p, &self.c).ok_or_else(|| {
            Error::InvalidParam("inconsistent exact moment system".into())
        })?;
        let corr_sq = f
            .iter()
            .zip(&self.c)
            .fold(Rat::zero(), |acc, (fi, ci)| acc + fi * ci);
        Ok((f, corr_sq))
    }

    /// Exact achieved MSE of coefficient vector `f`:
    /// `E (f - x)^2 = rho - 2 f^T c + f^T P f`.
    pub fn achieved_mse_exact(&self, f: &[Rat]) -> Rat {
        let mut acc = self.rho.clone();
        for (i, fi) in f.iter().enumerate() {
            acc -= Rat::from(num::BigInt::from(2)) * fi * &self.c[i];
            for (j, fj) in f.iter().enumerate() {
                acc += fi * &self.p[i][j] * fj;
            }
        }
        acc
    }
}

/// Particular solution of a consistent rational linear system, via
/// fraction-free Bareiss elimination over the integers (rational
/// Gauss-Jordan suffers catastrophic coefficient blow-up already at a few
/// hundred unknowns). Free variables of a rank-deficient system are set to
/// zero; returns `None` when the system is inconsistent.
fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    use num::BigInt;
    use num::Integer;
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    // clear denominators row by row: each augmented row scales freely
    let mut aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut lcm = BigInt::one();
            for v in row.iter().chain(std::iter::once(bi)) {
                lcm = lcm.lcm(v.denom());
            }
            row.iter()
                .chain(std::iter::once(bi))
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();
    // fraction-free forward elimination: after each step the entries are
    // minors of the scaled system, so the division by the previous pivot
    // is exact
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..m {
        if row >= n {
            break;
        }
        let Some(pr) = (row..n).find(|&r| !aug[r][col].is_zero()) else { continue };
        aug.swap(row, pr);
        for r2 in row + 1..n {
            for c2 in col + 1..=m {
                let num = &aug[row][col] * &aug[r2][c2] - &aug[r2][col] * &aug[row][c2];
                aug[r2][c2] = num / &prev;
            }
            aug[r2][col] = BigInt::zero();
        }
        prev = aug[row][col].clone();
        pivots.push((row, col));
        row += 1;
    }
    // consistency: rows below the rank are all-zero on the left
    for r in row..n {
        if !aug[r][m].is_zero() {
            return None;
        }
    }
    // back substitution in rationals over the echelon form
    let mut x = vec![Rat::zero(); m];
    for &(r, col) in pivots.iter().rev() {
        let mut acc = Rat::new(aug[r][m].clone(), BigInt::one());
        for c in col + 1..m {
            if !aug[r][c].is_zero() && !x[c].is_zero() {
                acc -= Rat::new(aug[r][c].clone(), BigInt::one()) * &x[c];
            }
        }
        x[col] = acc / Rat::new(aug[r][col].clone(), BigInt::one());
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// solves

/// Pseudo-inverse solve `P^+ c` with relative eigenvalue cutoff.
pub fn pinv_solve(p: &DMatrix<f64>, c: &DVector<f64>) -> Result<DVector<f64>> {
    let eig = nalgebra::SymmetricEigen::new(p.clone());
    let max_ev = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let min_ev = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_ev < -1e-8 * max_ev.max(1.0) {
        return Err(Error::IndefiniteMatrix(min_ev));
    }
    let cutoff = PINV_CUTOFF * max_ev.max(f64::MIN_POSITIVE);
    let mut f = DVector::<f64>::zeros(c.len());
    for k in 0..c.len() {
        let ev = eig.eigenvalues[k];
        if ev > cutoff {
            let u = eig.eigenvectors.column(k);
            f += u * (u.dot(c) / ev);
        }
    }
    Ok(f)
}

/// `Corr_{<=D} = sqrt(c^T P^+ c)`.
pub fn corr_exact(system: &MomentSystem) -> Result<f64> {
    let f = pinv_solve(&system.p, &system.c)?;
    Ok(system.c.dot(&f).max(0.0).sqrt())
}

/// `MMSE_{<=D} = E[x^2] - Corr^2`.
pub fn mmse_exact(system: &MomentSystem) -> Result<f64> {
    let corr = corr_exact(system)?;
    Ok(system.e_x_sq - corr * corr)
}

/// The optimizing coefficient vector `f = P^+ c` and its directly-evaluated
/// MSE `rho - 2 f^T c + f^T P f`.
pub fn best_polynomial(system: &MomentSystem) -> Result<(DVector<f64>, f64)> {
    let f = pinv_solve(&system.p, &system.c)?;
    let mse = system.e_x_sq - 2.0 * f.dot(&system.c) + (&system.p * &f).dot(&f);
    Ok((f, mse))
}

/// CSV dump of `(P, c)` for external verification: rows `row,col,value`
/// for `P` then `row,,value` for `c`.
pub fn dump_system_csv(system: &MomentSystem) -> String {
    let mut out = String::from("row,col,value\n");
    for i in 0..system.p.nrows() {
        for j in 0..system.p.ncols() {
            out.push_str(&format!("{i},{j},{}\n", system.p[(i, j)]));
        }
    }
    for i in 0..system.c.len() {
        out.push_str(&format!("{i},,{}\n", system.c[i]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{eval_hermite_h, gauss_hermite};
    use crate::rat;

    #[test]
    fn zero_snr_gaussian_is_identity() {
        let p = SubmatrixParams::new(3, 0.0, 0.5).unwrap();
        let sys = build_moment_system_gaussian(&p, 2).unwrap();
        let b = sys.basis.len();
        let id = DMatrix::<f64>::identity(b, b);
        assert!((&sys.p - id).norm() < 1e-12);
        assert!((sys.c[0] - 0.5).abs() < 1e-14);
        assert!(sys.c.rows(1, b - 1).norm() < 1e-14);
        // hence Corr = rho for every D
        assert!((corr_exact(&sys).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_and_constants() {
        let p = SubmatrixParams::new(3, 1.0, 0.5).unwrap();
        let sys = build_moment_system_gaussian(&p, 0).unwrap();
        assert!((corr_exact(&sys).unwrap() - 0.5).abs() < 1e-13);
        assert!((mmse_exact(&sys).unwrap() - 0.25).abs() < 1e-13);
        let (_, mse) = best_polynomial(&sys).unwrap();
        assert!((mse - 0.25).abs() < 1e-13);
    }

    #[test]
    fn quadrature_cross_check_n1() {
        // n = 1, D = 2: single (rescaled diagonal) coordinate with mean
        // lambda v / sqrt(2); build P, c by 40-node quadrature directly
        let (n, lambda, rho, d) = (1usize, 1.0f64, 0.5f64, 2usize);
        let p = SubmatrixParams::new(n, lambda, rho).unwrap();
        let sys = build_moment_system_gaussian(&p, d).unwrap();
        let (xs, ws) = gauss_hermite(40);
        let mu_active = lambda / std::f64::consts::SQRT_2;
        let b = sys.basis.len();
        assert_eq!(b, 3);
        let exp_of = |idx: &Vec<(usize, u32)>| idx.first().map_or(0, |&(_, e)| e as usize);
        for a in 0..b {
            for bi in 0..b {
                let (ea, eb) = (exp_of(&sys.basis[a]), exp_of(&sys.basis[bi]));
                let q = |mu: f64| -> f64 {
                    xs.iter()
                        .zip(&ws)
                        .map(|(&x, &w)| {
                            w * eval_hermite_h(ea, x + mu) * eval_hermite_h(eb, x + mu)
                        })
                        .sum()
                };
                let expect = rho * q(mu_active) + (1.0 - rho) * q(0.0);
                assert!(
                    (sys.p[(a, bi)] - expect).abs() < 1e-10,
                    "a={a} b={bi}: {} vs {expect}",
                    sys.p[(a, bi)]
                );
            }
            let ea = exp_of(&sys.basis[a]);
            let qc: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(&x, &w)| w * eval_hermite_h(ea, x + mu_active))
                .sum();
            let expect = rho * qc;
            assert!((sys.c[a] - expect).abs() < 1e-10, "c[{a}]");
        }
    }

    #[test]
    fn psd_and_monotone() {
        let p = SubmatrixParams::new(3, 1.0, 0.25).unwrap();
        let mut prev = 0.0;
        for d in 0..=3usize {
            let sys = build_moment_system_gaussian(&p, d).unwrap();
            let eig = nalgebra::SymmetricEigen::new(sys.p.clone());
            let min_ev = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min_ev > -1e-10, "D={d} min eigenvalue {min_ev}");
            let corr = corr_exact(&sys).unwrap();
            assert!(corr >= prev - 1e-10, "corr not monotone at D={d}");
            prev = corr;
        }
    }

    #[test]
    fn hermite_vs_monomial_basis() {
        let coords = submatrix_coords(3, 0.8);
        let h = build_gaussian_generic(3, &coords, 0.3, 2, true).unwrap();
        let m = build_gaussian_generic(3, &coords, 0.3, 2, false).unwrap();
        let ch = corr_exact(&h).unwrap();
        let cm = corr_exact(&m).unwrap();
        assert!((ch - cm).abs() < 1e-9, "hermite {ch} vs monomial {cm}");
    }

    #[test]
    fn extra_noise_coordinate_leaves_corr_unchanged() {
        let mut coords = submatrix_coords(2, 1.0);
        let base = build_gaussian_generic(2, &coords, 0.5, 2, true).unwrap();
        coords.push(GaussCoord {
            i: 0,
            j: 1,
            mu_scale: 0.0,
        });
        let extended = build_gaussian_generic(2, &coords, 0.5, 2, true).unwrap();
        let a = corr_exact(&base).unwrap();
        let b = corr_exact(&extended).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn symmetrization_equivalence() {
        // asymmetric oracle at SNR lambda/sqrt(2) == symmetric oracle at lambda
        for (n, d) in [(2usize, 2usize), (3, 2)] {
            for lambda in [0.7, 1.3] {
                let sym = build_moment_system_gaussian(
                    &SubmatrixParams::new(n, lambda, 0.4).unwrap(),
                    d,
                )
                .unwrap();
                let asym = build_moment_system_asymmetric(
                    n,
                    lambda / std::f64::consts::SQRT_2,
                    0.4,
                    d,
                )
                .unwrap();
                let a = corr_exact(&sym).unwrap();
                let b = corr_exact(&asym).unwrap();
                assert!((a - b).abs() < 1e-9, "n={n} d={d} lambda={lambda}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn binary_system_exact_entries() {
        // q0 = q1 = q: P_{ab} = q^{|a OR b|}, c_a = rho q^{|a|}
        let p = SubgraphParams::new(4, 0.5, 0.25, 0.25).unwrap();
        let sys = build_moment_system_binary(&p, 2).unwrap();
        let q = rat(1, 4);
        for (a, ga) in sys.basis.iter().enumerate() {
            for (b, gb) in sys.basis.iter().enumerate() {
                let expect = (0..ga.join(gb).edge_count())
                    .fold(Rat::one(), |acc, _| acc * &q);
                assert_eq!(sys.p[a][b], expect);
            }
            let expect = (0..ga.edge_count()).fold(rat(1, 2), |acc, _| acc * &q);
            assert_eq!(sys.c[a], expect);
        }
    }

    #[test]
    fn clique_small_entries_and_cross_module() {
        use crate::cumulants::moment_subgraph;
        let p = CliqueParams::new(3, 0.25).unwrap();
        let sys = build_moment_system_clique(&p, 1).unwrap();
        // diagonal entries are E[X^alpha], matching the moments module
        let rho = rat(1, 4);
        for (a, g) in sys.basis.iter().enumerate() {
            assert_eq!(
                sys.p[a][a],
                moment_subgraph(g, &rho, &rat(1, 2), &rat(1, 1))
            );
        }
        // single-edge moment: q0 + (q1 - q0) rho^2 = 1/2 + 1/2 * 1/16
        let edge = Multigraph::from_pairs(&[(0, 1)]);
        let idx = sys.basis.iter().position(|g| *g == edge).unwrap();
        assert_eq!(sys.p[idx][idx], rat(1, 2) + rat(1, 32));
    }

    #[test]
    fn exact_rational_solve_matches_float() {
        let p = SubgraphParams::new(3, 0.5, 0.25, 0.75).unwrap();
        let sys = build_moment_system_binary(&p, 1).unwrap();
        let (f, corr_sq) = sys.solve_exact().unwrap();
        // achieved MSE equals rho - corr_sq exactly
        let mse = sys.achieved_mse_exact(&f);
        assert_eq!(mse, sys.rho.clone() - &corr_sq);
        // float pseudo-inverse agrees
        let fs = sys.to_float();
        let corr = corr_exact(&fs).unwrap();
        assert!((corr * corr - rat_f64(&corr_sq)).abs() < 1e-10);
    }

    #[test]
    fn size_guards() {
        assert!(build_moment_system_gaussian(
            &SubmatrixParams::new(7, 1.0, 0.5).unwrap(),
            2
        )
        .is_err());
        assert!(build_moment_system_binary(
            &SubgraphParams::new(7, 0.5, 0.3, 0.7).unwrap(),
            4
        )
        .is_err());
    }
}
