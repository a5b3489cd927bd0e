//! Cumulant coefficients indexed by multigraphs.
//!
//! Three recursions live here, all in exact rational arithmetic:
//!
//! * the Gaussian-model `kappa` recursion (planted submatrix), factored as
//!   `kappa_alpha = lambda^{|alpha|} * g_alpha(rho)` with `g` rational;
//! * the binary-model `kappa` recursion (planted dense subgraph), whose
//!   sub-multigraph sum needs no binomial factor because `alpha` is a
//!   simple graph;
//! * the planted-clique `w` recursion through the conditional-removal
//!   matrix `M`.
//!
//! A brute-force set-partition joint-cumulant oracle over products of
//!   Bernoulli vertex indicators cross-checks all of them.

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::{rat_f64, Rat};
use num::{BigInt, One, Zero};
use std::collections::HashMap;

/// Cap on `|alpha|` for the recursions.
pub const KAPPA_CAP: usize = 8;
/// Cap on the number of variables in the partition-formula oracle.
pub const PARTITION_CAP: usize = 9;

fn rat_pow(r: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

fn rat_from_biguint(b: &num::BigUint) -> Rat {
    Rat::from(BigInt::from(b.clone()))
}

/// Exact rational from an `f64` (every finite `f64` is rational).
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite f64 required")
}

// ---------------------------------------------------------------------------
// moments

/// Submatrix-model moment `E[X^alpha] = lambda^{|alpha|} rho^{|V(alpha)|}`.
pub fn moment_submatrix(alpha: &Multigraph, lambda: &Rat, rho: &Rat) -> Rat {
    rat_pow(lambda, alpha.edge_count()) * rat_pow(rho, alpha.support_size())
}

/// Submatrix-model cross moment
/// `E[x X^alpha] = lambda^{|alpha|} rho^{|V(alpha) ∪ {0}|}`.
pub fn cross_moment_submatrix(alpha: &Multigraph, lambda: &Rat, rho: &Rat) -> Rat {
    rat_pow(lambda, alpha.edge_count()) * rat_pow(rho, alpha.support_size_with_root())
}

/// Binary-model moment `E[X^alpha]` with `X_ij = q0 + (q1-q0) v_i v_j`,
/// by exact enumeration over indicator assignments of `V(alpha)`.
pub fn moment_subgraph(alpha: &Multigraph, rho: &Rat, q0: &Rat, q1: &Rat) -> Rat {
    binary_moment_impl(alpha, rho, q0, q1, false)
}

/// Binary-model cross moment `E[x X^alpha]`, `x = v_0`.
pub fn cross_moment_subgraph(alpha: &Multigraph, rho: &Rat, q0: &Rat, q1: &Rat) -> Rat {
    binary_moment_impl(alpha, rho, q0, q1, true)
}

fn binary_moment_impl(
    alpha: &Multigraph,
    rho: &Rat,
    q0: &Rat,
    q1: &Rat,
    with_root: bool,
) -> Rat {
    let mut verts: Vec<usize> = alpha.support().into_iter().collect();
    if with_root && !verts.contains(&0) {
        verts.insert(0, 0);
    }
    let m = verts.len();
    let index: HashMap<usize, usize> =
        verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let one_minus_rho = Rat::one() - rho;
    let mut total = Rat::zero();
    for mask in 0u32..(1 << m) {
        let bit = |v: usize| (mask >> index[&v]) & 1 == 1;
        if with_root && !bit(0) {
            continue; // x = v_0 kills the term
        }
        let ones = mask.count_ones() as usize;
        let mut term = rat_pow(rho, ones) * rat_pow(&one_minus_rho, m - ones);
        for &((i, j), mult) in alpha.edges() {
            let x = if bit(i as usize) && bit(j as usize) {
                q1
            } else {
                q0
            };
            term *= rat_pow(x, mult as usize);
        }
        total += term;
    }
    total
}

/// Clique-model cross moment `c_alpha = rho^{|V(alpha) ∪ {0}|}`.
pub fn clique_c(alpha: &Multigraph, rho: &Rat) -> Rat {
    rat_pow(rho, alpha.support_size_with_root())
}

// ---------------------------------------------------------------------------
// Gaussian kappa

/// Memoized Gaussian-model cumulant recursion for the planted submatrix.
///
/// Stores the lambda-free reduction `g_alpha(rho)` keyed by rooted
/// canonical class, so one table serves every SNR.
pub struct GaussianKappa {
    rho: Rat,
    memo: HashMap<Multigraph, Rat>,
}

impl GaussianKappa {
    pub fn new(rho: Rat) -> Self {
        GaussianKappa {
            rho,
            memo: HashMap::new(),
        }
    }

    pub fn rho(&self) -> &Rat {
        &self.rho
    }

    /// `g_alpha(rho)` with `kappa_alpha = lambda^{|alpha|} g_alpha(rho)`.
    pub fn kappa_reduced(&mut self, alpha: &Multigraph) -> Result<Rat> {
        let d = alpha.edge_count();
        if d > KAPPA_CAP {
            return Err(Error::CapExceeded { got: d, cap: KAPPA_CAP });
        }
        let (canon, _) = alpha.canonical();
        if let Some(v) = self.memo.get(&canon) {
            return Ok(v.clone());
        }
        let value = if canon.is_empty() {
            self.rho.clone()
        } else if canon.has_component_avoiding_root() {
            Rat::zero()
        } else {
            // g_alpha = rho^{|V ∪ 0|} - sum_{beta < alpha} g_beta
            //           binom(alpha,beta) rho^{|V(alpha-beta)|}
            let mut acc = rat_pow(&self.rho, canon.support_size_with_root());
            for (beta, binom) in canon.sub_multigraphs()? {
                if beta == canon {
                    continue;
                }
                let g_beta = self.kappa_reduced(&beta)?;
                if g_beta.is_zero() {
                    continue;
                }
                let rest = canon.minus(&beta);
                acc -= g_beta
                    * rat_from_biguint(&binom)
                    * rat_pow(&self.rho, rest.support_size());
            }
            acc
        };
        self.memo.insert(canon, value.clone());
        Ok(value)
    }

    /// `kappa_alpha` at rational SNR.
    pub fn kappa(&mut self, alpha: &Multigraph, lambda: &Rat) -> Result<Rat> {
        Ok(rat_pow(lambda, alpha.edge_count()) * self.kappa_reduced(alpha)?)
    }

    /// `kappa_alpha` at float SNR.
    pub fn kappa_f64(&mut self, alpha: &Multigraph, lambda: f64) -> Result<f64> {
        Ok(lambda.powi(alpha.edge_count() as i32) * rat_f64(&self.kappa_reduced(alpha)?))
    }
}

// ---------------------------------------------------------------------------
// binary kappa

/// Memoized binary-model cumulant recursion for the planted dense subgraph.
pub struct BinaryKappa {
    rho: Rat,
    q0: Rat,
    q1: Rat,
    memo: HashMap<Multigraph, Rat>,
}

impl BinaryKappa {
    pub fn new(rho: Rat, q0: Rat, q1: Rat) -> Self {
        BinaryKappa {
            rho,
            q0,
            q1,
            memo: HashMap::new(),
        }
    }

    /// `kappa_alpha` for the unscaled variables `X_ij = q0 + (q1-q0) v_i v_j`.
    ///
    /// Because `alpha` is a simple graph, the recursion needs no
    /// `binom(alpha, beta)` factor.
    pub fn kappa_unscaled(&mut self, alpha: &Multigraph) -> Result<Rat> {
        let d = alpha.edge_count();
        if d > KAPPA_CAP {
            return Err(Error::CapExceeded { got: d, cap: KAPPA_CAP });
        }
        if !alpha.is_simple() && !alpha.is_empty() {
            return Err(Error::InvalidParam(
                "binary kappa requires a simple graph".into(),
            ));
        }
        let (canon, _) = alpha.canonical();
        if let Some(v) = self.memo.get(&canon) {
            return Ok(v.clone());
        }
        let value = if canon.is_empty() {
            self.rho.clone()
        } else {
            let mut acc = cross_moment_subgraph(&canon, &self.rho, &self.q0, &self.q1);
            for (beta, _) in canon.sub_multigraphs()? {
                if beta == canon {
                    continue;
                }
                let k_beta = self.kappa_unscaled(&beta)?;
                if k_beta.is_zero() {
                    continue;
                }
                let rest = canon.minus(&beta);
                acc -= k_beta * moment_subgraph(&rest, &self.rho, &self.q0, &self.q1);
            }
            acc
        };
        self.memo.insert(canon, value.clone());
        Ok(value)
    }

    /// Standardized-variable cumulant: equals the Gaussian `kappa` at the
    /// effective SNR `(q1-q0)/sqrt(q0(1-q1))`.
    pub fn kappa_scaled_f64(&mut self, alpha: &Multigraph) -> Result<f64> {
        let lam = lambda_eff(rat_f64(&self.q0), rat_f64(&self.q1))?;
        let mut g = GaussianKappa::new(self.rho.clone());
        g.kappa_f64(alpha, lam)
    }
}

/// Effective SNR of the standardized binary model,
/// `(q1-q0)/sqrt(q0(1-q1))`; `q1 = 1` routes callers to the clique `w`.
pub fn lambda_eff(q0: f64, q1: f64) -> Result<f64> {
    if q1 >= 1.0 {
        return Err(Error::CliqueMode);
    }
    if q0 <= 0.0 {
        return Err(Error::InvalidParam("need q0 > 0".into()));
    }
    Ok((q1 - q0) / (q0 * (1.0 - q1)).sqrt())
}

// ---------------------------------------------------------------------------
// clique w

/// Planted-clique `w` recursion via the conditional-removal matrix `M`.
pub struct CliqueW {
    rho: Rat,
    memo: HashMap<Multigraph, Rat>,
}

impl CliqueW {
    pub fn new(rho: Rat) -> Self {
        CliqueW {
            rho,
            memo: HashMap::new(),
        }
    }

    /// `M_{beta,alpha} = 1_{beta <= alpha} Pr{alpha \ X = beta}`: the
    /// probability (over the clique-membership indicators of `V(alpha)`)
    /// that removing the edges inside the clique from `alpha` leaves
    /// exactly `beta`.
    pub fn m_entry(&self, beta: &Multigraph, alpha: &Multigraph) -> Result<Rat> {
        // validate beta <= alpha entrywise
        let alpha_map: HashMap<(u32, u32), u32> =
            alpha.edges().iter().cloned().collect();
        for &(pair, m) in beta.edges() {
            if alpha_map.get(&pair).copied().unwrap_or(0) < m {
                return Err(Error::InvalidParam("beta not <= alpha".into()));
            }
        }
        let verts: Vec<usize> = alpha.support().into_iter().collect();
        let m = verts.len();
        let index: HashMap<usize, usize> =
            verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let beta_map: HashMap<(u32, u32), u32> =
            beta.edges().iter().cloned().collect();
        let one_minus_rho = Rat::one() - &self.rho;
        let mut total = Rat::zero();
        for mask in 0u32..(1 << m) {
            let in_clique =
                |v: u32| (mask >> index[&(v as usize)]) & 1 == 1;
            let mut ok = true;
            for &((i, j), _) in alpha.edges() {
                let inside = in_clique(i) && in_clique(j);
                let kept = beta_map.contains_key(&(i, j));
                // removed (inside the clique) iff not kept in beta
                if inside == kept {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let ones = mask.count_ones() as usize;
            total += rat_pow(&self.rho, ones) * rat_pow(&one_minus_rho, m - ones);
        }
        Ok(total)
    }

    /// `w_alpha = (c_alpha - sum_{beta < alpha} w_beta M_{beta,alpha}) / M_{alpha,alpha}`.
    pub fn w(&mut self, alpha: &Multigraph) -> Result<Rat> {
        let d = alpha.edge_count();
        if d > KAPPA_CAP {
            return Err(Error::CapExceeded { got: d, cap: KAPPA_CAP });
        }
        if !alpha.is_simple() && !alpha.is_empty() {
            return Err(Error::InvalidParam(
                "clique w requires a simple graph".into(),
            ));
        }
        let (canon, _) = alpha.canonical();
        if let Some(v) = self.memo.get(&canon) {
            return Ok(v.clone());
        }
        let value = if canon.is_empty() {
            self.rho.clone()
        } else if canon.has_component_avoiding_root() {
            Rat::zero()
        } else {
            let mut acc = clique_c(&canon, &self.rho);
            for (beta, _) in canon.sub_multigraphs()? {
                if beta == canon {
                    continue;
                }
                let w_beta = self.w(&beta)?;
                if w_beta.is_zero() {
                    continue;
                }
                acc -= w_beta * self.m_entry(&beta, &canon)?;
            }
            acc / self.m_entry(&canon, &canon)?
        };
        self.memo.insert(canon, value.clone());
        Ok(value)
    }
}

// ---------------------------------------------------------------------------
// partition-formula oracle

/// A random variable `shift + sum_t coeff_t * prod_{i in verts_t} v_i`
/// over i.i.d. Bernoulli(rho) vertex indicators `v_i`.
#[derive(Debug, Clone)]
pub struct VarSpec {
    pub shift: Rat,
    pub terms: Vec<(Rat, Vec<usize>)>,
}

impl VarSpec {
    /// `coeff * prod_{i in verts} v_i`.
    pub fn monomial(coeff: Rat, verts: &[usize]) -> VarSpec {
        VarSpec {
            shift: Rat::zero(),
            terms: vec![(coeff, verts.to_vec())],
        }
    }

    pub fn with_shift(mut self, shift: Rat) -> VarSpec {
        self.shift = shift;
        self
    }
}

/// Exact moment `E[prod_i vars_i]` by enumeration over the indicator
/// assignments of every vertex mentioned.
fn vars_moment(vars: &[&VarSpec], rho: &Rat) -> Rat {
    let mut verts: Vec<usize> = vars
        .iter()
        .flat_map(|v| v.terms.iter().flat_map(|(_, vs)| vs.iter().cloned()))
        .collect();
    verts.sort_unstable();
    verts.dedup();
    let m = verts.len();
    let index: HashMap<usize, usize> =
        verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let one_minus_rho = Rat::one() - rho;
    let mut total = Rat::zero();
    for mask in 0u32..(1 << m) {
        let bit = |v: usize| (mask >> index[&v]) & 1 == 1;
        let ones = mask.count_ones() as usize;
        let weight = rat_pow(rho, ones) * rat_pow(&one_minus_rho, m - ones);
        let mut prod = Rat::one();
        for var in vars {
            let mut val = var.shift.clone();
            for (coeff, vs) in &var.terms {
                if vs.iter().all(|&v| bit(v)) {
                    val += coeff;
                }
            }
            prod *= val;
        }
        total += weight * prod;
    }
    total
}

/// Joint cumulant `kappa(X_1, ..., X_m)` over the set-partition lattice:
/// `sum_pi (|pi|-1)! (-1)^{|pi|-1} prod_{B in pi} E[prod_{i in B} X_i]`.
pub fn joint_cumulant_partition(vars: &[VarSpec], rho: &Rat) -> Result<Rat> {
    let m = vars.len();
    if m == 0 {
        return Err(Error::InvalidParam("need at least one variable".into()));
    }
    if m > PARTITION_CAP {
        return Err(Error::CapExceeded { got: m, cap: PARTITION_CAP });
    }
    let mut total = Rat::zero();
    for partition in set_partitions(m) {
        let blocks = partition.iter().max().copied().unwrap() + 1;
        // (blocks-1)! with alternating sign
        let mut coeff = Rat::one();
        for k in 1..blocks {
            coeff *= Rat::from(BigInt::from(k));
        }
        if blocks % 2 == 0 {
            coeff = -coeff;
        }
        let mut prod = coeff;
        for b in 0..blocks {
            let block_vars: Vec<&VarSpec> = (0..m)
                .filter(|&i| partition[i] == b)
                .map(|i| &vars[i])
                .collect();
            prod *= vars_moment(&block_vars, rho);
        }
        total += prod;
    }
    Ok(total)
}

/// All set partitions of `{0,..,m-1}` as restricted-growth strings.
fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    fn rec(rgs: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[pos] = b;
            rec(rgs, pos + 1, max_used.max(b), out);
        }
    }
    if m > 0 {
        rgs[0] = 0;
        rec(&mut rgs, 1, 0, &mut out);
    }
    out
}

/// The partition-oracle variable list matching `kappa_alpha` for the
/// Gaussian model: `x = v_0` followed by `lambda v_i v_j` repeated
/// `alpha_ij` times (the noise drops from every mixed cumulant).
pub fn gaussian_kappa_varspec(alpha: &Multigraph, lambda: &Rat) -> Vec<VarSpec> {
    let mut vars = vec![VarSpec::monomial(Rat::one(), &[0])];
    for &((i, j), mult) in alpha.edges() {
        for _ in 0..mult {
            vars.push(VarSpec::monomial(
                lambda.clone(),
                &[i as usize, j as usize],
            ));
        }
    }
    vars
}

/// Variable list matching the unscaled binary `kappa_alpha`:
/// `x = v_0` followed by `q0 + (q1-q0) v_i v_j` per edge.
pub fn binary_kappa_varspec(alpha: &Multigraph, q0: &Rat, q1: &Rat) -> Vec<VarSpec> {
    let mut vars = vec![VarSpec::monomial(Rat::one(), &[0])];
    for &((i, j), mult) in alpha.edges() {
        for _ in 0..mult {
            vars.push(
                VarSpec::monomial(q1.clone() - q0.clone(), &[i as usize, j as usize])
                    .with_shift(q0.clone()),
            );
        }
    }
    vars
}

// ---------------------------------------------------------------------------
// magnitude bounds

/// `(d+1)^d lambda^d rho^{|V|}`: the one-sided magnitude bound on
/// `|kappa_alpha|` for `d = |alpha| >= 1`.
pub fn kappa_magnitude_bound(d: usize, v: usize, lambda: f64, rho: f64) -> f64 {
    ((d as f64 + 1.0).ln() * d as f64
        + lambda.abs().ln() * d as f64
        + rho.ln() * v as f64)
        .exp()
}

/// `(d+1)^d (1-rho)^{-2d^2} rho^{|V|}`: the magnitude bound on `|w_alpha|`.
pub fn w_magnitude_bound(d: usize, v: usize, rho: f64) -> f64 {
    ((d as f64 + 1.0).ln() * d as f64
        - (1.0 - rho).ln() * 2.0 * (d * d) as f64
        + rho.ln() * v as f64)
        .exp()
}

/// True iff `kappa` sits in the sharp two-sided window
/// `(1/2) lambda^d rho^{|V|} <= kappa <= lambda^d rho^{|V|}`.
pub fn kappa_sharp_window(kappa: f64, d: usize, v: usize, lambda: f64, rho: f64) -> bool {
    let base = lambda.powi(d as i32) * rho.powi(v as i32);
    0.5 * base <= kappa && kappa <= base
}
