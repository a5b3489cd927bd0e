//! Parameter records and reproducible samplers for the planted ensembles.
//!
//! Planted submatrix: `Y = lambda v v^T + W` with `v_i` i.i.d.
//! Bernoulli(rho) and symmetric Gaussian noise (`Var W_ij = 1` off the
//! diagonal, `Var W_ii = 2`). Planted dense subgraph: edges Bernoulli
//! `q0 + (q1 - q0) v_i v_j`. Planted clique: the subgraph model at
//! `q0 = 1/2, q1 = 1`.
//!
//! Samplers are pure functions of `(params, seed)` using ChaCha8; batch
//! trial `k` reproduces independently via the stream counter.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Name/version string recorded in experiment metadata.
pub const RNG_DESCRIPTION: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64 + set_stream";

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SubmatrixParams {
    pub n: usize,
    pub lambda: f64,
    pub rho: f64,
}

impl SubmatrixParams {
    pub fn new(n: usize, lambda: f64, rho: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("need n >= 1".into()));
        }
        if !(0.0 < rho && rho < 1.0) {
            return Err(Error::InvalidParam(format!("need 0 < rho < 1, got {rho}")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParam(format!("need lambda >= 0, got {lambda}")));
        }
        Ok(SubmatrixParams { n, lambda, rho })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SubgraphParams {
    pub n: usize,
    pub rho: f64,
    pub q0: f64,
    pub q1: f64,
}

impl SubgraphParams {
    pub fn new(n: usize, rho: f64, q0: f64, q1: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("need n >= 1".into()));
        }
        if !(0.0 < rho && rho < 1.0) {
            return Err(Error::InvalidParam(format!("need 0 < rho < 1, got {rho}")));
        }
        if !(0.0 < q0 && q0 < 1.0) {
            return Err(Error::InvalidParam(format!("need 0 < q0 < 1, got {q0}")));
        }
        if !(0.0 < q1 && q1 <= 1.0) {
            return Err(Error::InvalidParam(format!("need 0 < q1 <= 1, got {q1}")));
        }
        if q0 > q1 {
            return Err(Error::InvalidParam(
                "need q0 <= q1; pass the complement-graph form otherwise".into(),
            ));
        }
        Ok(SubgraphParams { n, rho, q0, q1 })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CliqueParams {
    pub n: usize,
    pub rho: f64,
}

impl CliqueParams {
    pub fn new(n: usize, rho: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam("need n >= 1".into()));
        }
        if !(0.0 < rho && rho <= 1.0) {
            return Err(Error::InvalidParam(format!("need 0 < rho <= 1, got {rho}")));
        }
        Ok(CliqueParams { n, rho })
    }

    pub fn as_subgraph(&self) -> SubgraphParams {
        SubgraphParams {
            n: self.n,
            rho: self.rho,
            q0: 0.5,
            q1: 1.0,
        }
    }
}

/// Dense symmetric matrix stored as the upper triangle, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    pub n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // row i starts after n + (n-1) + ... + (n-i+1) entries
        i * self.n - i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }
}

/// Simple graph stored as bitset rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BitGraph {
    pub n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitGraph {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set_edge(&mut self, i: usize, j: usize) {
        assert!(i != j, "zero diagonal");
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words_per_row + i / 64] |= 1 << (i % 64);
    }

    /// Degree of vertex `i`.
    pub fn degree(&self, i: usize) -> usize {
        let row = &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row];
        row.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Gaussian(SymMatrix),
    Binary(BitGraph),
}

/// One sampled instance: observation, hidden indicator, and the seed that
/// reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub observation: Observation,
    pub signal: Vec<u8>,
    pub seed: u64,
}

impl Instance {
    pub fn gaussian(&self) -> &SymMatrix {
        match &self.observation {
            Observation::Gaussian(m) => m,
            _ => panic!("expected a Gaussian observation"),
        }
    }

    pub fn binary(&self) -> &BitGraph {
        match &self.observation {
            Observation::Binary(g) => g,
            _ => panic!("expected a binary observation"),
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `k` of the batch rooted at `seed`.
pub fn rng_for_trial(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

fn sample_signal(n: usize, rho: f64, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n)
        .map(|_| if rng.gen::<f64>() < rho { 1 } else { 0 })
        .collect()
}

/// `Y = lambda v v^T + W`, `Var W_ij = 1` (i < j), `Var W_ii = 2`.
pub fn sample_submatrix(p: &SubmatrixParams, seed: u64) -> Instance {
    let mut rng = rng_for(seed);
    let v = sample_signal(p.n, p.rho, &mut rng);
    let mut y = SymMatrix::zeros(p.n);
    let sqrt2 = std::f64::consts::SQRT_2;
    for i in 0..p.n {
        for j in i..p.n {
            let noise: f64 = StandardNormal.sample(&mut rng);
            let noise = if i == j { sqrt2 * noise } else { noise };
            y.set(i, j, p.lambda * (v[i] * v[j]) as f64 + noise);
        }
    }
    Instance {
        observation: Observation::Gaussian(y),
        signal: v,
        seed,
    }
}

/// Edges Bernoulli `q0 + (q1 - q0) v_i v_j`, symmetric, zero diagonal.
pub fn sample_subgraph(p: &SubgraphParams, seed: u64) -> Instance {
    let mut rng = rng_for(seed);
    let v = sample_signal(p.n, p.rho, &mut rng);
    let mut g = BitGraph::new(p.n);
    for i in 0..p.n {
        for j in (i + 1)..p.n {
            let q = if v[i] == 1 && v[j] == 1 { p.q1 } else { p.q0 };
            if rng.gen::<f64>() < q {
                g.set_edge(i, j);
            }
        }
    }
    Instance {
        observation: Observation::Binary(g),
        signal: v,
        seed,
    }
}

/// Clique in `G(n, 1/2)`: the subgraph sampler at `q0 = 1/2, q1 = 1`.
pub fn sample_clique(p: &CliqueParams, seed: u64) -> Instance {
    sample_subgraph(&p.as_subgraph(), seed)
}

/// `(Y + Y^T)/sqrt(2)`: maps the asymmetric-noise model at SNR
/// `lambda/sqrt(2)` onto the symmetric model at SNR `lambda`.
pub fn symmetrize(y: &nalgebra::DMatrix<f64>) -> Result<nalgebra::DMatrix<f64>> {
    if y.nrows() != y.ncols() {
        return Err(Error::InvalidParam(format!(
            "symmetrize needs a square matrix, got {}x{}",
            y.nrows(),
            y.ncols()
        )));
    }
    Ok((y + y.transpose()) / std::f64::consts::SQRT_2)
}

/// Mean squared error of the trivial constant estimator `f(Y) = rho`.
pub fn trivial_mmse(rho: f64) -> f64 {
    rho - rho * rho
}
