//! Low-degree polynomial estimation bounds for planted signal recovery.
//!
//! This crate computes the degree-`D` minimum mean squared error
//! (`MMSE_{<=D}`) and maximum correlation (`Corr_{<=D}`) for three planted
//! ensembles -- planted submatrix (rank-one spike in symmetric Gaussian
//! noise), planted dense subgraph, and planted clique -- and validates the
//! cumulant-based upper bounds on `Corr_{<=D}` against exact small-instance
//! oracles, brute-force combinatorial counts, and Monte Carlo simulation of
//! the matching low-degree estimators and detection statistics.
//!
//! The main pieces:
//!
//! * [`models`] -- parameter records and reproducible samplers for the three
//!   ensembles, plus model-equivalence transforms.
//! * [`multigraph`] -- the multigraph index set of the cumulant sums:
//!   canonical forms, rooted-connected enumeration, and counting bounds.
//! * [`cumulants`] -- exact-rational `kappa` recursions (Gaussian and binary
//!   models), the planted-clique `w` recursion, and a partition-formula
//!   joint-cumulant oracle.
//! * [`hermite`] -- probabilists' Hermite polynomials, shifted expansions,
//!   and Gauss-Hermite quadrature.
//! * [`exact_oracle`] -- exact `Corr_{<=D}` on tiny instances via the
//!   moment-matrix formula `Corr = sqrt(c^T P^+ c)`.
//! * [`lowdeg_bounds`] -- class-enumerated and closed-form upper bounds on
//!   `Corr^2_{<=D}`, evaluated in log domain for large `n`.
//! * [`estimators`] -- threshold-polynomial estimators (diagonal
//!   thresholding, one-step power iteration) with Monte Carlo MSE and
//!   guarantee checking.
//! * [`detection`] -- modified-null detection statistics and the
//!   null-normalized correlation construction.
//!
//! Every sampler and experiment is a pure function of `(params, seed)`;
//! the CLI (`lowdeg` binary) and the `examples/` directory expose each
//! capability as a reproducible run that emits CSV or JSON rows.

pub mod cumulants;
pub mod detection;
pub mod error;
pub mod estimators;
pub mod exact_oracle;
pub mod hermite;
pub mod logdomain;
pub mod lowdeg_bounds;
pub mod models;
pub mod multigraph;
pub mod output;

pub use error::Error;

/// Exact rational scalar used throughout the exact-arithmetic paths.
pub type Rat = num::BigRational;

/// Convenience constructor for a rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    use num::BigInt;
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational to `f64`, panicking only on pathological overflow.
pub fn rat_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().expect("rational out of f64 range")
}
