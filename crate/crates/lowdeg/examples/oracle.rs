//! Exact small-instance oracle: compute `Corr²_{≤D}` and `MMSE_{≤D}` for a
//! planted clique on 4 vertices in exact rational arithmetic, verify the
//! identity `MMSE = ρ − Corr²`, and check the oracle sits below the
//! class-enumerated upper bound.

use lowdeg::exact_oracle::build_moment_system_clique;
use lowdeg::lowdeg_bounds::{corr_bound_enumerated, ModelParams};
use lowdeg::models::CliqueParams;
use lowdeg::rat_f64;

fn main() -> Result<(), lowdeg::Error> {
    let p = CliqueParams::new(4, 0.25)?;
    println!("planted clique, n = {}, rho = {}", p.n, p.rho);
    for d in 1..=2 {
        let sys = build_moment_system_clique(&p, d)?;
        let (f, corr_sq) = sys.solve_exact()?;
        let mmse = &sys.rho - &corr_sq;
        let achieved = sys.achieved_mse_exact(&f);
        println!("\nD = {d} (basis of {} monomials)", sys.basis.len());
        println!("  corr_sq = {corr_sq} = {:.8}", rat_f64(&corr_sq));
        println!("  mmse    = {mmse} = {:.8}", rat_f64(&mmse));
        // the optimizer's directly evaluated MSE equals rho - corr_sq exactly
        assert_eq!(achieved, mmse);

        let bound = corr_bound_enumerated(&ModelParams::Clique(p), d)?;
        println!("  enumerated upper bound on corr_sq = {:.8}", bound.corr_sq_upper);
        assert!(rat_f64(&corr_sq) <= bound.corr_sq_upper + 1e-9);
    }
    Ok(())
}
