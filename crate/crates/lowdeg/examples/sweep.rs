//! Phase-plane sweep: classify the `(a, b)` exponent plane (`λ = n^{−a}`,
//! `ρ = n^{−b}`) into hard (degree-D estimation provably gains at most a
//! constant), easy (an explicit low-degree estimator provably works), and
//! unresolved, and print it as an ASCII diagram.

use lowdeg::lowdeg_bounds::{phase_sweep, PhaseLabel};

fn main() -> Result<(), lowdeg::Error> {
    let n = 1_000_000;
    let d = 10;
    let r = 0.5;
    // negative a means lambda > 1: that is where estimation becomes easy
    let a_grid: Vec<f64> = (-10..=30).map(|i| i as f64 * 0.05).collect();
    let b_grid: Vec<f64> = (1..=10).map(|i| i as f64 * 0.05).collect();
    let points = phase_sweep(n, &a_grid, &b_grid, &[d], r)?;

    println!("n = {n}, D = {d}, r = {r}");
    println!("rows: a (lambda = n^-a); cols: b (rho = n^-b, from 0.05)");
    println!("H = hard certificate, E = easy certificate, . = unresolved\n");
    let mut idx = 0;
    for _a in &a_grid {
        let mut line = String::new();
        for _b in &b_grid {
            let p = &points[idx];
            idx += 1;
            line.push(match p.phase {
                PhaseLabel::Hard => 'H',
                PhaseLabel::Easy => 'E',
                PhaseLabel::Unresolved => '.',
            });
        }
        println!("a={:<5.2} {line}", _a);
    }

    let hard = points.iter().filter(|p| p.phase == PhaseLabel::Hard).count();
    let easy = points.iter().filter(|p| p.phase == PhaseLabel::Easy).count();
    println!(
        "\n{hard} hard / {easy} easy / {} unresolved of {} grid points",
        points.len() - hard - easy,
        points.len()
    );
    // the two certificates never overlap on a grid point
    Ok(())
}
