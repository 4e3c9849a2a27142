//! Exact-transition Ornstein–Uhlenbeck paths and their autocovariance.

use dbm_tridiag::process::{ou_sample_path, OuParams, TimeGrid};
use dbm_tridiag::stats::CovarianceCurve;

fn main() -> dbm_tridiag::Result<()> {
    let grid = TimeGrid::span(1.0, 0.1)?;
    let params = OuParams::new(3.0)?;
    let mut cov = CovarianceCurve::new(grid.times());
    for seed in 0..20_000 {
        cov.push_path(&ou_sample_path(params, &grid, seed).values)?;
    }
    println!("{:>5} {:>9} {:>9} {:>9}", "t", "Cov", "±SE", "e^-3t");
    for p in cov.covariance("ou")?.points {
        println!(
            "{:5.2} {:9.4} {:9.4} {:9.4}",
            p.t,
            p.value,
            p.stderr,
            (-3.0 * p.t).exp()
        );
    }
    Ok(())
}
