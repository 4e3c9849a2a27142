//! Covariance of the leading tridiagonal entries of the matrix process
//! against the limiting OU covariances.

use dbm_tridiag::experiments::simulate_entries;
use dbm_tridiag::process::{Beta, TimeGrid};
use dbm_tridiag::stats::Execution;

fn main() -> dbm_tridiag::Result<()> {
    let grid = TimeGrid::span(0.5, 0.05)?;
    let report = simulate_entries(150, Beta::One, 3, &grid, 400, 11, Execution::Auto)?;
    let cov = report.series("cov_a3").expect("a3 curve");
    println!("{:>5} {:>9} {:>9} {:>9}", "t", "Cov a3", "±SE", "2e^-5t");
    for p in &cov.points {
        println!(
            "{:5.2} {:9.4} {:9.4} {:9.4}",
            p.t,
            p.value,
            p.stderr,
            2.0 * (-5.0 * p.t).exp()
        );
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
