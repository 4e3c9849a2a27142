//! Top eigenvalues along the matrix process, and the corner comparison for
//! the largest-eigenvalue covariance.

use dbm_tridiag::experiments::eigen_cov_report;
use dbm_tridiag::process::{Beta, TimeGrid};
use dbm_tridiag::spectral::{airy_rescale, corner_size_rule, eigen_process};
use dbm_tridiag::stats::Execution;

fn main() -> dbm_tridiag::Result<()> {
    let n = 200;
    let grid = TimeGrid::span(0.2, 0.05)?;
    let path = eigen_process(n, Beta::Two, &grid, 3, 41)?;
    let scaled = airy_rescale(&path, n)?;
    for (i, t) in grid.times().iter().enumerate() {
        println!(
            "t={t:.2}: top {:?}  edge-scaled {:.3}",
            path.values[i], scaled.values[i][0]
        );
    }
    println!("corner size for n={n}: {}", corner_size_rule(n));

    let report = eigen_cov_report(n, Beta::One, &[5, 20], &grid, 150, 42, Execution::Auto)?;
    for c in &report.checks {
        println!("{}: {}", c.name, c.detail);
    }
    Ok(())
}
