//! Excess kurtosis of `a_3(0) + a_3(t)`: visible at small matrix size,
//! gone at large size.

use dbm_tridiag::experiments::kurtosis_sum_experiment;
use dbm_tridiag::process::TimeGrid;
use dbm_tridiag::stats::Execution;

fn main() -> dbm_tridiag::Result<()> {
    let grid = TimeGrid::new(0.0, 0.2, 2)?;
    let rows = kurtosis_sum_experiment(&[5, 40, 160], 3, &grid, 20_000, 31, Execution::Auto)?;
    for r in rows.iter().filter(|r| r.t > 0.0) {
        println!("n={:4} t={:.1}: K = {:+.4} ± {:.4}", r.n, r.t, r.kurtosis, r.stderr);
    }
    Ok(())
}
