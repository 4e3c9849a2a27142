//! Off-diagonal entry `b_j` against the `b̂_j` transform of its limit and the
//! norm model.

use dbm_tridiag::experiments::bhat_compare;
use dbm_tridiag::process::{Beta, TimeGrid};
use dbm_tridiag::stats::Execution;

fn main() -> dbm_tridiag::Result<()> {
    let grid = TimeGrid::span(0.4, 0.1)?;
    let report = bhat_compare(300, Beta::One, 6, &grid, 300, 21, Execution::Auto)?;
    for name in [
        "tridiag_var_b6",
        "bhat_var_b6",
        "norm_model_var_b6",
        "tridiag_cov_b6",
        "bhat_cov_b6",
    ] {
        let s = report.series(name).expect("series");
        let row: Vec<String> = s.points.iter().map(|p| format!("{:.3}", p.value)).collect();
        println!("{name:>18}: {}", row.join(" "));
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
