//! Per-replicate random streams make results independent of scheduling.

use dbm_tridiag::experiments::entry_paths;
use dbm_tridiag::process::{Beta, TimeGrid};
use dbm_tridiag::stats::{replicate, Execution};

fn main() -> dbm_tridiag::Result<()> {
    let grid = TimeGrid::span(0.1, 0.05)?;
    let run = |exec| {
        replicate(64, exec, |i| {
            Ok(entry_paths(60, Beta::Four, 2, &grid, 7, i as u64)?.a[1].clone())
        })
    };
    let sequential = run(Execution::Sequential)?;
    let parallel = run(Execution::Parallel(Some(4)))?;
    println!("bit-identical across schedules: {}", sequential == parallel);
    println!("replicate 0, a_2 path: {:?}", sequential[0]);
    Ok(())
}
