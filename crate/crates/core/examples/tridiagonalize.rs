//! Householder reduction of a Hermitian matrix, checked against a dense
//! eigensolver, and the Lanczos shortcut for leading entries.

use dbm_tridiag::packed::PackedHermitian;
use dbm_tridiag::process::{GbeMatrix, HermitianMatrix};
use dbm_tridiag::rng;
use dbm_tridiag::tridiag::{lanczos_entries, tridiagonalize_detailed};
use num_complex::Complex64;

fn main() -> dbm_tridiag::Result<()> {
    let n = 40;
    let a = HermitianMatrix::<Complex64>::sample_stationary(n, &mut rng::from_seed(3));
    let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| a.get(i, j));

    let r = tridiagonalize_detailed(&GbeMatrix::Complex(a.clone()))?;
    println!("largest imaginary residual: {:e}", r.max_imag_residual);
    let t = r.into_tridiagonal()?;

    let mut want: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    let mut got: Vec<f64> = t.to_dense().symmetric_eigenvalues().iter().copied().collect();
    want.sort_by(f64::total_cmp);
    got.sort_by(f64::total_cmp);
    let gap = want.iter().zip(&got).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("max eigenvalue gap after reduction: {gap:e}");

    let k = 4;
    let lz = lanczos_entries(&PackedHermitian::from_full(&a), k, k);
    for j in 0..k {
        println!(
            "a_{} = {:8.4} / {:8.4}   b_{} = {:8.4} / {:8.4}",
            j + 1,
            t.diag()[j],
            lz.diag[j],
            j + 1,
            t.offdiag()[j],
            lz.offdiag[j]
        );
    }
    Ok(())
}
