//! Monic semicircle polynomials and the polynomial approximation of the
//! tridiagonal entries.

use dbm_tridiag::approx::approx_entries_frame;
use dbm_tridiag::chebyshev::{poly_p, poly_product_expand};
use dbm_tridiag::process::{GbeMatrix, HermitianMatrix};
use dbm_tridiag::rng;
use dbm_tridiag::tridiag::tridiagonalize_leading;

fn main() -> dbm_tridiag::Result<()> {
    for k in 0..=5 {
        println!("P_{k} = {}", poly_p(k));
    }
    println!("P_3 P_2 = sum of P_d for d in {:?}", poly_product_expand(3, 2));

    let (n, k) = (1500, 3);
    let m = HermitianMatrix::<f64>::sample_stationary(n, &mut rng::from_seed(9));
    let approx = approx_entries_frame(&m, k)?;
    let exact = tridiagonalize_leading(&GbeMatrix::Real(m), k)?;
    let norm = (n - 1) as f64;
    for j in 0..k {
        let b = (exact.offdiag[j].powi(2) - norm) / norm.sqrt();
        println!(
            "a_{}: {:+.4} vs {:+.4}    centered b_{}²: {:+.4} vs {:+.4}",
            j + 1,
            exact.diag[j],
            approx.tilde_a[j],
            j + 1,
            b,
            approx.tilde_b_sq_centered[j]
        );
    }
    Ok(())
}
