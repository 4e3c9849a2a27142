//! Stationary GOE/GUE/GSE samples: entry variances and the semicircle edge.

use dbm_tridiag::process::{Beta, GbeMatrix};
use dbm_tridiag::rng;
use dbm_tridiag::spectral::lambda_max;
use dbm_tridiag::tridiag::tridiagonalize;

fn main() -> dbm_tridiag::Result<()> {
    let n = 300;
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        let m = GbeMatrix::sample_stationary(n, beta, &mut rng::stream(5, beta.value() as u64));
        m.check_self_adjoint(0.0)?;
        let t = tridiagonalize(&m)?;
        // λ_max/√(βn) sits near the semicircle edge 2
        let edge = lambda_max(&t) / (beta.as_f64() * n as f64).sqrt();
        let first_off = t.offdiag()[0].powi(2) / (beta.as_f64() * (n - 1) as f64);
        println!("β={beta}: λ_max/√(βn) = {edge:.3}, b_1²/(β(n−1)) = {first_off:.3}");
    }
    Ok(())
}
