//! Pair partitions, the permutation map on doubled pairings, and the free
//! semicircular covariances.

use dbm_tridiag::combinatorics::{
    all_permutations, catalan, enumerate_nc2, perm_multiplicity, semicircular_cov_p, semicircular_mixed_moment,
    MomentQuery,
};

fn main() -> dbm_tridiag::Result<()> {
    for m in 1..=6 {
        println!(
            "|NC2[{}]| = {:3}  (Catalan {})",
            2 * m,
            enumerate_nc2(2 * m)?.len(),
            catalan(m)
        );
    }
    for sigma in all_permutations(&[1, 2, 3]) {
        println!("{sigma}: multiplicity {}", perm_multiplicity(&sigma));
    }
    // τ(s_0 s_0.5² s_0) = 1 + e^{-1}; each word entry is (power, time)
    let q = MomentQuery::new(vec![(1, 0.0), (2, 0.5), (1, 0.0)]);
    println!("mixed moment: {:.5} (1 + e^-1 = {:.5})", semicircular_mixed_moment(&q)?, 1.0 + (-1.0f64).exp());
    for k in 0..=4 {
        println!(
            "τ(P_{k}(s_0) P_{k}(s_0.3)) = {:.5}",
            semicircular_cov_p(k, k, 0.0, 0.3)?
        );
    }
    Ok(())
}
