use dbm_tridiag::chebyshev::poly_p;
use dbm_tridiag::combinatorics::{catalan, doubled_set, enumerate_nc2, enumerate_p2, perm_from_pairing};
use dbm_tridiag::packed::PackedHermitian;
use dbm_tridiag::process::{Beta, GbeMatrix, HermitianMatrix, OuParams};
use dbm_tridiag::rng;
use dbm_tridiag::scalar::Scalar;
use dbm_tridiag::spectral::{bisect_eigenvalue, gershgorin, sturm_count};
use dbm_tridiag::stats::{replicate, Execution, MomentAccumulator};
use dbm_tridiag::tridiag::{lanczos_entries, tridiagonalize, SymTridiagonal, Tridiagonalizer};
use num_complex::Complex64;
use proptest::prelude::*;

fn frobenius_sq(t: &SymTridiagonal) -> f64 {
    t.diag().iter().map(|a| a * a).sum::<f64>() + 2.0 * t.offdiag().iter().map(|b| b * b).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_keeps_trace_norm_and_sign(n in 1usize..24, seed in any::<u64>(), beta in prop::sample::select(vec![1u32, 2, 4])) {
        let beta = Beta::try_from(beta).unwrap();
        let m = GbeMatrix::sample_stationary(n, beta, &mut rng::from_seed(seed));
        let (trace, fro) = match &m {
            GbeMatrix::Real(a) => ((0..n).map(|i| a.get(i, i)).sum::<f64>(), a.data().iter().map(|x| x * x).sum::<f64>()),
            GbeMatrix::Complex(a) => ((0..n).map(|i| a.get(i, i).re).sum(), a.data().iter().map(|x| x.norm_sqr()).sum()),
            GbeMatrix::Quaternion(a) => (
                (0..n).map(|i| a.get(i, i).components()[0]).sum(),
                a.data().iter().map(|x| x.components().iter().map(|c| c * c).sum::<f64>()).sum(),
            ),
        };
        let t = tridiagonalize(&m).unwrap();
        prop_assert!(t.offdiag().iter().all(|&b| b >= 0.0));
        prop_assert!((t.diag().iter().sum::<f64>() - trace).abs() <= 1e-9 * (1.0 + fro.sqrt()));
        prop_assert!((frobenius_sq(&t) - fro).abs() <= 1e-9 * (1.0 + fro));
    }

    #[test]
    fn lanczos_agrees_with_householder(n in 8usize..40, k in 1usize..5, seed in any::<u64>()) {
        let a = HermitianMatrix::<Complex64>::sample_stationary(n, &mut rng::from_seed(seed));
        let h = Tridiagonalizer::new().reduce_leading(&a, k);
        let l = lanczos_entries(&PackedHermitian::from_full(&a), k, k);
        let scale = (n as f64).sqrt();
        for j in 0..k {
            prop_assert!((h.diag[j] - l.diag[j]).abs() <= 1e-9 * scale);
            prop_assert!((h.offdiag[j] - l.offdiag[j]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn sturm_count_monotone_and_bisection_bracketed(
        diag in prop::collection::vec(-5.0f64..5.0, 2..12),
        off in prop::collection::vec(0.01f64..3.0, 11),
        xs in prop::collection::vec(-12.0f64..12.0, 2..6),
    ) {
        let n = diag.len();
        let t = SymTridiagonal::new(diag, off[..n - 1].to_vec()).unwrap();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let counts: Vec<usize> = xs.iter().map(|&x| sturm_count(&t, x)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let (lo, hi) = gershgorin(&t);
        let eigs: Vec<f64> = (0..n).map(|m| bisect_eigenvalue(&t, m, 1e-12)).collect();
        prop_assert!(eigs.windows(2).all(|w| w[0] <= w[1] + 1e-10));
        prop_assert!(eigs[0] >= lo - 1e-9 && eigs[n - 1] <= hi + 1e-9);
        let trace: f64 = t.diag().iter().sum();
        prop_assert!((eigs.iter().sum::<f64>() - trace).abs() <= 1e-8 * n as f64);
    }

    #[test]
    fn accumulator_merge_is_concatenation(
        xs in prop::collection::vec(-1e3f64..1e3, 2..60),
        split in 0usize..60,
    ) {
        let split = split.min(xs.len());
        let mut whole = MomentAccumulator::new();
        xs.iter().for_each(|&x| whole.push(x, 0.5 * x + 1.0));
        let mut left = MomentAccumulator::new();
        let mut right = MomentAccumulator::with_shift(7.0, -3.0);
        xs[..split].iter().for_each(|&x| left.push(x, 0.5 * x + 1.0));
        xs[split..].iter().for_each(|&x| right.push(x, 0.5 * x + 1.0));
        left.merge(&right);
        prop_assert_eq!(left.count(), whole.count());
        let scale = 1.0 + xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        prop_assert!((left.mean().unwrap() - whole.mean().unwrap()).abs() <= 1e-9 * scale.sqrt());
        prop_assert!((left.variance().unwrap() - whole.variance().unwrap()).abs() <= 1e-8 * scale);
        prop_assert!((left.covariance().unwrap() - whole.covariance().unwrap()).abs() <= 1e-8 * scale);
    }

    #[test]
    fn product_expansion_pointwise(j in 0usize..9, k in 0usize..9, x in -2.5f64..2.5) {
        let lhs = poly_p(j).eval(x) * poly_p(k).eval(x);
        let rhs: f64 = (0..=j.min(k)).map(|l| poly_p(j + k - 2 * l).eval(x)).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn ou_transition_preserves_unit_variance(rate in 0.01f64..50.0, dt in 1e-6f64..2.0) {
        let (decay, mix) = OuParams::new(rate).unwrap().transition(dt);
        prop_assert!((decay * decay + mix * mix - 1.0).abs() <= 1e-12);
        prop_assert!((decay - (-rate * dt).exp()).abs() <= 1e-15);
    }

    #[test]
    fn replicate_independent_of_schedule(count in 1usize..40, seed in any::<u64>(), threads in 1usize..4) {
        use rand::Rng;
        let f = |i: usize| Ok(rng::stream(seed, i as u64).random::<u64>());
        let a = replicate(count, Execution::Sequential, f).unwrap();
        let b = replicate(count, Execution::Parallel(Some(threads)), f).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn nc2_counts_and_noncrossing() {
    for m in 0..=7 {
        let all = enumerate_nc2(2 * m).unwrap();
        assert_eq!(all.len() as u64, catalan(m));
        assert!(all.iter().all(|p| !p.is_crossing()));
    }
}

#[test]
fn perm_images_are_permutations_of_index_set() {
    for size in 1..=4usize {
        let index: Vec<usize> = (1..=size).collect();
        for pi in enumerate_p2(&doubled_set(&index)).unwrap() {
            let sigma = perm_from_pairing(&pi).unwrap();
            let mut image: Vec<usize> = index.iter().map(|&x| sigma.apply(x).unwrap()).collect();
            image.sort();
            assert_eq!(image, index);
        }
    }
}
