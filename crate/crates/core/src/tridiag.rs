//! Householder tridiagonalization with the positive off-diagonal convention.
//!
//! The reflector for a column `x` always maps it onto `+‖x‖ e₁` (times the
//! phase of `x₁` for complex and quaternion entries), never onto
//! `−sign(x₁)‖x‖ e₁`. A final diagonal unitary rotation then makes every
//! off-diagonal equal to `‖x_k‖ ≥ 0`, so the output is a real symmetric
//! tridiagonal matrix for every β.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::packed::HermitianOp;
use crate::process::{dispatch, GbeMatrix, GbePath, HermitianMatrix, TimeGrid};
use crate::scalar::Scalar;

/// Relative threshold below which a reflector is treated as the identity.
pub const REFLECTOR_EPS: f64 = 1e-13;

/// Relative tolerance used when checking self-adjointness of inputs.
pub const SELF_ADJOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(crate::error::param("diag", "must be non-empty"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension {
                expected: diag.len() - 1,
                got: offdiag.len(),
            });
        }
        if let Some(b) = offdiag.iter().find(|b| !(**b >= 0.0)) {
            return Err(crate::error::param(
                "offdiag",
                format!("entries must be non-negative, found {b}"),
            ));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.offdiag.iter().enumerate() {
            m[(i + 1, i)] = b;
            m[(i, i + 1)] = b;
        }
        m
    }

    /// Frobenius-type scale `max(|a_i|, b_i)` used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonalPath {
    pub grid: TimeGrid,
    pub frames: Vec<SymTridiagonal>,
}

impl SymTridiagonalPath {
    /// Time series of `a_j` (1-based `j`).
    pub fn diag_series(&self, j: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.diag[j - 1]).collect()
    }

    /// Time series of `b_j` (1-based `j`).
    pub fn offdiag_series(&self, j: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.offdiag[j - 1]).collect()
    }
}

/// A real Householder reflector `H = I − 2vvᵀ`; `v` empty means `H = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct HouseholderStep {
    pub v: Vec<f64>,
    pub k: usize,
}

impl HouseholderStep {
    pub fn is_identity(&self) -> bool {
        self.v.is_empty()
    }

    /// `y ← H y`.
    pub fn apply(&self, y: &mut [f64]) {
        if self.is_identity() {
            return;
        }
        let dot: f64 = self.v.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        for (yi, vi) in y.iter_mut().zip(&self.v) {
            *yi -= 2.0 * dot * vi;
        }
    }

    pub fn matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut h = DMatrix::identity(dim, dim);
        if !self.is_identity() {
            for i in 0..dim {
                for j in 0..dim {
                    h[(i, j)] -= 2.0 * self.v[i] * self.v[j];
                }
            }
        }
        h
    }
}

/// Reflector `v = (x − ‖x‖e₁)/‖x − ‖x‖e₁‖`, so that `Hx = (‖x‖, 0, …, 0)`.
pub fn householder_vector(x: &[f64]) -> HouseholderStep {
    match reflector(x) {
        Reflector::Identity { .. } => HouseholderStep { v: Vec::new(), k: 0 },
        Reflector::Proper { v, .. } => HouseholderStep { v, k: 0 },
    }
}

enum Reflector<S> {
    Identity { alpha: S, norm: f64 },
    Proper { v: Vec<S>, alpha: S, norm: f64 },
}

fn reflector<S: Scalar>(x: &[S]) -> Reflector<S> {
    let head = x[0];
    let tail2: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    let norm = (head.norm_sqr() + tail2).sqrt();
    let u = head.phase();
    let alpha = u.scale(norm);
    // head = u·r with r = |x₁| for complex/quaternion entries and r = x₁ for
    // real ones; x₁ − u‖x‖ = u(r − ‖x‖), formed without cancellation.
    let r = (u.conj() * head).re();
    let gap = if r > 0.0 { -tail2 / (r + norm) } else { r - norm };
    let w0 = u.scale(gap);
    let wnorm = (w0.norm_sqr() + tail2).sqrt();
    if norm == 0.0 || wnorm <= REFLECTOR_EPS * norm {
        return Reflector::Identity { alpha, norm };
    }
    let inv = 1.0 / wnorm;
    let mut v = Vec::with_capacity(x.len());
    v.push(w0.scale(inv));
    v.extend(x[1..].iter().map(|z| z.scale(inv)));
    Reflector::Proper { v, alpha, norm }
}

/// Output of a (possibly partial) reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// Diagonal entries computed so far.
    pub diag: Vec<f64>,
    /// Off-diagonal entries computed so far (all ≥ 0).
    pub offdiag: Vec<f64>,
    /// Steps whose reflector degenerated to the identity.
    pub degenerate_steps: usize,
    /// Largest non-real part discarded from a diagonal entry (β = 2, 4).
    pub max_imag_residual: f64,
}

impl Reduction {
    pub fn into_tridiagonal(self) -> Result<SymTridiagonal> {
        SymTridiagonal::new(self.diag, self.offdiag)
    }
}

/// Reusable workspace for repeated reductions of same-size matrices.
#[derive(Debug, Clone, Default)]
pub struct Tridiagonalizer<S> {
    work: Vec<S>,
    x: Vec<S>,
    p: Vec<S>,
}

impl<S: Scalar> Tridiagonalizer<S> {
    pub fn new() -> Self {
        Self {
            work: Vec::new(),
            x: Vec::new(),
            p: Vec::new(),
        }
    }

    /// Full reduction of `a` (no self-adjointness check).
    pub fn reduce(&mut self, a: &HermitianMatrix<S>) -> Reduction {
        let n = a.n();
        self.reduce_leading(a, n)
    }

    /// Run the first `k` elimination steps, returning `a_1..a_k` and
    /// `b_1..b_k` (fewer when the matrix is smaller). Each step costs
    /// O(m²) on the remaining `m × m` block, so leading entries of large
    /// matrices are cheap.
    pub fn reduce_leading(&mut self, a: &HermitianMatrix<S>, k: usize) -> Reduction {
        self.reduce_entries(a, k, k)
    }

    /// Compute `a_1..a_{n_diag}` and `b_1..b_{n_off}`, eliminating only as
    /// many columns as those entries require.
    pub fn reduce_entries(&mut self, a: &HermitianMatrix<S>, n_diag: usize, n_off: usize) -> Reduction {
        let n = a.n();
        self.work.clear();
        self.work.extend_from_slice(a.data());
        let n_diag = n_diag.min(n);
        let n_off = n_off.min(n.saturating_sub(1));
        let mut out = Reduction {
            diag: Vec::with_capacity(n_diag),
            offdiag: Vec::with_capacity(n_off),
            degenerate_steps: 0,
            max_imag_residual: 0.0,
        };
        let mut step = 0;
        while step < n_diag || step < n_off {
            if step < n_diag {
                let d = self.work[step * n + step];
                out.max_imag_residual = out.max_imag_residual.max(d.imag_norm());
                out.diag.push(d.re());
            }
            if step >= n_off && step + 1 >= n_diag {
                break;
            }
            let norm = self.eliminate(n, step, &mut out.degenerate_steps);
            if step < n_off {
                out.offdiag.push(norm);
            }
            step += 1;
        }
        out
    }

    /// One Householder step on column `k` of the lower triangle; returns `‖x_k‖`.
    fn eliminate(&mut self, n: usize, k: usize, degenerate: &mut usize) -> f64 {
        let m = n - k - 1;
        let base = k + 1;
        let work = &mut self.work;
        self.x.clear();
        self.x.extend((0..m).map(|i| work[(base + i) * n + k]));
        let refl = reflector(&self.x);
        let (alpha, norm) = match refl {
            Reflector::Identity { alpha, norm } => {
                if m > 1 && norm == 0.0 {
                    *degenerate += 1;
                }
                (alpha, norm)
            }
            Reflector::Proper { v, alpha, norm } => {
                apply_two_sided(work, n, base, &v, &mut self.p);
                (alpha, norm)
            }
        };
        work[base * n + k] = alpha;
        for i in 1..m {
            work[(base + i) * n + k] = S::zero();
        }
        norm
    }
}

/// `B ← H B H` on the trailing block starting at `base`, lower triangle only.
fn apply_two_sided<S: Scalar>(work: &mut [S], n: usize, base: usize, v: &[S], p: &mut Vec<S>) {
    let m = v.len();
    p.clear();
    p.resize(m, S::zero());
    // p = B v using the lower triangle and B_ji = conj(B_ij).
    for i in 0..m {
        let row = &work[(base + i) * n + base..(base + i) * n + base + i + 1];
        let vi = v[i];
        let mut acc = row[i] * vi;
        for j in 0..i {
            let bij = row[j];
            acc += bij * v[j];
            p[j] += bij.conj() * vi;
        }
        p[i] += acc;
    }
    let gamma: f64 = v.iter().zip(p.iter()).map(|(a, b)| (a.conj() * *b).re()).sum();
    for (pi, vi) in p.iter_mut().zip(v) {
        *pi -= vi.scale(gamma);
    }
    // B ← B − 2(v qᴴ + q vᴴ), q = p.
    for i in 0..m {
        let row = &mut work[(base + i) * n + base..(base + i) * n + base + i + 1];
        let vi2 = v[i].scale(2.0);
        let qi2 = p[i].scale(2.0);
        for j in 0..i {
            row[j] -= vi2 * p[j].conj() + qi2 * v[j].conj();
        }
        let d = row[i] - (vi2 * p[i].conj() + qi2 * v[i].conj());
        row[i] = S::from_real(d.re());
    }
}

fn inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

/// Leading entries by Lanczos from `e₁` with full reorthogonalization.
///
/// Householder reduction fixes `Qe₁ = e₁` and makes the off-diagonal
/// positive, so for an unreduced matrix both routes produce the same
/// entries. Lanczos needs one matrix-vector product per entry instead of a
/// rank-2 update of the trailing block. On breakdown (a vanishing
/// off-diagonal entry before the last one requested) this falls back to
/// [`Tridiagonalizer::reduce_entries`].
pub fn lanczos_entries<S: Scalar, A: HermitianOp<S> + ?Sized>(a: &A, n_diag: usize, n_off: usize) -> Reduction {
    let n = a.dim();
    let n_diag = n_diag.min(n);
    let n_off = n_off.min(n.saturating_sub(1));
    let steps = n_diag.max(n_off);
    let mut out = Reduction {
        diag: Vec::with_capacity(n_diag),
        offdiag: Vec::with_capacity(n_off),
        degenerate_steps: 0,
        max_imag_residual: 0.0,
    };
    let mut basis: Vec<Vec<S>> = Vec::with_capacity(steps);
    let mut q = vec![S::zero(); n];
    if n > 0 {
        q[0] = S::one();
    }
    let mut w = vec![S::zero(); n];
    for j in 0..steps {
        a.matvec(&q, &mut w);
        let h = inner(&q, &w);
        out.max_imag_residual = out.max_imag_residual.max(h.imag_norm());
        let alpha = h.re();
        if j < n_diag {
            out.diag.push(alpha);
        }
        basis.push(std::mem::take(&mut q));
        let needs_next = j + 1 < n_diag;
        if j >= n_off && !needs_next {
            break;
        }
        let scale = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wk, bk) in w.iter_mut().zip(b) {
                    *wk -= *bk * c;
                }
            }
        }
        let beta = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let needs_next = j + 1 < steps;
        if needs_next && beta <= 1e-10 * scale.max(f64::MIN_POSITIVE) {
            return Tridiagonalizer::new().reduce_entries(&a.to_full(), n_diag, n_off);
        }
        if j < n_off {
            out.offdiag.push(beta);
        }
        if !needs_next {
            break;
        }
        q = w.iter().map(|z| z.scale(1.0 / beta)).collect();
    }
    out
}

/// Full tridiagonalization of a self-adjoint GβE matrix.
pub fn tridiagonalize(a: &GbeMatrix) -> Result<SymTridiagonal> {
    a.check_self_adjoint(SELF_ADJOINT_TOL)?;
    dispatch!(a, m => Tridiagonalizer::new().reduce(m).into_tridiagonal())
}

/// Full reduction with diagnostics.
pub fn tridiagonalize_detailed(a: &GbeMatrix) -> Result<Reduction> {
    a.check_self_adjoint(SELF_ADJOINT_TOL)?;
    Ok(dispatch!(a, m => Tridiagonalizer::new().reduce(m)))
}

/// Leading `a_1..a_k`, `b_1..b_k` from the first `k` steps only.
pub fn tridiagonalize_leading(a: &GbeMatrix, k: usize) -> Result<Reduction> {
    a.check_self_adjoint(SELF_ADJOINT_TOL)?;
    Ok(dispatch!(a, m => Tridiagonalizer::new().reduce_leading(m, k)))
}

/// Real reduction that also returns the orthogonal `Q` with `QᵀAQ = T`.
pub fn tridiagonalize_with_transform(a: &HermitianMatrix<f64>) -> Result<(SymTridiagonal, DMatrix<f64>)> {
    a.check_self_adjoint(SELF_ADJOINT_TOL)?;
    let n = a.n();
    let mut work = a.to_dmatrix();
    let mut q = DMatrix::<f64>::identity(n, n);
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        diag.push(work[(k, k)]);
        if k + 1 == n {
            break;
        }
        let x: Vec<f64> = (k + 1..n).map(|i| work[(i, k)]).collect();
        let step = householder_vector(&x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !step.is_identity() {
            let h = step.matrix(n - k - 1);
            let block = work.view((k + 1, k), (n - k - 1, n - k)).clone_owned();
            work.view_mut((k + 1, k), (n - k - 1, n - k)).copy_from(&(&h * block));
            let block = work.view((k, k + 1), (n - k, n - k - 1)).clone_owned();
            work.view_mut((k, k + 1), (n - k, n - k - 1)).copy_from(&(block * &h));
            let qblock = q.view((0, k + 1), (n, n - k - 1)).clone_owned();
            q.view_mut((0, k + 1), (n, n - k - 1)).copy_from(&(qblock * &h));
        }
        offdiag.push(norm);
    }
    Ok((SymTridiagonal::new(diag, offdiag)?, q))
}

/// Frame-wise tridiagonalization of a stored matrix path.
pub fn tridiagonalize_path(path: &GbePath) -> Result<SymTridiagonalPath> {
    let frames = path.matrices.iter().map(tridiagonalize).collect::<Result<Vec<_>>>()?;
    Ok(SymTridiagonalPath {
        grid: path.grid,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{gbe_sample_stationary, Beta};
    use crate::rng;
    use num_complex::Complex64;

    fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    #[test]
    fn reflector_maps_onto_positive_axis() {
        let x = [3.0, -1.0, 2.0, 0.5, -4.0];
        let step = householder_vector(&x);
        let mut y = x.to_vec();
        step.apply(&mut y);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((y[0] - norm).abs() < 1e-12);
        assert!(y[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn reflector_of_e1_is_identity() {
        assert!(householder_vector(&[1.0, 0.0, 0.0]).is_identity());
        assert!(householder_vector(&[0.0, 0.0]).is_identity());
        // negative multiples of e1 need a genuine reflection
        let step = householder_vector(&[-2.0, 0.0, 0.0]);
        let mut y = vec![-2.0, 0.0, 0.0];
        step.apply(&mut y);
        assert!((y[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reflector_symmetric_and_involutive() {
        let x = [0.7, -1.3, 0.2, 2.2, -0.9];
        let h = householder_vector(&x).matrix(5);
        assert!((&h - h.transpose()).amax() < 1e-12);
        assert!((&h * &h - DMatrix::identity(5, 5)).amax() < 1e-12);
    }

    #[test]
    fn tridiagonal_input_is_unchanged() {
        let t = SymTridiagonal::new(vec![1.0, -2.0, 0.5, 3.0], vec![0.3, 1.5, 2.0]).unwrap();
        let a = HermitianMatrix::from_dmatrix(&t.to_dense()).unwrap();
        let out = tridiagonalize(&GbeMatrix::Real(a)).unwrap();
        for (x, y) in out.diag().iter().zip(t.diag()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in out.offdiag().iter().zip(t.offdiag()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_preserved_6x6() {
        let m = gbe_sample_stationary(6, 1, 42).unwrap();
        let dense = m.as_real().unwrap().to_dmatrix();
        let t = tridiagonalize(&m).unwrap();
        let (e1, e2) = (sorted_eigs(&dense), sorted_eigs(&t.to_dense()));
        for (a, b) in e1.iter().zip(&e2) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(t.offdiag().iter().all(|b| *b >= 0.0));
    }

    #[test]
    fn transform_is_orthogonal_and_similar() {
        for n in [2, 5, 17, 64] {
            let m = gbe_sample_stationary(n, 1, n as u64).unwrap();
            let a = m.as_real().unwrap();
            let (t, q) = tridiagonalize_with_transform(a).unwrap();
            let qtq = q.transpose() * &q;
            assert!((qtq - DMatrix::identity(n, n)).amax() < 1e-10);
            let rebuilt = q.transpose() * a.to_dmatrix() * &q;
            assert!((rebuilt - t.to_dense()).amax() < 1e-9 * t.scale().max(1.0));
            let fast = tridiagonalize(&m).unwrap();
            for (x, y) in fast.diag().iter().zip(t.diag()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    fn complex_dense(m: &HermitianMatrix<Complex64>) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(m.n(), m.n(), m.data())
    }

    #[test]
    fn complex_reduction_is_real_and_similar() {
        let mut rng = rng::from_seed(5);
        let a = HermitianMatrix::<Complex64>::sample_stationary(12, &mut rng);
        let red = Tridiagonalizer::new().reduce(&a);
        assert!(red.max_imag_residual < 1e-10);
        let t = red.into_tridiagonal().unwrap();
        let mut e1: Vec<f64> = complex_dense(&a).symmetric_eigenvalues().iter().copied().collect();
        e1.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let e2 = sorted_eigs(&t.to_dense());
        for (x, y) in e1.iter().zip(&e2) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    /// Quaternion n×n self-dual ↔ complex 2n×2n Hermitian via q = z₁ + z₂ j.
    fn quaternion_to_complex(m: &HermitianMatrix<crate::scalar::Quaternion>) -> nalgebra::DMatrix<Complex64> {
        let n = m.n();
        let mut c = nalgebra::DMatrix::from_element(2 * n, 2 * n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                let q = m.get(i, j);
                let z1 = Complex64::new(q.w, q.x);
                let z2 = Complex64::new(q.y, q.z);
                c[(2 * i, 2 * j)] = z1;
                c[(2 * i, 2 * j + 1)] = z2;
                c[(2 * i + 1, 2 * j)] = -z2.conj();
                c[(2 * i + 1, 2 * j + 1)] = z1.conj();
            }
        }
        c
    }

    #[test]
    fn quaternion_reduction_matches_doubled_spectrum() {
        let mut rng = rng::from_seed(9);
        let a = HermitianMatrix::<crate::scalar::Quaternion>::sample_stationary(8, &mut rng);
        let red = Tridiagonalizer::new().reduce(&a);
        assert!(red.max_imag_residual < 1e-10);
        let t = red.into_tridiagonal().unwrap();
        let mut doubled: Vec<f64> = quaternion_to_complex(&a)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        doubled.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let e = sorted_eigs(&t.to_dense());
        for (i, x) in e.iter().enumerate() {
            assert!((x - doubled[2 * i]).abs() < 1e-9);
            assert!((x - doubled[2 * i + 1]).abs() < 1e-9);
        }
    }

    #[test]
    fn lanczos_matches_householder() {
        for beta in [1u32, 2, 4] {
            let m = gbe_sample_stationary(60, beta, 21).unwrap();
            let hh = dispatch!(&m, mm => Tridiagonalizer::new().reduce_entries(mm, 8, 7));
            let lz = dispatch!(&m, mm => lanczos_entries(mm, 8, 7));
            assert_eq!(lz.diag.len(), 8);
            assert_eq!(lz.offdiag.len(), 7);
            for (x, y) in hh.diag.iter().chain(&hh.offdiag).zip(lz.diag.iter().chain(&lz.offdiag)) {
                assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()), "beta={beta}: {x} vs {y}");
            }
            assert!(lz.max_imag_residual < 1e-10);
            let diag_only = dispatch!(&m, mm => lanczos_entries(mm, 5, 0));
            assert!(diag_only.offdiag.is_empty());
            assert!((diag_only.diag[4] - hh.diag[4]).abs() < 1e-10 * (1.0 + hh.diag[4].abs()));
        }
    }

    #[test]
    fn lanczos_breakdown_falls_back() {
        let id = HermitianMatrix::<f64>::identity(6);
        let lz = lanczos_entries(&id, 4, 3);
        assert_eq!(lz.diag, vec![1.0; 4]);
        assert_eq!(lz.offdiag, vec![0.0; 3]);
        let single = lanczos_entries(&id, 1, 1);
        assert_eq!(single.offdiag, vec![0.0]);
    }

    #[test]
    fn leading_matches_full() {
        for beta in [Beta::One, Beta::Two, Beta::Four] {
            let m = GbeMatrix::sample_stationary(20, beta, &mut rng::from_seed(3));
            let full = tridiagonalize(&m).unwrap();
            let lead = tridiagonalize_leading(&m, 6).unwrap();
            assert_eq!(lead.diag.len(), 6);
            assert_eq!(lead.offdiag.len(), 6);
            let diag_only = dispatch!(&m, mm => Tridiagonalizer::new().reduce_entries(mm, 4, 0));
            assert_eq!(diag_only.diag.len(), 4);
            assert!(diag_only.offdiag.is_empty());
            assert_eq!(diag_only.diag[3], lead.diag[3]);
            for j in 0..6 {
                assert!((lead.diag[j] - full.diag()[j]).abs() < 1e-12);
                assert!((lead.offdiag[j] - full.offdiag()[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_self_adjoint() {
        let a = HermitianMatrix::from_row_major(3, vec![1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            tridiagonalize(&GbeMatrix::Real(a)),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn zero_column_gives_zero_offdiag() {
        let a = HermitianMatrix::<f64>::identity(4);
        let red = Tridiagonalizer::new().reduce(&a);
        assert_eq!(red.offdiag, vec![0.0, 0.0, 0.0]);
        assert_eq!(red.degenerate_steps, 2);
    }

    #[test]
    fn one_by_one() {
        let a = HermitianMatrix::from_row_major(1, vec![2.5]).unwrap();
        let t = tridiagonalize(&GbeMatrix::Real(a)).unwrap();
        assert_eq!(t.diag(), &[2.5]);
        assert!(t.offdiag().is_empty());
    }
}
