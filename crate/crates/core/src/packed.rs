//! Packed lower-triangle storage for matrix processes that are only probed
//! through matrix-vector products.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::process::{dot4, transition, HermitianMatrix, TimeGrid};
use crate::rng::SampleRng;
use crate::scalar::Scalar;

/// Anything that can multiply a vector by a self-adjoint matrix.
pub trait HermitianOp<S: Scalar> {
    fn dim(&self) -> usize;
    fn matvec(&self, x: &[S], y: &mut [S]);
    fn to_full(&self) -> HermitianMatrix<S>;
}

impl<S: Scalar> HermitianOp<S> for HermitianMatrix<S> {
    fn dim(&self) -> usize {
        self.n()
    }

    fn matvec(&self, x: &[S], y: &mut [S]) {
        HermitianMatrix::matvec(self, x, y);
    }

    fn to_full(&self) -> HermitianMatrix<S> {
        self.clone()
    }
}

/// Self-adjoint matrix stored as its lower triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedHermitian<S> {
    n: usize,
    data: Vec<S>,
}

fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl<S: Scalar> PackedHermitian<S> {
    /// Same draws, in the same order, as [`HermitianMatrix::sample_stationary`].
    pub fn sample_stationary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut data = Vec::with_capacity(row_start(n));
        for i in 0..n {
            for _ in 0..i {
                data.push(S::sample_offdiag(rng));
            }
            let d: f64 = rng.sample(StandardNormal);
            data.push(S::from_real(sqrt2 * d));
        }
        Self { n, data }
    }

    /// Same update as [`HermitianMatrix::ou_step`].
    pub fn ou_step<R: Rng + ?Sized>(&mut self, decay: f64, mix: f64, rng: &mut R) {
        let dmix = mix * std::f64::consts::SQRT_2;
        for i in 0..self.n {
            let row = &mut self.data[row_start(i)..row_start(i + 1)];
            let (off, diag) = row.split_at_mut(i);
            for x in off.iter_mut() {
                *x = x.scale(decay) + S::sample_offdiag(rng).scale(mix);
            }
            let d: f64 = rng.sample(StandardNormal);
            diag[0] = S::from_real(decay * diag[0].re() + dmix * d);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        if j <= i {
            self.data[row_start(i) + j]
        } else {
            self.data[row_start(j) + i].conj()
        }
    }

    pub fn from_full(m: &HermitianMatrix<S>) -> Self {
        let n = m.n();
        let mut data = Vec::with_capacity(row_start(n));
        for i in 0..n {
            data.extend_from_slice(&m.row(i)[..=i]);
        }
        Self { n, data }
    }
}

impl<S: Scalar> HermitianOp<S> for PackedHermitian<S> {
    fn dim(&self) -> usize {
        self.n
    }

    fn matvec(&self, x: &[S], y: &mut [S]) {
        y.iter_mut().for_each(|v| *v = S::zero());
        for i in 0..self.n {
            let row = &self.data[row_start(i)..row_start(i + 1)];
            let xi = x[i];
            let mut acc = dot4(&row[..i], &x[..i]) + row[i] * xi;
            for (yj, r) in y[..i].iter_mut().zip(&row[..i]) {
                *yj += r.conj() * xi;
            }
            acc += y[i];
            y[i] = acc;
        }
    }

    fn to_full(&self) -> HermitianMatrix<S> {
        HermitianMatrix::from_lower(self.n, |i, j| self.data[row_start(i) + j])
    }
}

/// Streaming OU matrix process in packed storage. Seeded identically, it
/// produces the same matrices as [`crate::process::GbeProcess`].
pub struct PackedProcess<S> {
    grid: TimeGrid,
    index: usize,
    decay: f64,
    mix: f64,
    current: PackedHermitian<S>,
    rng: SampleRng,
}

impl<S: Scalar> PackedProcess<S> {
    pub fn new(n: usize, grid: TimeGrid, mut rng: SampleRng) -> Self {
        let current = PackedHermitian::sample_stationary(n, &mut rng);
        let (decay, mix) = transition(1.0, grid.dt());
        Self {
            grid,
            index: 0,
            decay,
            mix,
            current,
            rng,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn current(&self) -> &PackedHermitian<S> {
        &self.current
    }

    pub fn advance(&mut self) -> bool {
        if self.index + 1 >= self.grid.len() {
            return false;
        }
        self.current.ou_step(self.decay, self.mix, &mut self.rng);
        self.index += 1;
        true
    }
}
