//! Stationary Ornstein–Uhlenbeck sampling: scalar, vector and Gaussian
//! β-ensemble matrix valued, all with exact Gaussian transitions.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng::{self, SampleRng};
use crate::scalar::{Quaternion, Scalar};

/// `Σ a_i x_i` with four independent accumulators.
#[inline]
pub(crate) fn dot4<S: Scalar>(a: &[S], x: &[S]) -> S {
    let mut acc = [S::zero(); 4];
    let mut ac = a.chunks_exact(4);
    let mut xc = x.chunks_exact(4);
    for (p, q) in (&mut ac).zip(&mut xc) {
        acc[0] += p[0] * q[0];
        acc[1] += p[1] * q[1];
        acc[2] += p[2] * q[2];
        acc[3] += p[3] * q[3];
    }
    let mut tail = S::zero();
    for (p, q) in ac.remainder().iter().zip(xc.remainder()) {
        tail += *p * *q;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Uniform grid `t0, t0 + dt, …, t0 + (steps − 1) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, steps: usize) -> Result<Self> {
        if !t0.is_finite() {
            return Err(param("t0", "must be finite"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(param("dt", format!("must be positive and finite, got {dt}")));
        }
        if steps == 0 {
            return Err(param("steps", "must be at least 1"));
        }
        if !(dt * (steps - 1) as f64).is_finite() {
            return Err(param("steps", "total span overflows"));
        }
        Ok(Self { t0, dt, steps })
    }

    /// Grid on `[0, t_max]` with spacing `dt`; `t_max` is rounded to the
    /// nearest multiple of `dt`.
    pub fn span(t_max: f64, dt: f64) -> Result<Self> {
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(param("t_max", format!("must be non-negative, got {t_max}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(param("dt", format!("must be positive and finite, got {dt}")));
        }
        Self::new(0.0, dt, (t_max / dt).round() as usize + 1)
    }

    /// A single stationary snapshot at `t = 0`.
    pub fn snapshot() -> Self {
        Self {
            t0: 0.0,
            dt: 1.0,
            steps: 1,
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.time(i)).collect()
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.steps - 1)
    }
}

/// Rate `c` of the normalized stationary process OU(c): covariance e^{−c|t−s|}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuParams {
    rate: f64,
}

impl OuParams {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(param("rate", format!("must be positive, got {rate}")));
        }
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `(decay, mix)` with `x' = decay·x + mix·ξ` over an interval `dt`.
    pub fn transition(&self, dt: f64) -> (f64, f64) {
        transition(self.rate, dt)
    }
}

pub(crate) fn transition(rate: f64, dt: f64) -> (f64, f64) {
    let decay = (-rate * dt).exp();
    let mix = (-(-2.0 * rate * dt).exp_m1()).max(0.0).sqrt();
    (decay, mix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuPath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuVectorPath {
    pub grid: TimeGrid,
    pub dim: usize,
    /// `values[i]` is the vector at grid point `i`.
    pub values: Vec<Vec<f64>>,
}

impl OuVectorPath {
    /// Squared Euclidean norm at every grid point.
    pub fn norm_sqr(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.iter().map(|x| x * x).sum()).collect()
    }

    /// The scalar path of entry `i`.
    pub fn entry(&self, i: usize) -> OuPath {
        OuPath {
            grid: self.grid,
            values: self.values.iter().map(|v| v[i]).collect(),
        }
    }
}

/// Sample OU(c) on `grid`, seeding from `seed`.
pub fn ou_sample_path(params: OuParams, grid: &TimeGrid, seed: u64) -> OuPath {
    ou_sample_path_with(params, grid, &mut rng::from_seed(seed))
}

pub fn ou_sample_path_with<R: Rng + ?Sized>(params: OuParams, grid: &TimeGrid, rng: &mut R) -> OuPath {
    let (decay, mix) = params.transition(grid.dt());
    let mut values = Vec::with_capacity(grid.len());
    let mut x: f64 = rng.sample(StandardNormal);
    values.push(x);
    for _ in 1..grid.len() {
        let xi: f64 = rng.sample(StandardNormal);
        x = decay * x + mix * xi;
        values.push(x);
    }
    OuPath { grid: *grid, values }
}

/// Independent OU(c_i) entries; `rates.len()` is the dimension.
pub fn ou_sample_vector(rates: &[f64], grid: &TimeGrid, seed: u64) -> Result<OuVectorPath> {
    ou_sample_vector_with(rates, grid, &mut rng::from_seed(seed))
}

pub fn ou_sample_vector_with<R: Rng + ?Sized>(rates: &[f64], grid: &TimeGrid, rng: &mut R) -> Result<OuVectorPath> {
    if rates.is_empty() {
        return Err(param("dim", "must be at least 1"));
    }
    let coeffs = rates
        .iter()
        .map(|&c| OuParams::new(c).map(|p| p.transition(grid.dt())))
        .collect::<Result<Vec<_>>>()?;
    let mut current: Vec<f64> = (0..rates.len()).map(|_| rng.sample(StandardNormal)).collect();
    let mut values = Vec::with_capacity(grid.len());
    values.push(current.clone());
    for _ in 1..grid.len() {
        for (x, &(decay, mix)) in current.iter_mut().zip(&coeffs) {
            let xi: f64 = rng.sample(StandardNormal);
            *x = decay * *x + mix * xi;
        }
        values.push(current.clone());
    }
    Ok(OuVectorPath {
        grid: *grid,
        dim: rates.len(),
        values,
    })
}

/// Dyson index of a classical Gaussian ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(self) -> u32 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }
}

impl TryFrom<u32> for Beta {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            other => Err(Error::UnsupportedBeta(other)),
        }
    }
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Dense self-adjoint matrix in row-major storage with both triangles kept.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<S> {
    n: usize,
    data: Vec<S>,
}

const MIRROR_BLOCK: usize = 64;

impl<S: Scalar> HermitianMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    /// Wrap row-major data without checking self-adjointness.
    pub fn from_row_major(n: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    /// Build from the lower triangle `f(i, j)`, `j ≤ i`; the upper triangle
    /// is the conjugate mirror and the diagonal keeps only its real part.
    pub fn from_lower(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..i {
                m.data[i * n + j] = f(i, j);
            }
            m.data[i * n + i] = S::from_real(f(i, i).re());
        }
        m.mirror_lower();
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Set `(i, j)` and its conjugate mirror.
    pub fn set_pair(&mut self, i: usize, j: usize, v: S) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = S::from_real(v.re());
        } else {
            self.data[i * n + j] = v;
            self.data[j * n + i] = v.conj();
        }
    }

    /// Copy the strict lower triangle onto the upper triangle (conjugated).
    pub(crate) fn mirror_lower(&mut self) {
        let n = self.n;
        let data = &mut self.data;
        for bi in (0..n).step_by(MIRROR_BLOCK) {
            for bj in (0..=bi).step_by(MIRROR_BLOCK) {
                for i in bi..(bi + MIRROR_BLOCK).min(n) {
                    for j in bj..(bj + MIRROR_BLOCK).min(i) {
                        data[j * n + i] = data[i * n + j].conj();
                    }
                }
            }
        }
    }

    /// Check `A = A*` up to `tol · max|A_ij|`.
    pub fn check_self_adjoint(&self, tol: f64) -> Result<()> {
        let n = self.n;
        let scale = self
            .data
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in 0..=i {
                let defect = (self.get(i, j) - self.get(j, i).conj()).abs();
                if !(defect <= tol * scale) {
                    return Err(Error::NotSelfAdjoint { row: i, col: j, defect });
                }
            }
        }
        Ok(())
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot4(self.row(i), x);
        }
    }

    /// A stationary GβE sample: diagonal N(0, 2), off-diagonal components
    /// i.i.d. N(0, 1).
    pub fn sample_stationary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(n);
        let sqrt2 = std::f64::consts::SQRT_2;
        for i in 0..n {
            let row = &mut m.data[i * n..i * n + i + 1];
            for x in row[..i].iter_mut() {
                *x = S::sample_offdiag(rng);
            }
            let d: f64 = rng.sample(StandardNormal);
            row[i] = S::from_real(sqrt2 * d);
        }
        m.mirror_lower();
        m
    }

    /// Exact OU transition `M ← decay·M + mix·G` with a fresh stationary `G`.
    pub fn ou_step<R: Rng + ?Sized>(&mut self, decay: f64, mix: f64, rng: &mut R) {
        let n = self.n;
        let sqrt2 = std::f64::consts::SQRT_2;
        for i in 0..n {
            let row = &mut self.data[i * n..i * n + i + 1];
            for x in row[..i].iter_mut() {
                *x = x.scale(decay) + S::sample_offdiag(rng).scale(mix);
            }
            let d: f64 = rng.sample(StandardNormal);
            row[i] = S::from_real(decay * row[i].re() + mix * sqrt2 * d);
        }
        self.mirror_lower();
    }
}

impl HermitianMatrix<f64> {
    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn from_dmatrix(m: &nalgebra::DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let n = m.nrows();
        let data = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        Ok(Self { n, data })
    }
}

/// One entry of a GβE matrix as its β real components.
#[derive(Debug, Clone, PartialEq)]
pub struct GbeEntry {
    pub beta: Beta,
    pub components: Vec<f64>,
}

/// A self-adjoint matrix for one of β = 1, 2, 4.
#[derive(Debug, Clone, PartialEq)]
pub enum GbeMatrix {
    Real(HermitianMatrix<f64>),
    Complex(HermitianMatrix<Complex64>),
    Quaternion(HermitianMatrix<Quaternion>),
}

macro_rules! dispatch {
    ($m:expr, $inner:ident => $body:expr) => {
        match $m {
            GbeMatrix::Real($inner) => $body,
            GbeMatrix::Complex($inner) => $body,
            GbeMatrix::Quaternion($inner) => $body,
        }
    };
}
pub(crate) use dispatch;

impl GbeMatrix {
    pub fn sample_stationary<R: Rng + ?Sized>(n: usize, beta: Beta, rng: &mut R) -> Self {
        match beta {
            Beta::One => GbeMatrix::Real(HermitianMatrix::sample_stationary(n, rng)),
            Beta::Two => GbeMatrix::Complex(HermitianMatrix::sample_stationary(n, rng)),
            Beta::Four => GbeMatrix::Quaternion(HermitianMatrix::sample_stationary(n, rng)),
        }
    }

    pub fn beta(&self) -> Beta {
        match self {
            GbeMatrix::Real(_) => Beta::One,
            GbeMatrix::Complex(_) => Beta::Two,
            GbeMatrix::Quaternion(_) => Beta::Four,
        }
    }

    pub fn n(&self) -> usize {
        dispatch!(self, m => m.n())
    }

    pub fn entry(&self, i: usize, j: usize) -> GbeEntry {
        let beta = self.beta();
        let c = dispatch!(self, m => m.get(i, j).components());
        let len = if i == j { 1 } else { beta.value() as usize };
        GbeEntry {
            beta,
            components: c[..len].to_vec(),
        }
    }

    pub fn check_self_adjoint(&self, tol: f64) -> Result<()> {
        dispatch!(self, m => m.check_self_adjoint(tol))
    }

    pub fn ou_step<R: Rng + ?Sized>(&mut self, decay: f64, mix: f64, rng: &mut R) {
        dispatch!(self, m => m.ou_step(decay, mix, rng))
    }

    pub fn as_real(&self) -> Option<&HermitianMatrix<f64>> {
        match self {
            GbeMatrix::Real(m) => Some(m),
            _ => None,
        }
    }
}

/// Stationary GβE sample of size `n` from `seed`.
pub fn gbe_sample_stationary(n: usize, beta: u32, seed: u64) -> Result<GbeMatrix> {
    let beta = Beta::try_from(beta)?;
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    Ok(GbeMatrix::sample_stationary(n, beta, &mut rng::from_seed(seed)))
}

/// A GβE matrix process stored frame by frame.
#[derive(Debug, Clone)]
pub struct GbePath {
    pub grid: TimeGrid,
    pub n: usize,
    pub beta: Beta,
    pub matrices: Vec<GbeMatrix>,
}

/// Sample `dM = −M dt + √2 dB_{GβE}` on `grid`, keeping every frame.
///
/// Memory grows as `grid.len() · n²`; experiments that only need a few
/// entries per frame stream through [`GbeProcess`] instead.
pub fn gbe_sample_path(n: usize, beta: u32, grid: &TimeGrid, seed: u64) -> Result<GbePath> {
    let beta = Beta::try_from(beta)?;
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let mut process = GbeProcess::new(n, beta, *grid, rng::from_seed(seed));
    let mut matrices = Vec::with_capacity(grid.len());
    matrices.push(process.current().clone());
    while process.advance() {
        matrices.push(process.current().clone());
    }
    Ok(GbePath {
        grid: *grid,
        n,
        beta,
        matrices,
    })
}

/// Streaming sampler over the grid: one matrix in memory at a time.
pub struct GbeProcess {
    grid: TimeGrid,
    index: usize,
    decay: f64,
    mix: f64,
    current: GbeMatrix,
    rng: SampleRng,
}

impl GbeProcess {
    pub fn new(n: usize, beta: Beta, grid: TimeGrid, mut rng: SampleRng) -> Self {
        let current = GbeMatrix::sample_stationary(n, beta, &mut rng);
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

    /// Grid index of the current frame.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn current(&self) -> &GbeMatrix {
        &self.current
    }

    /// Step to the next grid point; `false` once the grid is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.index + 1 >= self.grid.len() {
            return false;
        }
        self.current.ou_step(self.decay, self.mix, &mut self.rng);
        self.index += 1;
        true
    }
}
