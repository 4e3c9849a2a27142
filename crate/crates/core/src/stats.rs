//! Across-sample estimators and the deterministic Monte Carlo driver.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};

const MAX_P: usize = 4;
const MAX_Q: usize = 2;

/// Shifted power sums `Σ (x−cx)^p (r−cr)^q` for `p ≤ 4`, `q ≤ 2`, where `x`
/// is the tracked value and `r` a reference value (typically the same
/// quantity at `t = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    shift: Option<(f64, f64)>,
    sums: [[f64; MAX_Q + 1]; MAX_P + 1],
}

impl Default for MomentAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

fn binom(n: usize, k: usize) -> f64 {
    const T: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    T[n][k]
}

/// Re-express sums about a shift moved by `(dx, dr)`.
fn rebase(s: &[[f64; MAX_Q + 1]; MAX_P + 1], dx: f64, dr: f64) -> [[f64; MAX_Q + 1]; MAX_P + 1] {
    let mut out = [[0.0; MAX_Q + 1]; MAX_P + 1];
    for p in 0..=MAX_P {
        for q in 0..=MAX_Q {
            let mut acc = 0.0;
            for a in 0..=p {
                let cx = binom(p, a) * (-dx).powi((p - a) as i32);
                for b in 0..=q {
                    acc += cx * binom(q, b) * (-dr).powi((q - b) as i32) * s[a][b];
                }
            }
            out[p][q] = acc;
        }
    }
    out
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self {
            shift: None,
            sums: [[0.0; MAX_Q + 1]; MAX_P + 1],
        }
    }

    /// Accumulator with a fixed shift; choosing it near the mean keeps the
    /// power sums well conditioned.
    pub fn with_shift(cx: f64, cr: f64) -> Self {
        Self {
            shift: Some((cx, cr)),
            ..Self::new()
        }
    }

    pub fn count(&self) -> u64 {
        self.sums[0][0] as u64
    }

    /// Push a value paired with its reference value.
    pub fn push(&mut self, x: f64, r: f64) {
        let (cx, cr) = *self.shift.get_or_insert((x, r));
        let dx = x - cx;
        let dr = r - cr;
        let mut px = 1.0;
        for row in self.sums.iter_mut() {
            let mut pr = px;
            for s in row.iter_mut() {
                *s += pr;
                pr *= dr;
            }
            px *= dx;
        }
    }

    /// Push a value without a reference (cross statistics become meaningless).
    pub fn push_value(&mut self, x: f64) {
        self.push(x, 0.0);
    }

    pub fn merge(&mut self, other: &Self) {
        let Some((ox, or)) = other.shift else { return };
        let (cx, cr) = *self.shift.get_or_insert((ox, or));
        let moved = rebase(&other.sums, cx - ox, cr - or);
        for p in 0..=MAX_P {
            for q in 0..=MAX_Q {
                self.sums[p][q] += moved[p][q];
            }
        }
    }

    fn n(&self) -> f64 {
        self.sums[0][0]
    }

    /// Central sums about the sample means.
    fn central(&self) -> [[f64; MAX_Q + 1]; MAX_P + 1] {
        let n = self.n();
        rebase(&self.sums, self.sums[1][0] / n, self.sums[0][1] / n)
    }

    fn require(&self, needed: u64) -> Result<()> {
        if self.count() < needed {
            return Err(Error::InsufficientSamples {
                needed: needed as usize,
                got: self.count() as usize,
            });
        }
        Ok(())
    }

    pub fn mean(&self) -> Result<f64> {
        self.require(1)?;
        Ok(self.shift.map_or(0.0, |s| s.0) + self.sums[1][0] / self.n())
    }

    pub fn reference_mean(&self) -> Result<f64> {
        self.require(1)?;
        Ok(self.shift.map_or(0.0, |s| s.1) + self.sums[0][1] / self.n())
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> Result<f64> {
        self.require(2)?;
        Ok(self.central()[2][0] / (self.n() - 1.0))
    }

    pub fn mean_stderr(&self) -> Result<f64> {
        Ok((self.variance()? / self.n()).sqrt())
    }

    /// Standard error of the sample variance from the fourth central moment.
    pub fn variance_stderr(&self) -> Result<f64> {
        self.require(2)?;
        let c = self.central();
        let n = self.n();
        let m2 = c[2][0] / n;
        let m4 = c[4][0] / n;
        Ok(((m4 - m2 * m2).max(0.0) / n).sqrt())
    }

    /// Unbiased covariance between value and reference.
    pub fn covariance(&self) -> Result<f64> {
        self.require(2)?;
        Ok(self.central()[1][1] / (self.n() - 1.0))
    }

    /// Plug-in standard error of the covariance, `sqrt(Var[(x−x̄)(r−r̄)]/n)`.
    pub fn covariance_stderr(&self) -> Result<f64> {
        self.require(2)?;
        let c = self.central();
        let n = self.n();
        let m11 = c[1][1] / n;
        Ok(((c[2][2] / n - m11 * m11).max(0.0) / n).sqrt())
    }

    /// Bias-corrected sample excess kurtosis (G2).
    pub fn excess_kurtosis(&self) -> Result<f64> {
        self.require(4)?;
        let c = self.central();
        let n = self.n();
        let m2 = c[2][0] / n;
        let m4 = c[4][0] / n;
        if m2 == 0.0 {
            return Ok(0.0);
        }
        let g2 = m4 / (m2 * m2) - 3.0;
        Ok(((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0)))
    }

    /// Normal-theory standard error of G2.
    pub fn kurtosis_stderr(&self) -> Result<f64> {
        self.require(4)?;
        let n = self.n();
        Ok((24.0 * n * (n - 1.0).powi(2) / ((n - 3.0) * (n - 2.0) * (n + 3.0) * (n + 5.0))).sqrt())
    }
}

/// Delete-one-batch jackknife of a statistic over batch accumulators.
/// Returns `(full-sample estimate, standard error)`.
pub fn jackknife<F>(batches: &[MomentAccumulator], stat: F) -> Result<(f64, f64)>
where
    F: Fn(&MomentAccumulator) -> Result<f64>,
{
    let g = batches.len();
    if g < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: g });
    }
    let mut full = MomentAccumulator::new();
    for b in batches {
        full.merge(b);
    }
    let est = stat(&full)?;
    let mut leave = Vec::with_capacity(g);
    for i in 0..g {
        let mut acc = MomentAccumulator::new();
        for (k, b) in batches.iter().enumerate() {
            if k != i {
                acc.merge(b);
            }
        }
        leave.push(stat(&acc)?);
    }
    let mean = leave.iter().sum::<f64>() / g as f64;
    let var = leave.iter().map(|v| (v - mean).powi(2)).sum::<f64>() * (g as f64 - 1.0) / g as f64;
    Ok((est, var.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
}

/// A named curve, the unit of CSV output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<CurvePoint>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<CurvePoint>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }

    pub fn from_fn(name: impl Into<String>, times: &[f64], f: impl Fn(f64) -> f64) -> Self {
        let points = times
            .iter()
            .map(|&t| CurvePoint {
                t,
                value: f(t),
                stderr: 0.0,
            })
            .collect();
        Self::new(name, points)
    }

    /// Largest absolute pointwise difference to another curve on the same grid.
    pub fn max_abs_gap(&self, other: &Series) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.value - b.value).abs())
            .fold(0.0, f64::max))
    }

    /// Trapezoidal integral of the absolute difference to another curve.
    pub fn integrated_abs_gap(&self, other: &Series) -> Result<f64> {
        self.check_same_grid(other)?;
        let d: Vec<(f64, f64)> = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.t, (a.value - b.value).abs()))
            .collect();
        Ok(d.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum())
    }

    fn check_same_grid(&self, other: &Series) -> Result<()> {
        let same = self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a.t - b.t).abs() <= 1e-12 * (1.0 + a.t.abs()));
        if same {
            Ok(())
        } else {
            Err(Error::IncompatibleGrid(format!("{} vs {}", self.name, other.name)))
        }
    }
}

/// Per-time accumulators for a family of sample paths, each point paired with
/// the path's value at the first grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceCurve {
    times: Vec<f64>,
    acc: Vec<MomentAccumulator>,
}

impl CovarianceCurve {
    pub fn new(times: Vec<f64>) -> Self {
        let acc = vec![MomentAccumulator::new(); times.len()];
        Self { times, acc }
    }

    pub fn push_path(&mut self, path: &[f64]) -> Result<()> {
        if path.len() != self.times.len() {
            return Err(Error::Dimension {
                expected: self.times.len(),
                got: path.len(),
            });
        }
        let r = path[0];
        for (a, &x) in self.acc.iter_mut().zip(path) {
            a.push(x, r);
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.times.len() != self.times.len() {
            return Err(Error::Dimension {
                expected: self.times.len(),
                got: other.times.len(),
            });
        }
        for (a, b) in self.acc.iter_mut().zip(&other.acc) {
            a.merge(b);
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.acc.first().map_or(0, MomentAccumulator::count)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn at(&self, i: usize) -> &MomentAccumulator {
        &self.acc[i]
    }

    fn curve(
        &self,
        name: &str,
        value: impl Fn(&MomentAccumulator) -> Result<f64>,
        se: impl Fn(&MomentAccumulator) -> Result<f64>,
    ) -> Result<Series> {
        let points = self
            .times
            .iter()
            .zip(&self.acc)
            .map(|(&t, a)| {
                Ok(CurvePoint {
                    t,
                    value: value(a)?,
                    stderr: se(a)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::new(name, points))
    }

    /// `Cov(X(0), X(t))` per grid time.
    pub fn covariance(&self, name: &str) -> Result<Series> {
        self.curve(
            name,
            MomentAccumulator::covariance,
            MomentAccumulator::covariance_stderr,
        )
    }

    pub fn mean(&self, name: &str) -> Result<Series> {
        self.curve(name, MomentAccumulator::mean, MomentAccumulator::mean_stderr)
    }

    pub fn variance(&self, name: &str) -> Result<Series> {
        self.curve(name, MomentAccumulator::variance, MomentAccumulator::variance_stderr)
    }
}

/// How replicates are scheduled. Results never depend on the choice: every
/// replicate owns its own random stream and outputs are reduced in index
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// `None` uses rayon's global pool.
    Parallel(Option<usize>),
    #[default]
    Auto,
}

impl Execution {
    pub fn from_flags(sequential: bool, threads: Option<usize>) -> Self {
        match (sequential, threads) {
            (true, _) => Execution::Sequential,
            (false, Some(1)) => Execution::Sequential,
            (false, t) => Execution::Parallel(t),
        }
    }
}

/// Evaluate `f(i)` for `i in 0..count`, returning outputs in index order.
pub fn replicate<T, F>(count: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        Execution::Auto | Execution::Parallel(None) => (0..count).into_par_iter().map(f).collect(),
        Execution::Parallel(Some(threads)) => {
            if threads == 0 {
                return Err(param("threads", "must be at least 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| param("threads", e.to_string()))?;
            pool.install(|| (0..count).into_par_iter().map(f).collect())
        }
    }
}

/// Run `count` replicates in fixed-size chunks, folding each chunk's outputs
/// sequentially into `state`. Memory stays bounded by the chunk size.
pub fn replicate_fold<T, S, F, G>(count: usize, exec: Execution, f: F, state: &mut S, mut fold: G) -> Result<()>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
    G: FnMut(&mut S, usize, T) -> Result<()>,
{
    const CHUNK: usize = 4096;
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        let out = replicate(end - start, exec, |i| f(start + i))?;
        for (i, v) in out.into_iter().enumerate() {
            fold(state, start + i, v)?;
        }
        start = end;
    }
    Ok(())
}
