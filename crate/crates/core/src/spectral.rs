//! Extreme eigenvalues of symmetric tridiagonal matrices by Sturm bisection,
//! corner truncation, edge rescaling, and the λ_max covariance experiment.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::limit::limit_entries_sample_with;
use crate::process::dispatch;
use crate::process::{Beta, GbeMatrix, GbeProcess, TimeGrid};
use crate::rng;
use crate::stats::{replicate, CovarianceCurve, Execution, Series};
use crate::tridiag::{SymTridiagonal, Tridiagonalizer};

/// Number of eigenvalues strictly below `x`, from the signs of the pivots of
/// `T − xI = LDLᵀ`. Zero pivots are replaced by `−pivmin`.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    let a = t.diag();
    let b = t.offdiag();
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * t.scale().max(1.0) * 1e-3);
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..a.len() {
        let off = if i == 0 { 0.0 } else { b[i - 1] * b[i - 1] / d };
        d = a[i] - x - off;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the spectrum.
pub fn gershgorin(t: &SymTridiagonal) -> (f64, f64) {
    let a = t.diag();
    let b = t.offdiag();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..a.len() {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i < b.len() { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    (lo, hi)
}

/// The `m`-th smallest eigenvalue (0-based) to absolute accuracy `tol`.
pub fn bisect_eigenvalue(t: &SymTridiagonal, m: usize, tol: f64) -> f64 {
    let (g_lo, g_hi) = gershgorin(t);
    let pad = tol.max(f64::EPSILON * g_lo.abs().max(g_hi.abs()));
    let (mut lo, mut hi) = (g_lo - pad, g_hi + pad);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(t, mid) > m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    Largest,
    Smallest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenRequest {
    pub matrix: SymTridiagonal,
    pub how_many: usize,
    pub which: Which,
    pub tol: f64,
}

impl EigenRequest {
    /// Request with the default tolerance `1e−10·scale`.
    pub fn new(matrix: SymTridiagonal, how_many: usize, which: Which) -> Self {
        let tol = 1e-10 * matrix.scale().max(1.0);
        Self {
            matrix,
            how_many,
            which,
            tol,
        }
    }
}

/// Extreme eigenvalues: descending for [`Which::Largest`], ascending for
/// [`Which::Smallest`].
pub fn eigs_extreme(req: &EigenRequest) -> Result<Vec<f64>> {
    let n = req.matrix.n();
    if req.how_many == 0 || req.how_many > n {
        return Err(Error::IndexTooLarge {
            k: req.how_many,
            size: n,
            requirement: "1 ≤ how_many ≤ N",
        });
    }
    if !(req.tol > 0.0) {
        return Err(param("tol", "must be positive"));
    }
    Ok((0..req.how_many)
        .map(|i| {
            let m = match req.which {
                Which::Largest => n - 1 - i,
                Which::Smallest => i,
            };
            bisect_eigenvalue(&req.matrix, m, req.tol)
        })
        .collect())
}

pub fn lambda_max(t: &SymTridiagonal) -> f64 {
    bisect_eigenvalue(t, t.n() - 1, 1e-10 * t.scale().max(1.0))
}

/// Leading `k × k` principal submatrix.
pub fn corner(t: &SymTridiagonal, k: usize) -> Result<SymTridiagonal> {
    if k == 0 || k > t.n() {
        return Err(Error::IndexTooLarge {
            k,
            size: t.n(),
            requirement: "1 ≤ k ≤ N",
        });
    }
    SymTridiagonal::new(t.diag()[..k].to_vec(), t.offdiag()[..k - 1].to_vec())
}

/// `⌈10 n^{1/3}⌉`.
pub fn corner_size_rule(n: usize) -> usize {
    (10.0 * (n as f64).cbrt() - 1e-9).ceil() as usize
}

/// Per-frame eigenvalues, each frame sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProcessPath {
    pub grid: TimeGrid,
    pub values: Vec<Vec<f64>>,
}

impl EigenProcessPath {
    pub fn max_series(&self) -> Vec<f64> {
        self.values.iter().map(|v| v[0]).collect()
    }
}

/// `x ↦ n^{1/6}(x − 2√n)` with times relabeled `t ↦ n^{1/3} t`.
pub fn airy_rescale(path: &EigenProcessPath, n: usize) -> Result<EigenProcessPath> {
    if n == 0 {
        return Err(param("n", "must be positive"));
    }
    if path.values.len() != path.grid.len() {
        return Err(Error::IncompatibleGrid(format!(
            "{} frames on a grid of {} points",
            path.values.len(),
            path.grid.len()
        )));
    }
    let nf = n as f64;
    let c = nf.cbrt();
    let grid = TimeGrid::new(path.grid.t0() * c, path.grid.dt() * c, path.grid.len())
        .map_err(|e| Error::IncompatibleGrid(e.to_string()))?;
    let edge = 2.0 * nf.sqrt();
    let s = nf.powf(1.0 / 6.0);
    let values = path
        .values
        .iter()
        .map(|v| v.iter().map(|x| s * (x - edge)).collect())
        .collect();
    Ok(EigenProcessPath { grid, values })
}

/// Top `how_many` eigenvalues of each frame of a matrix process.
pub fn eigen_process(n: usize, beta: Beta, grid: &TimeGrid, how_many: usize, seed: u64) -> Result<EigenProcessPath> {
    let mut process = GbeProcess::new(n, beta, *grid, rng::from_seed(seed));
    let mut values = Vec::with_capacity(grid.len());
    loop {
        let t = reduce_full(process.current())?;
        values.push(eigs_extreme(&EigenRequest::new(t, how_many, Which::Largest))?);
        if !process.advance() {
            break;
        }
    }
    Ok(EigenProcessPath { grid: *grid, values })
}

fn reduce_full(m: &GbeMatrix) -> Result<SymTridiagonal> {
    dispatch!(m, mm => Tridiagonalizer::new().reduce(mm)).into_tridiagonal()
}

/// Covariance curves of `λ_max` against `t = 0` for one corner size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCovCurves {
    pub k: usize,
    /// Full matrix process.
    pub full: Series,
    /// `k × k` corner of the limit model.
    pub limit_corner: Series,
    /// `k × k` corner of the tridiagonalized process.
    pub tridiag_corner: Series,
    /// Limit-model samples dropped for a negative radicand.
    pub flagged: usize,
}

struct EigenSample {
    full: Vec<f64>,
    tri: Vec<Vec<f64>>,
    limit: Vec<Option<Vec<f64>>>,
}

pub fn eigen_cov_experiment(
    n: usize,
    beta: Beta,
    k_list: &[usize],
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<EigenCovCurves>> {
    if let Some(&k) = k_list.iter().find(|&&k| k < 2 || k > n) {
        return Err(Error::IndexTooLarge {
            k,
            size: n,
            requirement: "2 ≤ k ≤ n",
        });
    }
    if samples < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples,
        });
    }
    let gbe_seed = rng::domain(seed, "eigen-cov/gbe");
    let limit_seed = rng::domain(seed, "eigen-cov/limit");
    let nf = n as f64;
    let run = |i: usize| -> Result<EigenSample> {
        let mut process = GbeProcess::new(n, beta, *grid, rng::stream(gbe_seed, i as u64));
        let mut full = Vec::with_capacity(grid.len());
        let mut tri = vec![Vec::with_capacity(grid.len()); k_list.len()];
        loop {
            let t = reduce_full(process.current())?;
            full.push(lambda_max(&t));
            for (c, &k) in k_list.iter().enumerate() {
                tri[c].push(lambda_max(&corner(&t, k)?));
            }
            if !process.advance() {
                break;
            }
        }
        let mut g = rng::stream(limit_seed, i as u64);
        let limit = k_list
            .iter()
            .map(|&k| -> Result<Option<Vec<f64>>> {
                let lp = limit_entries_sample_with(k, grid, &mut g)?;
                let mut out = Vec::with_capacity(grid.len());
                for f in 0..grid.len() {
                    match lp.model_frame(f, nf, beta) {
                        Ok(t) => out.push(lambda_max(&t)),
                        Err(Error::NegativeRadicand { .. }) => return Ok(None),
                        Err(e) => return Err(e),
                    }
                }
                Ok(Some(out))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EigenSample { full, tri, limit })
    };
    let results = replicate(samples, exec, run)?;

    let times = grid.times();
    let mut out = Vec::with_capacity(k_list.len());
    let mut full = CovarianceCurve::new(times.clone());
    for r in &results {
        full.push_path(&r.full)?;
    }
    let full_series = full.covariance("full")?;
    for (c, &k) in k_list.iter().enumerate() {
        let mut tri = CovarianceCurve::new(times.clone());
        let mut lim = CovarianceCurve::new(times.clone());
        let mut flagged = 0;
        for r in &results {
            tri.push_path(&r.tri[c])?;
            match &r.limit[c] {
                Some(p) => lim.push_path(p)?,
                None => flagged += 1,
            }
        }
        out.push(EigenCovCurves {
            k,
            full: full_series.clone(),
            limit_corner: lim.covariance(&format!("limit_k{k}"))?,
            tridiag_corner: tri.covariance(&format!("tridiag_k{k}"))?,
            flagged,
        });
    }
    Ok(out)
}
