//! Limiting entry processes of the tridiagonalized matrix process and the
//! transforms that connect finite-n tridiagonal data to them.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{param, Error, Result};
use crate::process::{ou_sample_path_with, transition, Beta, OuParams, OuPath, TimeGrid};
use crate::rng;
use crate::tridiag::{SymTridiagonal, SymTridiagonalPath};

/// `A_j = √2·OU(2j−1)` and `B_j = √2·OU(2j)` for `j = 1..=k`, all
/// independent. Vectors are 0-based: `a[0]` is `A_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEntryProcesses {
    pub grid: TimeGrid,
    pub k: usize,
    pub a: Vec<OuPath>,
    pub b: Vec<OuPath>,
}

pub fn a_rate(j: usize) -> f64 {
    2.0 * j as f64 - 1.0
}

pub fn b_rate(j: usize) -> f64 {
    2.0 * j as f64
}

pub fn limit_entries_sample(k: usize, grid: &TimeGrid, seed: u64) -> Result<LimitEntryProcesses> {
    limit_entries_sample_with(k, grid, &mut rng::from_seed(seed))
}

pub fn limit_entries_sample_with<R: Rng + ?Sized>(
    k: usize,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<LimitEntryProcesses> {
    if k == 0 {
        return Err(param("k", "must be at least 1"));
    }
    let mut scaled = |rate: f64| -> Result<OuPath> {
        let mut p = ou_sample_path_with(OuParams::new(rate)?, grid, rng);
        p.values.iter_mut().for_each(|v| *v *= std::f64::consts::SQRT_2);
        Ok(p)
    };
    let a = (1..=k).map(|j| scaled(a_rate(j))).collect::<Result<Vec<_>>>()?;
    let b = (1..=k).map(|j| scaled(b_rate(j))).collect::<Result<Vec<_>>>()?;
    Ok(LimitEntryProcesses { grid: *grid, k, a, b })
}

impl LimitEntryProcesses {
    /// The `k × k` limit-model matrix at grid index `i`: diagonal `A_j(t)`,
    /// off-diagonal `b̂_j(t)` from [`bhat_value`]. The last off-diagonal
    /// entry of the corner uses `B_1..B_{k−1}`.
    pub fn model_frame(&self, i: usize, n: f64, beta: Beta) -> Result<SymTridiagonal> {
        let diag: Vec<f64> = self.a.iter().map(|p| p.values[i]).collect();
        let offdiag = self.b[..self.k - 1]
            .iter()
            .map(|p| bhat_value(p.values[i], n, beta, i))
            .collect::<Result<Vec<_>>>()?;
        SymTridiagonal::new(diag, offdiag)
    }
}

/// Normalized entries `(a_1..a_k, (b_1²−βn)/(β√n) .. (b_k²−βn)/(β√n))` per
/// grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryVectorPath {
    pub grid: TimeGrid,
    pub k: usize,
    pub values: Vec<Vec<f64>>,
}

impl EntryVectorPath {
    /// Series of `a_j` (1-based).
    pub fn a(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[j - 1]).collect()
    }

    /// Series of the normalized `b_j²` (1-based).
    pub fn b_sq(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[self.k + j - 1]).collect()
    }
}

/// `(b² − βn)/(β√n)`.
pub fn normalize_offdiag_sq(b: f64, n: f64, beta: Beta) -> f64 {
    let bf = beta.as_f64();
    (b * b - bf * n) / (bf * n.sqrt())
}

/// One normalized entry vector from the leading tridiagonal entries.
pub fn entry_vector_frame(diag: &[f64], offdiag: &[f64], k: usize, beta: Beta, n: f64) -> Result<Vec<f64>> {
    if diag.len() < k || offdiag.len() < k {
        return Err(Error::IndexTooLarge {
            k,
            size: diag.len(),
            requirement: "k leading entries",
        });
    }
    let mut v = diag[..k].to_vec();
    v.extend(offdiag[..k].iter().map(|&b| normalize_offdiag_sq(b, n, beta)));
    Ok(v)
}

pub fn entry_vector_from_tridiagonal(
    path: &SymTridiagonalPath,
    k: usize,
    beta: Beta,
    n: f64,
) -> Result<EntryVectorPath> {
    if k == 0 {
        return Err(param("k", "must be at least 1"));
    }
    let values = path
        .frames
        .iter()
        .map(|t| {
            if t.n() < k + 4 {
                return Err(Error::IndexTooLarge {
                    k,
                    size: t.n(),
                    requirement: "frame size at least k+4",
                });
            }
            entry_vector_frame(t.diag(), t.offdiag(), k, beta, n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntryVectorPath {
        grid: path.grid,
        k,
        values,
    })
}

/// `b̂ = √(βn + √(βn)·B)`, reducing to `√(n + √n B)` for β = 1. `B` is the
/// variance-2 limit process; `index` only labels the error.
pub fn bhat_value(b: f64, n: f64, beta: Beta, index: usize) -> Result<f64> {
    let bn = beta.as_f64() * n;
    let r = bn + bn.sqrt() * b;
    if r < 0.0 || !r.is_finite() {
        return Err(Error::NegativeRadicand { index, value: r });
    }
    Ok(r.sqrt())
}

/// Pointwise [`bhat_value`] over a path; a negative radicand anywhere flags
/// the whole path.
pub fn bhat_transform(b: &[f64], n: f64, beta: Beta) -> Result<Vec<f64>> {
    if !(n > 0.0) {
        return Err(param("n", "must be positive"));
    }
    b.iter().enumerate().map(|(i, &x)| bhat_value(x, n, beta, i)).collect()
}

/// Informal norm model for `b_j`: `v(t)` is `OU_{n−j}(j)` and the path is
/// `√β‖v(t)‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormModelPath {
    pub grid: TimeGrid,
    pub dim: usize,
    /// `√β‖v(t)‖`.
    pub norm: Vec<f64>,
    /// `(‖v(t)‖² − (n−j))/√(2(n−j))`.
    pub centered: Vec<f64>,
}

pub fn norm_model_offdiag(n: usize, j: usize, beta: Beta, grid: &TimeGrid, seed: u64) -> Result<NormModelPath> {
    norm_model_offdiag_with(n, j, beta, grid, &mut rng::from_seed(seed))
}

/// Streaming version: keeps one vector in memory.
pub fn norm_model_offdiag_with<R: Rng + ?Sized>(
    n: usize,
    j: usize,
    beta: Beta,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<NormModelPath> {
    if j == 0 || j >= n {
        return Err(param("j", format!("need 1 ≤ j < n, got j={j}, n={n}")));
    }
    let dim = n - j;
    let (decay, mix) = transition(j as f64, grid.dt());
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let sb = beta.as_f64().sqrt();
    let scale = (2.0 * dim as f64).sqrt();
    let mut norm = Vec::with_capacity(grid.len());
    let mut centered = Vec::with_capacity(grid.len());
    for step in 0..grid.len() {
        if step > 0 {
            for x in v.iter_mut() {
                let xi: f64 = rng.sample(StandardNormal);
                *x = decay * *x + mix * xi;
            }
        }
        let sq: f64 = v.iter().map(|x| x * x).sum();
        norm.push(sb * sq.sqrt());
        centered.push((sq - dim as f64) / scale);
    }
    Ok(NormModelPath {
        grid: *grid,
        dim,
        norm,
        centered,
    })
}
