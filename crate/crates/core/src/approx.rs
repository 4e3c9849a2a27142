//! Approximate tridiagonal entries built from the first column `θ` and
//! semicircle polynomials of the deflated matrix, and the error study
//! against exact Householder reduction (β = 1).

use serde::Serialize;

use crate::chebyshev::{poly_sequence, LinearOperator};
use crate::error::{param, Error, Result};
use crate::process::{Beta, GbeProcess, HermitianMatrix, TimeGrid};
use crate::rng;
use crate::stats::{replicate, Execution};
use crate::tridiag::Tridiagonalizer;

/// `(I − e₁e₁ᵀ) M (I − e₁e₁ᵀ)`.
pub fn tilde_m(m: &HermitianMatrix<f64>) -> HermitianMatrix<f64> {
    let mut out = m.clone();
    let n = m.n();
    for i in 0..n {
        out.set_pair(i, 0, 0.0);
    }
    out
}

/// Trailing `(N−1) × (N−1)` block of `M`, scaled. This is `M̃/√n`
/// restricted to the complement of `e₁`, where `M̃` vanishes anyway.
struct TrailingBlock<'a> {
    m: &'a HermitianMatrix<f64>,
    scale: f64,
}

impl LinearOperator for TrailingBlock<'_> {
    fn dim(&self) -> usize {
        self.m.n() - 1
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.m.row(i + 1)[1..];
            *yi = self.scale * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

/// Approximate entries for one frame, 0-based vectors over indices `1..=k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxEntryFrame {
    pub tilde_a: Vec<f64>,
    /// `(b̃_j² − n)/√n`.
    pub tilde_b_sq_centered: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `θ = (M_21, …, M_N1)/√n` with `n = N − 1`.
pub fn theta(m: &HermitianMatrix<f64>) -> Vec<f64> {
    let n = m.n() - 1;
    let s = 1.0 / (n as f64).sqrt();
    (1..m.n()).map(|i| m.get(i, 0) * s).collect()
}

/// `ã_1 = M_11`, `ã_j = √n θᵀP_{2j−3}(X)θ` and
/// `(b̃_j² − n)/√n = √n (θᵀP_{2j−2}(X)θ − δ_{j1})` with `X = M̃/√n`,
/// `n = N − 1`. Uses `θ_m = P_m(X)θ` for `m ≤ k−1` and the identities
/// `P_{2m} = P_m² − P_{m−1}²`, `P_{2m−1} = (P_m − P_{m−2})P_{m−1}`.
pub fn approx_entries_frame(m: &HermitianMatrix<f64>, k: usize) -> Result<ApproxEntryFrame> {
    let size = m.n();
    if k == 0 {
        return Err(param("k", "must be at least 1"));
    }
    if size < 2 * k + 4 {
        return Err(Error::IndexTooLarge {
            k,
            size,
            requirement: "n > 2k+3",
        });
    }
    let n = (size - 1) as f64;
    let sn = n.sqrt();
    let th = theta(m);
    let op = TrailingBlock { m, scale: 1.0 / sn };
    let seq = poly_sequence(k - 1, &op, &th)?;
    let norms: Vec<f64> = seq.iter().map(|v| dot(v, v)).collect();

    let mut tilde_a = vec![m.get(0, 0)];
    let mut tilde_b = vec![sn * (norms[0] - 1.0)];
    for j in 2..=k {
        let mm = j - 1;
        // θᵀP_{2m−1}θ = θ_{m−1}ᵀ(θ_m − θ_{m−2})
        let odd = dot(&seq[mm - 1], &seq[mm]) - if mm >= 2 { dot(&seq[mm - 1], &seq[mm - 2]) } else { 0.0 };
        tilde_a.push(sn * odd);
        tilde_b.push(sn * (norms[mm] - norms[mm - 1]));
    }
    Ok(ApproxEntryFrame {
        tilde_a,
        tilde_b_sq_centered: tilde_b,
    })
}

/// Sup-over-grid errors for one sample: `a_1..a_k` then centered `b²_1..b²_k`.
pub fn approx_sup_errors(n: usize, k: usize, grid: &TimeGrid, seed: u64, index: u64) -> Result<Vec<f64>> {
    if k == 0 || n < 2 * k + 4 {
        return Err(Error::IndexTooLarge {
            k,
            size: n,
            requirement: "n > 2k+3",
        });
    }
    let mut process = GbeProcess::new(n, Beta::One, *grid, rng::stream(seed, index));
    let mut reducer = Tridiagonalizer::<f64>::new();
    let norm = (n - 1) as f64;
    let mut sup = vec![0.0f64; 2 * k];
    loop {
        let m = process.current().as_real().expect("β = 1 process is real");
        let exact = reducer.reduce_leading(m, k);
        let approx = approx_entries_frame(m, k)?;
        for j in 0..k {
            let da = (exact.diag[j] - approx.tilde_a[j]).abs();
            let b = (exact.offdiag[j].powi(2) - norm) / norm.sqrt();
            let db = (b - approx.tilde_b_sq_centered[j]).abs();
            sup[j] = sup[j].max(da);
            sup[k + j] = sup[k + j].max(db);
        }
        if !process.advance() {
            break;
        }
    }
    Ok(sup)
}

/// Empirical distribution of the sup-grid error of one entry at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxErrorRow {
    pub n: usize,
    /// `"a1"`, `"a2"`, …, `"b1"`, … (b rows refer to the centered squares).
    pub entry: String,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub q95: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxErrorTable {
    pub k: usize,
    pub samples: usize,
    pub rows: Vec<ApproxErrorRow>,
}

impl ApproxErrorTable {
    pub fn rows_for(&self, entry: &str) -> Vec<&ApproxErrorRow> {
        self.rows.iter().filter(|r| r.entry == entry).collect()
    }

    /// Ratios of consecutive medians along the `n` list for one entry.
    pub fn decay_ratios(&self, entry: &str) -> Vec<f64> {
        self.rows_for(entry)
            .windows(2)
            .map(|w| w[1].median / w[0].median)
            .collect()
    }
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn approx_error_study(
    n_list: &[usize],
    k: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<ApproxErrorTable> {
    if samples == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let mut rows = Vec::new();
    for &n in n_list {
        if n <= k + 3 {
            return Err(Error::IndexTooLarge {
                k,
                size: n,
                requirement: "n > k+3",
            });
        }
        let sub = rng::split(seed, n as u64);
        let errs = replicate(samples, exec, |i| approx_sup_errors(n, k, grid, sub, i as u64))?;
        for c in 0..2 * k {
            let mut col: Vec<f64> = errs.iter().map(|e| e[c]).collect();
            col.sort_by(f64::total_cmp);
            let entry = if c < k {
                format!("a{}", c + 1)
            } else {
                format!("b{}", c - k + 1)
            };
            rows.push(ApproxErrorRow {
                n,
                entry,
                median: quantile(&col, 0.5),
                q25: quantile(&col, 0.25),
                q75: quantile(&col, 0.75),
                q95: quantile(&col, 0.95),
                mean: col.iter().sum::<f64>() / col.len() as f64,
            });
        }
    }
    let order: Vec<String> = rows.iter().map(|r| r.entry.clone()).collect();
    rows.sort_by_key(|r| (order.iter().position(|e| *e == r.entry), r.n));
    Ok(ApproxErrorTable { k, samples, rows })
}
