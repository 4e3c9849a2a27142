//! Experiment drivers shared by the command line, the examples and the
//! acceptance suite. Each returns a [`Report`] of curves, tables and checks.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::approx::approx_error_study;
use crate::chebyshev::{poly_p, poly_product_expand, verify_product_expansion, MonicSemicirclePoly};
use crate::combinatorics::{
    all_permutations, catalan, double_factorial_odd, doubled_set, enumerate_nc2, enumerate_p2, perm_from_pairing,
    perm_multiplicity, semicircular_cov_p, semicircular_cov_poly, PairPartition,
};
use crate::error::{param, Error, Result};
use crate::limit::{
    a_rate, b_rate, bhat_value, limit_entries_sample_with, norm_model_offdiag_with, normalize_offdiag_sq,
};
use crate::packed::PackedProcess;
use crate::process::{transition, Beta, HermitianMatrix, TimeGrid};
use crate::rng;
use crate::scalar::{Quaternion, Scalar};
use crate::spectral::eigen_cov_experiment;
use crate::stats::{jackknife, replicate, replicate_fold, CovarianceCurve, Execution, MomentAccumulator, Series};
use crate::tridiag::lanczos_entries;

/// A named pass/fail verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// A table written as its own CSV file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Report {
    pub series: Vec<Series>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `E[χ_k] = √2 Γ((k+1)/2) / Γ(k/2)`.
pub fn chi_mean(k: f64) -> f64 {
    std::f64::consts::SQRT_2 * (ln_gamma((k + 1.0) / 2.0) - ln_gamma(k / 2.0)).exp()
}

/// Leading entries `a_1..a_k`, `b_1..b_k` along one sample path, indexed
/// `[entry][time]`.
pub struct EntryPaths {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

fn entry_paths_typed<S: Scalar>(n: usize, k: usize, grid: &TimeGrid, seed: u64, index: u64) -> EntryPaths {
    let mut process = PackedProcess::<S>::new(n, *grid, rng::stream(seed, index));
    let mut a = vec![Vec::with_capacity(grid.len()); k];
    let mut b = vec![Vec::with_capacity(grid.len()); k];
    loop {
        let r = lanczos_entries(process.current(), k, k);
        for j in 0..k {
            a[j].push(r.diag[j]);
            b[j].push(r.offdiag[j]);
        }
        if !process.advance() {
            break;
        }
    }
    EntryPaths { a, b }
}

/// One sample path of the leading tridiagonal entries of the `n × n` GβE
/// process, computed by Lanczos from `e₁` on each frame.
pub fn entry_paths(n: usize, beta: Beta, k: usize, grid: &TimeGrid, seed: u64, index: u64) -> Result<EntryPaths> {
    if k == 0 || n < k + 4 {
        return Err(Error::IndexTooLarge {
            k,
            size: n,
            requirement: "n ≥ k+4",
        });
    }
    Ok(match beta {
        Beta::One => entry_paths_typed::<f64>(n, k, grid, seed, index),
        Beta::Two => entry_paths_typed::<Complex64>(n, k, grid, seed, index),
        Beta::Four => entry_paths_typed::<Quaternion>(n, k, grid, seed, index),
    })
}

/// Across-sample statistics of the leading entries.
pub struct EntryStats {
    pub a: Vec<CovarianceCurve>,
    /// Raw `b_j`.
    pub b: Vec<CovarianceCurve>,
    /// `(b_j² − βn)/(β√n)`.
    pub b_sq: Vec<CovarianceCurve>,
}

pub fn entry_statistics(
    n: usize,
    beta: Beta,
    k: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<EntryStats> {
    if samples < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples,
        });
    }
    let times = grid.times();
    let fresh = || vec![CovarianceCurve::new(times.clone()); k];
    let mut stats = EntryStats {
        a: fresh(),
        b: fresh(),
        b_sq: fresh(),
    };
    let nf = n as f64;
    replicate_fold(
        samples,
        exec,
        |i| entry_paths(n, beta, k, grid, seed, i as u64),
        &mut stats,
        |s, _, p| {
            for j in 0..k {
                s.a[j].push_path(&p.a[j])?;
                s.b[j].push_path(&p.b[j])?;
                let sq: Vec<f64> = p.b[j].iter().map(|&b| normalize_offdiag_sq(b, nf, beta)).collect();
                s.b_sq[j].push_path(&sq)?;
            }
            Ok(())
        },
    )?;
    Ok(stats)
}

/// Largest `|estimate − theory|` over a curve, with the point where it occurs.
pub fn max_deviation(s: &Series, theory: impl Fn(f64) -> f64) -> (f64, f64) {
    s.points
        .iter()
        .map(|p| ((p.value - theory(p.t)).abs(), p.t))
        .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc })
}

/// Points where `|estimate − theory| > z·SE + slack`.
pub fn band_violations(s: &Series, theory: impl Fn(f64) -> f64, z: f64, slack: f64) -> usize {
    s.points
        .iter()
        .filter(|p| (p.value - theory(p.t)).abs() > z * p.stderr + slack)
        .count()
}

/// Entry covariance curves of the tridiagonalized process against the limit
/// covariances `2e^{−(2j−1)t}` (diagonal) and `(2/β)e^{−2jt}` (normalized
/// squared off-diagonal).
pub fn simulate_entries(
    n: usize,
    beta: Beta,
    k: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let stats = entry_statistics(n, beta, k, grid, samples, rng::domain(seed, "entries"), exec)?;
    let times = grid.times();
    let bf = beta.as_f64();
    let mut report = Report::default();
    for j in 1..=k {
        let ca = stats.a[j - 1].covariance(&format!("cov_a{j}"))?;
        let cb = stats.b_sq[j - 1].covariance(&format!("cov_bsq{j}"))?;
        let ra = a_rate(j);
        let rb = b_rate(j);
        let (dev_a, t_a) = max_deviation(&ca, |t| 2.0 * (-ra * t).exp());
        let (dev_b, t_b) = max_deviation(&cb, |t| 2.0 / bf * (-rb * t).exp());
        report.checks.push(Check::new(
            format!("cov_a{j}_vs_limit"),
            dev_a <= 0.2,
            format!("max |Cov − 2e^(−{ra}t)| = {dev_a:.4} at t = {t_a:.4} (tolerance 0.2)"),
        ));
        report.checks.push(Check::new(
            format!("cov_bsq{j}_vs_limit"),
            dev_b <= 0.2,
            format!("max |Cov − (2/β)e^(−{rb}t)| = {dev_b:.4} at t = {t_b:.4} (tolerance 0.2)"),
        ));
        report.series.push(Series::from_fn(format!("theory_a{j}"), &times, |t| {
            2.0 * (-ra * t).exp()
        }));
        report
            .series
            .push(Series::from_fn(format!("theory_bsq{j}"), &times, |t| {
                2.0 / bf * (-rb * t).exp()
            }));
        report.series.push(stats.a[j - 1].mean(&format!("mean_a{j}"))?);
        report.series.push(stats.b[j - 1].mean(&format!("mean_b{j}"))?);
        report.series.push(ca);
        report.series.push(cb);
    }
    Ok(report)
}

/// Covariance curves of the tridiagonalized entries next to independent
/// samples of the limit processes.
pub fn compare_limit(
    n: usize,
    beta: Beta,
    k: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let stats = entry_statistics(n, beta, k, grid, samples, rng::domain(seed, "entries"), exec)?;
    let limit_seed = rng::domain(seed, "limit");
    let limits = replicate(samples, exec, |i| {
        limit_entries_sample_with(k, grid, &mut rng::stream(limit_seed, i as u64))
    })?;
    let times = grid.times();
    let bf = beta.as_f64();
    let mut report = Report::default();
    for j in 1..=k {
        let mut la = CovarianceCurve::new(times.clone());
        let mut lb = CovarianceCurve::new(times.clone());
        for l in &limits {
            la.push_path(&l.a[j - 1].values)?;
            // the finite-n normalization has limit variance 2/β
            let scaled: Vec<f64> = l.b[j - 1].values.iter().map(|x| x / bf.sqrt()).collect();
            lb.push_path(&scaled)?;
        }
        let ta = stats.a[j - 1].covariance(&format!("tridiag_cov_a{j}"))?;
        let tb = stats.b_sq[j - 1].covariance(&format!("tridiag_cov_bsq{j}"))?;
        let ca = la.covariance(&format!("limit_cov_a{j}"))?;
        let cb = lb.covariance(&format!("limit_cov_bsq{j}"))?;
        for (name, x, y) in [("a", &ta, &ca), ("bsq", &tb, &cb)] {
            let worst = x
                .points
                .iter()
                .zip(&y.points)
                .map(|(p, q)| (p.value - q.value).abs() / (p.stderr.hypot(q.stderr) + 1e-12))
                .fold(0.0, f64::max);
            report.checks.push(Check::new(
                format!("{name}{j}_tridiag_vs_limit"),
                worst <= 4.0,
                format!("largest standardized gap {worst:.2} (bound 4)"),
            ));
        }
        report.series.extend([ta, tb, ca, cb]);
    }
    Ok(report)
}

/// Off-diagonal entry `b_j` of the tridiagonalized process against `b̂_j`
/// from the limit process and against the norm model.
pub fn bhat_compare(
    n: usize,
    beta: Beta,
    j: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    if j == 0 || n < j + 4 {
        return Err(Error::IndexTooLarge {
            k: j,
            size: n,
            requirement: "1 ≤ j ≤ n−4",
        });
    }
    let times = grid.times();
    let stats = entry_statistics(n, beta, j, grid, samples, rng::domain(seed, "entries"), exec)?;
    let tri = &stats.b[j - 1];

    let limit_seed = rng::domain(seed, "limit");
    let nf = n as f64;
    let bhat = replicate(samples, exec, |i| {
        let l = limit_entries_sample_with(j, grid, &mut rng::stream(limit_seed, i as u64))?;
        let path: Result<Vec<f64>> = l.b[j - 1]
            .values
            .iter()
            .enumerate()
            .map(|(t, &x)| bhat_value(x, nf, beta, t))
            .collect();
        match path {
            Ok(p) => Ok(Some(p)),
            Err(Error::NegativeRadicand { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    })?;
    let mut bh = CovarianceCurve::new(times.clone());
    let mut flagged = 0;
    for p in &bhat {
        match p {
            Some(p) => bh.push_path(p)?,
            None => flagged += 1,
        }
    }

    let norm_seed = rng::domain(seed, "norm-model");
    let norms = replicate(samples, exec, |i| {
        norm_model_offdiag_with(n, j, beta, grid, &mut rng::stream(norm_seed, i as u64)).map(|p| p.norm)
    })?;
    let mut nm = CovarianceCurve::new(times.clone());
    for p in &norms {
        nm.push_path(p)?;
    }

    let k = beta.as_f64() * (n - j) as f64;
    let target = chi_mean(k);
    let mean = tri.at(0).mean()?;
    let var = tri.at(0).variance()?;
    let mut report = Report::default();
    report.checks.push(Check::new(
        "mean_b_vs_chi",
        ((mean - target) / target).abs() <= 0.005,
        format!(
            "mean b_{j}(0) = {mean:.4}, E[χ_{k}] = {target:.4}, relative gap {:.5} (bound 0.005)",
            (mean - target) / target
        ),
    ));
    report.checks.push(Check::new(
        "var_b_band",
        (0.4..=0.6).contains(&var),
        format!("Var b_{j}(0) = {var:.4} (band [0.4, 0.6])"),
    ));

    let tri_cov = tri.covariance(&format!("tridiag_cov_b{j}"))?;
    let bh_cov = bh.covariance(&format!("bhat_cov_b{j}"))?;
    let tri_var = tri.variance(&format!("tridiag_var_b{j}"))?;
    let bh_var = bh.variance(&format!("bhat_var_b{j}"))?;
    for (name, x, y) in [("cov", &tri_cov, &bh_cov), ("var", &tri_var, &bh_var)] {
        let bad = x
            .points
            .iter()
            .zip(&y.points)
            .filter(|(p, q)| (p.value - q.value).abs() > 3.0 * p.stderr.hypot(q.stderr))
            .count();
        report.checks.push(Check::new(
            format!("bhat_{name}_within_3se"),
            bad == 0,
            format!("{bad} of {} grid points outside 3·SE", x.points.len()),
        ));
    }
    report.checks.push(Check::new(
        "bhat_radicand_flags",
        flagged * 100 <= samples,
        format!("{flagged} of {samples} limit samples excluded for a negative radicand"),
    ));
    report.series.push(Series::from_fn("chi_mean", &times, |_| target));
    report.series.push(tri.mean(&format!("tridiag_mean_b{j}"))?);
    report.series.push(bh.mean(&format!("bhat_mean_b{j}"))?);
    report.series.push(nm.mean(&format!("norm_model_mean_b{j}"))?);
    report.series.extend([tri_var, bh_var, tri_cov, bh_cov]);
    report.series.push(nm.variance(&format!("norm_model_var_b{j}"))?);
    report.series.push(nm.covariance(&format!("norm_model_cov_b{j}"))?);
    Ok(report)
}

/// Excess kurtosis of `a_j(0) + a_j(t)` at one `n` and grid time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KurtosisRow {
    pub n: usize,
    pub j: usize,
    pub t: f64,
    pub kurtosis: f64,
    /// Delete-one-batch jackknife standard error.
    pub stderr: f64,
    /// Normal-theory standard error.
    pub stderr_normal: f64,
}

const KURTOSIS_BATCHES: usize = 50;

/// Per `n` and grid time: excess kurtosis of `a_j(0) + a_j(t)` for the β = 1
/// process, with jackknife standard errors over contiguous sample batches.
pub fn kurtosis_sum_experiment(
    n_list: &[usize],
    j: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<KurtosisRow>> {
    if j == 0 {
        return Err(param("j", "must be at least 1"));
    }
    if samples < 2 * KURTOSIS_BATCHES {
        return Err(Error::InsufficientSamples {
            needed: 2 * KURTOSIS_BATCHES,
            got: samples,
        });
    }
    let mut rows = Vec::new();
    for &n in n_list {
        if n < j {
            return Err(Error::IndexTooLarge {
                k: j,
                size: n,
                requirement: "n ≥ j",
            });
        }
        let sub = rng::split(seed, n as u64);
        let mut batches = vec![vec![MomentAccumulator::new(); grid.len()]; KURTOSIS_BATCHES];
        let diag_path = |i: usize| -> Result<Vec<f64>> {
            let mut process = PackedProcess::<f64>::new(n, *grid, rng::stream(sub, i as u64));
            let mut out = Vec::with_capacity(grid.len());
            loop {
                out.push(*lanczos_entries(process.current(), j, 0).diag.last().expect("j ≥ 1"));
                if !process.advance() {
                    break;
                }
            }
            Ok(out)
        };
        replicate_fold(samples, exec, diag_path, &mut batches, |b, i, path| {
            let slot = i * KURTOSIS_BATCHES / samples;
            for (acc, &x) in b[slot].iter_mut().zip(&path) {
                acc.push_value(path[0] + x);
            }
            Ok(())
        })?;
        for (ti, t) in grid.times().into_iter().enumerate() {
            let per_t: Vec<MomentAccumulator> = batches.iter().map(|b| b[ti].clone()).collect();
            let (kurtosis, stderr) = jackknife(&per_t, MomentAccumulator::excess_kurtosis)?;
            let mut all = MomentAccumulator::new();
            per_t.iter().for_each(|a| all.merge(a));
            rows.push(KurtosisRow {
                n,
                j,
                t,
                kurtosis,
                stderr,
                stderr_normal: all.kurtosis_stderr()?,
            });
        }
    }
    Ok(rows)
}

fn kurtosis_table(rows: &[KurtosisRow]) -> Table {
    Table {
        name: "kurtosis".into(),
        header: ["n", "j", "t", "excess_kurtosis", "stderr_jackknife", "stderr_normal"]
            .map(String::from)
            .to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.j.to_string(),
                    format!("{}", r.t),
                    format!("{}", r.kurtosis),
                    format!("{}", r.stderr),
                    format!("{}", r.stderr_normal),
                ]
            })
            .collect(),
    }
}

/// Kurtosis curves for `j` plus the `j = 1` control, with the checks used
/// for the non-Gaussianity criterion at the grid time where the smallest
/// `n` deviates most.
pub fn kurtosis_report(
    n_list: &[usize],
    j: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let rows = kurtosis_sum_experiment(n_list, j, grid, samples, rng::domain(seed, "kurtosis"), exec)?;
    let control = kurtosis_sum_experiment(n_list, 1, grid, samples, rng::domain(seed, "kurtosis-control"), exec)?;
    let mut report = Report::default();
    for (label, set) in [("", &rows), ("control_", &control)] {
        for &n in n_list {
            let pts = set
                .iter()
                .filter(|r| r.n == n)
                .map(|r| crate::stats::CurvePoint {
                    t: r.t,
                    value: r.kurtosis,
                    stderr: r.stderr,
                })
                .collect();
            let jj = set.first().map_or(j, |r| r.j);
            report
                .series
                .push(Series::new(format!("{label}kurtosis_j{jj}_n{n}"), pts));
        }
    }
    let ctrl_bad = control
        .iter()
        .filter(|r| r.t > 0.0 && r.kurtosis.abs() > 3.0 * r.stderr)
        .count();
    report.checks.push(Check::new(
        "control_j1_gaussian",
        ctrl_bad == 0,
        format!("{ctrl_bad} (n, t) points of the j=1 control beyond 3·SE"),
    ));
    if let (Some(&small), Some(&large)) = (n_list.iter().min(), n_list.iter().max()) {
        if small != large {
            let at = |n: usize| rows.iter().filter(move |r| r.n == n && r.t > 0.0);
            if let Some(peak) =
                at(small).max_by(|a, b| (a.kurtosis.abs() / a.stderr).total_cmp(&(b.kurtosis.abs() / b.stderr)))
            {
                let other = at(large)
                    .find(|r| (r.t - peak.t).abs() < 1e-12)
                    .copied()
                    .expect("same grid");
                let gap = peak.kurtosis.abs() - other.kurtosis.abs();
                let se = peak.stderr.hypot(other.stderr);
                report.checks.push(Check::new(
                    "small_n_kurtosis_nonzero",
                    peak.kurtosis.abs() > 3.0 * peak.stderr,
                    format!("n={small}, t={}: K = {:.4} ± {:.4}", peak.t, peak.kurtosis, peak.stderr),
                ));
                report.checks.push(Check::new(
                    "kurtosis_attenuates_with_n",
                    gap > 3.0 * se,
                    format!(
                        "|K(n={small})| − |K(n={large})| = {gap:.4}, combined SE {se:.4} at t={}",
                        peak.t
                    ),
                ));
            }
        }
    }
    report.tables.push(kurtosis_table(&rows));
    let mut ctable = kurtosis_table(&control);
    ctable.name = "kurtosis_control".into();
    report.tables.push(ctable);
    Ok(report)
}

/// Dense `P_0(X), …, P_d(X)`.
fn dense_polys(x: &DMatrix<f64>, d: usize) -> Vec<DMatrix<f64>> {
    let n = x.nrows();
    let mut out = vec![DMatrix::identity(n, n)];
    if d >= 1 {
        out.push(x.clone());
    }
    for k in 2..=d {
        let next = x * &out[k - 1] - &out[k - 2];
        out.push(next);
    }
    out
}

/// Monte Carlo `(1/n) Tr(P_j(X(0)) P_k(X(τ)))` for `X = M/√n`, `M` an
/// `n × n` GOE process, against the leading-order value `δ_jk e^{−kτ}`.
/// The bound per pair is `3·SE + 5/n`.
pub fn moment_check(n: usize, degree: usize, tau: f64, samples: usize, seed: u64, exec: Execution) -> Result<Report> {
    if samples < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples,
        });
    }
    if !(tau >= 0.0) {
        return Err(param("tau", "must be non-negative"));
    }
    let sub = rng::domain(seed, "moment-check");
    let (decay, mix) = transition(1.0, tau);
    let scale = 1.0 / (n as f64).sqrt();
    let pairs: Vec<(usize, usize)> = (0..=degree).flat_map(|j| (0..=degree).map(move |k| (j, k))).collect();
    let traces = replicate(samples, exec, |i| -> Result<Vec<f64>> {
        let mut g = rng::stream(sub, i as u64);
        let mut m = HermitianMatrix::<f64>::sample_stationary(n, &mut g);
        let p0 = dense_polys(&(m.to_dmatrix() * scale), degree);
        m.ou_step(decay, mix, &mut g);
        let p1 = dense_polys(&(m.to_dmatrix() * scale), degree);
        Ok(pairs.iter().map(|&(j, k)| p0[j].dot(&p1[k]) / n as f64).collect())
    })?;
    let mut report = Report::default();
    let mut rows = Vec::new();
    for (c, &(j, k)) in pairs.iter().enumerate() {
        let mut acc = MomentAccumulator::new();
        traces.iter().for_each(|t| acc.push_value(t[c]));
        let est = acc.mean()?;
        let se = acc.mean_stderr()?;
        let exact = semicircular_cov_p(j, k, 0.0, tau)?;
        let bound = 3.0 * se + 5.0 / n as f64;
        report.checks.push(Check::new(
            format!("trace_P{j}_P{k}"),
            (est - exact).abs() <= bound,
            format!("estimate {est:.5} ± {se:.5}, leading order {exact:.5}, bound {bound:.5}"),
        ));
        rows.push(vec![
            j.to_string(),
            k.to_string(),
            format!("{est}"),
            format!("{se}"),
            format!("{exact}"),
        ]);
    }
    report.tables.push(Table {
        name: "moment_check".into(),
        header: ["j", "k", "estimate", "stderr", "leading_order"]
            .map(String::from)
            .to_vec(),
        rows,
    });
    Ok(report)
}

/// Sup-grid approximation errors and their decay along `n_list`.
pub fn approx_error_report(
    n_list: &[usize],
    k: usize,
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let table = approx_error_study(n_list, k, grid, samples, rng::domain(seed, "approx"), exec)?;
    let mut report = Report::default();
    for j in 2..=k {
        let entry = format!("a{j}");
        let rows = table.rows_for(&entry);
        let medians: Vec<f64> = rows.iter().map(|r| r.median).collect();
        let ratios = table.decay_ratios(&entry);
        let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
        let in_band = ratios.iter().all(|r| (0.35..=0.75).contains(r));
        report.checks.push(Check::new(
            format!("{entry}_median_decreases"),
            decreasing,
            format!("medians {medians:.4?}"),
        ));
        report.checks.push(Check::new(
            format!("{entry}_decay_ratio_band"),
            in_band,
            format!("ratios {ratios:.3?} (band [0.35, 0.75])"),
        ));
    }
    let a1_exact = table.rows_for("a1").iter().all(|r| r.q95 == 0.0);
    report.checks.push(Check::new(
        "a1_exact",
        a1_exact,
        "first diagonal entry reproduced exactly",
    ));
    report.tables.push(Table {
        name: "approx_error".into(),
        header: ["n", "entry", "median", "q25", "q75", "q95", "mean"]
            .map(String::from)
            .to_vec(),
        rows: table
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.entry.clone(),
                    format!("{}", r.median),
                    format!("{}", r.q25),
                    format!("{}", r.q75),
                    format!("{}", r.q95),
                    format!("{}", r.mean),
                ]
            })
            .collect(),
    });
    Ok(report)
}

/// λ_max covariance curves for each corner size, with the ordering check
/// between the smallest and largest `k`.
pub fn eigen_cov_report(
    n: usize,
    beta: Beta,
    k_list: &[usize],
    grid: &TimeGrid,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Report> {
    let curves = eigen_cov_experiment(n, beta, k_list, grid, samples, rng::domain(seed, "eigen"), exec)?;
    let mut report = Report::default();
    let mut gaps = HashMap::new();
    for c in &curves {
        let lim_tri = c.limit_corner.integrated_abs_gap(&c.tridiag_corner)?;
        let lim_full = c.limit_corner.integrated_abs_gap(&c.full)?;
        let tri_full = c.tridiag_corner.integrated_abs_gap(&c.full)?;
        gaps.insert(c.k, (lim_tri, lim_full));
        report.checks.push(Check::new(
            format!("gaps_k{}", c.k),
            true,
            format!(
                "∫|limit−tridiag| = {lim_tri:.4}, ∫|limit−full| = {lim_full:.4}, ∫|tridiag−full| = {tri_full:.4}, flagged {}",
                c.flagged
            ),
        ));
        if report.series.is_empty() {
            report.series.push(c.full.clone());
        }
        report.series.push(c.limit_corner.clone());
        report.series.push(c.tridiag_corner.clone());
    }
    if let (Some(&lo), Some(&hi)) = (k_list.iter().min(), k_list.iter().max()) {
        if lo != hi {
            let small = gaps[&lo].0;
            let large = gaps[&hi].1;
            report.checks.push(Check::new(
                "corner_gap_ordering",
                small < large,
                format!("∫|limit−tridiag| at k={lo} is {small:.4}; ∫|limit−full| at k={hi} is {large:.4}"),
            ));
        }
    }
    Ok(report)
}

/// Exact checks on partitions, permutations and polynomials.
pub fn verify_combinatorics() -> Result<Report> {
    let mut report = Report::default();
    let mut push = |name: String, pass: bool, detail: String| report.checks.push(Check::new(name, pass, detail));

    for m in 0..=8 {
        let count = enumerate_nc2(2 * m)?.len() as u64;
        push(
            format!("nc2_catalan_m{m}"),
            count == catalan(m),
            format!("|NC2[{}]| = {count}, Catalan = {}", 2 * m, catalan(m)),
        );
    }
    push(
        "nc2_odd_empty".into(),
        enumerate_nc2(7)?.is_empty(),
        "|NC2[7]| = 0".into(),
    );

    for size in 1..=6usize {
        let index: Vec<usize> = (1..=size).collect();
        let total: u64 = all_permutations(&index).iter().map(perm_multiplicity).sum();
        let expected = double_factorial_odd(size);
        push(
            format!("perm_multiplicity_sum_J{size}"),
            total == expected,
            format!("Σ multiplicity = {total}, (2|J|−1)!! = {expected}"),
        );
    }
    for size in 1..=4usize {
        let index: Vec<usize> = (1..=size).collect();
        let mut fibers: HashMap<String, u64> = HashMap::new();
        for pi in enumerate_p2(&doubled_set(&index))? {
            *fibers.entry(perm_from_pairing(&pi)?.to_string()).or_default() += 1;
        }
        let all = all_permutations(&index);
        let ok = fibers.len() == all.len()
            && all
                .iter()
                .all(|s| fibers.get(&s.to_string()) == Some(&perm_multiplicity(s)));
        push(
            format!("perm_fibers_J{size}"),
            ok,
            format!("{} distinct images of {} permutations", fibers.len(), all.len()),
        );
    }

    let example = PairPartition::new(vec![
        ((1, 1), (1, 3)),
        ((2, 3), (2, 2)),
        ((1, 2), (1, 4)),
        ((2, 4), (2, 1)),
    ])?;
    let got = perm_from_pairing(&example)?.to_string();
    push(
        "perm_example_4cycle".into(),
        got == "(1 3 2 4)",
        format!("Perm(π) = {got}"),
    );
    let example = PairPartition::new(vec![
        ((1, 1), (1, 2)),
        ((2, 2), (2, 1)),
        ((1, 3), (1, 4)),
        ((2, 4), (2, 3)),
    ])?;
    let got = perm_from_pairing(&example)?.to_string();
    push(
        "perm_example_two_2cycles".into(),
        got == "(1 2)(3 4)",
        format!("Perm(π′) = {got}"),
    );

    let mut cov_ok = true;
    for j in 0..=6 {
        for k in 0..=6 {
            let poly = semicircular_cov_poly(j, k)?;
            cov_ok &= poly.iter().enumerate().all(|(s, &c)| c == i64::from(j == k && s == k));
        }
    }
    push(
        "semicircular_cov_exact".into(),
        cov_ok,
        "(1/n)E Tr(P_j P_k) = δ_jk x^k as exact integer polynomials, j,k ≤ 6".into(),
    );

    let mut prod_ok = true;
    for j in 0..=10 {
        for k in 0..=10 {
            prod_ok &= verify_product_expansion(j, k);
        }
    }
    push(
        "product_expansion".into(),
        prod_ok,
        "P_j P_k = Σ_{l ≤ min(j,k)} P_{j+k−2l}, j,k ≤ 10".into(),
    );
    let mut cor_ok = true;
    for k in 1..=15 {
        let sq = poly_p(k).mul(&poly_p(k)).sub(&poly_p(k - 1).mul(&poly_p(k - 1)));
        cor_ok &= sq == poly_p(2 * k);
        if k >= 2 {
            let odd = poly_p(k).sub(&poly_p(k - 2)).mul(&poly_p(k - 1));
            cor_ok &= odd == poly_p(2 * k - 1);
        }
    }
    push(
        "product_squares".into(),
        cor_ok,
        "P_k² − P_{k−1}² = P_{2k}, (P_k − P_{k−2})P_{k−1} = P_{2k−1}, k ≤ 15".into(),
    );
    let p22 = poly_product_expand(2, 2);
    push(
        "p2_times_p2".into(),
        p22 == vec![4, 2, 0],
        format!("P2·P2 degrees {p22:?}"),
    );
    let p4 = MonicSemicirclePoly::from_coeffs(vec![1, 0, -3, 0, 1]);
    push("p4_coefficients".into(), poly_p(4) == p4, format!("P4 = {}", poly_p(4)));
    Ok(report)
}
