//! Monic orthogonal polynomials of the semicircle law, `P_k(x) = U_k(x/2)`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::process::HermitianMatrix;

/// `P_k` with exact integer coefficients; `coeffs[p]` multiplies `x^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicSemicirclePoly {
    coeffs: Vec<i64>,
}

impl MonicSemicirclePoly {
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|p| self.coeff(p) + other.coeff(p)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|p| self.coeff(p) - other.coeff(p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Multiply by `x`.
    fn shift(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0);
        c.extend_from_slice(&self.coeffs);
        Self::from_coeffs(c)
    }
}

impl fmt::Display for MonicSemicirclePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (p, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "x".to_string(),
                (1, m) => format!("{m}x"),
                (p, 1) => format!("x^{p}"),
                (p, m) => format!("{m}x^{p}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `P_0 = 1`, `P_1 = x`, `P_{k+1} = x P_k − P_{k−1}`.
pub fn poly_p(k: usize) -> MonicSemicirclePoly {
    let mut prev = MonicSemicirclePoly::from_coeffs(vec![1]);
    if k == 0 {
        return prev;
    }
    let mut cur = MonicSemicirclePoly::from_coeffs(vec![0, 1]);
    for _ in 1..k {
        let next = cur.shift().sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Degrees in `P_j P_k = Σ_{ℓ=0}^{min(j,k)} P_{j+k−2ℓ}`.
pub fn poly_product_expand(j: usize, k: usize) -> Vec<usize> {
    (0..=j.min(k)).map(|l| j + k - 2 * l).collect()
}

/// Check the expansion of `P_j P_k` by exact coefficient arithmetic.
pub fn verify_product_expansion(j: usize, k: usize) -> bool {
    let lhs = poly_p(j).mul(&poly_p(k));
    let rhs = poly_product_expand(j, k)
        .into_iter()
        .fold(MonicSemicirclePoly::from_coeffs(vec![0]), |acc, d| acc.add(&poly_p(d)));
    lhs == rhs
}

/// `∫ P_j P_k dμ_sc` by Gauss quadrature for the semicircle weight
/// `(1/2π)√(4 − x²)` on `[−2, 2]` (exact for `j + k ≤ 2·nodes − 1`).
pub fn semicircle_inner_product(j: usize, k: usize) -> f64 {
    let nodes = (j + k) / 2 + 2;
    let h = std::f64::consts::PI / (nodes + 1) as f64;
    let (pj, pk) = (poly_p(j), poly_p(k));
    (1..=nodes)
        .map(|i| {
            let theta = h * i as f64;
            let x = 2.0 * theta.cos();
            let w = 2.0 / (nodes + 1) as f64 * theta.sin().powi(2);
            w * pj.eval(x) * pk.eval(x)
        })
        .sum()
}

/// A symmetric linear map given through its action on vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for HermitianMatrix<f64> {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..self.ncols()).map(|j| self[(i, j)] * x[j]).sum();
        }
    }
}

/// `P_0(A)v, P_1(A)v, …, P_k(A)v` by `w_{j+1} = A w_j − w_{j−1}`.
pub fn poly_sequence<A: LinearOperator + ?Sized>(k: usize, a: &A, v: &[f64]) -> Result<Vec<Vec<f64>>> {
    if v.len() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: v.len(),
        });
    }
    let mut out = Vec::with_capacity(k + 1);
    out.push(v.to_vec());
    if k == 0 {
        return Ok(out);
    }
    let mut w = vec![0.0; v.len()];
    a.apply(v, &mut w);
    out.push(w);
    for j in 1..k {
        let mut next = vec![0.0; v.len()];
        a.apply(&out[j], &mut next);
        for (x, p) in next.iter_mut().zip(&out[j - 1]) {
            *x -= p;
        }
        out.push(next);
    }
    Ok(out)
}

/// `P_k(A) v` with `k` operator applications, never forming `P_k(A)`.
pub fn matrix_poly_apply<A: LinearOperator + ?Sized>(k: usize, a: &A, v: &[f64]) -> Result<Vec<f64>> {
    Ok(poly_sequence(k, a, v)?.pop().expect("sequence is non-empty"))
}
