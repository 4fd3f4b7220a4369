//! Floating-point illustration that `[d, x]` is the derivative at 0 of the
//! conjugation flow `λ ↦ e^{-λx} d e^{λx}`.

use crate::error::{Error, Result};

type Dense = Vec<Vec<f64>>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowRow {
    pub lambda: f64,
    /// `‖(e^{-λx} d e^{λx} - d)/λ - [d, x]‖_F`.
    pub residual: f64,
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn lin(a: &Dense, s: f64, b: &Dense, t: f64) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, q)| r.iter().zip(q).map(|(x, y)| s * x + t * y).collect())
        .collect()
}

fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn norm(a: &Dense) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub(crate) fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let nrm = norm(a);
    let squarings = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = lin(a, 0.5f64.powi(squarings as i32), a, 0.0);
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=18 {
        term = lin(&mul(&term, &scaled), 1.0 / k as f64, &term, 0.0);
        sum = lin(&sum, 1.0, &term, 1.0);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

pub fn conjugation_flow_demo(d: &[Vec<f64>], x: &[Vec<f64>], lambdas: &[f64]) -> Result<Vec<FlowRow>> {
    let n = d.len();
    if d.iter().chain(x).any(|r| r.len() != n) || x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && (d[i][j] != 0.0 || d[i][i] == d[j][j]) {
                return Err(Error::pre("d must be diagonal with distinct entries"));
            }
        }
    }
    let d: Dense = d.to_vec();
    let x: Dense = x.to_vec();
    let bracket = lin(&mul(&d, &x), 1.0, &mul(&x, &d), -1.0);
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let fwd = expm(&lin(&x, lambda, &x, 0.0));
            let back = expm(&lin(&x, -lambda, &x, 0.0));
            let moved = mul(&mul(&back, &d), &fwd);
            let quotient = lin(&moved, 1.0 / lambda, &d, -1.0 / lambda);
            FlowRow {
                lambda,
                residual: norm(&lin(&quotient, 1.0, &bracket, -1.0)),
            }
        })
        .collect())
}

/// Least-squares slope of `log residual` against `log λ`, skipping zero residuals.
pub fn loglog_slope(rows: &[FlowRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.residual > 0.0 && r.lambda > 0.0)
        .map(|r| (r.lambda.ln(), r.residual.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
