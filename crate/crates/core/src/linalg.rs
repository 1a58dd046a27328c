//! Dense linear-algebra helpers shared by the solver and the Gaussian algebra.

use nalgebra::{DMatrix, Dyn, LU};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative residual accepted from a linear solve before it is reported as a
/// numerical failure.
const SOLVE_RESIDUAL_TOL: f64 = 1e-8;

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `a^{-1} b` with an explicit residual check.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let lu = LU::new(a.clone());
    let x = lu
        .solve(b)
        .ok_or_else(|| Error::numerical("singular matrix in linear solve"))?;
    let resid = max_abs(&(a * &x - b));
    let scale = max_abs(b).max(1.0) * max_abs(a).max(1.0);
    if !resid.is_finite() || resid > SOLVE_RESIDUAL_TOL * scale {
        return Err(Error::numerical(format!(
            "linear solve residual {resid:.3e} exceeds tolerance"
        )));
    }
    Ok(x)
}

/// `b a^{-1}`, computed as `(a^T \ b^T)^T`.
pub fn solve_right(b: &CMatrix, a: &CMatrix) -> Result<CMatrix> {
    Ok(solve(&a.transpose(), &b.transpose())?.transpose())
}

/// Natural log of a complex determinant, accumulated from the LU pivots so
/// that large and tiny determinants do not overflow.
pub fn log_det(a: &CMatrix) -> Result<Complex64> {
    let n = a.nrows();
    let lu: LU<Complex64, Dyn, Dyn> = LU::new(a.clone());
    let u = lu.u();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let d = u[(i, i)];
        if d.norm() == 0.0 || !d.norm().is_finite() {
            return Err(Error::numerical("zero pivot in determinant"));
        }
        acc += d.ln();
    }
    if lu.p().determinant::<f64>() < 0.0 {
        acc += Complex64::new(0.0, std::f64::consts::PI);
    }
    Ok(acc)
}

pub fn has_nan(m: &CMatrix) -> bool {
    m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
}
