//! Small dense complex linear algebra shared by the analysis modules.
//!
//! Matrix orders equal the number of leftward transport speeds and stay tiny
//! (the case study has order one), so everything is dense and allocation per
//! call is acceptable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<Complex64>;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real matrix promoted to a complex one.
pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Complex identity of order `n`.
pub fn ceye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Determinant by pivoted LU elimination.
pub fn det(m: &CMat) -> Complex64 {
    debug_assert_eq!(m.nrows(), m.ncols());
    match m.nrows() {
        0 => Complex64::new(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

/// Eigenvalues of a small complex matrix.
///
/// Orders one and two are closed-form; larger matrices go through the QR
/// algorithm (Schur form).
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    debug_assert_eq!(m.nrows(), m.ncols());
    match m.nrows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let t = m[(0, 0)] + m[(1, 1)];
            let d = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = (t * t - 4.0 * d).sqrt();
            Ok(vec![(t + disc) * 0.5, (t - disc) * 0.5])
        }
        _ => m
            .clone()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::Numerical("complex QR iteration did not converge".into())),
    }
}

/// Spectral radius max |λ|.
pub fn spectral_radius(m: &CMat) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Solve `a x = b` by pivoted LU.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Numerical("singular linear system".into()))
}

/// 1-norm condition number estimate via the explicit inverse.
pub fn cond_1(a: &CMat) -> f64 {
    let norm = |m: &CMat| -> f64 {
        (0..m.ncols())
            .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match a.clone().try_inverse() {
        Some(inv) => norm(a) * norm(&inv),
        None => f64::INFINITY,
    }
}

/// Induced 2-norm (largest singular value) of a small complex matrix.
pub fn norm2(m: &CMat) -> f64 {
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    // singular values via eigenvalues of the Gram matrix
    let gram = m.adjoint() * m;
    eigenvalues(&gram)
        .map(|e| e.iter().map(|z| z.re.max(0.0)).fold(0.0, f64::max).sqrt())
        .unwrap_or(f64::NAN)
}
