//! Thin numeric helpers over `faer` for complex dense matrices.

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
}

pub fn zeros(r: usize, c: usize) -> CMat {
    Mat::zeros(r, c)
}

pub fn scale(m: &CMat, s: c64) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint().to_owned()
}

/// Frobenius norm.
pub fn frobenius(m: &CMat) -> f64 {
    m.norm_l2()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.norm_max()
}

/// Below this smaller dimension singular values come from the Hermitian
/// eigensolver. faer's SVD loses small singular values of some structured
/// matrices of order 128 to 272 (errors near 1e-6 relative), which breaks
/// rank decisions; the eigensolver route stays at `ε·σ_max`.
pub const AUGMENTED_SVD_LIMIT: usize = 384;

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return Ok(Vec::new());
    }
    if r.min(c) <= AUGMENTED_SVD_LIMIT {
        return augmented_singular_values(m);
    }
    m.singular_values()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))
}

/// Singular values as the nonnegative eigenvalues of `[[0, M], [M*, 0]]`,
/// whose spectrum is `±σᵢ` padded with zeros.
fn augmented_singular_values(m: &CMat) -> Result<Vec<f64>> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut aug = zeros(r + c, r + c);
    aug.as_mut().submatrix_mut(0, r, r, c).copy_from(m.as_ref());
    aug.as_mut().submatrix_mut(r, 0, c, r).copy_from(m.adjoint());
    let ev = hermitian_eigenvalues(&aug)?;
    Ok(ev.iter().rev().take(r.min(c)).map(|&x| x.max(0.0)).collect())
}

/// Eigenvalues (nondecreasing) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian evd: {e:?}")))?;
    let s = evd.S().column_vector();
    let vals = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian evd: {e:?}")))
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(m: &CMat) -> Result<Vec<c64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.eigenvalues()
        .map_err(|e| Error::Numerical(format!("evd: {e:?}")))
}

pub fn inverse(m: &CMat) -> CMat {
    m.partial_piv_lu().inverse()
}

/// Solves `m x = rhs` by partial-pivoting LU.
pub fn solve(m: &CMat, rhs: &CMat) -> CMat {
    use faer::linalg::solvers::Solve;
    m.partial_piv_lu().solve(rhs)
}

/// `B^{-1/2}` for a Hermitian positive definite `B`; `None` when the
/// smallest eigenvalue is below `rel_tol` times the largest.
pub fn inv_sqrt_psd(m: &CMat, rel_tol: f64) -> Result<Option<CMat>> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let top = vals.iter().cloned().fold(0.0_f64, f64::max);
    if top <= 0.0 || vals.iter().any(|&v| !(v > rel_tol * top)) {
        return Ok(None);
    }
    let n = m.nrows();
    let scaled = Mat::from_fn(n, n, |i, j| vecs[(i, j)] * (1.0 / vals[j].sqrt()));
    Ok(Some(&scaled * vecs.adjoint()))
}

/// Relative distance from Hermitian: `‖M − M*‖_F / ‖M‖_F`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let norm = frobenius(m);
    if norm == 0.0 {
        return 0.0;
    }
    let diff = m - m.adjoint();
    frobenius(&diff) / norm
}

/// Relative normality defect `‖MM* − M*M‖_F / ‖M‖_F²`.
pub fn normality_defect(m: &CMat) -> f64 {
    let norm = frobenius(m);
    if norm == 0.0 {
        return 0.0;
    }
    let a = m * m.adjoint();
    let b = m.adjoint() * m;
    frobenius(&(&a - &b)) / (norm * norm)
}

/// Kronecker product `a ⊗ b` with `a` the outer (block) factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (p, q) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * p, a.ncols() * q, |i, j| a[(i / p, j / q)] * b[(i % p, j % q)])
}

/// Adds `coeff ⊗ x` into `out` in place, skipping zero coefficients.
pub fn add_kron_into(out: &mut CMat, coeff: &CMat, x: &CMat) {
    let (p, q) = (x.nrows(), x.ncols());
    for bi in 0..coeff.nrows() {
        for bj in 0..coeff.ncols() {
            let c = coeff[(bi, bj)];
            if c == c64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..p {
                for j in 0..q {
                    out[(bi * p + i, bj * q + j)] += c * x[(i, j)];
                }
            }
        }
    }
}
