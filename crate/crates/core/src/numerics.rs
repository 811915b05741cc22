//! Dense complex linear-algebra kernels shared by the channel, baseline and
//! design modules.
//!
//! Everything here is a thin contract over `nalgebra`; callers only rely on
//! the post-conditions documented on each function.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Cholesky pivots with `l_ii^2 < PIVOT_RTOL * max(diag(A))` are treated as
/// rank deficient.
const PIVOT_RTOL: f64 = 1e-13;

/// Thin singular value decomposition `A = U diag(S) V^H`.
///
/// `S` is sorted in decreasing order. No phase normalization is applied to
/// the singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: DVector<f64>,
    pub v: ComplexMatrix,
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    // nalgebra's `svd` sorts singular values in decreasing order.
    let dec = a.clone().svd(true, true);
    let u = dec.u.ok_or_else(|| Error::Dimension("svd did not return U".into()))?;
    let v_t = dec
        .v_t
        .ok_or_else(|| Error::Dimension("svd did not return V^H".into()))?;
    Ok(Svd {
        u,
        singular_values: dec.singular_values,
        v: v_t.adjoint(),
    })
}

fn cholesky(a: &ComplexMatrix) -> Result<Cholesky<C64, nalgebra::Dyn>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    let n = a.nrows();
    let chol = Cholesky::new(a.clone()).ok_or(Error::NotPositiveDefinite { pivot: 0, size: n })?;
    let scale = (0..n).map(|i| a[(i, i)].re.abs()).fold(0.0, f64::max);
    let l = chol.l_dirty();
    for i in 0..n {
        let pivot = l[(i, i)].re;
        if !(pivot * pivot >= PIVOT_RTOL * scale) || scale == 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: i, size: n });
        }
    }
    Ok(chol)
}

/// Solves `A X = B` for Hermitian positive definite `A`.
pub fn solve_hpd(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.nrows() != a.nrows() {
        return Err(Error::Dimension(format!(
            "solve_hpd: A is {}x{}, B has {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    if !is_finite(b) {
        return Err(Error::NonFinite);
    }
    Ok(cholesky(a)?.solve(b))
}

/// Solves `X A = B` for Hermitian positive definite `A`.
///
/// Uses `A^H = A`, so `X = (A^{-1} B^H)^H`.
pub fn solve_hpd_right(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.ncols() != a.nrows() {
        return Err(Error::Dimension(format!(
            "solve_hpd_right: A is {}x{}, B has {} columns",
            a.nrows(),
            a.ncols(),
            b.ncols()
        )));
    }
    Ok(solve_hpd(a, &b.adjoint())?.adjoint())
}

/// `log2 det(A)` for Hermitian positive definite `A`, from the Cholesky
/// factor: `2 * sum(log2 l_ii)`.
pub fn logdet2(a: &ComplexMatrix) -> Result<f64> {
    let chol = cholesky(a)?;
    let l = chol.l_dirty();
    Ok(2.0 * (0..a.nrows()).map(|i| l[(i, i)].re.log2()).sum::<f64>())
}

/// `(A + A^H) / 2`
pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

pub fn frobenius_sq(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest entry modulus.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}
