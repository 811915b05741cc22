//! Unconstrained (fully digital) precoder/combiner and the achievable-rate
//! evaluator used to score every design.

use crate::error::{Error, Result};
use crate::numerics::{self, frobenius_sq, hermitian_part, real, ComplexMatrix};

/// Smallest/largest singular value ratio below which a combiner is rejected.
pub const COMBINER_RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OptimalFactors {
    /// First `n_s` right singular vectors of `H` (`N_tx x n_s`).
    pub f_opt: ComplexMatrix,
    /// First `n_s` left singular vectors of `H` (`N_rx x n_s`).
    pub w_opt: ComplexMatrix,
    pub singular_values: Vec<f64>,
}

pub fn optimal_factors(h: &ComplexMatrix, n_s: usize) -> Result<OptimalFactors> {
    let rank_cap = h.nrows().min(h.ncols());
    if n_s == 0 || n_s > rank_cap {
        return Err(Error::Dimension(format!(
            "n_s = {n_s} must lie in 1..={rank_cap} for a {}x{} channel",
            h.nrows(),
            h.ncols()
        )));
    }
    let svd = numerics::svd(h)?;
    Ok(OptimalFactors {
        f_opt: svd.v.columns(0, n_s).into_owned(),
        w_opt: svd.u.columns(0, n_s).into_owned(),
        singular_values: svd.singular_values.iter().copied().collect(),
    })
}

/// Achievable rate in bits/s/Hz with Gaussian signalling:
///
/// `log2 det(I + snr/n_s * R_n^{-1} Wc^H H F F^H H^H Wc)`, `R_n = Wc^H Wc`.
///
/// `f` and `wc` are the composite precoder and combiner. The determinant is
/// evaluated as `logdet(R_n + snr/n_s G G^H) - logdet(R_n)` with
/// `G = Wc^H H F`, so both arguments stay Hermitian positive definite.
pub fn spectral_efficiency(
    h: &ComplexMatrix,
    f: &ComplexMatrix,
    wc: &ComplexMatrix,
    snr: f64,
    n_s: usize,
) -> Result<f64> {
    if f.nrows() != h.ncols() || wc.nrows() != h.nrows() || f.ncols() != n_s || wc.ncols() != n_s {
        return Err(Error::Dimension(format!(
            "H {}x{}, F {}x{}, W {}x{}, n_s {n_s}",
            h.nrows(),
            h.ncols(),
            f.nrows(),
            f.ncols(),
            wc.nrows(),
            wc.ncols()
        )));
    }
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(Error::Config(format!("snr must be finite and >= 0, got {snr}")));
    }
    let sv = wc.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin >= COMBINER_RANK_RTOL * smax) || smax == 0.0 {
        return Err(Error::DegenerateCombiner {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    let rn = hermitian_part(&(wc.adjoint() * wc));
    let g = wc.adjoint() * h * f;
    let signal = hermitian_part(&(&g * g.adjoint()));
    let total = &rn + signal * real(snr / n_s as f64);
    Ok((numerics::logdet2(&total)? - numerics::logdet2(&rn)?).max(0.0))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `||F||_F^2`, the transmit power of a composite precoder.
pub fn power(f: &ComplexMatrix) -> f64 {
    frobenius_sq(f)
}
