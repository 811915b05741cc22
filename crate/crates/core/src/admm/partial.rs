//! Partially-connected design: RF chain `i` drives only subarray `i`
//! (`N_tx / N_RF` consecutive antennas), so `F_RF = blkdiag(f_1, ..., f_NRF)`.
//!
//! The block structure is built into the updates, which then decouple per
//! subarray and per antenna; no `N_RF x N_RF` inverse is needed.

use std::ops::Range;

use super::{project_entry, random_unit_modulus, run_iterations, AdmmConfig, HybridFactors, Structure};
use crate::error::{Error, Result};
use crate::numerics::{frobenius_sq, real, ComplexMatrix, ComplexVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct PartialState {
    /// Per-chain analog weights `f_i`, each of length `N_tx / N_RF`.
    pub f_vecs: Vec<ComplexVector>,
    pub f_bb: ComplexMatrix,
    pub r_vecs: Vec<ComplexVector>,
    pub w_vecs: Vec<ComplexVector>,
}

/// `blkdiag(f_1, ..., f_n)`: column `i` holds `f_i` in rows
/// `i*m .. (i+1)*m`.
pub fn assemble_block_diag(f_vecs: &[ComplexVector]) -> Result<ComplexMatrix> {
    let m = f_vecs.first().map(|v| v.len()).unwrap_or(0);
    if m == 0 || f_vecs.iter().any(|v| v.len() != m) {
        return Err(Error::Dimension("subarray vectors must be non-empty and equal length".into()));
    }
    let n = f_vecs.len();
    let mut out = ComplexMatrix::zeros(n * m, n);
    for (i, v) in f_vecs.iter().enumerate() {
        out.view_mut((i * m, i), (m, 1)).copy_from(v);
    }
    Ok(out)
}

fn blocks(n_tx: usize, n_rf: usize) -> Vec<Range<usize>> {
    let m = n_tx / n_rf;
    (0..n_rf).map(|i| i * m..(i + 1) * m).collect()
}

fn row_norm_sq(m: &ComplexMatrix, i: usize) -> f64 {
    m.row(i).iter().map(|z| z.norm_sqr()).sum()
}

/// Per-antenna analog update. Entry `j` of chain `i`:
///
/// `(T[row, :] F_BB[i, :]^H + rho (r_ij - w_ij)) / (||F_BB[i, :]||^2 + rho)`
pub fn step_f_vecs(state: &PartialState, target: &ComplexMatrix, rho: f64) -> Vec<ComplexVector> {
    let n_rf = state.f_vecs.len();
    blocks(target.nrows(), n_rf)
        .into_iter()
        .enumerate()
        .map(|(i, rows)| {
            let bb = state.f_bb.row(i);
            let denom = row_norm_sq(&state.f_bb, i) + rho;
            ComplexVector::from_iterator(
                rows.len(),
                rows.clone().enumerate().map(|(j, row)| {
                    let corr: C64 = target
                        .row(row)
                        .iter()
                        .zip(bb.iter())
                        .map(|(t, b)| t * b.conj())
                        .sum();
                    (corr + (state.r_vecs[i][j] - state.w_vecs[i][j]) * rho) / denom
                }),
            )
        })
        .collect()
}

/// Per-row digital update: `F_BB[i, :] = ||f_i||^{-2} f_i^H T[block i, :]`.
pub fn step_f_bb(f_vecs: &[ComplexVector], target: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n_rf = f_vecs.len();
    let mut f_bb = ComplexMatrix::zeros(n_rf, target.ncols());
    for (i, rows) in blocks(target.nrows(), n_rf).into_iter().enumerate() {
        let f = &f_vecs[i];
        let norm_sq = f.norm_squared();
        if !(norm_sq > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: i, size: n_rf });
        }
        let block = target.rows(rows.start, rows.len());
        let row = f.adjoint() * block * real(1.0 / norm_sq);
        f_bb.set_row(i, &row);
    }
    Ok(f_bb)
}

/// Objective at analog vectors `vecs`:
/// `sum_rows ||T[row, :] - v_row F_BB[chain(row), :]||^2`.
pub fn objective(target: &ComplexMatrix, vecs: &[ComplexVector], f_bb: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for (i, rows) in blocks(target.nrows(), vecs.len()).into_iter().enumerate() {
        for (j, row) in rows.enumerate() {
            let a = vecs[i][j];
            acc += target
                .row(row)
                .iter()
                .zip(f_bb.row(i).iter())
                .map(|(t, b)| (t - a * b).norm_sqr())
                .sum::<f64>();
        }
    }
    acc
}

fn check_partial(n_tx: usize, n_s: usize, n_rf: usize) -> Result<()> {
    if n_rf == 0 || n_s == 0 || n_s > n_rf {
        return Err(Error::Dimension(format!("need 1 <= N_s ({n_s}) <= N_RF ({n_rf})")));
    }
    if n_tx % n_rf != 0 || n_tx < n_rf {
        return Err(Error::Dimension(format!(
            "N_tx ({n_tx}) must be a positive multiple of N_RF ({n_rf})"
        )));
    }
    Ok(())
}

impl PartialState {
    pub fn init(target: &ComplexMatrix, n_rf: usize, cfg: &AdmmConfig) -> Result<Self> {
        check_partial(target.nrows(), target.ncols(), n_rf)?;
        let m = target.nrows() / n_rf;
        // chain-major draw of the on-block phases
        let phases = random_unit_modulus(n_rf, m, cfg.seed, cfg.phase_bits);
        let f_vecs: Vec<ComplexVector> = (0..n_rf).map(|i| phases.row(i).transpose()).collect();
        let f_bb = step_f_bb(&f_vecs, target)?;
        Ok(Self {
            r_vecs: f_vecs.clone(),
            w_vecs: vec![ComplexVector::zeros(m); n_rf],
            f_vecs,
            f_bb,
        })
    }

    pub fn iterate(&mut self, target: &ComplexMatrix, cfg: &AdmmConfig) -> Result<()> {
        self.f_vecs = step_f_vecs(self, target, cfg.rho);
        self.f_bb = step_f_bb(&self.f_vecs, target)?;
        for i in 0..self.f_vecs.len() {
            let r = (&self.f_vecs[i] + &self.w_vecs[i]).map(|z| project_entry(z, cfg.phase_bits));
            self.w_vecs[i] += &self.f_vecs[i] - &r;
            self.r_vecs[i] = r;
        }
        Ok(())
    }

    pub fn objective(&self, target: &ComplexMatrix) -> f64 {
        objective(target, &self.r_vecs, &self.f_bb)
    }

    pub fn primal_residual(&self) -> f64 {
        self.f_vecs
            .iter()
            .zip(&self.r_vecs)
            .map(|(f, r)| (f - r).norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

/// Partially-connected hybrid factorization. Requires `N_tx` divisible by
/// `n_rf`. With `normalize_power`, `||F_BB||_F^2 = N_s N_RF / N_tx`, which
/// gives `||F_RF F_BB||_F^2 = N_s`.
pub fn design_partially_connected(
    target: &ComplexMatrix,
    n_rf: usize,
    cfg: &AdmmConfig,
    normalize_power: bool,
) -> Result<HybridFactors> {
    cfg.validate()?;
    let cfg = &cfg.resolved(frobenius_sq(target), target.nrows());
    let mut state = PartialState::init(target, n_rf, cfg)?;
    let (trace, iterations) = run_iterations(
        &mut state,
        cfg,
        |s| s.objective(target),
        |s| s.primal_residual(),
        |s| s.iterate(target, cfg),
    )?;

    let f_rf = assemble_block_diag(&state.r_vecs)?;
    let inv_norms = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n_rf,
        state.r_vecs.iter().map(|r| real(1.0 / r.norm_squared())),
    ));
    let mut f_bb = inv_norms * f_rf.adjoint() * target;
    let objective = frobenius_sq(&(target - &f_rf * &f_bb));
    if normalize_power {
        let p = frobenius_sq(&f_bb);
        let n_s = target.ncols() as f64;
        let goal = n_s * n_rf as f64 / target.nrows() as f64;
        if p > 0.0 {
            f_bb *= real((goal / p).sqrt());
        }
    }
    Ok(HybridFactors {
        f_rf,
        f_bb: vec![f_bb],
        structure: Structure::PartiallyConnected,
        trace,
        iterations,
        objective,
    })
}

/// Projection onto block-diagonal unit-modulus matrices with `n_rf` equal
/// blocks. Off-block entries are zeroed.
pub fn project_block_structure(x: &ComplexMatrix, n_rf: usize, phase_bits: Option<u32>) -> ComplexMatrix {
    let m = x.nrows() / n_rf;
    ComplexMatrix::from_fn(x.nrows(), x.ncols(), |row, col| {
        if row / m == col {
            project_entry(x[(row, col)], phase_bits)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admm::full::{self, AdmmState};
    use crate::channel::ChannelModel;
    use crate::digital::optimal_factors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(m, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn unit_vec(rng: &mut ChaCha8Rng, m: usize) -> ComplexVector {
        ComplexVector::from_fn(m, |_, _| C64::from_polar(1.0, rng.random_range(0.0..6.28)))
    }

    #[test]
    fn block_diag_layouts() {
        let v = ComplexVector::from_vec(vec![real(1.0), C64::new(0.0, 1.0), real(2.0)]);
        let one = assemble_block_diag(std::slice::from_ref(&v)).unwrap();
        assert_eq!(one.ncols(), 1);
        assert_eq!(one.column(0), v.column(0));

        let j = C64::new(0.0, 1.0);
        let a = ComplexVector::from_vec(vec![real(1.0), j]);
        let b = ComplexVector::from_vec(vec![real(-1.0), -j]);
        let m = assemble_block_diag(&[a, b]).unwrap();
        let zero = real(0.0);
        let expect = ComplexMatrix::from_row_slice(4, 2, &[real(1.0), zero, j, zero, zero, real(-1.0), zero, -j]);
        assert_eq!(m, expect);
        assert!((m.adjoint() * &m - crate::numerics::identity(2) * real(2.0)).norm() < 1e-15);
    }

    #[test]
    fn block_diag_rejects_ragged() {
        let a = ComplexVector::zeros(2);
        let b = ComplexVector::zeros(3);
        assert!(assemble_block_diag(&[a, b]).is_err());
        assert!(assemble_block_diag(&[]).is_err());
    }

    #[test]
    fn rejects_indivisible() {
        let t = ComplexMatrix::zeros(9, 2);
        assert!(design_partially_connected(&t, 2, &AdmmConfig::default(), true).is_err());
    }

    #[test]
    fn digital_update_matches_full_least_squares() {
        // disjoint supports make the block LS equal to the dense LS
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vecs: Vec<_> = (0..3).map(|_| unit_vec(&mut rng, 4)).collect();
        let t = random(&mut rng, 12, 2);
        let bb = step_f_bb(&vecs, &t).unwrap();
        let dense = full::least_squares_fbb(&assemble_block_diag(&vecs).unwrap(), &t).unwrap();
        assert!((bb - dense).norm() < 1e-12);
    }

    #[test]
    fn analog_update_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (n_rf, m, n_s) = (3, 4, 2);
        let t = random(&mut rng, n_rf * m, n_s);
        let state = PartialState {
            f_vecs: (0..n_rf).map(|_| unit_vec(&mut rng, m)).collect(),
            f_bb: random(&mut rng, n_rf, n_s),
            r_vecs: (0..n_rf).map(|_| unit_vec(&mut rng, m)).collect(),
            w_vecs: (0..n_rf).map(|_| unit_vec(&mut rng, m) * real(0.2)).collect(),
        };
        let rho = 0.7;
        let next = step_f_vecs(&state, &t, rho);
        // per-entry Lagrangian term
        let term = |i: usize, j: usize, x: C64| {
            let row = i * m + j;
            let fit: f64 = (0..n_s).map(|c| (t[(row, c)] - x * state.f_bb[(i, c)]).norm_sqr()).sum();
            fit + rho * (x - state.r_vecs[i][j] + state.w_vecs[i][j]).norm_sqr()
        };
        let h = 1e-6;
        for i in 0..n_rf {
            for j in 0..m {
                let x = next[i][j];
                for d in [C64::new(h, 0.0), C64::new(0.0, h)] {
                    let g = (term(i, j, x + d) - term(i, j, x - d)) / (2.0 * h);
                    assert!(g.abs() < 1e-6, "derivative {g}");
                }
            }
        }
    }

    #[test]
    fn exact_block_factorization_is_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n_rf, m, n_s) = (2, 4, 2);
        let vecs: Vec<_> = (0..n_rf).map(|_| unit_vec(&mut rng, m)).collect();
        let bb = random(&mut rng, n_rf, n_s);
        let t = assemble_block_diag(&vecs).unwrap() * bb;
        let best = (0..3)
            .map(|seed| {
                let cfg = AdmmConfig {
                    max_iters: 1000,
                    tau: 0.0,
                    seed,
                    ..Default::default()
                };
                design_partially_connected(&t, n_rf, &cfg, false)
                    .unwrap()
                    .objective
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-6, "objective {best}");
    }

    #[test]
    fn output_structure_and_power() {
        let ch = ChannelModel::new(4, 2).realize(5, 1);
        let opt = optimal_factors(ch.narrowband(), 2).unwrap();
        let out = design_partially_connected(&opt.f_opt, 4, &AdmmConfig::default(), true).unwrap();
        for r in 0..16 {
            for c in 0..4 {
                let z = out.f_rf[(r, c)];
                if r / 4 == c {
                    assert!((z.norm() - 1.0).abs() < 1e-12);
                } else {
                    assert_eq!(z, real(0.0));
                }
            }
        }
        assert!((frobenius_sq(&out.composite(0)) - 2.0).abs() < 1e-9);
        let gram = out.f_rf.adjoint() * &out.f_rf;
        assert!((gram - crate::numerics::identity(4) * real(4.0)).norm() < 1e-10);
    }

    #[test]
    fn iterates_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random(&mut rng, 12, 2);
        let cfg = AdmmConfig::default();
        let mut s = PartialState::init(&t, 3, &cfg).unwrap();
        for _ in 0..10 {
            let prev = s.w_vecs.clone();
            s.iterate(&t, &cfg).unwrap();
            for i in 0..3 {
                assert!(s.r_vecs[i].iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
                let gap = &s.w_vecs[i] - &prev[i] - (&s.f_vecs[i] - &s.r_vecs[i]);
                assert!(gap.iter().all(|z| z.norm() < 1e-15));
            }
        }
    }

    /// The dense fully-connected iteration with its projection swapped for
    /// the block-structure projection, used as an independent reference.
    fn generic_block_design(target: &ComplexMatrix, n_rf: usize, cfg: &AdmmConfig) -> f64 {
        let n_tx = target.nrows();
        let cfg = &cfg.resolved(frobenius_sq(target), n_tx);
        let init = PartialState::init(target, n_rf, cfg).unwrap();
        let f_rf = assemble_block_diag(&init.f_vecs).unwrap();
        let mut s = AdmmState {
            f_bb: full::least_squares_fbb(&f_rf, target).unwrap(),
            r: f_rf.clone(),
            w: ComplexMatrix::zeros(n_tx, n_rf),
            f_rf,
        };
        let mut prev = s.objective(target);
        for _ in 0..cfg.max_iters {
            s.iterate_with(target, cfg.rho, |x| project_block_structure(x, n_rf, None)).unwrap();
            let obj = s.objective(target);
            if (prev - obj).abs() < cfg.tau {
                break;
            }
            prev = obj;
        }
        let bb = full::least_squares_fbb(&s.r, target).unwrap();
        full::objective(target, &s.r, &bb)
    }

    #[test]
    fn agrees_with_generic_block_projection() {
        let cfg = AdmmConfig::default();
        let model = ChannelModel::new(4, 2);
        let (mut specialized, mut generic) = (0.0, 0.0);
        for seed in 0..50 {
            let ch = model.realize(1000 + seed, 1);
            let opt = optimal_factors(ch.narrowband(), 2).unwrap();
            let c = cfg.with_seed(seed);
            specialized += design_partially_connected(&opt.f_opt, 4, &c, false).unwrap().objective;
            generic += generic_block_design(&opt.f_opt, 4, &c);
        }
        let rel = (specialized - generic).abs() / generic;
        assert!(rel < 0.10, "specialized {specialized} generic {generic}");
    }
}
