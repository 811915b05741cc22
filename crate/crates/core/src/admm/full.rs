//! Fully-connected design: every RF chain drives every antenna, so `F_RF` is
//! a dense `N_tx x N_RF` matrix of unit-modulus entries.

use super::{
    check_dims, normalize_power, project_entry, random_unit_modulus, run_iterations, AdmmConfig,
    HybridFactors, Structure,
};
use crate::error::{Error, Result};
use crate::numerics::{frobenius_sq, identity, real, solve_hpd, solve_hpd_right, ComplexMatrix};

/// Iterates of one fully-connected run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub f_rf: ComplexMatrix,
    pub f_bb: ComplexMatrix,
    /// Feasible copy of `F_RF`; always unit modulus.
    pub r: ComplexMatrix,
    /// Scaled dual variable.
    pub w: ComplexMatrix,
}

pub fn project_unit_modulus(x: &ComplexMatrix, phase_bits: Option<u32>) -> ComplexMatrix {
    x.map(|z| project_entry(z, phase_bits))
}

/// `(F_RF^H F_RF)^{-1} F_RF^H F_target`, the minimizer of
/// `||F_target - F_RF F_BB||_F`.
pub fn least_squares_fbb(f_rf: &ComplexMatrix, target: &ComplexMatrix) -> Result<ComplexMatrix> {
    if f_rf.nrows() != target.nrows() {
        return Err(Error::Dimension(format!(
            "F_RF has {} rows, target has {}",
            f_rf.nrows(),
            target.nrows()
        )));
    }
    let adj = f_rf.adjoint();
    solve_hpd(&(&adj * f_rf), &(adj * target))
}

/// Closed-form minimizer of the augmented Lagrangian over `F_RF`:
/// `[T F_BB^H + rho (R - W)] (F_BB F_BB^H + rho I)^{-1}`.
pub fn step_frf(state: &AdmmState, target: &ComplexMatrix, rho: f64) -> Result<ComplexMatrix> {
    let n_rf = state.f_bb.nrows();
    let f_bb_h = state.f_bb.adjoint();
    let rhs = target * &f_bb_h + (&state.r - &state.w) * real(rho);
    let gram = &state.f_bb * f_bb_h + identity(n_rf) * real(rho);
    solve_hpd_right(&rhs, &gram)
}

/// `||T - X F_BB||_F^2`
pub fn objective(target: &ComplexMatrix, analog: &ComplexMatrix, f_bb: &ComplexMatrix) -> f64 {
    frobenius_sq(&(target - analog * f_bb))
}

impl AdmmState {
    /// Random unit-modulus `F_RF`, `R = F_RF`, least-squares `F_BB`, `W = 0`.
    pub fn init(target: &ComplexMatrix, n_rf: usize, cfg: &AdmmConfig) -> Result<Self> {
        let f_rf = random_unit_modulus(target.nrows(), n_rf, cfg.seed, cfg.phase_bits);
        let f_bb = least_squares_fbb(&f_rf, target)?;
        Ok(Self {
            r: f_rf.clone(),
            w: ComplexMatrix::zeros(f_rf.nrows(), n_rf),
            f_rf,
            f_bb,
        })
    }

    /// One pass of the four updates, with `cfg.rho` used as given.
    pub fn iterate(&mut self, target: &ComplexMatrix, cfg: &AdmmConfig) -> Result<()> {
        self.iterate_with(target, cfg.rho, |x| project_unit_modulus(x, cfg.phase_bits))
    }

    /// Same as [`AdmmState::iterate`] with a caller-supplied projection for
    /// the `R` update.
    pub(crate) fn iterate_with(
        &mut self,
        target: &ComplexMatrix,
        rho: f64,
        project: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<()> {
        self.f_rf = step_frf(self, target, rho)?;
        self.f_bb = least_squares_fbb(&self.f_rf, target)?;
        self.r = project(&(&self.f_rf + &self.w));
        self.w += &self.f_rf - &self.r;
        Ok(())
    }

    pub fn objective(&self, target: &ComplexMatrix) -> f64 {
        objective(target, &self.r, &self.f_bb)
    }

    pub fn primal_residual(&self) -> f64 {
        (&self.f_rf - &self.r).norm()
    }
}

/// Fully-connected hybrid factorization of `target` (`N_tx x N_s`) with
/// `n_rf` RF chains.
///
/// With `normalize_power` the digital part is rescaled so that
/// `||F_RF F_BB||_F^2 = N_s`; combiner designs leave it unscaled.
pub fn design_fully_connected(
    target: &ComplexMatrix,
    n_rf: usize,
    cfg: &AdmmConfig,
    normalize_power: bool,
) -> Result<HybridFactors> {
    cfg.validate()?;
    check_dims(target.nrows(), target.ncols(), n_rf)?;
    let cfg = &cfg.resolved(frobenius_sq(target), target.nrows() * n_rf);
    let mut state = AdmmState::init(target, n_rf, cfg)?;
    let (trace, iterations) = run_iterations(
        &mut state,
        cfg,
        |s| s.objective(target),
        |s| s.primal_residual(),
        |s| s.iterate(target, cfg),
    )?;
    finalize(state.r, target, normalize_power, trace, iterations, Structure::FullyConnected)
}

pub(crate) fn finalize(
    f_rf: ComplexMatrix,
    target: &ComplexMatrix,
    normalize: bool,
    trace: Vec<super::TraceEntry>,
    iterations: usize,
    structure: Structure,
) -> Result<HybridFactors> {
    let mut f_bb = match least_squares_fbb(&f_rf, target) {
        Ok(m) => m,
        Err(e) => {
            return Err(Error::Design {
                iterations,
                trace,
                source: Box::new(e),
            })
        }
    };
    let objective = objective(target, &f_rf, &f_bb);
    if normalize {
        normalize_power(&f_rf, &mut f_bb, target.ncols() as f64);
    }
    Ok(HybridFactors {
        f_rf,
        f_bb: vec![f_bb],
        structure,
        trace,
        iterations,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{array_response, ArrayGeometry, ChannelModel};
    use crate::digital::optimal_factors;
    use crate::numerics::{max_abs, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(m, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_state(rng: &mut ChaCha8Rng, n_tx: usize, n_rf: usize, n_s: usize) -> AdmmState {
        let r = project_unit_modulus(&random(rng, n_tx, n_rf), None);
        AdmmState {
            f_rf: random(rng, n_tx, n_rf),
            f_bb: random(rng, n_rf, n_s),
            r,
            w: random(rng, n_tx, n_rf) * real(0.3),
        }
    }

    /// Augmented Lagrangian in the scaled-dual form, up to the constant
    /// `-rho ||W||^2`.
    fn lagrangian(s: &AdmmState, f_rf: &ComplexMatrix, target: &ComplexMatrix, rho: f64) -> f64 {
        frobenius_sq(&(target - f_rf * &s.f_bb)) + rho * frobenius_sq(&(f_rf - &s.r + &s.w))
    }

    #[test]
    fn ls_hand_example() {
        let f_rf = ComplexMatrix::from_element(2, 1, real(1.0));
        let t = ComplexMatrix::from_column_slice(2, 1, &[real(1.0), real(0.0)]);
        let bb = least_squares_fbb(&f_rf, &t).unwrap();
        assert!((bb[(0, 0)] - real(0.5)).norm() < 1e-15);
        assert!((objective(&t, &f_rf, &bb) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ls_recovers_consistent_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f_rf = project_unit_modulus(&random(&mut rng, 8, 3), None);
        let b = random(&mut rng, 3, 2);
        let got = least_squares_fbb(&f_rf, &(&f_rf * &b)).unwrap();
        assert!((got - b).norm() < 1e-10);
    }

    #[test]
    fn ls_beats_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f_rf = project_unit_modulus(&random(&mut rng, 8, 3), None);
        let t = random(&mut rng, 8, 2);
        let bb = least_squares_fbb(&f_rf, &t).unwrap();
        let best = objective(&t, &f_rf, &bb);
        for _ in 0..1000 {
            let d = random(&mut rng, 3, 2) * real(1e-3);
            assert!(objective(&t, &f_rf, &(&bb + d)) >= best);
        }
    }

    #[test]
    fn ls_rejects_rank_deficient() {
        let f_rf = ComplexMatrix::from_element(4, 2, real(1.0));
        let t = ComplexMatrix::zeros(4, 1);
        assert!(least_squares_fbb(&f_rf, &t).is_err());
    }

    #[test]
    fn step_frf_zero_digital_returns_r() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = random_state(&mut rng, 6, 2, 1);
        s.f_bb = ComplexMatrix::zeros(2, 1);
        s.w = ComplexMatrix::zeros(6, 2);
        let t = random(&mut rng, 6, 1);
        let out = step_frf(&s, &t, 1.0).unwrap();
        assert!((out - &s.r).norm() < 1e-15);
    }

    #[test]
    fn step_frf_penalty_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_state(&mut rng, 6, 3, 2);
        let t = random(&mut rng, 6, 2);
        let out = step_frf(&s, &t, 1e8).unwrap();
        let lim = &s.r - &s.w;
        assert!((out - &lim).norm() / lim.norm() < 1e-6);
    }

    #[test]
    fn step_frf_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_state(&mut rng, 6, 3, 2);
        let t = random(&mut rng, 6, 2);
        let rho = 1.0;
        let x = step_frf(&s, &t, rho).unwrap();
        // central differences along every real and imaginary coordinate
        let h = 1e-6;
        let mut grad_sq = 0.0;
        for i in 0..6 {
            for j in 0..3 {
                for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    let mut p = x.clone();
                    let mut m = x.clone();
                    p[(i, j)] += dir * h;
                    m[(i, j)] -= dir * h;
                    let g = (lagrangian(&s, &p, &t, rho) - lagrangian(&s, &m, &t, rho)) / (2.0 * h);
                    grad_sq += g * g;
                }
            }
        }
        let scale = frobenius_sq(&t).max(1.0);
        assert!(grad_sq.sqrt() < 1e-6 * scale, "gradient norm {}", grad_sq.sqrt());
    }

    #[test]
    fn single_steering_vector_is_factored_exactly() {
        let g = ArrayGeometry::new(4);
        let a = array_response(&g, 0.7, 1.1);
        let n_tx = g.elements() as f64;
        // columns of F_opt are unit norm: a has unit norm already
        let target = ComplexMatrix::from_column_slice(16, 1, a.as_slice());
        let cfg = AdmmConfig {
            max_iters: 1000,
            tau: 0.0,
            ..Default::default()
        };
        let out = design_fully_connected(&target, 1, &cfg, false).unwrap();
        assert!(out.objective < 1e-8, "objective {}", out.objective);
        assert!(out.f_rf.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert!((out.f_bb()[(0, 0)].norm() - 1.0 / n_tx.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn square_analog_fits_exactly() {
        let ch = ChannelModel::new(2, 2).realize(17, 1);
        let opt = optimal_factors(ch.narrowband(), 2).unwrap();
        let best = (0..3)
            .map(|seed| {
                design_fully_connected(&opt.f_opt, 4, &AdmmConfig::default().with_seed(seed), true)
                    .unwrap()
                    .objective
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-4);
    }

    #[test]
    fn precoder_power_is_normalized() {
        let ch = ChannelModel::new(4, 2).realize(3, 1);
        let opt = optimal_factors(ch.narrowband(), 2).unwrap();
        let out = design_fully_connected(&opt.f_opt, 3, &AdmmConfig::default(), true).unwrap();
        assert!((frobenius_sq(&out.composite(0)) - 2.0).abs() < 1e-9);
        assert!(out.iterations <= 30);
        assert_eq!(out.trace.len(), out.iterations + 1);
    }

    #[test]
    fn iterates_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = random(&mut rng, 12, 2);
        let cfg = AdmmConfig::default();
        let mut s = AdmmState::init(&t, 3, &cfg).unwrap();
        for _ in 0..20 {
            let w_prev = s.w.clone();
            s.iterate(&t, &cfg).unwrap();
            assert!(s.r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
            assert!(max_abs(&(&s.w - &w_prev - (&s.f_rf - &s.r))) < 1e-15);
        }
    }

    #[test]
    fn quantized_design_stays_on_grid() {
        let ch = ChannelModel::new(4, 2).realize(8, 1);
        let opt = optimal_factors(ch.narrowband(), 2).unwrap();
        let cfg = AdmmConfig {
            phase_bits: Some(2),
            ..Default::default()
        };
        let out = design_fully_connected(&opt.f_opt, 4, &cfg, true).unwrap();
        for z in out.f_rf.iter() {
            let k = z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::FRAC_PI_2;
            assert!((k - k.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        let t = ComplexMatrix::zeros(4, 3);
        assert!(design_fully_connected(&t, 2, &AdmmConfig::default(), true).is_err());
        assert!(design_fully_connected(&t, 5, &AdmmConfig::default(), true).is_err());
    }
}
