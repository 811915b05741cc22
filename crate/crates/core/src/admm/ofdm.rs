//! Wideband design for OFDM: one analog `F_RF` shared by all `K`
//! subcarriers and a digital `F_BB[k]` per subcarrier, fitted jointly to the
//! per-subcarrier targets `F_opt[k]`.

use super::full::{least_squares_fbb, objective as fit, project_unit_modulus};
use super::{check_dims, normalize_power, random_unit_modulus, run_iterations, AdmmConfig, HybridFactors, Structure};
use crate::error::{Error, Result};
use crate::numerics::{frobenius_sq, identity, real, solve_hpd_right, ComplexMatrix};

#[derive(Debug, Clone)]
pub struct WidebandTargets {
    targets: Vec<ComplexMatrix>,
}

impl WidebandTargets {
    pub fn new(targets: Vec<ComplexMatrix>) -> Result<Self> {
        let first = targets
            .first()
            .ok_or_else(|| Error::Dimension("at least one subcarrier target is required".into()))?;
        let shape = first.shape();
        if let Some((k, m)) = targets.iter().enumerate().find(|(_, m)| m.shape() != shape) {
            return Err(Error::Dimension(format!(
                "target {k} is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                shape.0,
                shape.1
            )));
        }
        Ok(Self { targets })
    }

    pub fn as_slice(&self) -> &[ComplexMatrix] {
        &self.targets
    }

    pub fn subcarriers(&self) -> usize {
        self.targets.len()
    }

    pub fn n_tx(&self) -> usize {
        self.targets[0].nrows()
    }

    pub fn n_s(&self) -> usize {
        self.targets[0].ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidebandState {
    pub f_rf: ComplexMatrix,
    pub f_bb: Vec<ComplexMatrix>,
    pub r: ComplexMatrix,
    pub w: ComplexMatrix,
}

/// Analog update minimizing the summed augmented Lagrangian:
/// `[sum_k T_k F_BB[k]^H + rho (R - W)] (sum_k F_BB[k] F_BB[k]^H + rho I)^{-1}`.
pub fn step_frf_wideband(state: &WidebandState, targets: &[ComplexMatrix], rho: f64) -> Result<ComplexMatrix> {
    let n_rf = state.r.ncols();
    let mut rhs = &targets[0] * state.f_bb[0].adjoint();
    let mut gram = &state.f_bb[0] * state.f_bb[0].adjoint();
    for (t, bb) in targets.iter().zip(&state.f_bb).skip(1) {
        let bb_h = bb.adjoint();
        rhs += t * &bb_h;
        gram += bb * bb_h;
    }
    rhs += (&state.r - &state.w) * real(rho);
    gram += identity(n_rf) * real(rho);
    solve_hpd_right(&rhs, &gram)
}

/// `sum_k ||T_k - X F_BB[k]||_F^2`
pub fn summed_objective(targets: &[ComplexMatrix], analog: &ComplexMatrix, f_bb: &[ComplexMatrix]) -> f64 {
    targets.iter().zip(f_bb).map(|(t, bb)| fit(t, analog, bb)).sum()
}

fn per_subcarrier_ls(f_rf: &ComplexMatrix, targets: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    targets.iter().map(|t| least_squares_fbb(f_rf, t)).collect()
}

impl WidebandState {
    /// Same random analog start as the narrowband design for a given seed.
    pub fn init(targets: &WidebandTargets, n_rf: usize, cfg: &AdmmConfig) -> Result<Self> {
        let f_rf = random_unit_modulus(targets.n_tx(), n_rf, cfg.seed, cfg.phase_bits);
        let f_bb = per_subcarrier_ls(&f_rf, targets.as_slice())?;
        Ok(Self {
            r: f_rf.clone(),
            w: ComplexMatrix::zeros(f_rf.nrows(), n_rf),
            f_rf,
            f_bb,
        })
    }

    pub fn iterate(&mut self, targets: &WidebandTargets, cfg: &AdmmConfig) -> Result<()> {
        let t = targets.as_slice();
        self.f_rf = step_frf_wideband(self, t, cfg.rho)?;
        self.f_bb = per_subcarrier_ls(&self.f_rf, t)?;
        self.r = project_unit_modulus(&(&self.f_rf + &self.w), cfg.phase_bits);
        self.w += &self.f_rf - &self.r;
        Ok(())
    }

    pub fn objective(&self, targets: &WidebandTargets) -> f64 {
        summed_objective(targets.as_slice(), &self.r, &self.f_bb)
    }

    pub fn primal_residual(&self) -> f64 {
        (&self.f_rf - &self.r).norm()
    }
}

/// Joint design over all subcarriers. With `normalize_power`, every
/// `F_BB[k]` is scaled independently so `||F_RF F_BB[k]||_F^2 = N_s`.
pub fn design_wideband(
    targets: &WidebandTargets,
    n_rf: usize,
    cfg: &AdmmConfig,
    normalize: bool,
) -> Result<HybridFactors> {
    cfg.validate()?;
    check_dims(targets.n_tx(), targets.n_s(), n_rf)?;
    let energy: f64 = targets.as_slice().iter().map(frobenius_sq).sum();
    let cfg = &cfg.resolved(energy, targets.n_tx() * n_rf);
    let mut state = WidebandState::init(targets, n_rf, cfg)?;
    let (trace, iterations) = run_iterations(
        &mut state,
        cfg,
        |s| s.objective(targets),
        |s| s.primal_residual(),
        |s| s.iterate(targets, cfg),
    )?;

    let f_rf = state.r;
    let mut f_bb = match per_subcarrier_ls(&f_rf, targets.as_slice()) {
        Ok(v) => v,
        Err(e) => {
            return Err(Error::Design {
                iterations,
                trace,
                source: Box::new(e),
            })
        }
    };
    let objective = summed_objective(targets.as_slice(), &f_rf, &f_bb);
    if normalize {
        let n_s = targets.n_s() as f64;
        for bb in &mut f_bb {
            normalize_power(&f_rf, bb, n_s);
        }
    }
    Ok(HybridFactors {
        f_rf,
        f_bb,
        structure: Structure::FullyConnected,
        trace,
        iterations,
        objective,
    })
}
