//! ADMM hybrid precoder/combiner design.
//!
//! The design problem factors a target `F_opt` (`N_tx x N_s`) into an analog
//! matrix `F_RF` with constant-modulus entries and a digital matrix `F_BB`:
//!
//! ```text
//! min ||F_opt - F_RF F_BB||_F^2   s.t.  F_RF in U,  ||F_RF F_BB||_F^2 = N_s
//! ```
//!
//! An auxiliary copy `R` of `F_RF` carries the unit-modulus constraint and a
//! scaled dual `W` ties the two together. Each iteration is a closed-form
//! `F_RF` update, a least-squares `F_BB` update, a projection of `F_RF + W`
//! onto the feasible set, and a dual ascent step. The power constraint is
//! enforced once, after the loop.
//!
//! * [`full`]: fully-connected analog network (dense `F_RF`).
//! * [`partial`]: partially-connected network (block diagonal `F_RF`),
//!   updated per subarray.
//! * [`ofdm`]: one shared `F_RF` with a digital matrix per subcarrier.

pub mod full;
pub mod ofdm;
pub mod partial;

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::rng_from_seed;
use crate::error::{Error, Result};
use crate::numerics::{frobenius_sq, real, ComplexMatrix, C64};

pub use full::{design_fully_connected, least_squares_fbb, project_unit_modulus, step_frf, AdmmState};
pub use ofdm::{design_wideband, WidebandState, WidebandTargets};
pub use partial::{assemble_block_diag, design_partially_connected, PartialState};

fn default_rho() -> f64 {
    1.0
}
fn default_max_iters() -> usize {
    30
}
fn default_tau() -> f64 {
    1e-3
}

/// How the configured `rho` is turned into the penalty used by the updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyScale {
    /// `rho * ||F_target||_F^2 / ||F_RF||_F^2`. The iterates are then
    /// unchanged by rescaling the target or the analog entries.
    #[default]
    Relative,
    /// `rho` as given.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmmConfig {
    /// Penalty on `F_RF - R`.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub penalty_scale: PenaltyScale,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Stagnation tolerance on the feasible-point objective; `0` disables
    /// early termination.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Resolution of quantized phase shifters; `None` means continuous phase.
    #[serde(default)]
    pub phase_bits: Option<u32>,
    /// Seed for the random analog initialization.
    #[serde(default)]
    pub seed: u64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: default_rho(),
            penalty_scale: PenaltyScale::Relative,
            max_iters: default_max_iters(),
            tau: default_tau(),
            phase_bits: None,
            seed: 0,
        }
    }
}

impl AdmmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Config(format!("rho must be positive, got {}", self.rho)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be >= 1".into()));
        }
        if !(self.tau >= 0.0) {
            return Err(Error::Config(format!("tau must be >= 0, got {}", self.tau)));
        }
        if let Some(b) = self.phase_bits {
            if b == 0 || b > 30 {
                return Err(Error::Config(format!("phase_bits must be in 1..=30, got {b}")));
            }
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Penalty applied for a target of energy `target_energy` and an analog
    /// matrix with `analog_entries` unit-modulus entries.
    pub fn effective_rho(&self, target_energy: f64, analog_entries: usize) -> f64 {
        match self.penalty_scale {
            PenaltyScale::Absolute => self.rho,
            PenaltyScale::Relative if target_energy > 0.0 && analog_entries > 0 => {
                self.rho * target_energy / analog_entries as f64
            }
            PenaltyScale::Relative => self.rho,
        }
    }

    /// Copy with `rho` replaced by [`AdmmConfig::effective_rho`]; the state
    /// `iterate` methods use `rho` as given.
    pub fn resolved(&self, target_energy: f64, analog_entries: usize) -> Self {
        Self {
            rho: self.effective_rho(target_energy, analog_entries),
            penalty_scale: PenaltyScale::Absolute,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    FullyConnected,
    PartiallyConnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    /// Objective at the feasible point `(R, F_BB)`.
    pub objective: f64,
    /// `||F_RF - R||_F`
    pub primal_residual: f64,
}

/// Output of a design run.
#[derive(Debug, Clone)]
pub struct HybridFactors {
    pub f_rf: ComplexMatrix,
    /// One digital matrix for narrowband designs, one per subcarrier for
    /// wideband designs.
    pub f_bb: Vec<ComplexMatrix>,
    pub structure: Structure,
    /// Entry 0 is the initialization; entry `t` follows iteration `t`.
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
    /// Fitting error of the final factors before power normalization.
    pub objective: f64,
}

impl HybridFactors {
    pub fn f_bb(&self) -> &ComplexMatrix {
        &self.f_bb[0]
    }

    /// `F_RF F_BB[k]`
    pub fn composite(&self, k: usize) -> ComplexMatrix {
        &self.f_rf * &self.f_bb[k]
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,objective,primal_residual\n");
        for t in &self.trace {
            out.push_str(&format!("{},{:.15e},{:.15e}\n", t.iteration, t.objective, t.primal_residual));
        }
        out
    }
}

/// Nearest point of `{exp(j 2 pi k / 2^bits)}` to `z`. Exact ties go to the
/// smaller angle.
pub fn quantize_phase(z: C64, bits: u32) -> C64 {
    let levels = 1u64 << bits;
    let step = TAU / levels as f64;
    let mut theta = z.arg();
    if theta < 0.0 {
        theta += TAU;
    }
    let pos = theta / step;
    let lower = pos.floor();
    let idx = if pos - lower > 0.5 { lower + 1.0 } else { lower };
    let k = (idx as u64) % levels;
    C64::from_polar(1.0, k as f64 * step)
}

/// Projection of one entry onto the unit circle (or its quantized grid).
/// Zero maps to `1`.
pub fn project_entry(z: C64, phase_bits: Option<u32>) -> C64 {
    match phase_bits {
        Some(bits) => quantize_phase(z, bits),
        None => {
            let m = z.norm();
            if m == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                z / m
            }
        }
    }
}

/// Random constant-modulus entries, phases uniform on `[0, 2 pi)`, drawn in
/// row-major order from `seed`.
pub fn random_unit_modulus(rows: usize, cols: usize, seed: u64, phase_bits: Option<u32>) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let z = C64::from_polar(1.0, rng.random_range(0.0..TAU));
            m[(i, j)] = project_entry(z, phase_bits);
        }
    }
    m
}

/// `sqrt(target) / ||F_RF F_BB||_F` scaling of `F_BB`.
pub(crate) fn normalize_power(f_rf: &ComplexMatrix, f_bb: &mut ComplexMatrix, target_power: f64) {
    let p = frobenius_sq(&(f_rf * &*f_bb));
    if p > 0.0 {
        *f_bb *= real((target_power / p).sqrt());
    }
}

/// Shared outer loop: runs `step` until `max_iters` or until the feasible
/// objective changes by less than `tau` between iterations.
pub(crate) fn run_iterations<S>(
    state: &mut S,
    cfg: &AdmmConfig,
    objective: impl Fn(&S) -> f64,
    residual: impl Fn(&S) -> f64,
    mut step: impl FnMut(&mut S) -> Result<()>,
) -> Result<(Vec<TraceEntry>, usize)> {
    let mut prev = objective(state);
    let mut trace = vec![TraceEntry {
        iteration: 0,
        objective: prev,
        primal_residual: residual(state),
    }];
    let mut used = 0;
    for t in 1..=cfg.max_iters {
        if let Err(e) = step(state) {
            return Err(Error::Design {
                iterations: used,
                trace,
                source: Box::new(e),
            });
        }
        used = t;
        let obj = objective(state);
        trace.push(TraceEntry {
            iteration: t,
            objective: obj,
            primal_residual: residual(state),
        });
        if (prev - obj).abs() < cfg.tau {
            break;
        }
        prev = obj;
    }
    Ok((trace, used))
}

pub(crate) fn check_dims(n_tx: usize, n_s: usize, n_rf: usize) -> Result<()> {
    if n_s == 0 || n_s > n_rf || n_rf > n_tx {
        return Err(Error::Dimension(format!(
            "need 1 <= N_s ({n_s}) <= N_RF ({n_rf}) <= N_tx ({n_tx})"
        )));
    }
    Ok(())
}
