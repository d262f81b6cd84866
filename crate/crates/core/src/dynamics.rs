//! Density-matrix propagation under the rotating-frame Hamiltonian with
//! time-dependent drive, and the idealized RF nuclear flip.

use crate::error::Error;
use crate::linalg::{expm_unitary, idx, Mat3, Mat9, C_I, C_ONE};
use crate::operators::OperatorSet;
use crate::pulses::PulseEnvelope;
use crate::state::DensityMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::TAU;

/// Integration method. The piecewise-constant exponential is exact for the
/// sampled envelope and unconditionally unitary; the fourth-order stepper is
/// a classical RK4 on the commutator equation, kept as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    PiecewiseExponential,
    FourthOrderStepper,
}

#[derive(Debug, Clone, Copy)]
pub struct PropagationConfig {
    /// Integration step, µs. Envelope samples are subdivided so no step
    /// exceeds it.
    pub dt: f64,
    pub method: Method,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            dt: 1e-3,
            method: Method::PiecewiseExponential,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Propagation(format!("dt = {}", self.dt)));
        }
        Ok(())
    }
}

/// Which electronic transition a pulse drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// m_s = 0 ↔ −1 (carrier near f₋₁).
    Minus,
    /// m_s = 0 ↔ +1 (carrier near f₊₁).
    Plus,
}

fn is_diagonal(h: &Mat9) -> bool {
    for i in 0..9 {
        for j in 0..9 {
            if i != j && h[(i, j)].norm() > 1e-12 {
                return false;
            }
        }
    }
    true
}

/// Exact step unitary for one nuclear sector: levels (spectator, 0, driven)
/// with diagonal energies. In the (0, driven) pair basis both Gell-Mann
/// couplings reduce to the same form (Ω/2)·[[0, −i], [i, 0]], i.e. a σ_y
/// drive, so the step is exp(−i·2π·dt·(mean·I + h_z σ_z + h_y σ_y)).
fn sector_step(d_spec: f64, d0: f64, d_drv: f64, omega: f64, dt: f64) -> (C64, Mat2Step) {
    let spec_phase = C64::from_polar(1.0, -TAU * d_spec * dt);
    let mean = 0.5 * (d0 + d_drv);
    let hz = 0.5 * (d0 - d_drv);
    let hy = 0.5 * omega;
    let r = (hy * hy + hz * hz).sqrt();
    let theta = TAU * dt * r;
    let (s, c) = theta.sin_cos();
    let (ny, nz) = if r > 0.0 { (hy / r, hz / r) } else { (0.0, 0.0) };
    let global = C64::from_polar(1.0, -TAU * mean * dt);
    (
        spec_phase,
        Mat2Step {
            u00: global * C64::new(c, -s * nz),
            u01: global * C64::new(-s * ny, 0.0),
            u10: global * C64::new(s * ny, 0.0),
            u11: global * C64::new(c, s * nz),
        },
    )
}

/// 2×2 step unitary on the (0, driven) pair.
#[derive(Clone, Copy)]
struct Mat2Step {
    u00: C64,
    u01: C64,
    u10: C64,
    u11: C64,
}

/// Accumulated unitary of one pulse on a diagonal static Hamiltonian,
/// exploiting nuclear-projection conservation: one 3×3 block per nuclear
/// sector, assembled into the full 9×9.
fn pulse_unitary_fast(h0_diag: &[f64; 9], env: &PulseEnvelope, branch: Branch, cfg: &PropagationConfig) -> Mat9 {
    let n_sub = (env.dt / cfg.dt).ceil().max(1.0) as usize;
    let dt_step = env.dt / n_sub as f64;
    // electronic ordering within a sector: (+1, 0, -1) = rows 0,1,2
    let mut blocks = [Mat3::identity(); 3];
    for &omega in &env.samples {
        for bn in 0..3 {
            let e_p = h0_diag[idx(0, bn)];
            let e_0 = h0_diag[idx(1, bn)];
            let e_m = h0_diag[idx(2, bn)];
            let (spec_i, pair) = match branch {
                Branch::Minus => (0usize, (1usize, 2usize)),
                Branch::Plus => (2usize, (1usize, 0usize)),
            };
            let (d_spec, d0, d_drv) = match branch {
                Branch::Minus => (e_p, e_0, e_m),
                Branch::Plus => (e_m, e_0, e_p),
            };
            let (phase, u2) = sector_step(d_spec, d0, d_drv, omega, dt_step);
            // step unitary embedded in the 3×3 electronic block
            let mut step = Mat3::zeros();
            step[(spec_i, spec_i)] = phase;
            step[(pair.0, pair.0)] = u2.u00;
            step[(pair.0, pair.1)] = u2.u01;
            step[(pair.1, pair.0)] = u2.u10;
            step[(pair.1, pair.1)] = u2.u11;
            let mut acc = step;
            for _ in 1..n_sub {
                acc = step * acc;
            }
            blocks[bn] = acc * blocks[bn];
        }
    }
    let mut u = Mat9::zeros();
    for bn in 0..3 {
        for bs in 0..3 {
            for bs2 in 0..3 {
                u[(idx(bs, bn), idx(bs2, bn))] = blocks[bn][(bs, bs2)];
            }
        }
    }
    u
}

/// Accumulated unitary of one pulse via generic per-step matrix exponentials.
/// Used when the static Hamiltonian is not diagonal.
fn pulse_unitary_generic(
    h0: &Mat9,
    env: &PulseEnvelope,
    branch: Branch,
    ops: &OperatorSet,
    cfg: &PropagationConfig,
) -> Mat9 {
    let n_sub = (env.dt / cfg.dt).ceil().max(1.0) as usize;
    let dt_step = env.dt / n_sub as f64;
    let mut u = Mat9::identity();
    for &omega in &env.samples {
        let (am, ap) = match branch {
            Branch::Minus => (omega, 0.0),
            Branch::Plus => (0.0, omega),
        };
        let h = h0 + crate::hamiltonian::build_drive(am, ap, ops);
        let step = expm_unitary(&h, dt_step);
        for _ in 0..n_sub {
            u = step * u;
        }
    }
    u
}

/// RK4 stepping of ρ̇ = −i·2π·[H(t), ρ] for one pulse.
fn pulse_rk4(
    rho: &DensityMatrix,
    h0: &Mat9,
    env: &PulseEnvelope,
    branch: Branch,
    ops: &OperatorSet,
    cfg: &PropagationConfig,
) -> DensityMatrix {
    let n_sub = (env.dt / cfg.dt).ceil().max(1.0) as usize;
    let dt_step = env.dt / n_sub as f64;
    let deriv = |h: &Mat9, r: &Mat9| -> Mat9 { (h * r - r * h).map(|z| z * C64::new(0.0, -TAU)) };
    let mut r = *rho.matrix();
    for &omega in &env.samples {
        let (am, ap) = match branch {
            Branch::Minus => (omega, 0.0),
            Branch::Plus => (0.0, omega),
        };
        let h = h0 + crate::hamiltonian::build_drive(am, ap, ops);
        for _ in 0..n_sub {
            let k1 = deriv(&h, &r);
            let k2 = deriv(&h, &(r + k1.map(|z| z * (0.5 * dt_step))));
            let k3 = deriv(&h, &(r + k2.map(|z| z * (0.5 * dt_step))));
            let k4 = deriv(&h, &(r + k3.map(|z| z * dt_step)));
            r += (k1 + k2.map(|z| z * 2.0) + k3.map(|z| z * 2.0) + k4).map(|z| z * (dt_step / 6.0));
        }
    }
    DensityMatrix::from_matrix_unchecked(r)
}

/// Propagate ρ through the two-pulse microwave sequence: the f₋₁-carrier
/// envelope first (with the f₊₁ drive off), then the f₊₁-carrier envelope.
pub fn propagate(
    rho: &DensityMatrix,
    h0_rot: &Mat9,
    env_m1: &PulseEnvelope,
    env_p1: &PulseEnvelope,
    cfg: &PropagationConfig,
) -> Result<DensityMatrix, Error> {
    cfg.validate()?;
    env_m1.validate()?;
    env_p1.validate()?;
    let mut state = rho.clone();
    let diag = is_diagonal(h0_rot);
    let mut h0_diag = [0.0f64; 9];
    for i in 0..9 {
        h0_diag[i] = h0_rot[(i, i)].re;
    }
    let ops_lazy = |need: bool| {
        if need {
            Some(crate::operators::build_operator_set(
                &crate::constants::PhysicalConstants::default(),
            ))
        } else {
            None
        }
    };
    let need_ops = !diag || cfg.method == Method::FourthOrderStepper;
    let ops = ops_lazy(need_ops);
    for (env, branch) in [(env_m1, Branch::Minus), (env_p1, Branch::Plus)] {
        if env.samples.is_empty() {
            continue;
        }
        state = match cfg.method {
            Method::PiecewiseExponential => {
                let u = if diag {
                    pulse_unitary_fast(&h0_diag, env, branch, cfg)
                } else {
                    pulse_unitary_generic(h0_rot, env, branch, ops.as_ref().unwrap(), cfg)
                };
                state.conjugate(&u)
            }
            Method::FourthOrderStepper => {
                pulse_rk4(&state, h0_rot, env, branch, ops.as_ref().unwrap(), cfg)
            }
        };
    }
    Ok(state)
}

/// Unitary of the idealized RF flip: identity on m_s = 0; on m_s = +1 it
/// swaps nuclear |+1⟩ ↔ |0⟩ (factor i) leaving |−1⟩; on m_s = −1 it swaps
/// nuclear |−1⟩ ↔ |0⟩ (factor i) leaving |+1⟩.
pub fn rf_flip_unitary() -> Mat9 {
    let mut u = Mat9::zeros();
    // m_s = 0 manifold: identity
    for bn in 0..3 {
        u[(idx(1, bn), idx(1, bn))] = C_ONE;
    }
    // m_s = +1 manifold (bs = 0): i(|+1><0| + |0><+1|) + |-1><-1|
    u[(idx(0, 0), idx(0, 1))] = C_I;
    u[(idx(0, 1), idx(0, 0))] = C_I;
    u[(idx(0, 2), idx(0, 2))] = C_ONE;
    // m_s = -1 manifold (bs = 2): i(|-1><0| + |0><-1|) + |+1><+1|
    u[(idx(2, 2), idx(2, 1))] = C_I;
    u[(idx(2, 1), idx(2, 2))] = C_I;
    u[(idx(2, 0), idx(2, 0))] = C_ONE;
    u
}

/// Apply the RF flip: ρ → U_RF ρ U_RF†.
pub fn rf_flip(rho: &DensityMatrix) -> DensityMatrix {
    rho.conjugate(&rf_flip_unitary())
}
