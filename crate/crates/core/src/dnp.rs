//! The full DNP sequence for single ensemble members and Cauchy-averaged
//! ensembles, plus the step-function theoretical polarization limit.

use crate::constants::PhysicalConstants;
use crate::dynamics::{propagate, rf_flip, PropagationConfig};
use crate::ensemble::{cauchy_weights, ensemble_average, ensemble_grid, EnsembleConfig};
use crate::error::Error;
use crate::hamiltonian::{build_rotating_h0, RotatingFrameParams};
use crate::pulses::PulseEnvelope;
use crate::state::{initial_state, population_mi0};
use rayon::prelude::*;

/// The two microwave pulses of one DNP cycle.
#[derive(Debug, Clone)]
pub struct PulsePair {
    /// Carrier near f₋₁ (drives m_s = 0 ↔ −1).
    pub env_m1: PulseEnvelope,
    /// Carrier near f₊₁ (drives m_s = 0 ↔ +1).
    pub env_p1: PulseEnvelope,
}

/// Per-member and ensemble-averaged target-state populations.
#[derive(Debug, Clone)]
pub struct DnpOutcome {
    /// γe·(B_z − B0) per member, MHz.
    pub offsets: Vec<f64>,
    /// Unnormalized Cauchy weights.
    pub weights: Vec<f64>,
    /// P(m_I = 0) per member.
    pub members: Vec<f64>,
    /// Weighted ensemble average.
    pub p_avg: f64,
}

/// Run one DNP cycle for a single ensemble member:
/// ρ(0) → both MW pulses → RF flip → P(m_I = 0).
pub fn run_dnp_member(
    constants: &PhysicalConstants,
    pulses: &PulsePair,
    zeeman_offset: f64,
    cfg: &PropagationConfig,
) -> Result<f64, Error> {
    let params = RotatingFrameParams {
        delta_m1: pulses.env_m1.detuning,
        delta_p1: pulses.env_p1.detuning,
        zeeman_offset,
    };
    let h0 = build_rotating_h0(constants, &params);
    let rho = propagate(&initial_state(), &h0, &pulses.env_m1, &pulses.env_p1, cfg)?;
    Ok(population_mi0(&rf_flip(&rho)))
}

/// Run the DNP cycle across the full ensemble grid. Members evaluate in
/// parallel; the reduction order is the fixed grid order.
pub fn run_dnp_ensemble(
    constants: &PhysicalConstants,
    pulses: &PulsePair,
    ens: &EnsembleConfig,
    cfg: &PropagationConfig,
) -> Result<DnpOutcome, Error> {
    ens.validate()?;
    let grid = ensemble_grid(ens, constants);
    let weights = cauchy_weights(&grid, ens, constants);
    let offsets: Vec<f64> = grid.iter().map(|bz| constants.gamma_e * (bz - ens.b0)).collect();
    let members: Vec<f64> = offsets
        .par_iter()
        .map(|off| run_dnp_member(constants, pulses, *off, cfg))
        .collect::<Result<_, _>>()?;
    let p_avg = ensemble_average(&members, &weights)?;
    Ok(DnpOutcome {
        offsets,
        weights,
        members,
        p_avg,
    })
}

/// Idealized member outcome: each MW pulse is replaced by a classical
/// inversion rule — the electronic transition for nuclear projection m_I is
/// fully population-inverted iff its (member-shifted) frequency lies at or
/// below carrier + |A∥|/2 — followed by the RF flip bookkeeping.
/// Pure population bookkeeping, no coherences.
pub fn limit_member(constants: &PhysicalConstants, zeeman_offset: f64) -> f64 {
    let a = constants.a_par;
    let half = a.abs() / 2.0;
    let proj = [1.0f64, 0.0, -1.0];
    // populations[bs][bn], bs/bn = 0,1,2 for projections +1,0,-1
    let mut pops = [[0.0f64; 3]; 3];
    for bn in 0..3 {
        pops[1][bn] = 1.0 / 3.0;
    }
    // pulse 1, carrier at f_-1: member transition freq minus carrier
    // for nuclear projection m is  -Δz - A∥·(m + 1)
    for bn in 0..3 {
        let m = proj[bn];
        if -zeeman_offset - a * (m + 1.0) <= half {
            let t = pops[1][bn];
            pops[1][bn] = pops[2][bn];
            pops[2][bn] = t;
        }
    }
    // pulse 2, carrier at f_+1: offset is  Δz + A∥·(m - 1)
    for bn in 0..3 {
        let m = proj[bn];
        if zeeman_offset + a * (m - 1.0) <= half {
            let t = pops[1][bn];
            pops[1][bn] = pops[0][bn];
            pops[0][bn] = t;
        }
    }
    // RF flip: m_s=+1 swaps nuclear +1 <-> 0; m_s=-1 swaps nuclear -1 <-> 0
    pops[0].swap(0, 1);
    pops[2].swap(2, 1);
    pops[0][1] + pops[1][1] + pops[2][1]
}

/// Ensemble-averaged theoretical limit on the same grid and Cauchy weights
/// as the simulator.
pub fn limit_ensemble(constants: &PhysicalConstants, ens: &EnsembleConfig) -> Result<DnpOutcome, Error> {
    ens.validate()?;
    let grid = ensemble_grid(ens, constants);
    let weights = cauchy_weights(&grid, ens, constants);
    let offsets: Vec<f64> = grid.iter().map(|bz| constants.gamma_e * (bz - ens.b0)).collect();
    let members: Vec<f64> = offsets
        .iter()
        .map(|off| limit_member(constants, *off))
        .collect();
    let p_avg = ensemble_average(&members, &weights)?;
    Ok(DnpOutcome {
        offsets,
        weights,
        members,
        p_avg,
    })
}
