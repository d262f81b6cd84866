//! Lab-frame and rotating-frame Hamiltonians of the NV⁻ ground state.
//!
//! All matrix elements are ordinary frequencies in MHz; propagators apply
//! the 2π factor.

use crate::constants::PhysicalConstants;
use crate::linalg::{idx, Mat9};
use crate::operators::OperatorSet;
use num_complex::Complex64 as C64;

/// Per-ensemble-member rotating-frame parameters.
///
/// `zeeman_offset` is the member's field offset expressed as a frequency,
/// γe·(B_z − B0) in MHz. A member with B_z = B0 + ΔB has its lower
/// transition lowered by γe·ΔB and its upper transition raised by γe·ΔB,
/// so the offset enters the two branches with opposite signs.
#[derive(Debug, Clone, Copy, Default)]
pub struct RotatingFrameParams {
    /// Detuning of the pulse-1 carrier from f₋₁, MHz.
    pub delta_m1: f64,
    /// Detuning of the pulse-2 carrier from f₊₁, MHz.
    pub delta_p1: f64,
    /// γe·(B_z − B0), MHz.
    pub zeeman_offset: f64,
}

/// Lab-frame ground-state Hamiltonian at field `bz`:
/// H₀/h = D·Sz² + γe·Bz·Sz − γn·Bz·Iz + Q·Iz² + A∥·Sz·Iz + A⊥·(Sx·Ix + Sy·Iy).
pub fn build_h0(constants: &PhysicalConstants, bz: f64, ops: &OperatorSet) -> Mat9 {
    let c = constants;
    let re = |x: f64| C64::new(x, 0.0);
    ops.sz * ops.sz * re(c.d)
        + ops.sz * re(c.gamma_e * bz)
        - ops.iz * re(c.gamma_n * bz)
        + ops.iz * ops.iz * re(c.q)
        + ops.sz * ops.iz * re(c.a_par)
        + (ops.sx * ops.ix + ops.sy * ops.iy) * re(c.a_perp)
}

/// Carrier frequencies of the two nuclear-spin-selective transitions:
/// f₋₁ = D − γe·Bz + A∥ and f₊₁ = D + γe·Bz + A∥.
pub fn transition_frequencies(constants: &PhysicalConstants, bz: f64) -> (f64, f64) {
    let zeeman = constants.gamma_e * bz;
    (
        constants.d - zeeman + constants.a_par,
        constants.d + zeeman + constants.a_par,
    )
}

/// Diagonal of the rotating-frame static Hamiltonian
/// H′₀/h = A∥·Sz·Iz − (δ̃₋₁ + A∥)·P₋₁ − (δ̃₊₁ + A∥)·P₊₁,
/// with member-shifted effective detunings δ̃₋₁ = δ₋₁ − zeeman_offset and
/// δ̃₊₁ = δ₊₁ + zeeman_offset.
pub fn rotating_h0_diagonal(constants: &PhysicalConstants, params: &RotatingFrameParams) -> [f64; 9] {
    let a = constants.a_par;
    let dm = params.delta_m1 - params.zeeman_offset;
    let dp = params.delta_p1 + params.zeeman_offset;
    let proj = [1.0, 0.0, -1.0];
    let mut diag = [0.0; 9];
    for bs in 0..3 {
        for bn in 0..3 {
            let ms = proj[bs];
            let mi = proj[bn];
            let mut e = a * ms * mi;
            if bs == 2 {
                e -= dm + a;
            }
            if bs == 0 {
                e -= dp + a;
            }
            diag[idx(bs, bn)] = e;
        }
    }
    diag
}

/// Rotating-frame static Hamiltonian as a 9×9 matrix (diagonal in the
/// product basis).
pub fn build_rotating_h0(constants: &PhysicalConstants, params: &RotatingFrameParams) -> Mat9 {
    let diag = rotating_h0_diagonal(constants, params);
    let mut m = Mat9::zeros();
    for i in 0..9 {
        m[(i, i)] = C64::new(diag[i], 0.0);
    }
    m
}

/// Drive Hamiltonian for instantaneous Rabi amplitudes on the two branches.
///
/// `amp_m1` couples the m_s = 0 ↔ −1 electronic block (λ₇ structure) and
/// `amp_p1` the m_s = 0 ↔ +1 block (λ₂ structure); the off-diagonal matrix
/// element magnitude is amp/2 between coupled levels, so a square π pulse
/// has duration 1/(2·amp).
pub fn build_drive(amp_m1: f64, amp_p1: f64, ops: &OperatorSet) -> Mat9 {
    let half = |x: f64| C64::new(0.5 * x, 0.0);
    ops.l7 * half(amp_m1) - ops.l2 * half(amp_p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator_defect, hermitian_eigenvalues, hermiticity_defect};
    use crate::operators::build_operator_set;
    use approx::assert_abs_diff_eq;

    fn setup() -> (PhysicalConstants, OperatorSet) {
        let c = PhysicalConstants::default();
        let ops = build_operator_set(&c);
        (c, ops)
    }

    #[test]
    fn pure_zero_field_splitting_spectrum() {
        let (_, ops) = setup();
        // every coupling zero except D
        let c = PhysicalConstants {
            d: 2870.0,
            gamma_e: 0.0,
            gamma_n: 0.0,
            q: 0.0,
            a_par: 0.0,
            a_perp: 0.0,
            b0: 0.0,
        };
        let h = build_h0(&c, 0.0, &ops);
        let ev = hermitian_eigenvalues(&h);
        for e in &ev[0..3] {
            assert_abs_diff_eq!(*e, 0.0, epsilon = 1e-10);
        }
        for e in &ev[3..9] {
            assert_abs_diff_eq!(*e, 2870.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn diagonal_element_closed_form() {
        let (c, ops) = setup();
        let c = PhysicalConstants { a_perp: 0.0, ..c };
        let bz = 13.0;
        let h = build_h0(&c, bz, &ops);
        // |m_s=-1, m_I=-1> is index (2,2) -> 8
        let expect = c.d - c.gamma_e * bz + c.gamma_n * bz + c.q + c.a_par;
        assert_abs_diff_eq!(h[(8, 8)].re, expect, epsilon = 1e-10);
    }

    #[test]
    fn h0_hermitian() {
        let (c, ops) = setup();
        let h = build_h0(&c, 37.2, &ops);
        assert!(hermiticity_defect(&h) < 1e-12);
    }

    #[test]
    fn transition_frequency_examples() {
        let c = PhysicalConstants::default();
        let (fm, fp) = transition_frequencies(&c, 10.0);
        assert_abs_diff_eq!(fm, 2839.815, epsilon = 1e-9);
        assert_abs_diff_eq!(fp, 2895.865, epsilon = 1e-9);
        assert_abs_diff_eq!(fp - fm, 2.0 * c.gamma_e * 10.0, epsilon = 1e-9);
    }

    #[test]
    fn rotating_h0_resonance_gaps() {
        let c = PhysicalConstants::default();
        let h = rotating_h0_diagonal(&c, &RotatingFrameParams::default());
        // target transition |0,-1> <-> |-1,-1> resonant at zero detuning
        assert_abs_diff_eq!(h[idx(2, 2)] - h[idx(1, 2)], 0.0, epsilon = 1e-12);
        // neighbor |0,0> <-> |-1,0> detuned by the hyperfine constant
        assert_abs_diff_eq!(h[idx(2, 1)] - h[idx(1, 1)], -c.a_par, epsilon = 1e-12);
        // mirrored branch: |0,+1> <-> |+1,+1> resonant
        assert_abs_diff_eq!(h[idx(0, 0)] - h[idx(1, 0)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rotating_h0_is_diagonal_and_commutes_with_iz() {
        let (c, ops) = setup();
        let params = RotatingFrameParams {
            delta_m1: 0.3,
            delta_p1: -0.2,
            zeeman_offset: 0.7,
        };
        let h = build_rotating_h0(&c, &params);
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert!(h[(i, j)].norm() < 1e-15);
                }
            }
        }
        assert!(commutator_defect(&h, &ops.iz, &Mat9::zeros()) < 1e-12);
    }

    #[test]
    fn zeeman_offset_shifts_branches_oppositely() {
        let c = PhysicalConstants::default();
        let off = 0.45;
        let h = rotating_h0_diagonal(
            &c,
            &RotatingFrameParams {
                zeeman_offset: off,
                ..Default::default()
            },
        );
        // effective detuning of the minus-branch target becomes -(-off) = +off gap shift
        assert_abs_diff_eq!(h[idx(2, 2)] - h[idx(1, 2)], off, epsilon = 1e-12);
        assert_abs_diff_eq!(h[idx(0, 0)] - h[idx(1, 0)], -off, epsilon = 1e-12);
    }

    #[test]
    fn drive_coupling_magnitudes() {
        let (c, ops) = setup();
        let d = build_drive(1.0, 0.0, &ops);
        for bn in 0..3 {
            assert_abs_diff_eq!(d[(idx(1, bn), idx(2, bn))].norm(), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(d[(idx(0, bn), idx(1, bn))].norm(), 0.0, epsilon = 1e-15);
        }
        let z = build_drive(0.0, 0.0, &ops);
        assert!(z.iter().all(|v| v.norm() == 0.0));
        let g = build_drive(0.7, 1.3, &ops);
        assert!(hermiticity_defect(&g) < 1e-14);
        let _ = c;
    }
}
