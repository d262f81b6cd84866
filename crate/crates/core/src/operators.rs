//! Spin operators on the 9-dimensional electron ⊗ nuclear product space.
//!
//! Basis ordering is fixed globally as |m_s⟩⊗|m_I⟩ with both projections
//! ordered (+1, 0, −1), so index = 3·(electronic) + (nuclear).

use crate::constants::PhysicalConstants;
use crate::linalg::{kron3, Mat3, Mat9, C_I, C_ONE, C_ZERO};
use num_complex::Complex64 as C64;

/// The full set of 9×9 operators used by every Hamiltonian.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub sx: Mat9,
    pub sy: Mat9,
    pub sz: Mat9,
    pub ix: Mat9,
    pub iy: Mat9,
    pub iz: Mat9,
    /// Projector |m_s=−1⟩⟨m_s=−1| ⊗ identity.
    pub p_minus1: Mat9,
    /// Projector |m_s=+1⟩⟨m_s=+1| ⊗ identity.
    pub p_plus1: Mat9,
    /// Gell-Mann coupling λ₂ ⊗ identity (electronic 0 ↔ +1 block).
    pub l2: Mat9,
    /// Gell-Mann coupling λ₇ ⊗ identity (electronic 0 ↔ −1 block).
    pub l7: Mat9,
}

/// Spin-1 matrices in the (+1, 0, −1) ordering.
fn spin1() -> (Mat3, Mat3, Mat3) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sx = Mat3::from_row_slice(&[
        C_ZERO,
        C64::new(r, 0.0),
        C_ZERO,
        C64::new(r, 0.0),
        C_ZERO,
        C64::new(r, 0.0),
        C_ZERO,
        C64::new(r, 0.0),
        C_ZERO,
    ]);
    let sy = Mat3::from_row_slice(&[
        C_ZERO,
        C64::new(0.0, -r),
        C_ZERO,
        C64::new(0.0, r),
        C_ZERO,
        C64::new(0.0, -r),
        C_ZERO,
        C64::new(0.0, r),
        C_ZERO,
    ]);
    let sz = Mat3::from_diagonal(&nalgebra::Vector3::new(
        C_ONE,
        C_ZERO,
        C64::new(-1.0, 0.0),
    ));
    (sx, sy, sz)
}

/// Build all operators in the fixed basis ordering.
///
/// λ₂ = −i(|+1⟩⟨0| − |0⟩⟨+1|) and λ₇ = −i|0⟩⟨−1| + h.c. act on the
/// electronic factor and are tensored with the nuclear identity.
pub fn build_operator_set(_constants: &PhysicalConstants) -> OperatorSet {
    let (sx3, sy3, sz3) = spin1();
    let e = Mat3::identity();

    let mut l2_3 = Mat3::zeros();
    // electronic indices: 0 -> m_s=+1, 1 -> m_s=0, 2 -> m_s=-1
    l2_3[(0, 1)] = -C_I; // -i |+1><0|
    l2_3[(1, 0)] = C_I; // +i |0><+1|
    let mut l7_3 = Mat3::zeros();
    l7_3[(1, 2)] = -C_I; // -i |0><-1|
    l7_3[(2, 1)] = C_I; // h.c.

    let mut pm = Mat3::zeros();
    pm[(2, 2)] = C_ONE;
    let mut pp = Mat3::zeros();
    pp[(0, 0)] = C_ONE;

    OperatorSet {
        sx: kron3(&sx3, &e),
        sy: kron3(&sy3, &e),
        sz: kron3(&sz3, &e),
        ix: kron3(&e, &sx3),
        iy: kron3(&e, &sy3),
        iz: kron3(&e, &sz3),
        p_minus1: kron3(&pm, &e),
        p_plus1: kron3(&pp, &e),
        l2: kron3(&l2_3, &e),
        l7: kron3(&l7_3, &e),
    }
}
