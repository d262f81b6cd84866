//! Density matrices on the 9-level space and readout primitives.

use crate::error::Error;
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, idx, Mat3, Mat9, C_ONE};
use num_complex::Complex64 as C64;

/// 9×9 density matrix in the fixed |m_s⟩⊗|m_I⟩ basis, projections ordered
/// (+1, 0, −1). Hermitian, trace one, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: Mat9,
}

impl DensityMatrix {
    /// Wrap a matrix, checking Hermiticity (1e-12), unit trace (1e-12) and
    /// positivity (eigenvalues ≥ −1e-10).
    pub fn new(mat: Mat9) -> Result<Self, Error> {
        let rho = DensityMatrix { mat };
        rho.validate()?;
        Ok(rho)
    }

    /// Wrap without validation. For internal use where validity is preserved
    /// by construction (unitary conjugation of a valid state).
    pub(crate) fn from_matrix_unchecked(mat: Mat9) -> Self {
        DensityMatrix { mat }
    }

    pub fn matrix(&self) -> &Mat9 {
        &self.mat
    }

    pub fn validate(&self) -> Result<(), Error> {
        let h = hermiticity_defect(&self.mat);
        if h > 1e-12 {
            return Err(Error::InvalidState(format!("hermiticity defect {h:.3e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let evals = hermitian_eigenvalues(&self.mat);
        if evals[0] < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                evals[0]
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        (0..9).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Population of the basis state with electronic index `bs` and nuclear
    /// index `bn` (0,1,2 for projections +1,0,−1).
    pub fn population(&self, bs: usize, bn: usize) -> f64 {
        self.mat[(idx(bs, bn), idx(bs, bn))].re
    }

    /// Pure product state |m_s⟩⊗|m_I⟩ by basis indices.
    pub fn pure_product(bs: usize, bn: usize) -> Self {
        let mut m = Mat9::zeros();
        m[(idx(bs, bn), idx(bs, bn))] = C_ONE;
        DensityMatrix { mat: m }
    }

    /// ρ → U ρ U†.
    pub fn conjugate(&self, u: &Mat9) -> Self {
        DensityMatrix {
            mat: u * self.mat * u.adjoint(),
        }
    }
}

/// ρ(0): electron fully polarized into m_s = 0, nuclear spin maximally mixed.
pub fn initial_state() -> DensityMatrix {
    let mut m = Mat9::zeros();
    for bn in 0..3 {
        m[(idx(1, bn), idx(1, bn))] = C64::new(1.0 / 3.0, 0.0);
    }
    DensityMatrix { mat: m }
}

/// Partial trace over the electronic factor; returns the 3×3 nuclear state.
pub fn trace_out_electron(rho: &DensityMatrix) -> Mat3 {
    let mut out = Mat3::zeros();
    for bn in 0..3 {
        for bn2 in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for bs in 0..3 {
                acc += rho.mat[(idx(bs, bn), idx(bs, bn2))];
            }
            out[(bn, bn2)] = acc;
        }
    }
    out
}

/// ⟨m_I=0| Tr_e ρ |m_I=0⟩, the target-state population.
pub fn population_mi0(rho: &DensityMatrix) -> f64 {
    (0..3).map(|bs| rho.population(bs, 1)).sum()
}
