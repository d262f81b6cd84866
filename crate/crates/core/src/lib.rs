//! Simulation and optimization of dynamic nuclear polarization (DNP) of the
//! ¹⁴N nuclear spin in NV⁻ center ensembles in diamond.
//!
//! The crate models the 9-level (electron spin-1 ⊗ nuclear spin-1) ground
//! state, propagates the density matrix under shaped microwave pulses in the
//! rotating frame, averages over a Cauchy-distributed inhomogeneous ensemble,
//! and searches for optimal pulse parameters (square, Gaussian and
//! Shinnar–Le Roux families) that maximize the ensemble-averaged population
//! of the |m_I = 0⟩ nuclear state.
//!
//! Units: all Hamiltonian matrix elements are ordinary frequencies in MHz,
//! times are in µs, magnetic fields in G. Propagators carry the 2π factor.

pub mod constants;
pub mod dnp;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod family;
pub mod hamiltonian;
pub mod linalg;
pub mod operators;
pub mod optimizer;
pub mod pulses;
pub mod slr;
pub mod state;

pub use constants::PhysicalConstants;
pub use dnp::{limit_ensemble, limit_member, run_dnp_ensemble, run_dnp_member, DnpOutcome, PulsePair};
pub use dynamics::{propagate, rf_flip, Method, PropagationConfig};
pub use ensemble::{cauchy_weights, ensemble_average, ensemble_grid, EnsembleConfig};
pub use error::Error;
pub use family::{build_pulse_pair, FamilyParams, GaussianParams, PulseFamily, SlrParams, SquareParams};
pub use hamiltonian::{
    build_drive, build_h0, build_rotating_h0, transition_frequencies, RotatingFrameParams,
};
pub use linalg::{Mat2, Mat3, Mat9};
pub use operators::{build_operator_set, OperatorSet};
pub use optimizer::{
    improvement_ratio, objective, optimize, OptimizationProblem, OptimizationResult,
};
pub use pulses::{
    crosstalk_free_rabi, excitation_profile, gaussian_envelope, square_envelope,
    two_level_inversion, GaussianSpec, PulseEnvelope, SlrSpec, SquareSpec,
};
pub use slr::slr_design;
pub use state::{initial_state, population_mi0, DensityMatrix};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
