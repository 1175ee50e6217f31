//! Phase-space toolkit for Heisenberg-limited metrology with circular
//! superpositions of coherent states.
//!
//! Everything here is pure computation over `alloc` collections; file
//! formats and the command line live in the companion `subplanck-cli`
//! crate. Units are dimensionless with ħ = 1: a coherent amplitude `α`
//! sits at phase-space point `α`, and the Wigner function of a coherent
//! state peaks at 2.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod ode;

pub mod estimation;
pub mod metrology;
pub mod protocol;
pub mod states;
pub mod wigner;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use estimation::{
    estimate_displacement, estimator_calibration, feasibility, simulate_readout, Calibration,
    EstimationRun, FeasibilityReport, FringeConvention, Platform,
};
pub use metrology::{
    approx_overlap, exact_overlap, overlap_sweep, sensitivity_report, ApproxOverlap, CircularSpec,
    OverlapSweep, PerturbationKind, PerturbationSpec, Regime, SensitivityReport,
};
pub use protocol::{
    dispersive_protocol, generic_strategy, jc_numeric_evolve, resonant_protocol, revival_time,
    HybridState, JCParams, JointState, Level, PerturbationModel, ProtocolResult, Step,
};
pub use states::{make_circular_state, CoherentSuperposition, FockVector};
pub use wigner::{cross_wigner, phase_space_overlap, wigner_field, PhaseSpaceGrid, WignerField};
