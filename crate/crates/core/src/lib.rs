//! Simulation of three spatially superposed masses entangled by their mutual
//! gravitational interaction.
//!
//! The pipeline is: physical parameters → branch phases ([`setups`]) → pure
//! or dephased three-qubit state ([`states`]) → entanglement quantifiers
//! ([`measures`]). [`classify`] labels decoherence-free states from their phase
//! differences and [`sweep`] evaluates the pipeline over parameter grids.

pub mod classify;
pub mod error;
pub mod measures;
pub mod numkernel;
pub mod setups;
pub mod states;
pub mod sweep;

pub use classify::{classify_linear, classify_parallel, Classification, StateClass};
pub use error::{QgemError, Result};
pub use measures::{
    chi, negativity, partial_transpose, qgem_witness, three_tangle_closed, three_tangle_pure,
    tripartite_negativity, witness_expectation, Bipartition, WitnessReport,
};
pub use numkernel::{expectation_pure, reduced_density, ComplexMatrix};
pub use setups::{
    closed_form_phases, pairwise_phase, pairwise_phases, star_radius, validate_geometry,
    BasisIndex, PhaseSet, PhysicalParams, SetupKind, G, HBAR,
};
pub use states::{
    decohered_state, evolved_state, hamming_delta, initial_state, pure_density, DensityMatrix,
    PureState, Qubit,
};
pub use sweep::{Measure, SweepResult, SweepSpec};

/// Crate version recorded in sweep metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
