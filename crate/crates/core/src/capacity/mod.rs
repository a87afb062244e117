//! Holevo quantities of ensembles and numerical entanglement-assisted
//! capacities of small two-party gates.
//!
//! Every reported capacity is a lower bound: the optimizer exhibits an
//! ensemble achieving it. Concavity and monotonicity in `e` are checked
//! numerically, not proved.

pub mod delta;
pub mod ensemble;
pub mod gate;
pub mod nelder_mead;

pub use delta::{
    concavity_scan, delta_chi_e, q_e, witness_checks, witness_ensembles, CapacityOptions, CapacityResult, ConcavityReport,
    QuantumCapacity, Status, WitnessCheck,
};
pub use ensemble::{ab_layout, ab_state, chi, ensemble_entanglement, Ensemble};
pub use gate::Gate;
