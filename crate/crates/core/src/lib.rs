//! Desk-scale laboratory for coherent classical communication.
//!
//! The crate simulates the protocols that trade qubits, cbits, ebits and
//! coherent bits ("cobits", the map `|x⟩_A → |x⟩_A|x⟩_B`) for one another,
//! checks their resource bookkeeping against a symbolic rule database, runs
//! coherent remote state preparation, and numerically bounds the
//! entanglement-assisted capacities of small two-party gates.
//!
//! * [`quantum`]: pure states over labelled registers, POVMs, dilations.
//! * [`protocols`]: coherent super-dense coding, teleportation, CNOT protocols
//!   and friends, each emitting a [`protocols::Transcript`].
//! * [`rsp`]: covering sets and coherent remote state preparation.
//! * [`calculus`]: resource vectors, conversion rules and a bounded prover.
//! * [`capacity`]: Holevo quantities of ensembles and the `Δχ_e` optimizer.

pub mod calculus;
pub mod capacity;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod protocols;
pub mod quantum;
pub mod resources;
pub mod rng;
pub mod rsp;

pub use error::{Error, Result};
pub use exec::Execution;
pub use resources::{ResourceKind, ResourceVector};
