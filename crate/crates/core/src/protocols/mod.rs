//! Executable protocols, each returning a [`Transcript`] and the final state.

pub mod cnot;
pub mod cobit;
pub mod concentrate;
pub mod gentle;
pub mod hsw;
pub mod sdc;
pub mod teleport;
pub mod transcript;

pub use cnot::{coherent_cnot_bidirectional, coherent_distributed_cnot, cnot_encoding_output};
pub use cobit::{cobit, cobit_channel, cobit_degrade, cobit_from_qubit, copy_label, CobitProvider, DegradeMode, IdealCobits, SdcCobits};
pub use concentrate::{concentration_shots, entanglement_concentrate, Concentration};
pub use gentle::{gentle_measurement_check, GentleReport};
pub use hsw::coherent_hsw_demo;
pub use sdc::coherent_sdc;
pub use teleport::{coherent_teleport, rotated_bell_state};
pub use transcript::{Run, Session, Status, Step, Transcript};
