//! Exact pure-state simulation: registers, states, reduced states,
//! POVMs and their dilations.

pub mod density;
pub mod gates;
pub mod haar;
pub mod layout;
pub mod povm;
pub mod state;

pub use density::{von_neumann_entropy, DensityMatrix};
pub use layout::{Party, RegisterLayout, Subsystem, MAX_TOTAL_DIM};
pub use povm::{neumark_dilate, Isometry, Measurement, Povm, PovmElement};
pub use state::{fidelity, make_bell, PureState, Schmidt};
