//! Coherent remote state preparation.

pub mod cover;
pub mod protocol;

pub use cover::{sample_covering, CoveringSet, SAFETY_FACTOR};
pub use protocol::{
    build_povm, rsp_account, rsp_resource_account, run_coherent_rsp, run_coherent_rsp_traced, run_with_retries, RspAccount,
    RspPovm, RspSnapshots,
};
