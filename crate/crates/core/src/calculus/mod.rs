//! Resource inequalities: the rule database, a bounded prover, and
//! certification of rules by running their protocols.

pub mod certify;
pub mod prover;
pub mod rules;

pub use certify::{certify_rule_by_simulation, run_named_protocol, Certificate, CERTIFY_FIDELITY};
pub use prover::{check_equality, prove, prove_with, Derivation, DerivationStep, Equality, ProofResult, ProveOptions, MAX_DEPTH, MAX_VISITED};
pub use rules::{lookup, rule_db, ConversionRule};
