//! Gentle-measurement disturbance check.

use serde::Serialize;

use crate::error::Result;
use crate::quantum::{Povm, PureState};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GentleReport {
    pub probability: f64,
    /// `1 - F(post, state)`.
    pub disturbance: f64,
    /// `2 √(1 - p)`.
    pub bound: f64,
}

/// Measures `outcome` on `targets` and compares the disturbance of the
/// post-measurement state with `2√(1-p)`.
pub fn gentle_measurement_check(state: &PureState, povm: &Povm, targets: &[&str], outcome: &str) -> Result<GentleReport> {
    let (p, post) = state.project(povm, targets, outcome)?;
    let disturbance = (1.0 - post.fidelity(state)?).max(0.0);
    let bound = 2.0 * (1.0 - p).max(0.0).sqrt();
    if disturbance > bound + 1e-12 {
        return Err(Error::ProtocolFailed(format!(
            "disturbance {disturbance:.6} exceeds 2*sqrt(1-p) = {bound:.6}"
        )));
    }
    Ok(GentleReport {
        probability: p,
        disturbance,
        bound,
    })
}
