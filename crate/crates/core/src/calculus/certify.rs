//! Checks simulable rules against the transcripts of their protocols.

use serde::Serialize;

use super::rules::lookup;
use crate::error::{Error, Result};
use crate::linalg::{c, real};
use crate::protocols::{self, cnot::product_input, IdealCobits, Transcript};
use crate::quantum::{Party, PureState, RegisterLayout, Subsystem};
use crate::resources::ResourceVector;

pub const CERTIFY_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub rule: String,
    pub protocol: String,
    pub final_fidelity: f64,
    pub transcript: Transcript,
}

fn sample_qubit(label: &str) -> Result<PureState> {
    PureState::qubit(label, Party::A, real(0.6), c(0.0, 0.8))
}

/// Runs the protocol named by the rule on a fixed generic input.
pub fn run_named_protocol(name: &str) -> Result<Transcript> {
    let run = match name {
        "qubit-to-cobit" => protocols::cobit_from_qubit(&sample_qubit("m")?)?,
        "cobit-to-cbit" => protocols::cobit_degrade(&sample_qubit("m")?, protocols::DegradeMode::ToCbit)?,
        "cobit-to-ebit" => protocols::cobit_degrade(&PureState::plus("m", Party::A)?, protocols::DegradeMode::ToEbit)?,
        "coherent-sdc" => {
            let l = RegisterLayout::new(vec![Subsystem::qubit("a1", Party::A), Subsystem::qubit("a2", Party::A)])?;
            let amps = crate::linalg::CVec::from_vec(vec![real(0.5), c(0.0, 0.5), real(-0.5), c(0.5, 0.0)]);
            protocols::coherent_sdc(&PureState::new(l, amps)?)?
        }
        "coherent-teleport" => protocols::coherent_teleport(&sample_qubit("q")?, &IdealCobits)?,
        "cnot-coherent-bidir" => protocols::coherent_cnot_bidirectional(&product_input([0.6, 0.8], [0.8, -0.6])?)?,
        "coherent-distributed-cnot" => {
            protocols::coherent_distributed_cnot(&product_input([0.6, 0.8], [0.8, -0.6])?, &IdealCobits, &IdealCobits)?
        }
        other => return Err(Error::InvalidArgument(format!("unknown protocol `{other}`"))),
    };
    Ok(run.transcript)
}

fn compare(rule: &str, component: &str, expected: &ResourceVector, actual: &ResourceVector) -> Result<()> {
    if expected == actual {
        return Ok(());
    }
    Err(Error::Certification {
        rule: rule.to_string(),
        component: component.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    })
}

pub fn certify_rule_by_simulation(rule_id: &str) -> Result<Certificate> {
    let rule = lookup(rule_id)?;
    let protocol = rule.simulable.clone().ok_or_else(|| Error::NotSimulable(rule_id.to_string()))?;
    let t = run_named_protocol(&protocol)?;
    compare(rule_id, "consumed", &rule.lhs, &t.consumed)?;
    compare(rule_id, "produced", &rule.rhs, &t.produced)?;
    compare(rule_id, "catalysts", &rule.catalyst, &t.catalysts)?;
    if !t.catalysis_closed() {
        return Err(Error::Certification {
            rule: rule_id.to_string(),
            component: "catalysis".into(),
            expected: "borrow first, return last".into(),
            actual: "unbalanced transcript".into(),
        });
    }
    if t.final_fidelity < CERTIFY_FIDELITY {
        return Err(Error::Certification {
            rule: rule_id.to_string(),
            component: "final_fidelity".into(),
            expected: format!(">= {CERTIFY_FIDELITY}"),
            actual: t.final_fidelity.to_string(),
        });
    }
    Ok(Certificate {
        rule: rule_id.to_string(),
        protocol,
        final_fidelity: t.final_fidelity,
        transcript: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::rule_db;

    #[test]
    fn every_simulable_rule_certifies() {
        for r in rule_db().iter().filter(|r| r.simulable.is_some()) {
            certify_rule_by_simulation(&r.id).unwrap();
        }
    }

    #[test]
    fn asymptotic_rule_is_not_simulable() {
        assert!(matches!(certify_rule_by_simulation("coherent-rsp"), Err(Error::NotSimulable(_))));
    }
}
