use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::CMat;
use crate::quantum::{Party, PureState};
use crate::resources::ResourceVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub desc: String,
    pub op: String,
    /// Subsystem labels; for controlled operations the control comes first.
    pub targets: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// Ordered log of a protocol run plus its net resource bookkeeping.
///
/// `consumed` and `produced` are net of `catalysts`, which are borrowed by
/// the first step and handed back by the last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: String,
    pub seed: Option<u64>,
    pub steps: Vec<Step>,
    pub consumed: ResourceVector,
    pub produced: ResourceVector,
    pub catalysts: ResourceVector,
    pub final_fidelity: f64,
    pub target_description: String,
    pub status: Status,
}

pub const BORROW_OP: &str = "borrow";
pub const RETURN_OP: &str = "return";

impl Transcript {
    pub fn new(protocol: &str) -> Self {
        Transcript {
            protocol: protocol.to_string(),
            seed: None,
            steps: Vec::new(),
            consumed: ResourceVector::new(),
            produced: ResourceVector::new(),
            catalysts: ResourceVector::new(),
            final_fidelity: 0.0,
            target_description: String::new(),
            status: Status::Ok,
        }
    }

    pub fn step(&mut self, desc: impl Into<String>, op: impl Into<String>, targets: &[&str]) {
        self.steps.push(Step {
            desc: desc.into(),
            op: op.into(),
            targets: targets.iter().map(|s| s.to_string()).collect(),
        });
    }

    pub fn borrow(&mut self, catalysts: ResourceVector, registers: &[&str]) {
        self.step(format!("borrow catalyst {catalysts}"), BORROW_OP, registers);
        self.catalysts = catalysts;
    }

    pub fn give_back(&mut self, registers: &[&str]) {
        let c = self.catalysts.clone();
        self.step(format!("return catalyst {c}"), RETURN_OP, registers);
    }

    pub fn succeeded(&self) -> bool {
        self.status == Status::Ok
    }

    /// Catalysts, if any, are borrowed in the first step and returned in the last.
    pub fn catalysis_closed(&self) -> bool {
        if self.catalysts.is_zero() {
            return !self.steps.iter().any(|s| s.op == BORROW_OP || s.op == RETURN_OP);
        }
        let borrowed = self.steps.first().is_some_and(|s| s.op == BORROW_OP);
        let returned = self.steps.last().is_some_and(|s| s.op == RETURN_OP);
        borrowed && (returned || self.status == Status::Failed)
    }

    /// Resources that must be on hand before the run: consumed plus catalysts.
    pub fn gross_input(&self) -> ResourceVector {
        &self.consumed + &self.catalysts
    }

    pub fn gross_output(&self) -> ResourceVector {
        &self.produced + &self.catalysts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialise")
    }
}

/// Result of running a protocol: the log and the final joint state.
#[derive(Debug, Clone)]
pub struct Run {
    pub transcript: Transcript,
    pub state: PureState,
}

/// A state under evolution together with the transcript recording it.
#[derive(Debug, Clone)]
pub struct Session {
    pub state: PureState,
    pub log: Transcript,
}

impl Session {
    pub fn new(protocol: &str, state: PureState) -> Self {
        Session {
            state,
            log: Transcript::new(protocol),
        }
    }

    pub fn apply(&mut self, desc: &str, op: &str, matrix: &CMat, targets: &[&str]) -> Result<()> {
        self.state = self.state.apply(matrix, targets)?;
        self.log.step(desc, op, targets);
        Ok(())
    }

    pub fn controlled(&mut self, desc: &str, op: &str, control: &str, targets: &[&str], blocks: &[CMat]) -> Result<()> {
        self.state = self.state.apply_controlled(control, targets, blocks)?;
        let mut all = vec![control];
        all.extend_from_slice(targets);
        self.log.step(desc, op, &all);
        Ok(())
    }

    pub fn adjoin(&mut self, desc: &str, extra: &PureState) -> Result<()> {
        self.state = self.state.tensor(extra)?;
        let labels = extra.layout().labels();
        self.log.step(desc, "prepare", &labels);
        Ok(())
    }

    /// Physical transmission: the subsystem changes hands.
    pub fn send(&mut self, desc: &str, label: &str, to: Party) -> Result<()> {
        self.state = self.state.with_party(label, to)?;
        self.log.step(desc, "transmit", &[label]);
        Ok(())
    }

    pub fn copy(&mut self, desc: &str, source: &str, copy: &str, party: Party) -> Result<()> {
        self.state = self.state.coherent_copy(source, copy, party)?;
        self.log.step(desc, "cobit", &[source, copy]);
        Ok(())
    }

    pub fn finish(mut self, target: &PureState, description: &str) -> Result<Run> {
        let aligned = target.aligned_to(self.state.layout())?;
        self.log.final_fidelity = self.state.fidelity(&aligned)?;
        self.log.target_description = description.to_string();
        Ok(Run {
            transcript: self.log,
            state: self.state,
        })
    }
}
