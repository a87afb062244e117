//! The fixed database of resource conversion rules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::resources::{ResourceKind as K, ResourceVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConversionRule {
    pub id: String,
    pub lhs: ResourceVector,
    pub rhs: ResourceVector,
    /// Must be present alongside `lhs` and is left untouched.
    pub catalyst: ResourceVector,
    /// Holds only as a rate over many uses.
    pub asymptotic: bool,
    pub source: String,
    /// Protocol that realizes the rule exactly, if any.
    pub simulable: Option<String>,
}

impl ConversionRule {
    fn new(id: &str, lhs: ResourceVector, rhs: ResourceVector, source: &str) -> Self {
        ConversionRule {
            id: id.to_string(),
            lhs,
            rhs,
            catalyst: ResourceVector::new(),
            asymptotic: false,
            source: source.to_string(),
            simulable: None,
        }
    }

    fn catalyst(mut self, c: ResourceVector) -> Self {
        self.catalyst = c;
        self
    }

    fn asymptotic(mut self) -> Self {
        self.asymptotic = true;
        self
    }

    fn simulated_by(mut self, protocol: &str) -> Self {
        self.simulable = Some(protocol.to_string());
        self
    }

    /// `lhs ≥ rhs`, with `(cat)` / `(asy)` markers.
    pub fn relation(&self) -> String {
        let mut s = format!("{} >= {}", self.lhs, self.rhs);
        if !self.catalyst.is_zero() {
            s.push_str(&format!(" (cat: {})", self.catalyst));
        }
        if self.asymptotic {
            s.push_str(" (asy)");
        }
        s
    }

    /// Whether the rule fires on `current`: needs `lhs + catalyst`.
    pub fn applies_to(&self, current: &ResourceVector) -> bool {
        current.dominates(&(&self.lhs + &self.catalyst))
    }

    /// `current - lhs + rhs`, or `None` if the rule does not fire.
    pub fn apply(&self, current: &ResourceVector) -> Option<ResourceVector> {
        if !self.applies_to(current) {
            return None;
        }
        current.checked_sub(&self.lhs).map(|rest| rest + self.rhs.clone())
    }
}

fn v(pairs: &[(K, i64)]) -> ResourceVector {
    pairs.iter().fold(ResourceVector::new(), |acc, (k, n)| acc.with(k.clone(), *n))
}

/// Sixteen rules; each equality appears as two inequalities.
pub fn rule_db() -> Vec<ConversionRule> {
    let (qf, qb) = (K::QUBIT_FWD, K::QUBIT_BWD);
    let (cf, cb) = (K::CBIT_FWD, K::CBIT_BWD);
    let (hf, hb) = (K::COBIT_FWD, K::COBIT_BWD);
    vec![
        ConversionRule::new("qubit-to-cobit", v(&[(qf.clone(), 1)]), v(&[(hf.clone(), 1)]), "1 qu >= 1 coh: copy into an ancilla and send it")
            .simulated_by("qubit-to-cobit"),
        ConversionRule::new("cobit-to-cbit", v(&[(hf.clone(), 1)]), v(&[(cf.clone(), 1)]), "1 coh >= 1 cb: discard the sender's copy")
            .simulated_by("cobit-to-cbit"),
        ConversionRule::new("cobit-to-ebit", v(&[(hf.clone(), 1)]), v(&[(K::Ebit, 1)]), "1 coh >= 1 eb: send a superposition")
            .simulated_by("cobit-to-ebit"),
        ConversionRule::new(
            "eq1-sdc-coherent",
            v(&[(qf.clone(), 1), (K::Ebit, 1)]),
            v(&[(hf.clone(), 2)]),
            "coherent super-dense coding: 1 qu + 1 eb >= 2 coh",
        )
        .simulated_by("coherent-sdc"),
        ConversionRule::new(
            "coherent-teleport",
            v(&[(hf.clone(), 2)]),
            v(&[(qf.clone(), 1), (K::Ebit, 1)]),
            "coherent teleportation: 2 coh >= 1 qu + 1 eb (cat)",
        )
        .catalyst(v(&[(K::Ebit, 1)]))
        .simulated_by("coherent-teleport"),
        ConversionRule::new(
            "cnot-coherent-bidir",
            v(&[(K::Cnot, 1), (K::Ebit, 1)]),
            v(&[(hf.clone(), 1), (hb.clone(), 1)]),
            "one CNOT and one ebit send a cobit each way",
        )
        .simulated_by("cnot-coherent-bidir"),
        ConversionRule::new(
            "cnot-from-cobits",
            v(&[(hf.clone(), 1), (hb.clone(), 1)]),
            v(&[(K::Cnot, 1), (K::Ebit, 1)]),
            "coherent distributed CNOT: coh-> + coh<- >= CNOT + eb (cat)",
        )
        .catalyst(v(&[(K::Ebit, 1)]))
        .simulated_by("coherent-distributed-cnot"),
        ConversionRule::new(
            "gottesman-cnot",
            v(&[(cf.clone(), 1), (cb.clone(), 1), (K::Ebit, 1)]),
            v(&[(K::Cnot, 1)]),
            "distributed CNOT from one cbit each way and one ebit",
        ),
        ConversionRule::new("cnot-to-swap", v(&[(K::Cnot, 2)]), v(&[(K::Swap, 1)]), "2 CNOT >= 1 SWAP (cat)")
            .catalyst(v(&[(K::Ebit, 2)])),
        ConversionRule::new("swap-to-cnot", v(&[(K::Swap, 1)]), v(&[(K::Cnot, 2)]), "1 SWAP >= 2 CNOT (cat)")
            .catalyst(v(&[(K::Ebit, 2)])),
        ConversionRule::new("swap-to-qubits", v(&[(K::Swap, 1)]), v(&[(qf.clone(), 1), (qb.clone(), 1)]), "a SWAP sends one qubit each way"),
        ConversionRule::new("qubits-to-swap", v(&[(qf.clone(), 1), (qb, 1)]), v(&[(K::Swap, 1)]), "one qubit each way performs a SWAP"),
        ConversionRule::new("teleportation", v(&[(cf.clone(), 2), (K::Ebit, 1)]), v(&[(qf.clone(), 1)]), "teleportation: 2 cb + 1 eb >= 1 qu"),
        ConversionRule::new("rsp", v(&[(cf, 1), (K::Ebit, 1)]), v(&[(K::RemoteQubit, 1)]), "remote state preparation: 1 cb + 1 eb >= 1 remote qubit (asy)")
            .asymptotic(),
        ConversionRule::new("coherent-rsp", v(&[(hf, 1)]), v(&[(K::RemoteQubit, 1)]), "coherent remote state preparation: 1 coh >= 1 remote qubit (asy)")
            .asymptotic(),
        ConversionRule::new("qubit-to-remote-qubit", v(&[(qf, 1)]), v(&[(K::RemoteQubit, 1)]), "sending the state itself"),
    ]
}

pub fn lookup(id: &str) -> Result<ConversionRule> {
    rule_db()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownRule(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn database_shape() {
        let db = rule_db();
        assert_eq!(db.len(), 16);
        let mut ids: Vec<_> = db.iter().map(|r| r.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 16);
        assert!(db.iter().all(|r| !r.source.is_empty()));
    }

    #[test]
    fn lookups() {
        let sdc = lookup("eq1-sdc-coherent").unwrap();
        assert_eq!(sdc.lhs, ResourceVector::parse("1 qubit-> + 1 ebit").unwrap());
        assert_eq!(sdc.rhs, ResourceVector::parse("2 cobit->").unwrap());
        let bidir = lookup("cnot-coherent-bidir").unwrap();
        assert!(bidir.catalyst.is_zero());
        assert_eq!(bidir.lhs, ResourceVector::parse("1 cnot + 1 ebit").unwrap());
        assert!(matches!(lookup("nope"), Err(Error::UnknownRule(_))));
    }

    #[test]
    fn application_keeps_catalyst() {
        let tele = lookup("coherent-teleport").unwrap();
        assert!(tele.apply(&ResourceVector::parse("2 cobit->").unwrap()).is_none());
        let after = tele.apply(&ResourceVector::parse("2 cobit-> + 1 ebit").unwrap()).unwrap();
        assert_eq!(after, ResourceVector::parse("1 qubit-> + 2 ebit").unwrap());
    }
}
