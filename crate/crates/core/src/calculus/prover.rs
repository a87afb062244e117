//! Bounded breadth-first search over rule applications.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use super::rules::{rule_db, ConversionRule};
use crate::error::{invalid, Error, Result};
use crate::resources::{Count, ResourceVector};

pub const MAX_DEPTH: usize = 32;
pub const MAX_VISITED: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProveOptions {
    pub allow_catalysis: bool,
    pub catalyst_budget: ResourceVector,
    pub allow_asymptotic: bool,
    pub max_depth: usize,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            allow_catalysis: false,
            catalyst_budget: ResourceVector::new(),
            allow_asymptotic: false,
            max_depth: 12,
        }
    }
}

impl ProveOptions {
    pub fn with_catalysts(budget: ResourceVector) -> Self {
        ProveOptions {
            allow_catalysis: true,
            catalyst_budget: budget,
            ..Self::default()
        }
    }

    fn borrowed(&self) -> ResourceVector {
        if self.allow_catalysis {
            self.catalyst_budget.clone()
        } else {
            ResourceVector::new()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationStep {
    pub rule: String,
    pub before: ResourceVector,
    pub after: ResourceVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub start: ResourceVector,
    pub goal: ResourceVector,
    /// Borrowed at the start and owed back at the end.
    pub borrowed: ResourceVector,
    /// Factor by which start, goal and borrowing were multiplied so that
    /// fractional rates become whole rule applications.
    pub scale: i64,
    pub steps: Vec<DerivationStep>,
    pub used_catalysis: bool,
    pub used_asymptotic: bool,
}

impl Derivation {
    fn initial(&self) -> ResourceVector {
        self.start.scaled(Count::from_integer(self.scale)) + self.borrowed.clone()
    }

    fn owed(&self) -> ResourceVector {
        self.goal.scaled(Count::from_integer(self.scale)) + self.borrowed.clone()
    }

    pub fn final_state(&self) -> ResourceVector {
        self.steps.last().map(|s| s.after.clone()).unwrap_or_else(|| self.initial())
    }

    /// Re-executes every step against `rules` with exact arithmetic.
    pub fn replay(&self, rules: &[ConversionRule]) -> Result<()> {
        let mut cur = self.initial();
        for (i, step) in self.steps.iter().enumerate() {
            let rule = rules
                .iter()
                .find(|r| r.id == step.rule)
                .ok_or_else(|| Error::UnknownRule(step.rule.clone()))?;
            if step.before != cur {
                return invalid(format!("step {} starts from {} but the multiset is {cur}", i + 1, step.before));
            }
            let next = rule
                .apply(&cur)
                .ok_or_else(|| Error::InvalidArgument(format!("step {}: rule `{}` does not apply to {cur}", i + 1, rule.id)))?;
            if next != step.after {
                return invalid(format!("step {}: expected {next}, recorded {}", i + 1, step.after));
            }
            cur = next;
        }
        if !cur.dominates(&self.owed()) {
            return invalid(format!("final multiset {cur} does not cover goal plus returned catalysts {}", self.owed()));
        }
        Ok(())
    }

    /// Numbered rule applications with their citations.
    pub fn pretty(&self, rules: &[ConversionRule]) -> String {
        let mut out = format!("start: {}\n", self.start);
        if !self.borrowed.is_zero() {
            out.push_str(&format!("borrow: {}\n", self.borrowed));
        }
        if self.scale != 1 {
            out.push_str(&format!("scale: x{}\n", self.scale));
        }
        for (i, s) in self.steps.iter().enumerate() {
            let source = rules.iter().find(|r| r.id == s.rule).map(|r| r.source.as_str()).unwrap_or("");
            out.push_str(&format!("{:>2}. {} [{}]: {} => {}\n", i + 1, s.rule, source, s.before, s.after));
        }
        out.push_str(&format!("goal: {}\n", self.goal));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    Found(Derivation),
    NotFound { explored: usize, cap_reached: bool },
}

impl ProofResult {
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            ProofResult::Found(d) => Some(d),
            ProofResult::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.derivation().is_some()
    }
}

fn common_denominator(vs: &[&ResourceVector]) -> i64 {
    vs.iter()
        .flat_map(|v| v.iter().map(|(_, c)| *c.denom()))
        .fold(1, |acc, d| acc.lcm(&d))
}

/// Searches for `start (+ borrowed) ⇒* s` with `s ≥ goal (+ borrowed)`
/// using the default rule database.
pub fn prove(start: &ResourceVector, goal: &ResourceVector, opts: &ProveOptions) -> Result<ProofResult> {
    prove_with(&rule_db(), start, goal, opts)
}

/// Multiset, `(parent, rule)` that reached it, depth.
type Node = (ResourceVector, Option<(usize, usize)>, usize);

pub fn prove_with(rules: &[ConversionRule], start: &ResourceVector, goal: &ResourceVector, opts: &ProveOptions) -> Result<ProofResult> {
    if opts.max_depth > MAX_DEPTH {
        return invalid(format!("max depth {} exceeds {MAX_DEPTH}", opts.max_depth));
    }
    let usable: Vec<&ConversionRule> = rules.iter().filter(|r| opts.allow_asymptotic || !r.asymptotic).collect();
    let borrowed = opts.borrowed();
    let scale = if opts.allow_asymptotic {
        common_denominator(&[start, goal, &borrowed])
    } else {
        1
    };
    let factor = Count::from_integer(scale);
    let borrowed = borrowed.scaled(factor);
    let initial = start.scaled(factor) + borrowed.clone();
    let owed = goal.scaled(factor) + borrowed.clone();

    let mut nodes: Vec<Node> = vec![(initial.clone(), None, 0)];
    let mut seen: HashMap<ResourceVector, usize> = HashMap::new();
    seen.insert(initial, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut cap_reached = false;
    let mut hit = None;

    while let Some(idx) = queue.pop_front() {
        let (cur, _, depth) = nodes[idx].clone();
        if cur.dominates(&owed) {
            hit = Some(idx);
            break;
        }
        if depth >= opts.max_depth {
            continue;
        }
        for (ri, rule) in usable.iter().enumerate() {
            let Some(next) = rule.apply(&cur) else { continue };
            if seen.contains_key(&next) {
                continue;
            }
            if nodes.len() >= MAX_VISITED {
                cap_reached = true;
                break;
            }
            nodes.push((next.clone(), Some((idx, ri)), depth + 1));
            seen.insert(next, nodes.len() - 1);
            queue.push_back(nodes.len() - 1);
        }
        if cap_reached {
            break;
        }
    }

    let Some(mut idx) = hit else {
        return Ok(ProofResult::NotFound {
            explored: nodes.len(),
            cap_reached,
        });
    };
    let mut steps = Vec::new();
    while let Some((parent, ri)) = nodes[idx].1 {
        steps.push(DerivationStep {
            rule: usable[ri].id.clone(),
            before: nodes[parent].0.clone(),
            after: nodes[idx].0.clone(),
        });
        idx = parent;
    }
    steps.reverse();
    let used = |f: fn(&ConversionRule) -> bool| steps.iter().any(|s| usable.iter().any(|r| r.id == s.rule && f(r)));
    let used_catalysis = !borrowed.is_zero() || used(|r| !r.catalyst.is_zero());
    let used_asymptotic = used(|r| r.asymptotic);
    Ok(ProofResult::Found(Derivation {
        start: start.clone(),
        goal: goal.clone(),
        borrowed,
        scale,
        steps,
        used_catalysis,
        used_asymptotic,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equality {
    Equal { forward: Derivation, backward: Derivation },
    /// Only `a ≥ b`.
    Forward(Derivation),
    /// Only `b ≥ a`.
    Backward(Derivation),
    Neither,
}

pub fn check_equality(a: &ResourceVector, b: &ResourceVector, opts: &ProveOptions) -> Result<Equality> {
    let fwd = prove(a, b, opts)?;
    let bwd = prove(b, a, opts)?;
    Ok(match (fwd, bwd) {
        (ProofResult::Found(f), ProofResult::Found(g)) => Equality::Equal { forward: f, backward: g },
        (ProofResult::Found(f), _) => Equality::Forward(f),
        (_, ProofResult::Found(g)) => Equality::Backward(g),
        _ => Equality::Neither,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(s: &str) -> ResourceVector {
        ResourceVector::parse(s).unwrap()
    }

    #[test]
    fn teleportation_with_catalyst() {
        let opts = ProveOptions::with_catalysts(rv("1 ebit"));
        let r = prove(&rv("2 cobit->"), &rv("1 qubit-> + 1 ebit"), &opts).unwrap();
        let d = r.derivation().unwrap();
        assert_eq!(d.steps.len(), 1);
        assert_eq!(d.steps[0].rule, "coherent-teleport");
        assert!(d.used_catalysis);
        d.replay(&rule_db()).unwrap();
    }

    #[test]
    fn degradation_chain() {
        let r = prove(&rv("1 qubit->"), &rv("1 cbit->"), &ProveOptions::default()).unwrap();
        let d = r.derivation().unwrap();
        let rules: Vec<_> = d.steps.iter().map(|s| s.rule.as_str()).collect();
        assert_eq!(rules, ["qubit-to-cobit", "cobit-to-cbit"]);
        assert!(!d.used_catalysis);
    }

    #[test]
    fn no_entanglement_from_cbits() {
        let opts = ProveOptions {
            max_depth: 10,
            ..ProveOptions::default()
        };
        assert!(!prove(&rv("1 cbit->"), &rv("1 ebit"), &opts).unwrap().is_found());
    }

    #[test]
    fn depth_limit_enforced() {
        let opts = ProveOptions {
            max_depth: 33,
            ..ProveOptions::default()
        };
        assert!(prove(&rv("1 ebit"), &rv("1 ebit"), &opts).is_err());
    }

    #[test]
    fn equalities() {
        let cat = ProveOptions::with_catalysts(rv("2 ebit"));
        assert!(matches!(check_equality(&rv("2 cnot"), &rv("1 swap"), &cat).unwrap(), Equality::Equal { .. }));
        assert!(matches!(
            check_equality(&rv("1 qubit->"), &rv("1 cbit->"), &ProveOptions::default()).unwrap(),
            Equality::Forward(_)
        ));
    }

    #[test]
    fn asymptotic_rates_scale() {
        let opts = ProveOptions {
            allow_asymptotic: true,
            ..ProveOptions::default()
        };
        let r = prove(&rv("1/2 cobit->"), &rv("1/2 remote-qubit"), &opts).unwrap();
        let d = r.derivation().unwrap();
        assert_eq!(d.scale, 2);
        assert!(d.used_asymptotic);
        d.replay(&rule_db()).unwrap();
        assert!(!prove(&rv("1 cobit->"), &rv("1 remote-qubit"), &ProveOptions::default()).unwrap().is_found());
    }

    #[test]
    fn tampered_derivation_fails_replay() {
        let r = prove(&rv("1 qubit->"), &rv("1 cbit->"), &ProveOptions::default()).unwrap();
        let mut d = r.derivation().unwrap().clone();
        d.steps[1].after = rv("1 ebit");
        assert!(d.replay(&rule_db()).is_err());
    }
}
