use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Hard cap on the total Hilbert-space dimension of a register layout.
pub const MAX_TOTAL_DIM: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    E,
    #[serde(rename = "shared")]
    Shared,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Party::A => "A",
            Party::B => "B",
            Party::E => "E",
            Party::Shared => "shared",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub party: Party,
    pub dim: usize,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, party: Party, dim: usize) -> Self {
        Subsystem {
            label: label.into(),
            party,
            dim,
        }
    }

    pub fn qubit(label: impl Into<String>, party: Party) -> Self {
        Subsystem::new(label, party, 2)
    }
}

/// Ordered list of labelled subsystems. Index order is big-endian: the
/// first subsystem is the most significant digit of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Subsystem>", into = "Vec<Subsystem>")]
pub struct RegisterLayout {
    subsystems: Vec<Subsystem>,
}

impl TryFrom<Vec<Subsystem>> for RegisterLayout {
    type Error = crate::Error;
    fn try_from(v: Vec<Subsystem>) -> Result<Self> {
        RegisterLayout::new(v)
    }
}

impl From<RegisterLayout> for Vec<Subsystem> {
    fn from(l: RegisterLayout) -> Self {
        l.subsystems
    }
}

impl RegisterLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        if subsystems.is_empty() {
            return invalid("layout needs at least one subsystem");
        }
        let mut total: usize = 1;
        for (i, s) in subsystems.iter().enumerate() {
            if s.dim < 2 {
                return invalid(format!("subsystem `{}` has dimension {} < 2", s.label, s.dim));
            }
            if subsystems[..i].iter().any(|t| t.label == s.label) {
                return invalid(format!("duplicate subsystem label `{}`", s.label));
            }
            total = total
                .checked_mul(s.dim)
                .filter(|&t| t <= MAX_TOTAL_DIM)
                .ok_or_else(|| {
                    crate::Error::InvalidArgument(format!(
                        "total dimension exceeds cap {MAX_TOTAL_DIM}"
                    ))
                })?;
        }
        Ok(RegisterLayout { subsystems })
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("no subsystem labelled `{label}`")))
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.get(label)?.dim)
    }

    pub fn parties(&self) -> Vec<Party> {
        let mut ps: Vec<Party> = self.subsystems.iter().map(|s| s.party).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Labels held by any of `parties`, in layout order.
    pub fn labels_of(&self, parties: &[Party]) -> Vec<&str> {
        self.subsystems
            .iter()
            .filter(|s| parties.contains(&s.party))
            .map(|s| s.label.as_str())
            .collect()
    }

    /// Resolves labels to positions, rejecting duplicates.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l)?;
            if out.contains(&p) {
                return invalid(format!("subsystem `{l}` listed twice"));
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn concat(&self, other: &RegisterLayout) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs.extend(other.subsystems.iter().cloned());
        RegisterLayout::new(subs)
    }

    pub fn with_appended(&self, extra: &[Subsystem]) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs.extend(extra.iter().cloned());
        RegisterLayout::new(subs)
    }

    pub fn with_party(&self, label: &str, party: Party) -> Result<Self> {
        let p = self.position(label)?;
        let mut out = self.clone();
        out.subsystems[p].party = party;
        Ok(out)
    }

    pub fn renamed(&self, label: &str, new_label: &str) -> Result<Self> {
        let p = self.position(label)?;
        let mut subs = self.subsystems.clone();
        subs[p].label = new_label.to_string();
        RegisterLayout::new(subs)
    }

    pub(crate) fn replaced(&self, index: usize, sub: Subsystem) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs[index] = sub;
        RegisterLayout::new(subs)
    }

    /// Mixed-radix digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (k, s) in self.subsystems.iter().enumerate().rev() {
            out[k] = index % s.dim;
            index /= s.dim;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.subsystems.len());
        digits
            .iter()
            .zip(&self.subsystems)
            .fold(0, |acc, (&d, s)| acc * s.dim + d)
    }

    /// For every flat index, the pair (index within `targets` in the given
    /// order, index within the remaining subsystems in layout order).
    pub(crate) fn split_indices(&self, targets: &[usize]) -> (usize, usize, Vec<(usize, usize)>) {
        let rest: Vec<usize> = (0..self.len()).filter(|k| !targets.contains(k)).collect();
        let dims = self.dims();
        let t_dim: usize = targets.iter().map(|&k| dims[k]).product();
        let r_dim: usize = rest.iter().map(|&k| dims[k]).product();
        let map = (0..self.total_dim())
            .map(|i| {
                let d = self.digits(i);
                let t = targets.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
                let r = rest.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
                (t, r)
            })
            .collect();
        (t_dim, r_dim, map)
    }
}

impl fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsystems
            .iter()
            .map(|s| format!("{}@{}[{}]", s.label, s.party, s.dim))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
