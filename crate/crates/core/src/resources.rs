//! Directed communication resources and their rational-valued multisets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Count = Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Alice to Bob.
    Forward,
    /// Bob to Alice.
    Backward,
}

impl Direction {
    fn arrow(self) -> &'static str {
        match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResourceKind {
    Qubit(Direction),
    Cbit(Direction),
    Cobit(Direction),
    Ebit,
    RemoteQubit,
    Cnot,
    Swap,
    /// Opaque named gate token, only usable through user-supplied rules.
    Gate(String),
}

impl ResourceKind {
    pub const QUBIT_FWD: ResourceKind = ResourceKind::Qubit(Direction::Forward);
    pub const QUBIT_BWD: ResourceKind = ResourceKind::Qubit(Direction::Backward);
    pub const CBIT_FWD: ResourceKind = ResourceKind::Cbit(Direction::Forward);
    pub const CBIT_BWD: ResourceKind = ResourceKind::Cbit(Direction::Backward);
    pub const COBIT_FWD: ResourceKind = ResourceKind::Cobit(Direction::Forward);
    pub const COBIT_BWD: ResourceKind = ResourceKind::Cobit(Direction::Backward);
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceKind::Qubit(d) => write!(f, "qubit{}", d.arrow()),
            ResourceKind::Cbit(d) => write!(f, "cbit{}", d.arrow()),
            ResourceKind::Cobit(d) => write!(f, "cobit{}", d.arrow()),
            ResourceKind::Ebit => f.write_str("ebit"),
            ResourceKind::RemoteQubit => f.write_str("remote-qubit"),
            ResourceKind::Cnot => f.write_str("cnot"),
            ResourceKind::Swap => f.write_str("swap"),
            ResourceKind::Gate(name) => write!(f, "U({name})"),
        }
    }
}

impl FromStr for ResourceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v = ResourceVector::parse(&format!("1 {s}"))?;
        let mut it = v.counts.into_keys();
        match (it.next(), it.next()) {
            (Some(k), None) => Ok(k),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("`{s}` is not a single resource kind"),
            }),
        }
    }
}

/// Non-negative rational counts of resource kinds. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResourceVector {
    counts: BTreeMap<ResourceKind, Count>,
}

impl ResourceVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(kind: ResourceKind, n: i64) -> Self {
        Self::new().with(kind, n)
    }

    /// Adds `n` of `kind`.
    pub fn with(self, kind: ResourceKind, n: i64) -> Self {
        self.with_ratio(kind, Count::from_integer(n))
    }

    pub fn with_ratio(mut self, kind: ResourceKind, n: Count) -> Self {
        assert!(!n.is_negative(), "resource counts are non-negative");
        self.add_count(kind, n);
        self
    }

    fn add_count(&mut self, kind: ResourceKind, n: Count) {
        if n.is_zero() {
            return;
        }
        let e = self.counts.entry(kind).or_insert_with(Count::zero);
        *e += n;
    }

    pub fn get(&self, kind: &ResourceKind) -> Count {
        self.counts.get(kind).copied().unwrap_or_else(Count::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ResourceKind, &Count)> {
        self.counts.iter()
    }

    pub fn kinds(&self) -> impl Iterator<Item = &ResourceKind> {
        self.counts.keys()
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &ResourceVector) -> bool {
        other.counts.iter().all(|(k, &v)| self.get(k) >= v)
    }

    /// `self − other`, or `None` if some count would go negative.
    pub fn checked_sub(&self, other: &ResourceVector) -> Option<ResourceVector> {
        if !self.dominates(other) {
            return None;
        }
        let mut out = self.clone();
        for (k, &v) in &other.counts {
            let e = out.counts.get_mut(k).expect("dominated entries exist");
            *e -= v;
            if e.is_zero() {
                out.counts.remove(k);
            }
        }
        Some(out)
    }

    pub fn scaled(&self, factor: Count) -> ResourceVector {
        assert!(!factor.is_negative());
        let mut out = ResourceVector::new();
        for (k, &v) in &self.counts {
            out.add_count(k.clone(), v * factor);
        }
        out
    }

    /// Total of all counts (a crude size measure).
    pub fn total(&self) -> Count {
        self.counts.values().fold(Count::zero(), |a, &b| a + b)
    }

    /// Parses `term ("+" term)*` with `term = [count] kind[arrow]`.
    pub fn parse(expr: &str) -> Result<Self> {
        Parser::new(expr).parse()
    }
}

impl Add for ResourceVector {
    type Output = ResourceVector;
    fn add(mut self, rhs: ResourceVector) -> ResourceVector {
        self += &rhs;
        self
    }
}

impl Add<&ResourceVector> for &ResourceVector {
    type Output = ResourceVector;
    fn add(self, rhs: &ResourceVector) -> ResourceVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ResourceVector> for ResourceVector {
    fn add_assign(&mut self, rhs: &ResourceVector) {
        for (k, &v) in &rhs.counts {
            self.add_count(k.clone(), v);
        }
    }
}

impl FromStr for ResourceVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ResourceVector::parse(s)
    }
}

fn fmt_count(c: &Count) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ResourceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{} {}", fmt_count(v), k))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Serialize for ResourceVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.counts.len()))?;
        for (k, v) in &self.counts {
            if v.is_integer() {
                map.serialize_entry(&k.to_string(), &v.to_integer())?;
            } else {
                map.serialize_entry(&k.to_string(), &fmt_count(v))?;
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CountRepr {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for ResourceVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ResourceVector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from resource kind to count")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> std::result::Result<Self::Value, M::Error> {
                let mut out = ResourceVector::new();
                while let Some((k, v)) = m.next_entry::<String, CountRepr>()? {
                    let kind: ResourceKind = k.parse().map_err(de::Error::custom)?;
                    let count = match v {
                        CountRepr::Int(i) => Count::from_integer(i),
                        CountRepr::Text(t) => parse_count(&t).ok_or_else(|| de::Error::custom(format!("bad count `{t}`")))?,
                    };
                    if count.is_negative() {
                        return Err(de::Error::custom("negative count"));
                    }
                    out.add_count(kind, count);
                }
                Ok(out)
            }
        }
        d.deserialize_map(V)
    }
}

fn parse_count(t: &str) -> Option<Count> {
    let t = t.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        (d != 0).then(|| Count::new(n, d))
    } else if let Some((i, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 12 || i.is_empty() && frac.is_empty() {
            return None;
        }
        let den = 10i64.pow(digits);
        let whole: i64 = if i.is_empty() { 0 } else { i.parse().ok()? };
        let part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        Some(Count::new(whole * den + part, den))
    } else {
        t.parse::<i64>().ok().map(Count::from_integer)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(s: &str) -> Self {
        Parser {
            chars: s.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<ResourceVector> {
        let mut out = ResourceVector::new();
        loop {
            self.skip_ws();
            let (kind, count) = self.term()?;
            out.add_count(kind, count);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => self.pos += 1,
                Some(c) => return self.err(self.pos, format!("expected `+`, found `{c}`")),
            }
        }
    }

    fn term(&mut self) -> Result<(ResourceKind, Count)> {
        let start = self.pos;
        if self.peek() == Some('-') {
            return self.err(start, "negative counts are not allowed");
        }
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == '/' || c == '.' {
                text.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        let count = if text.is_empty() {
            Count::from_integer(1)
        } else {
            match parse_count(&text) {
                Some(c) => c,
                None => return self.err(start, format!("malformed count `{text}`")),
            }
        };
        self.skip_ws();
        let kind = self.kind()?;
        Ok((kind, count))
    }

    fn kind(&mut self) -> Result<ResourceKind> {
        let start = self.pos;
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || (c == '-' && self.chars.get(self.pos + 1) != Some(&'>')) {
                word.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if word.is_empty() {
            return match self.peek() {
                Some(c) => self.err(start, format!("expected a resource kind, found `{c}`")),
                None => self.err(start, "expected a resource kind"),
            };
        }
        if word == "U" && self.peek() == Some('(') {
            self.pos += 1;
            let mut name = String::new();
            while let Some(c) = self.peek() {
                self.pos += 1;
                if c == ')' {
                    if name.trim().is_empty() {
                        return self.err(start, "empty gate name");
                    }
                    return Ok(ResourceKind::Gate(name.trim().to_string()));
                }
                name.push(c);
            }
            return self.err(start, "unterminated gate name");
        }
        let arrow_pos = self.pos;
        let dir = self.arrow();
        let lower = word.to_ascii_lowercase();
        let directed = |d: Option<Direction>, f: fn(Direction) -> ResourceKind| f(d.unwrap_or(Direction::Forward));
        let kind = match lower.as_str() {
            "qubit" | "qubits" | "qu" | "qus" => directed(dir, ResourceKind::Qubit),
            "cbit" | "cbits" | "cb" | "cbs" => directed(dir, ResourceKind::Cbit),
            "cobit" | "cobits" | "coh" | "cohs" => directed(dir, ResourceKind::Cobit),
            other => {
                if dir.is_some() {
                    return self.err(arrow_pos, format!("`{word}` does not take a direction"));
                }
                match other {
                    "ebit" | "ebits" | "eb" | "ebs" => ResourceKind::Ebit,
                    "remote-qubit" | "remote-qubits" => ResourceKind::RemoteQubit,
                    "cnot" | "cnots" => ResourceKind::Cnot,
                    "swap" | "swaps" => ResourceKind::Swap,
                    _ => return self.err(start, format!("unknown resource kind `{word}`")),
                }
            }
        };
        Ok(kind)
    }

    fn arrow(&mut self) -> Option<Direction> {
        let rest: String = self.chars[self.pos..].iter().take(4).collect();
        for (tok, d) in [
            ("(->)", Direction::Forward),
            ("(<-)", Direction::Backward),
            ("(→)", Direction::Forward),
            ("(←)", Direction::Backward),
            ("->", Direction::Forward),
            ("<-", Direction::Backward),
            ("→", Direction::Forward),
            ("←", Direction::Backward),
        ] {
            if rest.starts_with(tok) {
                self.pos += tok.chars().count();
                return Some(d);
            }
        }
        None
    }
}
