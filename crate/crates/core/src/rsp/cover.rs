//! Covering sets of unitaries whose twirl of any pure state is close to `I`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::linalg::{self, c, dagger, hermitian_eigenvalues, isometry_deviation, outer, CMat, Pair};
use crate::quantum::{gates, haar};
use crate::rng::stream;

/// Multiplier applied to the largest observed slack.
pub const SAFETY_FACTOR: f64 = 1.1;
const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringSet {
    d: usize,
    unitaries: Vec<CMat>,
    epsilon: f64,
    certified: bool,
}

#[derive(Serialize, Deserialize)]
struct CoveringJson {
    d: usize,
    n: usize,
    epsilon: f64,
    unitaries: Vec<Vec<Vec<Pair>>>,
}

/// Generalized Pauli operators `X^a Z^b`; for `d = 2` exactly `{I, X, Y, Z}`.
fn weyl(d: usize) -> Vec<CMat> {
    if d == 2 {
        return vec![gates::identity(2), gates::x(), gates::y(), gates::z()];
    }
    let w = 2.0 * std::f64::consts::PI / d as f64;
    let shift = CMat::from_fn(d, d, |i, j| if i == (j + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let clock = CMat::from_fn(d, d, |i, j| if i == j { c((w * i as f64).cos(), (w * i as f64).sin()) } else { c(0.0, 0.0) });
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            out.push(gates::pow(&shift, a) * gates::pow(&clock, b));
        }
    }
    out
}

impl CoveringSet {
    /// An explicit cover, not yet certified.
    pub fn new(d: usize, unitaries: Vec<CMat>, epsilon: f64) -> Result<Self> {
        if d < 2 {
            return invalid("d must be at least 2");
        }
        if unitaries.is_empty() {
            return invalid("a cover needs at least one unitary");
        }
        for (k, u) in unitaries.iter().enumerate() {
            if u.nrows() != d || u.ncols() != d {
                return invalid(format!("unitary {k} is not {d}x{d}"));
            }
            let dev = isometry_deviation(u);
            if dev > UNITARY_TOL {
                return invalid(format!("unitary {k} deviates from unitarity by {dev:.3e}"));
            }
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return invalid(format!("epsilon must be finite and nonnegative, got {epsilon}"));
        }
        Ok(CoveringSet {
            d,
            unitaries,
            epsilon,
            certified: false,
        })
    }

    /// The exact twirl `{X^a Z^b}` with `n = d²` and `ε = 0`.
    pub fn pauli(d: usize) -> Result<Self> {
        if d < 2 {
            return invalid("d must be at least 2");
        }
        let mut cover = CoveringSet::new(d, weyl(d), 0.0)?;
        cover.certified = true;
        Ok(cover)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.unitaries.len()
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// `(d/n) Σ_k R_k ψ R_k†` for the projector `psi`.
    pub fn twirl(&self, psi: &CMat) -> CMat {
        let sum = self
            .unitaries
            .iter()
            .fold(CMat::zeros(self.d, self.d), |acc, r| acc + r * psi * dagger(r));
        sum.scale(self.d as f64 / self.n() as f64)
    }

    /// Smallest `ε` with `(1-ε/2) I ≤ twirl ≤ (1+ε/2) I`.
    pub fn slack(&self, psi: &CMat) -> f64 {
        let ev = hermitian_eigenvalues(&self.twirl(psi));
        ev.iter().map(|l| 2.0 * (l - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest slack over `count` Haar-random test states; state `i` is
    /// drawn from its own stream.
    pub fn max_slack(&self, count: usize, seed: u64, exec: Execution) -> f64 {
        exec.map(count, |i| {
            let mut rng = stream(seed, "rsp-test-state", i as u64);
            let v = haar::haar_vector(self.d, &mut rng);
            self.slack(&outer(&v))
        })
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Marks the cover certified if `count` fresh test states respect the stored ε.
    pub fn recertify(mut self, count: usize, seed: u64, exec: Execution) -> Result<Self> {
        let worst = self.max_slack(count, seed, exec);
        if worst > self.epsilon + 1e-9 {
            return Err(crate::Error::Precondition(format!(
                "observed slack {worst:.6} exceeds stored epsilon {:.6}",
                self.epsilon
            )));
        }
        self.certified = true;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let j = CoveringJson {
            d: self.d,
            n: self.n(),
            epsilon: self.epsilon,
            unitaries: self.unitaries.iter().map(linalg::matrix_to_pairs).collect(),
        };
        serde_json::to_string(&j).expect("covers always serialise")
    }

    /// Parses a stored cover. The result is uncertified until [`recertify`](Self::recertify).
    pub fn from_json(text: &str) -> Result<Self> {
        let j: CoveringJson = serde_json::from_str(text).map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
        if j.unitaries.len() != j.n {
            return invalid(format!("n = {} but {} unitaries listed", j.n, j.unitaries.len()));
        }
        let us = j.unitaries.iter().map(|m| linalg::matrix_from_pairs(m)).collect::<Result<Vec<_>>>()?;
        CoveringSet::new(j.d, us, j.epsilon)
    }
}

/// Samples `n` Haar unitaries from `seed` and certifies
/// `ε = 1.1 × (largest slack over test_states Haar states)`.
pub fn sample_covering(d: usize, n: usize, seed: u64, test_states: usize, exec: Execution) -> Result<CoveringSet> {
    if d < 2 {
        return invalid("d must be at least 2");
    }
    if n < d * d {
        return invalid(format!("n = {n} is below d^2 = {}; the set cannot cover", d * d));
    }
    if test_states == 0 {
        return invalid("certification needs at least one test state");
    }
    let mut rng = stream(seed, "rsp-cover", 0);
    let unitaries = (0..n).map(|_| haar::haar_unitary(d, &mut rng)).collect();
    let mut cover = CoveringSet::new(d, unitaries, 0.0)?;
    cover.epsilon = SAFETY_FACTOR * cover.max_slack(test_states, seed, exec);
    cover.certified = true;
    Ok(cover)
}
