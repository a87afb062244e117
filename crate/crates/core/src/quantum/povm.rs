use rand::Rng;

use super::layout::{Party, Subsystem};
use super::state::PureState;
use crate::error::{invalid, Result};
use crate::linalg::{self, CMat, PSD_TOL};

/// Entrywise tolerance on `Σ_k A_k = I`.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Outcomes below this probability are never sampled.
pub const MIN_SAMPLED_PROB: f64 = 1e-14;
const ISOMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    pub label: String,
    pub operator: CMat,
    sqrt: CMat,
}

impl PovmElement {
    pub fn sqrt(&self) -> &CMat {
        &self.sqrt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<PovmElement>,
}

impl Povm {
    pub fn new(elements: Vec<(String, CMat)>) -> Result<Self> {
        let Some((_, first)) = elements.first() else {
            return invalid("POVM needs at least one element");
        };
        let d = first.nrows();
        let mut total = CMat::zeros(d, d);
        let mut out = Vec::with_capacity(elements.len());
        for (i, (label, op)) in elements.into_iter().enumerate() {
            if op.nrows() != d || op.ncols() != d {
                return invalid(format!("element `{label}` is not {d}x{d}"));
            }
            if out.iter().any(|e: &PovmElement| e.label == label) {
                return invalid(format!("duplicate POVM label `{label}`"));
            }
            let herm = linalg::hermitian_deviation(&op);
            if herm > PSD_TOL {
                return invalid(format!("element {i} (`{label}`) is not Hermitian"));
            }
            let sqrt = linalg::psd_sqrt(&op)
                .map_err(|e| crate::Error::InvalidArgument(format!("element `{label}`: {e}")))?;
            total += &op;
            out.push(PovmElement { label, operator: op, sqrt });
        }
        let dev = linalg::max_abs_diff(&total, &linalg::identity(d));
        if dev > COMPLETENESS_TOL {
            return invalid(format!("POVM elements sum to identity only within {dev:.3e}"));
        }
        Ok(Povm { elements: out })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let mut p = CMat::zeros(dim, dim);
                p[(k, k)] = linalg::real(1.0);
                (k.to_string(), p)
            })
            .collect();
        Povm::new(elements).expect("computational basis is a valid POVM")
    }

    pub fn dim(&self) -> usize {
        self.elements[0].operator.nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn labels(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("POVM has no outcome `{label}`")))
    }
}

/// Matrix with orthonormal columns (`V†V = I`).
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMat,
}

impl Isometry {
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() < matrix.ncols() {
            return invalid("isometry output dimension must be at least its input dimension");
        }
        let dev = linalg::isometry_deviation(&matrix);
        if dev > ISOMETRY_TOL {
            return invalid(format!("columns are not orthonormal (deviation {dev:.3e})"));
        }
        Ok(Isometry { matrix })
    }

    pub fn unitary(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return invalid("unitary must be square");
        }
        Isometry::new(matrix)
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }
}

/// `V|φ⟩ = Σ_k (√A_k|φ⟩) ⊗ |k⟩`, outcome register as the least significant factor.
pub fn neumark_dilate(povm: &Povm) -> Result<Isometry> {
    let d = povm.dim();
    let m = povm.len();
    let mut v = CMat::zeros(d * m, d);
    for (k, e) in povm.elements().iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                v[(i * m + k, j)] = e.sqrt()[(i, j)];
            }
        }
    }
    Isometry::new(v)
}

/// Subsystem for the outcome register appended by a dilation.
pub fn outcome_register(label: &str, party: Party, povm: &Povm) -> Result<Subsystem> {
    if povm.len() < 2 {
        return invalid("a one-outcome POVM needs no outcome register");
    }
    Ok(Subsystem::new(label, party, povm.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub label: String,
    pub index: usize,
    pub probability: f64,
    pub post_state: PureState,
}

impl PureState {
    /// Unnormalised branches `(√A_k ⊗ I)|ψ⟩` for every outcome.
    fn povm_branches(&self, povm: &Povm, targets: &[&str]) -> Result<Vec<PureState>> {
        povm.elements()
            .iter()
            .map(|e| self.apply(e.sqrt(), targets))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                crate::Error::InvalidArgument(m) => {
                    crate::Error::InvalidArgument(format!("POVM does not fit targets: {m}"))
                }
                other => other,
            })
    }

    /// Born probabilities `⟨ψ|A_k ⊗ I|ψ⟩`.
    pub fn outcome_probabilities(&self, povm: &Povm, targets: &[&str]) -> Result<Vec<f64>> {
        Ok(self
            .povm_branches(povm, targets)?
            .iter()
            .map(PureState::norm_sqr)
            .collect())
    }

    /// Samples one outcome. The reported probability is exact; only the
    /// choice of outcome consumes randomness.
    pub fn measure(&self, povm: &Povm, targets: &[&str], rng: &mut impl Rng) -> Result<Measurement> {
        let branches = self.povm_branches(povm, targets)?;
        let probs: Vec<f64> = branches.iter().map(PureState::norm_sqr).collect();
        let eligible: f64 = probs.iter().filter(|&&p| p >= MIN_SAMPLED_PROB).sum();
        let mut u = rng.random::<f64>() * eligible;
        let mut chosen = None;
        for (k, &p) in probs.iter().enumerate() {
            if p < MIN_SAMPLED_PROB {
                continue;
            }
            chosen = Some(k);
            if u < p {
                break;
            }
            u -= p;
        }
        let k = chosen.ok_or_else(|| crate::Error::InvalidArgument("no outcome has positive probability".into()))?;
        let branch = &branches[k];
        let post = PureState::normalized(branch.layout().clone(), branch.amplitudes().clone())?;
        Ok(Measurement {
            label: povm.elements()[k].label.clone(),
            index: k,
            probability: probs[k],
            post_state: post,
        })
    }

    /// Post-measurement state for a chosen outcome, with its probability.
    pub fn project(&self, povm: &Povm, targets: &[&str], label: &str) -> Result<(f64, PureState)> {
        let k = povm.index_of(label)?;
        let branch = self.apply(povm.elements()[k].sqrt(), targets)?;
        let p = branch.norm_sqr();
        if p < MIN_SAMPLED_PROB {
            return invalid(format!("outcome `{label}` has probability {p:.3e}"));
        }
        let post = PureState::normalized(branch.layout().clone(), branch.amplitudes().clone())?;
        Ok((p, post))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{isometry_deviation, real};
    use crate::quantum::state::make_bell;
    use crate::rng::seeded;

    #[test]
    fn projective_on_plus_is_fair() {
        let plus = PureState::plus("q", Party::A).unwrap();
        let p = plus.outcome_probabilities(&Povm::computational(2), &["q"]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let m = plus.measure(&Povm::computational(2), &["q"], &mut seeded(3)).unwrap();
        assert!((m.probability - 0.5).abs() < 1e-15);
        let expected = PureState::ket("q", Party::A, 2, m.index).unwrap();
        assert!((m.post_state.fidelity(&expected).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trivial_povm_leaves_state() {
        let bell = make_bell(2).unwrap();
        let trivial = Povm::new(vec![("I".into(), linalg::identity(2))]).unwrap();
        let m = bell.measure(&trivial, &["A"], &mut seeded(0)).unwrap();
        assert!((m.probability - 1.0).abs() < 1e-15);
        assert!((m.post_state.fidelity(&bell).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_outcomes_never_sampled() {
        let zero = PureState::ket("q", Party::A, 2, 0).unwrap();
        for s in 0..50 {
            let m = zero.measure(&Povm::computational(2), &["q"], &mut seeded(s)).unwrap();
            assert_eq!(m.label, "0");
        }
    }

    #[test]
    fn rejects_invalid_povms() {
        let half = linalg::identity(2).scale(0.5);
        assert!(Povm::new(vec![("a".into(), half.clone())]).is_err());
        let mut neg = linalg::identity(2);
        neg[(1, 1)] = real(-0.5);
        let mut rest = linalg::identity(2).scale(0.0);
        rest[(1, 1)] = real(1.5);
        assert!(Povm::new(vec![("a".into(), neg), ("b".into(), rest)]).is_err());
    }

    #[test]
    fn dilation_shapes() {
        let v = neumark_dilate(&Povm::computational(2)).unwrap();
        assert_eq!((v.output_dim(), v.input_dim()), (4, 2));
        assert!(isometry_deviation(v.matrix()) < 1e-12);

        let trivial = Povm::new(vec![("I".into(), linalg::identity(2))]).unwrap();
        let v = neumark_dilate(&trivial).unwrap();
        assert!(linalg::max_abs_diff(v.matrix(), &linalg::identity(2)) < 1e-15);
    }

    #[test]
    fn dilation_reproduces_statistics() {
        let mut rng = seeded(11);
        let povm = crate::quantum::haar::random_povm(2, 3, &mut rng);
        let v = neumark_dilate(&povm).unwrap();
        let psi = PureState::single(
            Subsystem::qubit("q", Party::A),
            crate::quantum::haar::haar_vector(2, &mut rng).as_slice(),
        )
        .unwrap();
        let direct = psi.outcome_probabilities(&povm, &["q"]).unwrap();
        let dilated = psi
            .apply_isometry(&v, &["q"], &[Subsystem::new("k", Party::A, 3)])
            .unwrap();
        let via = dilated
            .outcome_probabilities(&Povm::computational(3), &["k"])
            .unwrap();
        for (a, b) in direct.iter().zip(&via) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
