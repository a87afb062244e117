//! Ensembles of bipartite pure states and their Holevo quantities.

use crate::error::{invalid, Result};
use crate::linalg::{CMat, CVec};
use crate::quantum::{DensityMatrix, Party, PureState, RegisterLayout, Subsystem};

pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return invalid("an ensemble needs at least one member");
        };
        let layout = first.layout().clone();
        let parties = layout.parties();
        if parties.len() != 2 || !parties.contains(&Party::A) || !parties.contains(&Party::B) {
            return invalid(format!("ensemble states must be bipartite between A and B, got {layout}"));
        }
        if members.iter().any(|(_, s)| s.layout() != &layout) {
            return invalid("ensemble members must share a layout");
        }
        if let Some((p, _)) = members.iter().find(|(p, _)| p.is_nan() || *p <= 0.0 || !p.is_finite()) {
            return invalid(format!("probabilities must be positive, got {p}"));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return invalid(format!("probabilities sum to {total}"));
        }
        Ok(Ensemble { members })
    }

    /// Uniform weights.
    pub fn uniform(states: Vec<PureState>) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Ensemble::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn layout(&self) -> &RegisterLayout {
        self.members[0].1.layout()
    }

    fn bob_states(&self) -> Result<Vec<DensityMatrix>> {
        self.members.iter().map(|(_, s)| s.partial_trace(&[Party::B])).collect()
    }

    /// Applies `u` to every member on `targets`.
    pub fn evolve(&self, u: &CMat, targets: &[&str]) -> Result<Ensemble> {
        let members = self
            .members
            .iter()
            .map(|(p, s)| Ok((*p, s.apply(u, targets)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { members })
    }

    /// Combinator `{p_j q_{ji}, |jj⟩ ⊗ ψ_{ji}}`: flags `flag.A`, `flag.B` mark the part.
    pub fn combine(parts: &[(f64, Ensemble)]) -> Result<Ensemble> {
        let Some((_, first)) = parts.first() else {
            return invalid("nothing to combine");
        };
        if parts.iter().any(|(_, e)| e.layout() != first.layout()) {
            return invalid("combined ensembles must share a layout");
        }
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL || parts.iter().any(|(p, _)| p.is_nan() || *p <= 0.0) {
            return invalid("mixing weights must be positive and sum to 1");
        }
        let jd = parts.len().max(2);
        let mut members = Vec::new();
        for (j, (pj, e)) in parts.iter().enumerate() {
            let flag = PureState::basis(
                RegisterLayout::new(vec![Subsystem::new("flag.A", Party::A, jd), Subsystem::new("flag.B", Party::B, jd)])?,
                &[j, j],
            )?;
            for (q, s) in &e.members {
                members.push((pj * q, flag.tensor(s)?));
            }
        }
        let norm: f64 = members.iter().map(|(p, _)| p).sum();
        for m in &mut members {
            m.0 /= norm;
        }
        Ensemble::new(members)
    }
}

/// `S(Σ p_i ρ_i) − Σ p_i S(ρ_i)` over Bob's reductions.
pub fn chi(ens: &Ensemble) -> Result<f64> {
    let rhos = ens.bob_states()?;
    let weighted: Vec<(f64, &DensityMatrix)> = ens.members.iter().map(|(p, _)| *p).zip(rhos.iter()).collect();
    let avg = DensityMatrix::mixture(&weighted)?;
    let mean: f64 = weighted.iter().map(|(p, r)| p * r.von_neumann_entropy()).sum();
    Ok(avg.von_neumann_entropy() - mean)
}

/// `Σ p_i S(tr_A ψ_i)`.
pub fn ensemble_entanglement(ens: &Ensemble) -> Result<f64> {
    let rhos = ens.bob_states()?;
    Ok(ens.members.iter().zip(&rhos).map(|((p, _), r)| p * r.von_neumann_entropy()).sum())
}

/// Two-register layout `A` (dim `da`) and `B` (dim `db`).
pub fn ab_layout(da: usize, db: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(vec![Subsystem::new("A", Party::A, da), Subsystem::new("B", Party::B, db)])
}

pub fn ab_state(da: usize, db: usize, amps: CVec) -> Result<PureState> {
    PureState::normalized(ab_layout(da, db)?, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{gates, make_bell};

    fn basis(a: usize, b: usize) -> PureState {
        PureState::basis(ab_layout(2, 2).unwrap(), &[a, b]).unwrap()
    }

    fn bells() -> Vec<PureState> {
        (0..4).map(|k| make_bell(2).unwrap().apply(&gates::pauli(k), &["A"]).unwrap()).collect()
    }

    #[test]
    fn distinguishable_bob_states() {
        let e = Ensemble::uniform(vec![basis(0, 0), basis(1, 1)]).unwrap();
        assert!((chi(&e).unwrap() - 1.0).abs() < 1e-12);
        assert!(ensemble_entanglement(&e).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bell_ensemble() {
        let e = Ensemble::uniform(bells()).unwrap();
        assert!(chi(&e).unwrap().abs() < 1e-12);
        assert!((ensemble_entanglement(&e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_plus() {
        let plus = basis(0, 0).apply(&gates::h(), &["B"]).unwrap();
        let e = Ensemble::uniform(vec![basis(0, 0), plus]).unwrap();
        let l = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let h = -l * l.log2() - (1.0 - l) * (1.0 - l).log2();
        assert!((chi(&e).unwrap() - h).abs() < 1e-12);
        assert!((h - 0.6009).abs() < 1e-4);
    }

    #[test]
    fn half_bell_half_product() {
        let e = Ensemble::uniform(vec![make_bell(2).unwrap(), basis(0, 0)]).unwrap();
        assert!((ensemble_entanglement(&e).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(Ensemble::new(vec![(0.4, basis(0, 0)), (0.4, basis(1, 1))]).is_err());
        assert!(Ensemble::new(vec![(1.5, basis(0, 0)), (-0.5, basis(1, 1))]).is_err());
    }

    #[test]
    fn combinator_adds_flag_entropy() {
        let a = Ensemble::uniform(vec![basis(0, 0), basis(1, 1)]).unwrap();
        let b = Ensemble::uniform(bells()).unwrap();
        let c = Ensemble::combine(&[(0.25, a.clone()), (0.75, b.clone())]).unwrap();
        let hp = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let expect = hp + 0.25 * chi(&a).unwrap() + 0.75 * chi(&b).unwrap();
        assert!((chi(&c).unwrap() - expect).abs() < 1e-10);
        assert!((ensemble_entanglement(&c).unwrap() - 0.75).abs() < 1e-10);
    }
}
