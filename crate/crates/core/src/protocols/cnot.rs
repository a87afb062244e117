//! Entanglement-assisted coherent CNOT protocols.

use super::cobit::{cobit, copy_label, CobitProvider};
use super::transcript::{Run, Session};
use crate::error::{invalid, Result};
use crate::linalg::CVec;
use crate::quantum::{gates, make_bell, Party, PureState, RegisterLayout, Subsystem};
use crate::resources::{Direction, ResourceKind, ResourceVector};

/// `(H⊗I) CNOT (Y^a ⊗ Z^b) |Φ_2⟩` with the CNOT controlled by A.
pub fn cnot_encoding_output(a: usize, b: usize) -> Result<PureState> {
    if a > 1 || b > 1 {
        return invalid("a and b are bits");
    }
    make_bell(2)?
        .apply(&gates::pow(&gates::y(), a), &["A"])?
        .apply(&gates::pow(&gates::z(), b), &["B"])?
        .apply(&gates::cnot(), &["A", "B"])?
        .apply(&gates::h(), &["A"])
}

/// `|b⟩_A |a⟩_B` as a two-qubit state on the `A`/`B` layout.
pub fn swapped_basis_state(a: usize, b: usize) -> Result<PureState> {
    let l = RegisterLayout::new(vec![Subsystem::qubit("A", Party::A), Subsystem::qubit("B", Party::B)])?;
    PureState::basis(l, &[b, a])
}

fn split_input(input: &PureState) -> Result<(String, String)> {
    let subs = input.layout().subsystems();
    let ok = subs.len() == 2
        && subs.iter().all(|s| s.dim == 2)
        && subs[0].party == Party::A
        && subs[1].party == Party::B;
    if !ok {
        return invalid(format!("expected an A qubit followed by a B qubit, got {}", input.layout()));
    }
    Ok((subs[0].label.clone(), subs[1].label.clone()))
}

/// One CNOT plus one ebit deliver a cobit each way: `|a⟩_A|b⟩_B` becomes
/// `|a⟩_A|b⟩_B|b⟩_{A}|a⟩_{B}`, copies labelled `<source>.copy`.
///
/// Encoding is `Y^a` on Alice's half and `Z^b` on Bob's, then the CNOT and
/// `H` on Alice's half. That leaves `|a⊕b⟩|a⟩` with phase `(-i)^a (-1)^{ab}`,
/// so Alice finishes with `CNOT(a → half)`, `S` on `a` and `CZ(a, half)`.
pub fn coherent_cnot_bidirectional(input: &PureState) -> Result<Run> {
    let (a, b) = split_input(input)?;
    let (ea, eb) = (copy_label(&b), copy_label(&a));
    let mut s = Session::new("cnot-coherent-bidir", input.clone());
    let ebit = PureState::maximally_entangled(2, Subsystem::qubit(ea.as_str(), Party::A), Subsystem::qubit(eb.as_str(), Party::B))?;
    s.adjoin("share one ebit", &ebit)?;
    let id = gates::identity(2);
    s.controlled("Alice: Y^a on her half", "controlled-y", &a, &[&ea], &[id.clone(), gates::y()])?;
    s.controlled("Bob: Z^b on his half", "controlled-z", &b, &[&eb], &[id, gates::z()])?;
    s.apply("one use of the CNOT gate", "cnot", &gates::cnot(), &[&ea, &eb])?;
    s.apply("Alice: H on her half", "h", &gates::h(), &[&ea])?;
    s.apply("Alice: remove a from her half", "cnot", &gates::cnot(), &[&a, &ea])?;
    s.apply("Alice: cancel the (-i)^a phase", "s", &gates::s(), &[&a])?;
    s.apply("Alice: cancel the (-1)^{ab} phase", "cz", &gates::cz(), &[&a, &ea])?;
    s.log.consumed = ResourceVector::single(ResourceKind::Cnot, 1).with(ResourceKind::Ebit, 1);
    s.log.produced = ResourceVector::single(ResourceKind::COBIT_FWD, 1).with(ResourceKind::COBIT_BWD, 1);

    let target = cobit(&cobit(input, &a, &eb, Direction::Forward)?, &b, &ea, Direction::Backward)?;
    s.finish(&target, "ideal cobit-> on a and cobit<- on b")
}

pub const EBIT_A: &str = "e.a";
pub const EBIT_B: &str = "e.b";

/// Gottesman's distributed CNOT with every classical message made coherent.
///
/// The ebit `(e.a, e.b)` is borrowed. Each cobit leaves its source maximally
/// entangled with the copy, so two ebits come out and one repays the loan.
pub fn coherent_distributed_cnot(input: &PureState, forward: &dyn CobitProvider, backward: &dyn CobitProvider) -> Result<Run> {
    let (x, y) = split_input(input)?;
    let (c1, c2) = (copy_label(EBIT_A), copy_label(EBIT_B));
    let mut s = Session::new("cnot-from-cobits", input.clone());
    s.state = input.tensor(&PureState::maximally_entangled(
        2,
        Subsystem::qubit(EBIT_A, Party::A),
        Subsystem::qubit(EBIT_B, Party::B),
    )?)?;
    s.log.borrow(ResourceVector::single(ResourceKind::Ebit, 1), &[EBIT_A, EBIT_B]);

    s.apply("Alice: CNOT x onto her half", "cnot", &gates::cnot(), &[&x, EBIT_A])?;
    forward.transmit(&mut s, &[EBIT_A], &[&c1], Direction::Forward)?;
    s.apply("Bob: CNOT the copy onto his half", "cnot", &gates::cnot(), &[&c1, EBIT_B])?;
    s.apply("Bob: CNOT his half onto y", "cnot", &gates::cnot(), &[EBIT_B, &y])?;
    s.apply("Bob: H on his half", "h", &gates::h(), &[EBIT_B])?;
    backward.transmit(&mut s, &[EBIT_B], &[&c2], Direction::Backward)?;
    s.apply("Alice: CZ between the copy and x", "cz", &gates::cz(), &[&c2, &x])?;
    s.log.give_back(&[EBIT_A, &c1]);
    s.log.produced += &ResourceVector::single(ResourceKind::Cnot, 1).with(ResourceKind::Ebit, 1);

    let cnot_xy = input.apply(&gates::cnot(), &[&x, &y])?;
    let fwd = PureState::maximally_entangled(2, Subsystem::qubit(EBIT_A, Party::A), Subsystem::qubit(c1.as_str(), Party::B))?;
    let bwd = PureState::maximally_entangled(2, Subsystem::qubit(EBIT_B, Party::B), Subsystem::qubit(c2.as_str(), Party::A))?;
    let target = cnot_xy.tensor(&fwd)?.tensor(&bwd)?;
    s.finish(&target, "CNOT|xy> x |Phi_2> x |Phi_2>")
}

/// Two-qubit input `|x⟩_A|y⟩_B` with labels `x`, `y`.
pub fn product_input(x: [f64; 2], y: [f64; 2]) -> Result<PureState> {
    let l = RegisterLayout::new(vec![Subsystem::qubit("x", Party::A), Subsystem::qubit("y", Party::B)])?;
    let v = CVec::from_vec(vec![
        (x[0] * y[0]).into(),
        (x[0] * y[1]).into(),
        (x[1] * y[0]).into(),
        (x[1] * y[1]).into(),
    ]);
    PureState::normalized(l, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::cobit::IdealCobits;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    #[test]
    fn literal_encoding_gives_sum_and_copy() {
        // |a⊕b⟩|a⟩ up to phase
        for a in 0..2 {
            for b in 0..2 {
                let out = cnot_encoding_output(a, b).unwrap();
                assert!((out.amplitude(&[a ^ b, a]).norm() - 1.0).abs() < 1e-12);
            }
        }
        let f = cnot_encoding_output(0, 1).unwrap().fidelity(&swapped_basis_state(0, 1).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bidirectional_on_basis_and_superpositions() {
        for bits in [[1.0, 0.0], [0.0, 1.0], [H, H]] {
            for other in [[1.0, 0.0], [0.0, 1.0], [H, H]] {
                let input = product_input(bits, other).unwrap();
                let run = coherent_cnot_bidirectional(&input).unwrap();
                assert!(run.transcript.final_fidelity >= 1.0 - 1e-10, "{bits:?} {other:?}");
            }
        }
        let run = coherent_cnot_bidirectional(&product_input([0.0, 1.0], [1.0, 0.0]).unwrap()).unwrap();
        let st = run.state.permuted(&["x", "y", "y.copy", "x.copy"]).unwrap();
        assert!((st.amplitude(&[1, 0, 0, 1]).norm() - 1.0).abs() < 1e-12);
        assert_eq!(run.transcript.produced, ResourceVector::parse("1 cobit-> + 1 cobit<-").unwrap());
    }

    #[test]
    fn distributed_cnot_truth_table() {
        for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let bit = |v: usize| if v == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
            let run = coherent_distributed_cnot(&product_input(bit(x), bit(y)).unwrap(), &IdealCobits, &IdealCobits).unwrap();
            assert!(run.transcript.final_fidelity >= 1.0 - 1e-10);
            let xy = run.state.reduced(&["x", "y"]).unwrap();
            let idx = x * 2 + (x ^ y);
            assert!((xy.matrix()[(idx, idx)].re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distributed_cnot_entangles_plus_zero() {
        let run = coherent_distributed_cnot(&product_input([H, H], [1.0, 0.0]).unwrap(), &IdealCobits, &IdealCobits).unwrap();
        assert!(run.transcript.final_fidelity >= 1.0 - 1e-10);
        let anc = run.state.schmidt_labels(&[EBIT_A, "e.b.copy"]).unwrap();
        assert!((anc.entropy_bits - 2.0).abs() < 1e-9);
        let t = &run.transcript;
        assert!(t.catalysis_closed());
        assert_eq!(t.consumed, ResourceVector::parse("1 cobit-> + 1 cobit<-").unwrap());
        assert_eq!(t.produced, ResourceVector::parse("1 cnot + 1 ebit").unwrap());
        assert_eq!(t.catalysts, ResourceVector::parse("1 ebit").unwrap());
    }
}
