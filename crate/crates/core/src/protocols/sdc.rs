//! Coherent super-dense coding: `1 qu + 1 eb ≥ 2 coh`.

use super::cobit::{cobit_channel, copy_label, CobitProvider, SdcCobits};
use super::transcript::{Run, Session};
use crate::error::{invalid, Result};
use crate::quantum::{gates, Party, PureState, Subsystem};
use crate::resources::{Direction, ResourceKind, ResourceVector};

/// Encodes the sender qubits `sources` into a fresh ebit `(copies[0],
/// copies[1])`, ships the sender half and decodes, leaving `copies[i]`
/// holding a coherent copy of `sources[i]` on the receiver side.
pub(crate) fn sdc_encode_decode(session: &mut Session, sources: [&str; 2], copies: [&str; 2], dir: Direction) -> Result<()> {
    let (tx, rx) = match dir {
        Direction::Forward => (Party::A, Party::B),
        Direction::Backward => (Party::B, Party::A),
    };
    let [s1, s2] = sources;
    let [c1, c2] = copies;
    let ebit = PureState::maximally_entangled(2, Subsystem::qubit(c1, tx), Subsystem::qubit(c2, rx))?;
    session.adjoin("share one ebit", &ebit)?;
    let id = gates::identity(2);
    session.controlled("X^a2 on the sender half", "controlled-x", s2, &[c1], &[id.clone(), gates::x()])?;
    session.controlled("Z^a1 on the sender half", "controlled-z", s1, &[c1], &[id, gates::z()])?;
    session.send("qubit channel carries the sender half", c1, rx)?;
    session.apply("decode: CNOT", "cnot", &gates::cnot(), &[c1, c2])?;
    session.apply("decode: H on the first qubit", "h", &gates::h(), &[c1])?;
    Ok(())
}

/// Runs coherent super-dense coding on a two-qubit message held by Alice and
/// compares the result with two applications of the ideal cobit.
pub fn coherent_sdc(message: &PureState) -> Result<Run> {
    let subs = message.layout().subsystems();
    if subs.len() != 2 || subs.iter().any(|s| s.dim != 2 || s.party != Party::A) {
        return invalid(format!("message must be two qubits held by A, got {}", message.layout()));
    }
    let (m1, m2) = (subs[0].label.clone(), subs[1].label.clone());
    let (c1, c2) = (copy_label(&m1), copy_label(&m2));

    let mut s = Session::new("coherent-sdc", message.clone());
    SdcCobits.transmit(&mut s, &[&m1, &m2], &[&c1, &c2], Direction::Forward)?;
    s.log.produced = ResourceVector::single(ResourceKind::COBIT_FWD, 2);

    let target = cobit_channel(&cobit_channel(message, &m1)?, &m2)?;
    s.finish(&target, "two ideal cobits applied to the message")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::RegisterLayout;

    fn message(bits: [usize; 2]) -> PureState {
        let l = RegisterLayout::new(vec![Subsystem::qubit("a1", Party::A), Subsystem::qubit("a2", Party::A)]).unwrap();
        PureState::basis(l, &bits).unwrap()
    }

    #[test]
    fn basis_message_10() {
        let run = coherent_sdc(&message([1, 0])).unwrap();
        let out = run.state.permuted(&["a1", "a2", "a1.copy", "a2.copy"]).unwrap();
        assert!((out.amplitude(&[1, 0, 1, 0]).norm() - 1.0).abs() < 1e-12);
        assert!((run.transcript.final_fidelity - 1.0).abs() < 1e-12);
        assert_eq!(run.transcript.consumed, ResourceVector::parse("1 qubit-> + 1 ebit").unwrap());
        assert_eq!(run.transcript.produced, ResourceVector::parse("2 cobit->").unwrap());
        assert!(run.transcript.catalysts.is_zero());
    }

    #[test]
    fn basis_message_00() {
        let run = coherent_sdc(&message([0, 0])).unwrap();
        let out = run.state.permuted(&["a1", "a2", "a1.copy", "a2.copy"]).unwrap();
        assert!((out.amplitude(&[0, 0, 0, 0]).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn superposed_message() {
        let l = RegisterLayout::new(vec![Subsystem::qubit("a1", Party::A), Subsystem::qubit("a2", Party::A)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = crate::linalg::CVec::from_vec(vec![h.into(), 0.0.into(), 0.0.into(), h.into()]);
        let msg = PureState::new(l, amps).unwrap();
        let run = coherent_sdc(&msg).unwrap();
        assert!(run.transcript.final_fidelity >= 1.0 - 1e-10);
        let out = run.state.permuted(&["a1", "a2", "a1.copy", "a2.copy"]).unwrap();
        assert!((out.amplitude(&[1, 1, 1, 1]).re - h).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_message() {
        assert!(coherent_sdc(&PureState::ket("a", Party::A, 4, 0).unwrap()).is_err());
    }
}
