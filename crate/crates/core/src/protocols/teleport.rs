//! Coherent teleportation: `2 coh ≥ 1 qu + 1 eb` with one ebit catalytic.

use super::cobit::{copy_label, require_single_qubit, CobitProvider};
use super::transcript::{Run, Session};
use crate::error::Result;
use crate::quantum::{gates, Party, PureState, Subsystem};
use crate::resources::{Direction, ResourceKind, ResourceVector};

pub const ALICE_EBIT: &str = "tA";
pub const BOB_EBIT: &str = "tB";

fn with_ebit(psi: &PureState) -> Result<PureState> {
    let ebit = PureState::maximally_entangled(
        2,
        Subsystem::qubit(ALICE_EBIT, Party::A),
        Subsystem::qubit(BOB_EBIT, Party::B),
    )?;
    psi.tensor(&ebit)
}

/// State after Alice rotates the Bell basis (CNOT then H), before any
/// communication: `½ Σ_{m1 m2} |m1 m2⟩_{q,tA} X^{m2} Z^{m1} |ψ⟩_tB`.
pub fn rotated_bell_state(psi: &PureState) -> Result<PureState> {
    let q = require_single_qubit(psi, Party::A)?;
    with_ebit(psi)?
        .apply(&gates::cnot(), &[&q, ALICE_EBIT])?
        .apply(&gates::h(), &[&q])
}

/// Teleports Alice's qubit to Bob's `tB` using the cobits delivered by `provider`.
///
/// The ebit `(tA, tB)` is borrowed; Alice's two qubits end up maximally
/// entangled with their copies at Bob, one pair repaying the loan.
pub fn coherent_teleport(psi: &PureState, provider: &dyn CobitProvider) -> Result<Run> {
    let q = require_single_qubit(psi, Party::A)?;
    let (qc, tc) = (copy_label(&q), copy_label(ALICE_EBIT));
    let mut s = Session::new("coherent-teleport", psi.clone());
    s.state = with_ebit(psi)?;
    s.log.borrow(ResourceVector::single(ResourceKind::Ebit, 1), &[ALICE_EBIT, BOB_EBIT]);

    s.apply("Alice: CNOT onto her ebit half", "cnot", &gates::cnot(), &[&q, ALICE_EBIT])?;
    s.apply("Alice: H, completing the Bell-basis rotation", "h", &gates::h(), &[&q])?;
    provider.transmit(&mut s, &[&q, ALICE_EBIT], &[&qc, &tc], Direction::Forward)?;
    let id = gates::identity(2);
    s.controlled("Bob undoes X^m2", "controlled-x", &tc, &[BOB_EBIT], &[id.clone(), gates::x()])?;
    s.controlled("Bob undoes Z^m1", "controlled-z", &qc, &[BOB_EBIT], &[id, gates::z()])?;
    s.log.give_back(&[ALICE_EBIT, &tc]);
    s.log.produced += &ResourceVector::single(ResourceKind::QUBIT_FWD, 1).with(ResourceKind::Ebit, 1);

    let bell = |a: &str, b: &str| PureState::maximally_entangled(2, Subsystem::qubit(a, Party::A), Subsystem::qubit(b, Party::B));
    let bob = psi.renamed(&q, BOB_EBIT)?.with_party(BOB_EBIT, Party::B)?;
    let target = bell(&q, &qc)?.tensor(&bell(ALICE_EBIT, &tc)?)?.tensor(&bob)?;
    s.finish(&target, "|Phi_2> x |Phi_2> x |psi>_B")
}
