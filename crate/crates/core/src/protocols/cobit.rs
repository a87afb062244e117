//! The ideal cobit map, its degradations, and pluggable cobit providers.

use super::transcript::{Run, Session};
use crate::error::{invalid, precondition, Result};
use crate::linalg::CVec;
use crate::quantum::{gates, Party, PureState, RegisterLayout, Subsystem};
use crate::resources::{Direction, ResourceKind, ResourceVector};

pub fn copy_label(source: &str) -> String {
    format!("{source}.copy")
}

fn sender(dir: Direction) -> Party {
    match dir {
        Direction::Forward => Party::A,
        Direction::Backward => Party::B,
    }
}

fn receiver(dir: Direction) -> Party {
    sender(dir.reversed())
}

/// `|x⟩_src → |x⟩_src |x⟩_copy` for a qubit held by the sender of `dir`.
pub fn cobit(state: &PureState, source: &str, copy: &str, dir: Direction) -> Result<PureState> {
    let sub = state.layout().get(source)?;
    if sub.dim != 2 {
        return invalid(format!("cobit source `{source}` is not a qubit"));
    }
    if sub.party != sender(dir) {
        return invalid(format!("cobit source `{source}` is held by {}, not {}", sub.party, sender(dir)));
    }
    state.coherent_copy(source, copy, receiver(dir))
}

/// The reference cobit `|x⟩_A → |x⟩_A|x⟩_B`; the copy is labelled `<source>.copy`.
pub fn cobit_channel(state: &PureState, source: &str) -> Result<PureState> {
    cobit(state, source, &copy_label(source), Direction::Forward)
}

/// Anything that can deliver coherent copies of sender qubits to the receiver.
pub trait CobitProvider: Sync {
    fn name(&self) -> &str;

    /// Copies each `sources[i]` into a new receiver register `copies[i]`,
    /// logging steps and charging its own resource cost to the session.
    fn transmit(&self, session: &mut Session, sources: &[&str], copies: &[&str], dir: Direction) -> Result<()>;
}

/// Uses the ideal map directly; costs one cobit per qubit.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealCobits;

impl CobitProvider for IdealCobits {
    fn name(&self) -> &str {
        "ideal"
    }

    fn transmit(&self, session: &mut Session, sources: &[&str], copies: &[&str], dir: Direction) -> Result<()> {
        if sources.len() != copies.len() {
            return invalid("one copy label per source");
        }
        for (s, c) in sources.iter().zip(copies) {
            session.state = cobit(&session.state, s, c, dir)?;
            session.log.step(format!("cobit{} {s} into {c}", dir_arrow(dir)), "cobit", &[s, c]);
        }
        session.log.consumed += &ResourceVector::single(ResourceKind::Cobit(dir), sources.len() as i64);
        Ok(())
    }
}

/// Coherent super-dense coding: two cobits per qubit and ebit.
#[derive(Debug, Clone, Copy, Default)]
pub struct SdcCobits;

impl CobitProvider for SdcCobits {
    fn name(&self) -> &str {
        "coherent-sdc"
    }

    fn transmit(&self, session: &mut Session, sources: &[&str], copies: &[&str], dir: Direction) -> Result<()> {
        if sources.len() != copies.len() {
            return invalid("one copy label per source");
        }
        if !sources.len().is_multiple_of(2) {
            return precondition("super-dense coding delivers cobits in pairs");
        }
        for (pair, cpair) in sources.chunks(2).zip(copies.chunks(2)) {
            super::sdc::sdc_encode_decode(session, [pair[0], pair[1]], [cpair[0], cpair[1]], dir)?;
        }
        let uses = (sources.len() / 2) as i64;
        session.log.consumed += &ResourceVector::single(ResourceKind::Qubit(dir), uses).with(ResourceKind::Ebit, uses);
        Ok(())
    }
}

pub(crate) fn dir_arrow(dir: Direction) -> &'static str {
    match dir {
        Direction::Forward => "->",
        Direction::Backward => "<-",
    }
}

pub(crate) fn require_single_qubit(input: &PureState, party: Party) -> Result<String> {
    let subs = input.layout().subsystems();
    if subs.len() != 1 || subs[0].dim != 2 || subs[0].party != party {
        return invalid(format!("expected a single qubit held by {party}, got {}", input.layout()));
    }
    Ok(subs[0].label.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegradeMode {
    /// Alice hands her copy to the environment: one cbit.
    ToCbit,
    /// Alice feeds in `|+⟩`: one ebit.
    ToEbit,
}

/// `1 coh ≥ 1 cb` and `1 coh ≥ 1 eb`. The input is Alice's channel qubit.
pub fn cobit_degrade(input: &PureState, mode: DegradeMode) -> Result<Run> {
    let src = require_single_qubit(input, Party::A)?;
    let copy = copy_label(&src);
    let mut s = Session::new(
        match mode {
            DegradeMode::ToCbit => "cobit-to-cbit",
            DegradeMode::ToEbit => "cobit-to-ebit",
        },
        input.clone(),
    );
    IdealCobits.transmit(&mut s, &[&src], &[&copy], Direction::Forward)?;
    match mode {
        DegradeMode::ToCbit => {
            s.send("Alice discards her copy into the environment", &src, Party::E)?;
            s.log.produced = ResourceVector::single(ResourceKind::CBIT_FWD, 1);
            // |x⟩_A → |x⟩_B|x⟩_E applied to the input
            let layout = RegisterLayout::new(vec![
                Subsystem::qubit(src.as_str(), Party::E),
                Subsystem::qubit(copy.as_str(), Party::B),
            ])?;
            let a = input.amplitudes();
            let target = PureState::new(
                layout,
                CVec::from_vec(vec![a[0], 0.0.into(), 0.0.into(), a[1]]),
            )?;
            s.finish(&target, "cbit map |x>_A -> |x>_B |x>_E")
        }
        DegradeMode::ToEbit => {
            s.log.produced = ResourceVector::single(ResourceKind::Ebit, 1);
            let target = PureState::maximally_entangled(
                2,
                Subsystem::qubit(src.as_str(), Party::A),
                Subsystem::qubit(copy.as_str(), Party::B),
            )?;
            s.finish(&target, "|Phi_2> shared between Alice and Bob")
        }
    }
}

/// `1 qu ≥ 1 coh`: Alice copies her qubit into a fresh ancilla and sends it.
pub fn cobit_from_qubit(input: &PureState) -> Result<Run> {
    let src = require_single_qubit(input, Party::A)?;
    let copy = copy_label(&src);
    let mut s = Session::new("qubit-to-cobit", input.clone());
    s.adjoin("Alice prepares |0> ancilla", &PureState::ket(&copy, Party::A, 2, 0)?)?;
    s.apply("Alice copies into the ancilla", "cnot", &gates::cnot(), &[&src, &copy])?;
    s.send("qubit channel carries the ancilla to Bob", &copy, Party::B)?;
    s.log.consumed = ResourceVector::single(ResourceKind::QUBIT_FWD, 1);
    s.log.produced = ResourceVector::single(ResourceKind::COBIT_FWD, 1);
    let target = cobit_channel(input, &src)?;
    s.finish(&target, "ideal cobit applied to the input")
}
