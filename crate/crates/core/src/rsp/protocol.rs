//! The RSP POVM and the coherent remote state preparation protocol.

use rand::Rng;

use super::cover::CoveringSet;
use crate::error::{invalid, precondition, Result};
use crate::linalg::{self, dagger, identity, min_eigenvalue, outer, trace, CMat, PSD_TOL};
use crate::protocols::transcript::{Run, Session, Status, Transcript};
use crate::quantum::{neumark_dilate, Party, Povm, PureState, Subsystem};
use crate::resources::{ResourceKind, ResourceVector};

pub const ALICE: &str = "a";
pub const BOB: &str = "b";
pub const ALICE_INDEX: &str = "a'";
pub const BOB_INDEX: &str = "b'";
pub const FAIL: &str = "fail";

#[derive(Debug, Clone)]
pub struct RspPovm {
    /// `A_1 … A_n`.
    pub elements: Vec<CMat>,
    pub fail: CMat,
    pub povm: Povm,
}

impl RspPovm {
    /// `tr A_fail / d`, the failure probability on `Φ_d` for every target.
    pub fn failure_probability(&self) -> f64 {
        trace(&self.fail).re / self.fail.nrows() as f64
    }
}

fn target_amplitudes(psi: &PureState, d: usize) -> Result<linalg::CVec> {
    if psi.layout().len() != 1 || psi.dim() != d {
        return invalid(format!("target must be a single register of dimension {d}, got {}", psi.layout()));
    }
    Ok(psi.amplitudes().clone())
}

/// `A_k = d/(n(1+ε/2)) (R_k ψ R_k†)^T` and `A_fail = I - Σ A_k`, transposed in
/// the computational basis, which is the Schmidt basis of the shared `Φ_d`.
pub fn build_povm(cover: &CoveringSet, psi: &PureState) -> Result<RspPovm> {
    if !cover.is_certified() {
        return precondition("covering set is not certified");
    }
    let d = cover.d();
    let v = target_amplitudes(psi, d)?;
    let proj = outer(&v);
    let scale = d as f64 / (cover.n() as f64 * (1.0 + cover.epsilon() / 2.0));
    let elements: Vec<CMat> = cover
        .unitaries()
        .iter()
        .map(|r| (r * &proj * dagger(r)).transpose().scale(scale))
        .collect();
    let sum = elements.iter().fold(CMat::zeros(d, d), |acc, a| acc + a);
    let raw = identity(d) - sum;
    let fail = (&raw + dagger(&raw)).scale(0.5);
    let low = min_eigenvalue(&fail);
    if low < -PSD_TOL {
        return precondition(format!(
            "target lies outside the certified cover: A_fail has eigenvalue {low:.3e}"
        ));
    }
    let mut labelled: Vec<(String, CMat)> = elements.iter().enumerate().map(|(k, a)| (k.to_string(), a.clone())).collect();
    labelled.push((FAIL.to_string(), fail.clone()));
    let povm = Povm::new(labelled)?;
    Ok(RspPovm { elements, fail, povm })
}

/// Intermediate states of a successful run.
#[derive(Debug, Clone)]
pub struct RspSnapshots {
    /// After the success outcome: `(1/√n) Σ_k R_k^*|ψ̄⟩_a |k⟩_{a'} R_k|ψ⟩_b`.
    pub after_success: PureState,
    /// After Alice's controlled `R_k^T`: `|ψ̄⟩_a ⊗ (1/√n) Σ_k |k⟩_{a'} R_k|ψ⟩_b`.
    pub after_disentangle: PureState,
    /// After the cobits, before Bob's correction.
    pub before_correction: PureState,
}

fn log2_exact(x: usize) -> Option<i64> {
    x.is_power_of_two().then(|| x.trailing_zeros() as i64)
}

/// Resource change for one run with dimension `d` and `n` unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct RspAccount {
    pub consumed: ResourceVector,
    pub produced: ResourceVector,
    pub catalysts: ResourceVector,
}

/// `log n` cobits buy `log d` remote qubits and `log(n/d)` ebits, with `Φ_d` catalytic.
pub fn rsp_account(d: usize, n: usize) -> Result<RspAccount> {
    let (ld, ln) = match (log2_exact(d), log2_exact(n)) {
        (Some(a), Some(b)) if n >= d && d >= 2 => (a, b),
        _ => return invalid(format!("resource accounting needs powers of two with n >= d >= 2, got d={d}, n={n}")),
    };
    let produced = if ln > ld {
        ResourceVector::single(ResourceKind::RemoteQubit, ld).with(ResourceKind::Ebit, ln - ld)
    } else {
        ResourceVector::single(ResourceKind::RemoteQubit, ld)
    };
    Ok(RspAccount {
        consumed: ResourceVector::single(ResourceKind::COBIT_FWD, ln),
        produced,
        catalysts: ResourceVector::single(ResourceKind::Ebit, ld),
    })
}

/// Reads the resource change off a successful transcript and checks it
/// against [`rsp_account`].
pub fn rsp_resource_account(t: &Transcript) -> Result<RspAccount> {
    if t.status != Status::Ok {
        return Err(crate::Error::ProtocolFailed("remote state preparation aborted".into()));
    }
    let whole = |v: &ResourceVector, k: &ResourceKind| {
        let x = v.get(k);
        x.is_integer().then(|| *x.numer()).filter(|&x| x >= 0)
    };
    let ld = whole(&t.catalysts, &ResourceKind::Ebit);
    let ln = whole(&t.consumed, &ResourceKind::COBIT_FWD);
    let (Some(ld), Some(ln)) = (ld, ln) else {
        return invalid("transcript does not carry remote state preparation bookkeeping");
    };
    let expected = rsp_account(1usize << ld, 1usize << ln)?;
    let actual = RspAccount {
        consumed: t.consumed.clone(),
        produced: t.produced.clone(),
        catalysts: t.catalysts.clone(),
    };
    if actual != expected {
        return Err(crate::Error::ProtocolFailed(format!(
            "transcript resources {} -> {} do not match log n cobits -> log d remote qubits + log(n/d) ebits",
            actual.consumed, actual.produced
        )));
    }
    Ok(actual)
}

pub fn run_coherent_rsp(psi: &PureState, cover: &CoveringSet, rng: &mut impl Rng) -> Result<Run> {
    run_coherent_rsp_traced(psi, cover, rng).map(|(run, _)| run)
}

/// Runs the protocol once; a `fail` outcome yields a transcript flagged
/// failed and no snapshots.
pub fn run_coherent_rsp_traced(psi: &PureState, cover: &CoveringSet, rng: &mut impl Rng) -> Result<(Run, Option<RspSnapshots>)> {
    let (d, n) = (cover.d(), cover.n());
    let account = rsp_account(d, n)?;
    let rsp = build_povm(cover, psi)?;
    let v = target_amplitudes(psi, d)?;

    let phi = PureState::maximally_entangled(d, Subsystem::new(ALICE, Party::A, d), Subsystem::new(BOB, Party::B, d))?;
    let mut s = Session::new("coherent-rsp", phi.clone());
    s.log.borrow(account.catalysts.clone(), &[ALICE, BOB]);

    let dil = neumark_dilate(&rsp.povm)?;
    s.state = s.state.apply_isometry(&dil, &[ALICE], &[Subsystem::new(ALICE_INDEX, Party::A, n + 1)])?;
    s.log.step("Alice applies the dilated POVM U_A", "isometry", &[ALICE, ALICE_INDEX]);

    let mut success = identity(n + 1);
    success[(n, n)] = 0.0.into();
    let mut failure = CMat::zeros(n + 1, n + 1);
    failure[(n, n)] = 1.0.into();
    let two = Povm::new(vec![("success".into(), success), (FAIL.into(), failure)])?;
    let m = s.state.measure(&two, &[ALICE_INDEX], rng)?;
    s.state = m.post_state;
    s.log.step(format!("Alice measures success/fail: {}", m.label), "measure", &[ALICE_INDEX]);
    if m.label == FAIL {
        s.log.status = Status::Failed;
        s.log.final_fidelity = 0.0;
        s.log.target_description = "aborted on the fail outcome".into();
        return Ok((Run { transcript: s.log, state: s.state }, None));
    }
    s.state = s.state.restrict(ALICE_INDEX, n)?;
    let after_success = s.state.clone();

    let transposes: Vec<CMat> = cover.unitaries().iter().map(|r| r.transpose()).collect();
    s.controlled("Alice applies R_k^T to a conditioned on a'", "controlled-unitary", ALICE_INDEX, &[ALICE], &transposes)?;
    let after_disentangle = s.state.clone();

    s.copy("log n cobits carry k to Bob", ALICE_INDEX, BOB_INDEX, Party::B)?;
    s.log.consumed = account.consumed.clone();
    let before_correction = s.state.clone();

    let daggers: Vec<CMat> = cover.unitaries().iter().map(dagger).collect();
    s.controlled("Bob applies R_k^dagger to b conditioned on b'", "controlled-unitary", BOB_INDEX, &[BOB], &daggers)?;
    s.log.give_back(&[ALICE_INDEX, BOB_INDEX]);
    s.log.produced = account.produced.clone();

    let conj = PureState::single(Subsystem::new(ALICE, Party::A, d), v.map(|z| z.conj()).as_slice())?;
    let bob = PureState::single(Subsystem::new(BOB, Party::B, d), v.as_slice())?;
    let phin = PureState::maximally_entangled(n, Subsystem::new(ALICE_INDEX, Party::A, n), Subsystem::new(BOB_INDEX, Party::B, n))?;
    let target = conj.tensor(&phin)?.tensor(&bob)?;
    let run = s.finish(&target, "|psi-bar>_a x |Phi_n>_{a'b'} x |psi>_b")?;
    Ok((
        run,
        Some(RspSnapshots {
            after_success,
            after_disentangle,
            before_correction,
        }),
    ))
}

/// Repeats the single-shot protocol up to `retries + 1` times with streams
/// derived from `seed`; returns the attempts made and the last run.
pub fn run_with_retries(psi: &PureState, cover: &CoveringSet, seed: u64, retries: usize) -> Result<(usize, Run)> {
    let mut last = None;
    for attempt in 0..=retries {
        let mut rng = crate::rng::stream(seed, "rsp-run", attempt as u64);
        let run = run_coherent_rsp(psi, cover, &mut rng)?;
        let ok = run.transcript.succeeded();
        last = Some((attempt + 1, run));
        if ok {
            break;
        }
    }
    Ok(last.expect("at least one attempt"))
}
