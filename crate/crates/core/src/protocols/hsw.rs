//! Coherent decoding of orthogonal codewords: a desk-scale instance of
//! turning a classical code into coherent communication.

use super::transcript::{Run, Session};
use crate::error::{invalid, precondition, Result};
use crate::linalg::{dagger, identity, spectral_map, trace, CMat, CVec, PSD_TOL};
use crate::quantum::{neumark_dilate, Isometry, Party, Povm, PureState, Subsystem};

pub const DECODED: &str = "decoded";

/// Largest overlap `tr(ρ_x ρ_y)` tolerated between distinct Bob reductions.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

fn check_codewords(codewords: &[PureState], message: &PureState) -> Result<(String, Vec<String>)> {
    let first = codewords.first().ok_or_else(|| crate::Error::InvalidArgument("no codewords".into()))?;
    if codewords.iter().any(|c| c.layout() != first.layout()) {
        return invalid("codewords must share a layout");
    }
    let parties = first.layout().parties();
    if !parties.contains(&Party::A) || !parties.contains(&Party::B) || parties.len() != 2 {
        return invalid("codewords must be bipartite between A and B");
    }
    let subs = message.layout().subsystems();
    if subs.len() != 1 || subs[0].party != Party::A {
        return invalid("message must be a single register held by A");
    }
    let msg = subs[0].label.clone();
    if subs[0].dim < codewords.len() {
        return invalid(format!("message dimension {} below codeword count {}", subs[0].dim, codewords.len()));
    }
    if message.amplitudes().iter().skip(codewords.len()).any(|a| a.norm() > 1e-12) {
        return invalid("message has weight on labels without a codeword");
    }
    let labels: Vec<String> = first.layout().labels().iter().map(|s| s.to_string()).collect();
    if labels.contains(&msg) || labels.iter().any(|l| l == DECODED) {
        return invalid("codeword labels clash with the message or decoder register");
    }
    Ok((msg, labels))
}

/// `U_ψ|x⟩ = |x⟩|ψ_x⟩`; labels beyond the codebook reuse `ψ_0`.
fn encoder(codewords: &[PureState], mdim: usize) -> Result<Isometry> {
    let cdim = codewords[0].dim();
    let mut v = CMat::zeros(mdim * cdim, mdim);
    for x in 0..mdim {
        let psi = &codewords[if x < codewords.len() { x } else { 0 }];
        for (j, a) in psi.amplitudes().iter().enumerate() {
            v[(x * cdim + j, x)] = *a;
        }
    }
    Isometry::new(v)
}

/// Support projectors of Bob's reductions plus a `none` outcome.
fn decoder(reductions: &[CMat]) -> Result<Povm> {
    let d = reductions[0].nrows();
    let mut elements = Vec::new();
    let mut rest = identity(d);
    for (x, rho) in reductions.iter().enumerate() {
        let proj = spectral_map(rho, |l| if l > PSD_TOL { 1.0 } else { 0.0 });
        rest -= &proj;
        elements.push((format!("{x}"), proj));
    }
    elements.push(("none".to_string(), (&rest + dagger(&rest)).scale(0.5)));
    Povm::new(elements)
}

/// Runs `U_ψ` then Bob's dilated decoder. The final state is
/// `Σ_x c_x |x⟩_A |ψ_x⟩ |x⟩_decoded`.
pub fn coherent_hsw_demo(codewords: &[PureState], message: &PureState) -> Result<Run> {
    let (msg, labels) = check_codewords(codewords, message)?;
    let bob: Vec<&str> = codewords[0].layout().labels_of(&[Party::B]);
    let reductions: Vec<CMat> = codewords
        .iter()
        .map(|c| c.reduced(&bob).map(|r| r.into_matrix()))
        .collect::<Result<_>>()?;
    for x in 0..reductions.len() {
        for y in x + 1..reductions.len() {
            let ov = trace(&(&reductions[x] * &reductions[y])).re;
            if ov > ORTHOGONALITY_TOL {
                return precondition(format!("Bob's reductions of codewords {x} and {y} overlap: tr = {ov:.3e}"));
            }
        }
    }
    let mdim = message.dim();
    let povm = decoder(&reductions)?;
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();

    let mut s = Session::new("coherent-hsw", message.clone());
    let enc = encoder(codewords, mdim)?;
    s.state = s.state.apply_isometry(&enc, &[&msg], codewords[0].layout().subsystems())?;
    let mut targets = vec![msg.as_str()];
    targets.extend(&label_refs);
    s.log.step("Alice applies U_psi: |x> -> |x>|psi_x>", "isometry", &targets);

    let dil = neumark_dilate(&povm)?;
    let out = Subsystem::new(DECODED, Party::B, povm.len());
    s.state = s.state.apply_isometry(&dil, &bob, std::slice::from_ref(&out))?;
    let mut targets = bob.clone();
    targets.push(DECODED);
    s.log.step("Bob applies the dilated decoder", "isometry", &targets);

    let layout = s.state.layout().clone();
    let mut amps = CVec::zeros(layout.total_dim());
    for (x, cx) in message.amplitudes().iter().enumerate().take(codewords.len()) {
        let branch = PureState::ket(&msg, Party::A, mdim, x)?
            .tensor(&codewords[x])?
            .tensor(&PureState::ket(DECODED, Party::B, povm.len(), x)?)?
            .aligned_to(&layout)?;
        amps += branch.amplitudes() * *cx;
    }
    let target = PureState::new(layout, amps)?;
    s.finish(&target, "sum_x c_x |x>_A |psi_x> |x>_decoded")
}
