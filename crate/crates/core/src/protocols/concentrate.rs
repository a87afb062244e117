//! Entanglement concentration on `n` copies of `√p|00⟩ + √(1-p)|11⟩`.

use rand::Rng;

use super::transcript::{Run, Session};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::linalg::{C64, CVec};
use crate::quantum::{Party, PureState, RegisterLayout, Subsystem};
use crate::rng::{stream, SimRng};

pub const MAX_COPIES: usize = 10;

#[derive(Debug, Clone)]
pub struct Concentration {
    pub run: Run,
    /// Hamming weight observed on Alice's qubits.
    pub outcome: usize,
    pub probability: f64,
    pub entropy_bits: f64,
}

fn labels(n: usize) -> (Vec<String>, Vec<String>) {
    ((1..=n).map(|i| format!("a{i}")).collect(), (1..=n).map(|i| format!("b{i}")).collect())
}

fn check(p: f64, n: usize) -> Result<()> {
    if !(2..=MAX_COPIES).contains(&n) {
        return invalid(format!("copies must lie in 2..={MAX_COPIES}, got {n}"));
    }
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("p must lie in [0, 1], got {p}"));
    }
    Ok(())
}

/// `n` pairs with Alice's qubits first: layout `a1..an b1..bn`.
pub fn concentration_input(p: f64, n: usize) -> Result<PureState> {
    check(p, n)?;
    let (a, b) = labels(n);
    let mut subs: Vec<Subsystem> = a.iter().map(|l| Subsystem::qubit(l.as_str(), Party::A)).collect();
    subs.extend(b.iter().map(|l| Subsystem::qubit(l.as_str(), Party::B)));
    let layout = RegisterLayout::new(subs)?;
    let (s0, s1) = (p.sqrt(), (1.0 - p).sqrt());
    let mut amps = CVec::zeros(layout.total_dim());
    for x in 0..1usize << n {
        let w = x.count_ones() as i32;
        amps[(x << n) | x] = C64::from(s0.powi(n as i32 - w) * s1.powi(w));
    }
    PureState::new(layout, amps)
}

/// Weight distribution of Alice's string: `Pr(k)` for `k = 0..=n`.
fn weight_probabilities(state: &PureState, n: usize) -> Vec<f64> {
    let mut probs = vec![0.0; n + 1];
    for (i, a) in state.amplitudes().iter().enumerate() {
        probs[(i >> n).count_ones() as usize] += a.norm_sqr();
    }
    probs
}

fn sample(probs: &[f64], rng: &mut impl Rng) -> usize {
    let eligible: f64 = probs.iter().filter(|&&p| p >= 1e-14).sum();
    let mut u = rng.random::<f64>() * eligible;
    let mut chosen = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p < 1e-14 {
            continue;
        }
        chosen = k;
        if u < p {
            break;
        }
        u -= p;
    }
    chosen
}

/// Uniform superposition of `|x⟩_A|x⟩_B` over weight-`k` strings.
fn type_class_state(layout: &RegisterLayout, n: usize, k: usize) -> Result<PureState> {
    let mut amps = CVec::zeros(layout.total_dim());
    for x in (0..1usize << n).filter(|x| x.count_ones() as usize == k) {
        amps[(x << n) | x] = C64::from(1.0);
    }
    PureState::normalized(layout.clone(), amps)
}

/// Alice measures the Hamming weight of her `n` qubits in the Schmidt basis.
/// The post-measurement state is maximally entangled of rank `C(n, k)`.
pub fn entanglement_concentrate(p: f64, n: usize, rng: &mut impl Rng) -> Result<Concentration> {
    let input = concentration_input(p, n)?;
    let (a, _) = labels(n);
    let a_refs: Vec<&str> = a.iter().map(String::as_str).collect();
    let mut s = Session::new("entanglement-concentration", input);
    let probs = weight_probabilities(&s.state, n);
    let k = sample(&probs, rng);

    let mut post = s.state.amplitudes().clone();
    for (i, amp) in post.iter_mut().enumerate() {
        if (i >> n).count_ones() as usize != k {
            *amp = C64::from(0.0);
        }
    }
    s.state = PureState::normalized(s.state.layout().clone(), post)?;
    s.log.step(format!("Alice measures Hamming weight: k = {k}"), "measure", &a_refs);
    let entropy_bits = s.state.schmidt(&[Party::A])?.entropy_bits;
    let target = type_class_state(s.state.layout(), n, k)?;
    let run = s.finish(&target, "maximally entangled state on the weight-k type class")?;
    Ok(Concentration {
        run,
        outcome: k,
        probability: probs[k],
        entropy_bits,
    })
}

/// Histogram of outcomes over independent seeded shots; shot `i` draws from
/// its own stream so results do not depend on scheduling.
pub fn concentration_shots(p: f64, n: usize, shots: usize, seed: u64, exec: Execution) -> Result<Vec<usize>> {
    check(p, n)?;
    let outcomes = exec.map(shots, |i| {
        let mut rng: SimRng = stream(seed, "concentration", i as u64);
        entanglement_concentrate(p, n, &mut rng).map(|c| c.outcome)
    });
    let mut counts = vec![0; n + 1];
    for k in outcomes {
        counts[k?] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn half_half_two_copies() {
        let mut rng = seeded(1);
        for _ in 0..20 {
            let c = entanglement_concentrate(0.5, 2, &mut rng).unwrap();
            let expected = binom(2, c.outcome) * 0.25;
            assert!((c.probability - expected).abs() < 1e-12);
            assert!((c.entropy_bits - binom(2, c.outcome).log2()).abs() < 1e-9);
            assert!((c.run.transcript.final_fidelity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn p07_n4_weight_two() {
        let input = concentration_input(0.7, 4).unwrap();
        let probs = weight_probabilities(&input, 4);
        assert!((probs[2] - 0.2646).abs() < 1e-12);
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_input_only_gives_zero() {
        let mut rng = seeded(5);
        for _ in 0..5 {
            let c = entanglement_concentrate(1.0, 3, &mut rng).unwrap();
            assert_eq!(c.outcome, 0);
            assert!(c.entropy_bits.abs() < 1e-9);
        }
    }

    #[test]
    fn copies_out_of_range() {
        let mut rng = seeded(0);
        assert!(entanglement_concentrate(0.5, 1, &mut rng).is_err());
        assert!(entanglement_concentrate(0.5, 11, &mut rng).is_err());
    }

    #[test]
    fn shots_are_schedule_independent() {
        let a = concentration_shots(0.7, 4, 500, 9, Execution::Sequential).unwrap();
        let b = concentration_shots(0.7, 4, 500, 9, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<usize>(), 500);
    }
}
