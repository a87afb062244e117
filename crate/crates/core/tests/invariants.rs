use proptest::prelude::*;

use cobit::calculus::{check_equality, lookup, prove, run_named_protocol, Derivation, Equality, ProofResult, ProveOptions};
use cobit::capacity::{ab_state, chi, ensemble_entanglement, Ensemble};
use cobit::linalg::{dagger, identity, kron, max_abs_diff, real, CMat, CVec};
use cobit::protocols::{
    coherent_cnot_bidirectional, coherent_distributed_cnot, coherent_sdc, coherent_teleport, concentration_shots, entanglement_concentrate,
    gentle_measurement_check, IdealCobits,
};
use cobit::quantum::{haar, neumark_dilate, Party, PureState, RegisterLayout, Subsystem};
use cobit::rng::{seeded, stream};
use cobit::linalg::C64;
use cobit::quantum::gates;
use cobit::rsp::{run_coherent_rsp_traced, sample_covering, CoveringSet};
use cobit::{Execution, ResourceVector};

fn layout(regs: &[(&str, Party, usize)]) -> RegisterLayout {
    RegisterLayout::new(regs.iter().map(|(l, p, d)| Subsystem::new(*l, *p, *d)).collect()).unwrap()
}

fn replay(d: &Derivation) {
    let mut state = d.start.clone() + d.borrowed.clone();
    for step in &d.steps {
        let rule = lookup(&step.rule).unwrap();
        assert_eq!(state, step.before);
        assert!(state.dominates(&(rule.lhs.clone() + rule.catalyst.clone())));
        state = state.checked_sub(&rule.lhs).unwrap() + rule.rhs.clone();
        assert_eq!(state, step.after);
    }
    assert!(state.dominates(&(d.goal.clone() + d.borrowed.clone())));
}

const KINDS: &[&str] = &["qubit->", "qubit<-", "cbit->", "cbit<-", "cobit->", "cobit<-", "ebit", "cnot", "swap"];

fn resource_vector(max: u32) -> impl Strategy<Value = ResourceVector> {
    prop::collection::vec((0..KINDS.len(), 1..=max), 1..=3).prop_map(|terms| {
        let expr: Vec<String> = terms.iter().map(|(k, n)| format!("{n} {}", KINDS[*k])).collect();
        ResourceVector::parse(&expr.join(" + ")).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unitaries_preserve_norm(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = seeded(seed);
        let dims = [2usize, 3, 2];
        let l = layout(&[("r0", Party::A, 2), ("r1", Party::B, 3), ("r2", Party::A, 2)]);
        let s = PureState::new(l, haar::haar_vector(12, &mut rng)).unwrap();
        let u = haar::haar_unitary(dims[which], &mut rng);
        let out = s.apply(&u, &[["r0", "r1", "r2"][which]]).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn povms_are_complete_and_dilations_sound(seed in any::<u64>(), dim in 2usize..5, outcomes in 2usize..6) {
        let mut rng = seeded(seed);
        let povm = haar::random_povm(dim, outcomes, &mut rng);
        let sum = povm.elements().iter().fold(CMat::zeros(dim, dim), |acc, e| acc + &e.operator);
        prop_assert!(max_abs_diff(&sum, &identity(dim)) < 1e-10);
        let v = neumark_dilate(&povm).unwrap();
        let vm = v.matrix();
        prop_assert!(max_abs_diff(&(dagger(vm) * vm), &identity(dim)) < 1e-10);
        let phi = haar::haar_vector(dim, &mut rng);
        let big = vm * &phi;
        for (k, e) in povm.elements().iter().enumerate() {
            let direct = (phi.adjoint() * &e.operator * &phi)[(0, 0)].re;
            let dilated: f64 = (0..dim).map(|r| big[r * outcomes + k].norm_sqr()).sum();
            prop_assert!((direct - dilated).abs() < 1e-10);
        }
    }

    #[test]
    fn schmidt_entropy_matches_both_marginals(seed in any::<u64>(), da in 2usize..4, db in 2usize..5) {
        let mut rng = seeded(seed);
        let l = layout(&[("a", Party::A, da), ("b", Party::B, db)]);
        let s = PureState::new(l, haar::haar_vector(da * db, &mut rng)).unwrap();
        let schmidt = s.schmidt(&[Party::A]).unwrap();
        let sa = s.reduced(&["a"]).unwrap().von_neumann_entropy();
        let sb = s.reduced(&["b"]).unwrap().von_neumann_entropy();
        prop_assert!((schmidt.entropy_bits - sa).abs() < 1e-9);
        prop_assert!((sa - sb).abs() < 1e-9);
        let total: f64 = schmidt.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operators_move_through_maximal_entanglement(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = seeded(seed);
        let o = haar::ginibre(d, d, &mut rng);
        let phi = CVec::from_fn(d * d, |r, _| real(if r / d == r % d { 1.0 / (d as f64).sqrt() } else { 0.0 }));
        let lhs = kron(&o, &identity(d)) * &phi;
        let rhs = kron(&identity(d), &o.transpose()) * &phi;
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn sdc_matches_two_ideal_cobits(seed in any::<u64>()) {
        let m = haar::haar_vector(4, &mut seeded(seed));
        let input = PureState::new(layout(&[("a1", Party::A, 2), ("a2", Party::A, 2)]), m.clone()).unwrap();
        let run = coherent_sdc(&input).unwrap();
        let l = layout(&[("a1", Party::A, 2), ("a2", Party::A, 2), ("a1.copy", Party::B, 2), ("a2.copy", Party::B, 2)]);
        let mut ideal = CVec::zeros(16);
        for x in 0..4 {
            ideal[(x << 2) | x] = m[x];
        }
        let ideal = PureState::new(l.clone(), ideal).unwrap();
        prop_assert!(run.state.aligned_to(&l).unwrap().fidelity(&ideal).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn teleportation_delivers_the_state(seed in any::<u64>()) {
        let v = haar::haar_vector(2, &mut seeded(seed));
        let psi = PureState::single(Subsystem::qubit("q", Party::A), v.as_slice()).unwrap();
        let run = coherent_teleport(&psi, &IdealCobits).unwrap();
        let rho = run.state.reduced(&["tB"]).unwrap();
        let f = (v.adjoint() * rho.matrix() * &v)[(0, 0)].re;
        prop_assert!(f > 1.0 - 1e-10);
        prop_assert!(run.transcript.catalysis_closed());
    }

    #[test]
    fn local_unitaries_on_a_leave_chi_and_entanglement(seed in any::<u64>(), m in 2usize..5) {
        let mut rng = seeded(seed);
        let members: Vec<(f64, PureState)> = (0..m)
            .map(|_| ab_state(2, 2, haar::haar_vector(4, &mut rng)).unwrap())
            .map(|s| (1.0 / m as f64, s))
            .collect();
        let ens = Ensemble::new(members).unwrap();
        let x = chi(&ens).unwrap();
        prop_assert!(x >= -1e-12);
        let u = haar::haar_unitary(2, &mut rng);
        let moved = ens.evolve(&u, &["A"]).unwrap();
        prop_assert!((chi(&moved).unwrap() - x).abs() < 1e-9);
        prop_assert!((ensemble_entanglement(&moved).unwrap() - ensemble_entanglement(&ens).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn exact_covers_twirl_to_the_maximally_mixed_state(seed in any::<u64>(), d in 2usize..4) {
        let cover = CoveringSet::pauli(d).unwrap();
        let v = haar::haar_vector(d, &mut seeded(seed));
        let proj = &v * v.adjoint();
        let tw = cover.twirl(&proj);
        prop_assert!(max_abs_diff(&tw, &identity(d)) < 1e-12);
        prop_assert!(cover.slack(&proj) < 1e-12);
    }

    #[test]
    fn gentle_measurement_respects_its_bound(seed in any::<u64>(), dim in 2usize..4, outcomes in 2usize..4) {
        let mut rng = seeded(seed);
        let povm = haar::random_povm(dim, outcomes, &mut rng);
        let s = PureState::single(Subsystem::new("q", Party::A, dim), haar::haar_vector(dim, &mut rng).as_slice()).unwrap();
        let label = povm.elements()[0].label.clone();
        let r = gentle_measurement_check(&s, &povm, &["q"], &label).unwrap();
        prop_assert!(r.disturbance <= r.bound + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivations_replay(start in resource_vector(3), goal in resource_vector(2)) {
        let opts = ProveOptions { max_depth: 6, ..ProveOptions::default() };
        if let ProofResult::Found(d) = prove(&start, &goal, &opts).unwrap() {
            replay(&d);
        }
    }

    #[test]
    fn more_resources_never_hurt(start in resource_vector(2), extra in resource_vector(2), goal in resource_vector(2)) {
        let opts = ProveOptions { max_depth: 6, ..ProveOptions::default() };
        if prove(&start, &goal, &opts).unwrap().is_found() {
            let bigger = start.clone() + extra;
            prop_assert!(prove(&bigger, &goal, &opts).unwrap().is_found());
        }
    }

    #[test]
    fn every_vector_dominates_its_degradations(n in 1u32..4) {
        let opts = ProveOptions::default();
        let v = |k: &str| ResourceVector::parse(&format!("{n} {k}")).unwrap();
        for (hi, lo) in [("qubit->", "cobit->"), ("cobit->", "cbit->"), ("cobit->", "ebit"), ("qubit->", "cbit->")] {
            prop_assert!(prove(&v(hi), &v(lo), &opts).unwrap().is_found(), "{} {} >= {} {}", n, hi, n, lo);
        }
        for (lo, hi) in [("cbit->", "cobit->"), ("cbit->", "ebit"), ("ebit", "cbit->")] {
            prop_assert!(!prove(&v(lo), &v(hi), &opts).unwrap().is_found(), "{} {} >= {} {}", n, lo, n, hi);
        }
    }

    #[test]
    fn parse_display_round_trip(v in resource_vector(5)) {
        prop_assert_eq!(ResourceVector::parse(&v.to_string()).unwrap(), v);
    }
}

fn two_qubit_input(seed: u64) -> (CVec, PureState) {
    let v = haar::haar_vector(4, &mut seeded(seed));
    let s = PureState::new(layout(&[("x", Party::A, 2), ("y", Party::B, 2)]), v.clone()).unwrap();
    (v, s)
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bidirectional_cnot_matches_a_cobit_each_way(seed in any::<u64>()) {
        let (v, input) = two_qubit_input(seed);
        let run = coherent_cnot_bidirectional(&input).unwrap();
        let l = layout(&[("x", Party::A, 2), ("y", Party::B, 2), ("y.copy", Party::A, 2), ("x.copy", Party::B, 2)]);
        let mut ideal = CVec::zeros(16);
        for a in 0..2 {
            for b in 0..2 {
                ideal[(a << 3) | (b << 2) | (b << 1) | a] = v[2 * a + b];
            }
        }
        let ideal = PureState::new(l.clone(), ideal).unwrap();
        prop_assert!(run.state.aligned_to(&l).unwrap().fidelity(&ideal).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn distributed_cnot_applies_cnot_and_repays_the_ebit(seed in any::<u64>()) {
        let (v, input) = two_qubit_input(seed);
        let run = coherent_distributed_cnot(&input, &IdealCobits, &IdealCobits).unwrap();
        let want = gates::cnot() * &v;
        let rho = run.state.reduced(&["x", "y"]).unwrap();
        prop_assert!((want.adjoint() * rho.matrix() * &want)[(0, 0)].re > 1.0 - 1e-10);
        let ancillas: Vec<&str> = run.state.layout().labels().into_iter().filter(|l| *l != "x" && *l != "y").collect();
        let a_side: Vec<&str> = ancillas
            .iter()
            .copied()
            .filter(|l| run.state.layout().get(l).unwrap().party == Party::A)
            .collect();
        let ent = run.state.schmidt_labels(&a_side).unwrap().entropy_bits;
        prop_assert!((ent - 2.0).abs() < 1e-9, "ancilla entropy {}", ent);
        prop_assert_eq!(run.transcript.catalysts.clone(), ResourceVector::parse("ebit").unwrap());
    }

    #[test]
    fn teleportation_returns_its_catalyst(seed in any::<u64>()) {
        let v = haar::haar_vector(2, &mut seeded(seed));
        let psi = PureState::single(Subsystem::qubit("q", Party::A), v.as_slice()).unwrap();
        let run = coherent_teleport(&psi, &IdealCobits).unwrap();
        let ent = run.state.schmidt_labels(&["tA"]).unwrap().entropy_bits;
        prop_assert!((ent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rsp_snapshots_are_exact(seed in any::<u64>()) {
        let cover = CoveringSet::pauli(2).unwrap();
        let mut rng = seeded(seed);
        let v = haar::haar_vector(2, &mut rng);
        let psi = PureState::single(Subsystem::qubit("psi", Party::A), v.as_slice()).unwrap();
        let (run, snaps) = run_coherent_rsp_traced(&psi, &cover, &mut rng).unwrap();
        let snaps = snaps.unwrap();
        let n = cover.n();
        // |ψ̄⟩_a ⊗ (1/√n) Σ_k |k⟩_{a'} R_k|ψ⟩_b
        let l = layout(&[("a", Party::A, 2), ("a'", Party::A, n), ("b", Party::B, 2)]);
        let mut amps = CVec::zeros(2 * n * 2);
        for (k, r) in cover.unitaries().iter().enumerate() {
            let rv = r * &v;
            for i in 0..2 {
                for j in 0..2 {
                    amps[(i * n + k) * 2 + j] = v[i].conj() * rv[j] / (n as f64).sqrt();
                }
            }
        }
        let got = snaps.after_disentangle.aligned_to(&l).unwrap();
        let diff = (got.amplitudes() - &amps).iter().map(|z: &C64| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10, "amplitude gap {}", diff);
        let conj = v.map(|z| z.conj());
        let rho_a = snaps.after_disentangle.reduced(&["a"]).unwrap();
        prop_assert!((conj.adjoint() * rho_a.matrix() * &conj)[(0, 0)].re > 1.0 - 1e-10);
        let gain = run.state.schmidt_labels(&["a'"]).unwrap().entropy_bits;
        prop_assert!((gain - (n as f64).log2()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certified_covers_hold_on_fresh_states(seed in any::<u64>()) {
        let cover = sample_covering(2, 32, seed, 500, Execution::Sequential).unwrap();
        for i in 0..500 {
            let v = haar::haar_vector(2, &mut stream(seed ^ 0x5eed, "fresh-test-state", i));
            let proj = &v * v.adjoint();
            prop_assert!(cover.slack(&proj) <= cover.epsilon() + 1e-9, "state {} slack {} > {}", i, cover.slack(&proj), cover.epsilon());
        }
    }
}

#[test]
fn chi_and_entanglement_are_nonnegative() {
    for i in 0..1000 {
        let mut rng = stream(1, "ensembles", i);
        let m = 2 + (i % 4) as usize;
        let members: Vec<(f64, PureState)> = (0..m).map(|_| (1.0 / m as f64, ab_state(2, 2, haar::haar_vector(4, &mut rng)).unwrap())).collect();
        let ens = Ensemble::new(members).unwrap();
        assert!(chi(&ens).unwrap() >= -1e-12);
        assert!(ensemble_entanglement(&ens).unwrap() >= -1e-12);
    }
}

#[test]
fn concentration_yield_approaches_the_entropy_bound() {
    let p: f64 = 0.7;
    let h = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    let mut last_ratio = 0.0;
    for n in 2..=6usize {
        let mut seen: Vec<Option<(f64, f64)>> = vec![None; n + 1];
        let mut rng = stream(2, "concentration-yield", n as u64);
        for _ in 0..20_000 {
            if seen.iter().all(Option::is_some) {
                break;
            }
            let c = entanglement_concentrate(p, n, &mut rng).unwrap();
            seen[c.outcome] = Some((c.probability, c.entropy_bits));
        }
        let expected: f64 = seen.iter().map(|s| s.map(|(pr, e)| pr * e).unwrap()).sum();
        let formula: f64 = (0..=n)
            .map(|k| binomial(n as u64, k as u64) * (1.0 - p).powi(k as i32) * p.powi((n - k) as i32) * binomial(n as u64, k as u64).log2())
            .sum();
        assert!((expected - formula).abs() < 1e-9);
        assert!(expected <= n as f64 * h);
        let ratio = expected / (n as f64 * h);
        assert!(ratio > last_ratio, "n={n}: ratio {ratio} after {last_ratio}");
        last_ratio = ratio;
    }
}

#[test]
fn simulated_transcripts_close_catalysis() {
    for name in ["coherent-sdc", "coherent-teleport", "cnot-coherent-bidir", "coherent-distributed-cnot", "qubit-to-cobit", "cobit-to-cbit", "cobit-to-ebit"] {
        let t = run_named_protocol(name).unwrap();
        assert!(t.catalysis_closed(), "{name}");
        assert!(t.final_fidelity > 1.0 - 1e-10, "{name}");
    }
}

#[test]
fn equalities_hold_in_both_directions() {
    let opts = ProveOptions::with_catalysts(ResourceVector::parse("ebit").unwrap());
    let eq = check_equality(&ResourceVector::parse("2 cobit->").unwrap(), &ResourceVector::parse("qubit-> + ebit").unwrap(), &opts).unwrap();
    match eq {
        Equality::Equal { forward, backward } => {
            replay(&forward);
            replay(&backward);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn shot_histograms_ignore_scheduling() {
    let a = concentration_shots(0.6, 3, 300, 4, Execution::Sequential).unwrap();
    let b = concentration_shots(0.6, 3, 300, 4, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
