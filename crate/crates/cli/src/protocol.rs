//! `protocol run` and `protocol list`.

use cobit::linalg::{c, CVec};
use cobit::protocols::{self, IdealCobits, SdcCobits, Transcript};
use cobit::quantum::{haar, Party, PureState, RegisterLayout, Subsystem};
use cobit::rng::stream;

use crate::output::{paint, CliError, CliResult, Report, EXIT_FAILURE, EXIT_OK};

pub const PROTOCOLS: &[(&str, &str)] = &[
    ("coherent-sdc", "two A qubits copied to Bob with 1 qubit + 1 ebit"),
    ("coherent-teleport", "one qubit teleported with 2 ideal cobits, 1 ebit catalytic"),
    ("coherent-teleport-sdc", "teleportation whose cobits come from coherent super-dense coding"),
    ("cnot-coherent-bidir", "one CNOT + 1 ebit give a cobit each way (inputs: A qubit, B qubit)"),
    ("coherent-distributed-cnot", "a cobit each way gives a CNOT, 1 ebit catalytic"),
    ("qubit-to-cobit", "1 qubit gives 1 cobit"),
    ("cobit-to-cbit", "the sender discards the copy"),
    ("cobit-to-ebit", "a cobit on |+> gives an ebit (input ignored)"),
    ("entanglement-concentration", "Hamming-weight measurement on n partly entangled pairs"),
    ("coherent-hsw", "orthogonal codewords {|00>, |11>} decoded coherently"),
];

/// Input qubit count of each protocol.
fn arity(name: &str) -> usize {
    match name {
        "coherent-sdc" | "cnot-coherent-bidir" | "coherent-distributed-cnot" => 2,
        _ => 1,
    }
}

/// Amplitudes for `basis` (all zeros), `haar` or an explicit bit string.
fn input_amplitudes(spec: &str, qubits: usize, seed: u64) -> CliResult<CVec> {
    let dim = 1usize << qubits;
    match spec {
        "basis" => Ok(CVec::from_fn(dim, |i, _| c(if i == 0 { 1.0 } else { 0.0 }, 0.0))),
        "haar" => {
            let mut rng = stream(seed, "protocol-input", 0);
            Ok(haar::haar_vector(dim, &mut rng))
        }
        bits if bits.len() == qubits && bits.chars().all(|ch| ch == '0' || ch == '1') => {
            let idx = usize::from_str_radix(bits, 2).expect("checked binary");
            Ok(CVec::from_fn(dim, |i, _| c(if i == idx { 1.0 } else { 0.0 }, 0.0)))
        }
        other => Err(CliError::Usage(format!(
            "--input must be basis, haar or {qubits} bits, got `{other}`"
        ))),
    }
}

fn register(labels: &[(&str, Party)], amps: CVec) -> CliResult<PureState> {
    let layout = RegisterLayout::new(labels.iter().map(|(l, p)| Subsystem::qubit(*l, *p)).collect())?;
    Ok(PureState::new(layout, amps)?)
}

pub struct ProtocolArgs<'a> {
    pub name: &'a str,
    pub input: &'a str,
    pub seed: u64,
    pub p: f64,
    pub copies: usize,
    pub fidelity_tol: f64,
}

pub fn run(args: &ProtocolArgs) -> CliResult<Report> {
    let name = args.name;
    if !PROTOCOLS.iter().any(|(n, _)| *n == name) {
        let known: Vec<_> = PROTOCOLS.iter().map(|(n, _)| *n).collect();
        return Err(CliError::Usage(format!("unknown protocol `{name}` (known: {})", known.join(", "))));
    }
    let amps = input_amplitudes(args.input, arity(name), args.seed)?;
    let one = |label: &str| register(&[(label, Party::A)], amps.clone());
    let run = match name {
        "coherent-sdc" => protocols::coherent_sdc(&register(&[("a1", Party::A), ("a2", Party::A)], amps.clone())?)?,
        "coherent-teleport" => protocols::coherent_teleport(&one("q")?, &IdealCobits)?,
        "coherent-teleport-sdc" => protocols::coherent_teleport(&one("q")?, &SdcCobits)?,
        "cnot-coherent-bidir" => protocols::coherent_cnot_bidirectional(&register(&[("x", Party::A), ("y", Party::B)], amps.clone())?)?,
        "coherent-distributed-cnot" => protocols::coherent_distributed_cnot(
            &register(&[("x", Party::A), ("y", Party::B)], amps.clone())?,
            &IdealCobits,
            &IdealCobits,
        )?,
        "qubit-to-cobit" => protocols::cobit_from_qubit(&one("m")?)?,
        "cobit-to-cbit" => protocols::cobit_degrade(&one("m")?, protocols::DegradeMode::ToCbit)?,
        "cobit-to-ebit" => protocols::cobit_degrade(&PureState::plus("m", Party::A)?, protocols::DegradeMode::ToEbit)?,
        "entanglement-concentration" => {
            let mut rng = stream(args.seed, "protocol-concentration", 0);
            protocols::entanglement_concentrate(args.p, args.copies, &mut rng)?.run
        }
        "coherent-hsw" => {
            let l = RegisterLayout::new(vec![Subsystem::qubit("ca", Party::A), Subsystem::qubit("cb", Party::B)])?;
            let words = [PureState::basis(l.clone(), &[0, 0])?, PureState::basis(l, &[1, 1])?];
            protocols::coherent_hsw_demo(&words, &one("m")?)?
        }
        _ => unreachable!("checked above"),
    };
    let mut t: Transcript = run.transcript;
    t.seed = Some(args.seed);
    let ok = t.succeeded() && t.final_fidelity >= 1.0 - args.fidelity_tol;
    let pretty = pretty_transcript(&t, ok);
    Ok(Report::new(&t, pretty, if ok { EXIT_OK } else { EXIT_FAILURE }))
}

pub fn pretty_transcript(t: &Transcript, ok: bool) -> String {
    let mut s = format!("protocol: {}\n", t.protocol);
    for (i, step) in t.steps.iter().enumerate() {
        s.push_str(&format!("{:>3}. [{}] {} ({})\n", i + 1, step.op, step.desc, step.targets.join(", ")));
    }
    s.push_str(&format!("consumed:  {}\nproduced:  {}\ncatalysts: {}\n", t.consumed, t.produced, t.catalysts));
    s.push_str(&format!("target:    {}\nfidelity:  {:.12}\n", t.target_description, t.final_fidelity));
    s.push_str(&format!("status:    {}\n", paint(if ok { "ok" } else { "failed" }, ok)));
    s
}

pub fn list() -> Report {
    let rows: Vec<_> = PROTOCOLS
        .iter()
        .map(|(n, d)| serde_json::json!({"name": n, "description": d}))
        .collect();
    let pretty = PROTOCOLS.iter().map(|(n, d)| format!("{n:<28} {d}\n")).collect();
    Report::new(&rows, pretty, EXIT_OK)
}
