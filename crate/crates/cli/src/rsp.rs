//! `rsp run` and `rsp cover`.

use serde::Serialize;

use cobit::quantum::{haar, Party, PureState, Subsystem};
use cobit::rng::stream;
use cobit::rsp::{rsp_resource_account, run_with_retries, sample_covering, CoveringSet};
use cobit::{Execution, ResourceVector};

use crate::output::{CliError, CliResult, Report, EXIT_FAILURE, EXIT_OK};
use crate::protocol::pretty_transcript;

pub struct RspArgs<'a> {
    pub d: usize,
    pub n: Option<usize>,
    pub cover: &'a str,
    pub retries: usize,
    pub test_states: usize,
    pub seed: u64,
    pub fidelity_tol: f64,
}

#[derive(Serialize)]
struct Account {
    consumed: ResourceVector,
    produced: ResourceVector,
    catalysts: ResourceVector,
}

#[derive(Serialize)]
struct RspReport {
    d: usize,
    n: usize,
    epsilon: f64,
    attempts: usize,
    success: bool,
    account: Option<Account>,
    transcript: cobit::protocols::Transcript,
}

pub fn build_cover(args: &RspArgs) -> CliResult<CoveringSet> {
    match args.cover {
        "pauli" => {
            if let Some(n) = args.n {
                if n != args.d * args.d {
                    return Err(CliError::Usage(format!("the pauli cover has n = d^2 = {}, got --n {n}", args.d * args.d)));
                }
            }
            Ok(CoveringSet::pauli(args.d)?)
        }
        "haar" => {
            let n = args.n.unwrap_or(32 * args.d * args.d);
            Ok(sample_covering(args.d, n, args.seed, args.test_states, Execution::Parallel)?)
        }
        other => Err(CliError::Usage(format!("--cover must be pauli or haar, got `{other}`"))),
    }
}

pub fn cover(args: &RspArgs) -> CliResult<Report> {
    let cover = build_cover(args)?;
    let json: serde_json::Value = serde_json::from_str(&cover.to_json()).expect("cover json is valid");
    let pretty = format!("d = {}\nn = {}\nepsilon = {}\n", cover.d(), cover.n(), cover.epsilon());
    Ok(Report::new(&json, pretty, EXIT_OK))
}

pub fn run(args: &RspArgs) -> CliResult<Report> {
    let cover = build_cover(args)?;
    let mut rng = stream(args.seed, "rsp-target", 0);
    let v = haar::haar_vector(args.d, &mut rng);
    let psi = PureState::single(Subsystem::new("psi", Party::A, args.d), v.as_slice())?;
    let (attempts, run) = run_with_retries(&psi, &cover, args.seed, args.retries)?;
    let mut t = run.transcript;
    t.seed = Some(args.seed);
    let account = rsp_resource_account(&t).ok().map(|a| Account {
        consumed: a.consumed,
        produced: a.produced,
        catalysts: a.catalysts,
    });
    let success = t.succeeded() && t.final_fidelity >= 1.0 - args.fidelity_tol;
    let mut pretty = format!("cover: d = {}, n = {}, epsilon = {:.6}\nattempts: {attempts}\n", cover.d(), cover.n(), cover.epsilon());
    pretty.push_str(&pretty_transcript(&t, success));
    let report = RspReport {
        d: cover.d(),
        n: cover.n(),
        epsilon: cover.epsilon(),
        attempts,
        success,
        account,
        transcript: t,
    };
    Ok(Report::new(&report, pretty, if success { EXIT_OK } else { EXIT_FAILURE }))
}
