//! `capacity --gate G --e E`.

use serde::Serialize;

use cobit::capacity::{concavity_scan, delta_chi_e, q_e, witness_checks, CapacityOptions, CapacityResult, Gate, Status, WitnessCheck};

use crate::output::{paint, CliError, CliResult, Report, EXIT_FAILURE, EXIT_OK};

pub struct CapacityArgs<'a> {
    pub gate: &'a str,
    pub e: f64,
    pub m: usize,
    pub restarts: usize,
    pub grid: Option<&'a str>,
    pub quantum: bool,
    pub seed: u64,
    pub witness_tol: f64,
}

#[derive(Serialize)]
struct WitnessRow {
    #[serde(flatten)]
    check: WitnessCheck,
    passed: bool,
}

#[derive(Serialize)]
struct CapacityReport {
    value: f64,
    e: f64,
    status: Status,
    witness_checks: Vec<WitnessRow>,
    result: CapacityResult,
}

pub fn load_gate(spec: &str) -> CliResult<Gate> {
    if spec.ends_with(".json") {
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read {spec}: {e}")))?;
        return Ok(Gate::from_json(spec, &text)?);
    }
    Ok(Gate::named(spec)?)
}

fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("grid entry `{s}` is not a number"))))
        .collect()
}

pub fn run(args: &CapacityArgs) -> CliResult<Report> {
    let gate = load_gate(args.gate)?;
    let opts = CapacityOptions {
        m: args.m,
        restarts: args.restarts,
        seed: args.seed,
        ..CapacityOptions::default()
    };
    if let Some(grid) = args.grid {
        let report = concavity_scan(&gate, &parse_grid(grid)?, &opts)?;
        let mut pretty = String::new();
        for (e, v) in report.grid.iter().zip(&report.values) {
            pretty.push_str(&format!("e = {e:<8} delta_chi = {v:.9}\n"));
        }
        for v in report.concavity_violations.iter().chain(&report.monotonicity_violations) {
            pretty.push_str(&format!("{} {v}\n", paint("violation:", false)));
        }
        let code = if report.is_clean() { EXIT_OK } else { EXIT_FAILURE };
        return Ok(Report::new(&report, pretty, code));
    }
    if args.quantum {
        let q = q_e(&gate, args.e, &opts)?;
        let pretty = format!("Q_e = {:.6} at e = {} ({:?}, residual {:.2e})\n", q.value, q.e, q.status, q.residual);
        return Ok(Report::new(&q, pretty, EXIT_OK));
    }
    let result = delta_chi_e(&gate, args.e, &opts)?;
    let rows: Vec<WitnessRow> = witness_checks(&gate, args.e)?
        .into_iter()
        .map(|w| {
            let passed = !w.feasible || result.status == Status::Infeasible || result.value >= w.value - args.witness_tol;
            WitnessRow { check: w, passed }
        })
        .collect();
    let ok = rows.iter().all(|r| r.passed);
    let mut pretty = format!("delta_chi_e = {:.9} at e = {} ({:?})\n", result.value, result.e, result.status);
    for r in &rows {
        pretty.push_str(&format!(
            "witness {:<6} value {:.9} feasible {:<5} {}\n",
            r.check.name,
            r.check.value,
            r.check.feasible,
            paint(if r.passed { "pass" } else { "FAIL" }, r.passed)
        ));
    }
    let report = CapacityReport {
        value: result.value,
        e: result.e,
        status: result.status,
        witness_checks: rows,
        result,
    };
    Ok(Report::new(&report, pretty, if ok { EXIT_OK } else { EXIT_FAILURE }))
}
