//! Quick end-to-end checks, one row per relation.

use serde::Serialize;

use cobit::calculus::{certify_rule_by_simulation, check_equality, rule_db, Equality, ProveOptions};
use cobit::capacity::{witness_checks, Gate};
use cobit::protocols::{concentration_shots, SdcCobits};
use cobit::quantum::{Party, PureState};
use cobit::rsp::{rsp_resource_account, run_with_retries, CoveringSet};
use cobit::{Execution, ResourceVector};

use crate::output::{paint, CliResult, Report, EXIT_FAILURE, EXIT_OK};
use crate::config::Tolerances;

#[derive(Serialize)]
struct Row {
    relation: String,
    check: &'static str,
    passed: bool,
    detail: String,
}

fn row(relation: impl Into<String>, check: &'static str, outcome: cobit::Result<(bool, String)>) -> Row {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
    Row {
        relation: relation.into(),
        check,
        passed,
        detail,
    }
}

fn vector(expr: &str) -> ResourceVector {
    ResourceVector::parse(expr).expect("built-in expression parses")
}

fn equality(lhs: &str, rhs: &str, cat: &str) -> Row {
    let opts = ProveOptions::with_catalysts(vector(cat));
    let outcome = check_equality(&vector(lhs), &vector(rhs), &opts).map(|eq| match eq {
        Equality::Equal { forward, backward } => (true, format!("{} + {} steps", forward.steps.len(), backward.steps.len())),
        other => (false, format!("{other:?}")),
    });
    row(format!("{} == {} (cat: {})", vector(lhs), vector(rhs), vector(cat)), "prover", outcome)
}

pub fn run(seed: u64, tol: &Tolerances) -> CliResult<Report> {
    let fidelity = 1.0 - tol.get("fidelity");
    let mut rows = Vec::new();

    for rule in rule_db().into_iter().filter(|r| r.simulable.is_some()) {
        let outcome = certify_rule_by_simulation(&rule.id).map(|c| (c.final_fidelity >= fidelity, format!("fidelity {:.12}", c.final_fidelity)));
        rows.push(row(rule.relation(), "simulation", outcome));
    }

    let nested = PureState::qubit("q", Party::A, cobit::linalg::c(0.6, 0.0), cobit::linalg::c(0.0, 0.8))
        .and_then(|psi| cobit::protocols::coherent_teleport(&psi, &SdcCobits))
        .map(|r| {
            let t = r.transcript;
            let ok = t.final_fidelity >= fidelity && t.gross_input() == t.gross_output() && t.catalysis_closed();
            (ok, format!("gross in {} / out {}", t.gross_input(), t.gross_output()))
        });
    rows.push(row("qubit + 2 ebit -> qubit + 2 ebit", "teleport over sdc", nested));

    rows.push(equality("2 cobit->", "qubit-> + ebit", "ebit"));
    rows.push(equality("cnot + ebit", "cobit-> + cobit<-", "ebit"));
    rows.push(equality("2 cnot", "swap", "2 ebit"));

    let rsp = CoveringSet::pauli(2).and_then(|cover| {
        let psi = PureState::qubit("psi", Party::A, cobit::linalg::c(0.6, 0.0), cobit::linalg::c(0.0, 0.8))?;
        let (_, run) = run_with_retries(&psi, &cover, seed, 8)?;
        let account = rsp_resource_account(&run.transcript)?;
        let ok = run.transcript.final_fidelity >= 1.0 - tol.get("rsp_fidelity");
        let relation = format!("{} >= {} (cat: {})", account.consumed, account.produced, account.catalysts);
        Ok((relation, ok, format!("fidelity {:.12}", run.transcript.final_fidelity)))
    });
    rows.push(match rsp {
        Ok((relation, ok, detail)) => row(relation, "coherent rsp (pauli cover)", Ok((ok, detail))),
        Err(e) => row("cobit-> >= remote-qubit", "coherent rsp (pauli cover)", Err(e)),
    });

    // Two pairs at p = 1/2: weights 0, 1, 2 with probabilities 1/4, 1/2, 1/4.
    let shots = 2000;
    let conc = concentration_shots(0.5, 2, shots, seed, Execution::Sequential).map(|counts| {
        let ok = [0.25, 0.5, 0.25].iter().zip(&counts).all(|(q, &k)| {
            let mean = q * shots as f64;
            (k as f64 - mean).abs() <= 4.0 * (mean * (1.0 - q)).sqrt()
        });
        (ok, format!("counts {counts:?}"))
    });
    rows.push(row("2 partial ebits -> binomial weight classes", "concentration statistics", conc));

    let witness = Gate::named("cnot").and_then(|g| witness_checks(&g, 0.0)).map(|ws| {
        let flip = ws.iter().find(|w| w.name == "flip");
        match flip {
            Some(w) => ((w.value - 1.0).abs() <= tol.get("witness") && w.feasible, format!("chi gain {:.9}", w.value)),
            None => (false, "missing witness".into()),
        }
    });
    rows.push(row("cnot at e = 0 carries 1 cbit", "witness ensemble", witness));

    let ok = rows.iter().all(|r| r.passed);
    let width = rows.iter().map(|r| r.relation.chars().count()).max().unwrap_or(0);
    let mut pretty = String::new();
    for r in &rows {
        let pad = width - r.relation.chars().count();
        pretty.push_str(&format!(
            "{}{} {:<28} {} {}\n",
            r.relation,
            " ".repeat(pad),
            r.check,
            paint(if r.passed { "pass" } else { "FAIL" }, r.passed),
            r.detail
        ));
    }
    Ok(Report::new(&rows, pretty, if ok { EXIT_OK } else { EXIT_FAILURE }))
}
