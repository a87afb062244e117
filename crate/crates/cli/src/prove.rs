//! `prove LHS REL RHS`.

use serde::Serialize;

use cobit::calculus::{check_equality, prove, rule_db, Derivation, Equality, ProofResult, ProveOptions};
use cobit::ResourceVector;

use crate::output::{paint, CliError, CliResult, Report, EXIT_FAILURE, EXIT_OK};

pub struct ProveArgs<'a> {
    pub lhs: &'a str,
    pub relation: &'a str,
    pub rhs: &'a str,
    pub cat: Option<&'a str>,
    pub asy: bool,
    pub depth: usize,
}

#[derive(Serialize)]
struct ProveReport {
    relation: String,
    verdict: &'static str,
    forward: Option<Derivation>,
    backward: Option<Derivation>,
}

fn parse(expr: &str, what: &str) -> CliResult<ResourceVector> {
    ResourceVector::parse(expr).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

pub fn run(args: &ProveArgs) -> CliResult<Report> {
    let lhs = parse(args.lhs, "left-hand side")?;
    let rhs = parse(args.rhs, "right-hand side")?;
    let opts = ProveOptions {
        allow_catalysis: args.cat.is_some(),
        catalyst_budget: match args.cat {
            Some(b) => parse(b, "catalyst budget")?,
            None => ResourceVector::new(),
        },
        allow_asymptotic: args.asy,
        max_depth: args.depth,
    };
    let rules = rule_db();
    let relation = format!("{lhs} {} {rhs}", args.relation);
    let (verdict, forward, backward) = match args.relation {
        ">=" => match prove(&lhs, &rhs, &opts)? {
            ProofResult::Found(d) => ("found", Some(d), None),
            ProofResult::NotFound { .. } => ("not-found", None, None),
        },
        "==" => match check_equality(&lhs, &rhs, &opts)? {
            Equality::Equal { forward, backward } => ("equal", Some(forward), Some(backward)),
            Equality::Forward(d) => ("one-sided-forward", Some(d), None),
            Equality::Backward(d) => ("one-sided-backward", None, Some(d)),
            Equality::Neither => ("not-found", None, None),
        },
        other => return Err(CliError::Usage(format!("relation must be >= or ==, got `{other}`"))),
    };
    let ok = matches!(verdict, "found" | "equal");
    let mut pretty = format!("{relation}: {}\n", paint(verdict, ok));
    for (title, d) in [("=>", &forward), ("<=", &backward)] {
        if let Some(d) = d {
            pretty.push_str(&format!("{title}\n{}", d.pretty(&rules)));
        }
    }
    let report = ProveReport {
        relation,
        verdict,
        forward,
        backward,
    };
    Ok(Report::new(&report, pretty, if ok { EXIT_OK } else { EXIT_FAILURE }))
}
