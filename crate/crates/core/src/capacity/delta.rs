//! `Δχ_e(U)`: the largest one-use increase of χ when the average
//! entanglement may drop by at most `e`, and the quantities built on it.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::ensemble::{ab_state, chi, ensemble_entanglement, Ensemble};
use super::gate::Gate;
use super::nelder_mead::{minimize, NmOptions};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::linalg::{c, entropy_bits, hermitian_eigenvalues, CMat, CVec, C64};
use crate::quantum::{gates, make_bell};
use crate::rng::stream;

pub const MAX_ENSEMBLE_SIZE: usize = 8;
/// Largest constraint violation accepted as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Optimizer tolerance used by the structural checks.
pub const OPTIMIZER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    BudgetExhausted,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityOptions {
    pub m: usize,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    pub penalty: f64,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions {
            m: 4,
            restarts: 32,
            max_evals: 40_000,
            penalty: 100.0,
            seed: 0,
            exec: Execution::Parallel,
        }
    }
}

/// One ensemble member as probability plus amplitudes on `A ⊗ B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRecord {
    pub p: f64,
    pub amplitudes: Vec<crate::linalg::Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    pub e: f64,
    pub status: Status,
    pub restarts: usize,
    pub evaluations: usize,
    pub chi_before: f64,
    pub chi_after: f64,
    pub entanglement_before: f64,
    pub entanglement_after: f64,
    /// `e − (E(𝓔) − E(U𝓔))`; negative means violated.
    pub slack: f64,
    pub best_ensemble: Vec<MemberRecord>,
}

/// χ and E before and after `U` for raw member vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Evaluation {
    chi_before: f64,
    chi_after: f64,
    ent_before: f64,
    ent_after: f64,
}

impl Evaluation {
    fn delta(&self) -> f64 {
        self.chi_after - self.chi_before
    }

    fn violation(&self, e: f64) -> f64 {
        (self.ent_before - self.ent_after - e).max(0.0)
    }
}

fn bob_reduction(psi: &[C64], da: usize, db: usize) -> CMat {
    CMat::from_fn(db, db, |j, k| (0..da).map(|a| psi[a * db + j] * psi[a * db + k].conj()).sum())
}

fn spectrum(rho: &CMat) -> Vec<f64> {
    if rho.nrows() == 2 {
        let (a, d) = (rho[(0, 0)].re, rho[(1, 1)].re);
        let b = rho[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        return vec![mean - r, mean + r];
    }
    hermitian_eigenvalues(rho)
}

fn entropy(rho: &CMat) -> f64 {
    entropy_bits(&spectrum(rho))
}

fn holevo(probs: &[f64], rhos: &[CMat]) -> (f64, f64) {
    let d = rhos[0].nrows();
    let mut avg = CMat::zeros(d, d);
    let mut ent = 0.0;
    for (p, r) in probs.iter().zip(rhos) {
        avg += r.scale(*p);
        ent += p * entropy(r);
    }
    (entropy(&avg) - ent, ent)
}

struct Problem<'a> {
    gate: &'a Gate,
    m: usize,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.gate.da * self.gate.db
    }

    fn n_params(&self) -> usize {
        self.m * (2 * self.dim() + 1)
    }

    /// Unit vectors from the first `2·D·m` reals, softmax weights from the rest.
    fn decode(&self, x: &[f64]) -> (Vec<f64>, Vec<CVec>) {
        let d = self.dim();
        let states = (0..self.m)
            .map(|i| {
                let raw = &x[i * 2 * d..(i + 1) * 2 * d];
                let v = CVec::from_fn(d, |k, _| c(raw[2 * k], raw[2 * k + 1]));
                let n = v.norm();
                if n < 1e-300 {
                    let mut e0 = CVec::zeros(d);
                    e0[0] = c(1.0, 0.0);
                    e0
                } else {
                    v.unscale(n)
                }
            })
            .collect();
        let logits = &x[self.m * 2 * d..];
        let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = w.iter().sum();
        (w.iter().map(|v| v / total).collect(), states)
    }

    fn evaluate(&self, probs: &[f64], states: &[CVec]) -> Evaluation {
        let (da, db) = (self.gate.da, self.gate.db);
        let before: Vec<CMat> = states.iter().map(|s| bob_reduction(s.as_slice(), da, db)).collect();
        let after: Vec<CMat> = states
            .iter()
            .map(|s| bob_reduction((&self.gate.matrix * s).as_slice(), da, db))
            .collect();
        let (chi_before, ent_before) = holevo(probs, &before);
        let (chi_after, ent_after) = holevo(probs, &after);
        Evaluation {
            chi_before,
            chi_after,
            ent_before,
            ent_after,
        }
    }
}

struct RestartOutcome {
    x: Vec<f64>,
    eval: Evaluation,
    evals: usize,
    converged: bool,
}

fn run_restart(problem: &Problem, e: f64, opts: &CapacityOptions, index: usize) -> RestartOutcome {
    let mut rng = stream(opts.seed, "capacity-restart", index as u64);
    let mut x: Vec<f64> = (0..problem.n_params()).map(|_| rng.sample(StandardNormal)).collect();
    let mut weight = opts.penalty;
    let mut used = 0;
    let mut converged = false;
    let mut step = 0.5;
    let mut last_f = f64::INFINITY;
    while used < opts.max_evals {
        let objective = |y: &[f64]| {
            let (p, s) = problem.decode(y);
            let ev = problem.evaluate(&p, &s);
            -ev.delta() + weight * ev.violation(e).powi(2)
        };
        let budget = (opts.max_evals - used).min(1000.max(opts.max_evals / 16));
        let r = minimize(objective, &x, NmOptions { max_evals: budget, step, ..NmOptions::default() });
        used += r.evals;
        x = r.x;
        let (p, s) = problem.decode(&x);
        let ev = problem.evaluate(&p, &s);
        if ev.violation(e) > FEASIBILITY_TOL {
            weight *= 2.0;
            last_f = f64::INFINITY;
            continue;
        }
        // restarting the simplex around the incumbent escapes collapsed simplices
        if (last_f - r.f).abs() < 1e-10 {
            converged = true;
            break;
        }
        last_f = r.f;
        step = (step * 0.5).max(1e-3);
    }
    let (p, s) = problem.decode(&x);
    let eval = problem.evaluate(&p, &s);
    RestartOutcome {
        x,
        eval,
        evals: used,
        converged,
    }
}

fn check_options(e: f64, opts: &CapacityOptions) -> Result<()> {
    if !e.is_finite() {
        return invalid("e must be finite");
    }
    if opts.m == 0 || opts.m > MAX_ENSEMBLE_SIZE {
        return invalid(format!("ensemble size must lie in 1..={MAX_ENSEMBLE_SIZE}"));
    }
    if opts.restarts == 0 {
        return invalid("at least one restart is required");
    }
    Ok(())
}

/// Lower bound on `Δχ_e(U)` from multi-start penalized simplex search.
pub fn delta_chi_e(gate: &Gate, e: f64, opts: &CapacityOptions) -> Result<CapacityResult> {
    check_options(e, opts)?;
    let problem = Problem { gate, m: opts.m };
    let outcomes = opts.exec.map(opts.restarts, |i| run_restart(&problem, e, opts, i));
    let evaluations = outcomes.iter().map(|o| o.evals).sum();

    let feasible = outcomes.iter().filter(|o| o.eval.violation(e) <= FEASIBILITY_TOL);
    let best = feasible.fold(None::<&RestartOutcome>, |acc, o| match acc {
        Some(b) if b.eval.delta() >= o.eval.delta() => Some(b),
        _ => Some(o),
    });
    let (chosen, status) = match best {
        Some(b) => (b, if b.converged { Status::Converged } else { Status::BudgetExhausted }),
        None => {
            let least = outcomes
                .iter()
                .reduce(|a, b| if b.eval.violation(e) < a.eval.violation(e) { b } else { a })
                .expect("at least one restart");
            (least, Status::Infeasible)
        }
    };

    // recompute through the state-level path
    let (probs, states) = problem.decode(&chosen.x);
    let ens = Ensemble::new(
        probs
            .iter()
            .zip(&states)
            .map(|(p, s)| Ok((*p, ab_state(gate.da, gate.db, s.clone())?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let after = ens.evolve(&gate.matrix, &["A", "B"])?;
    let (chi_before, chi_after) = (chi(&ens)?, chi(&after)?);
    let (ent_before, ent_after) = (ensemble_entanglement(&ens)?, ensemble_entanglement(&after)?);
    Ok(CapacityResult {
        value: chi_after - chi_before,
        e,
        status,
        restarts: opts.restarts,
        evaluations,
        chi_before,
        chi_after,
        entanglement_before: ent_before,
        entanglement_after: ent_after,
        slack: e - (ent_before - ent_after),
        best_ensemble: probs
            .iter()
            .zip(&states)
            .map(|(p, s)| MemberRecord {
                p: *p,
                amplitudes: crate::linalg::vector_to_pairs(s),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub name: String,
    pub value: f64,
    pub entanglement_drop: f64,
    pub feasible: bool,
}

/// Exactly evaluated reference ensembles for two-qubit gates:
/// `flip` = `{½|00⟩, ½|10⟩}` and `bell` = `{¼ (P_k ⊗ I)|Φ_2⟩}`.
pub fn witness_ensembles(gate: &Gate) -> Result<Vec<(String, Ensemble)>> {
    if gate.da != 2 || gate.db != 2 {
        return Ok(Vec::new());
    }
    let layout = super::ensemble::ab_layout(2, 2)?;
    let flip = Ensemble::uniform(vec![
        crate::quantum::PureState::basis(layout.clone(), &[0, 0])?,
        crate::quantum::PureState::basis(layout, &[1, 0])?,
    ])?;
    let bells = (0..4)
        .map(|k| make_bell(2)?.apply(&gates::pauli(k), &["A"]))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![("flip".into(), flip), ("bell".into(), Ensemble::uniform(bells)?)])
}

pub fn witness_checks(gate: &Gate, e: f64) -> Result<Vec<WitnessCheck>> {
    witness_ensembles(gate)?
        .into_iter()
        .map(|(name, ens)| {
            let after = ens.evolve(&gate.matrix, &["A", "B"])?;
            let value = chi(&after)? - chi(&ens)?;
            let drop = ensemble_entanglement(&ens)? - ensemble_entanglement(&after)?;
            Ok(WitnessCheck {
                name,
                value,
                entanglement_drop: drop,
                feasible: drop <= e + 1e-12,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub statuses: Vec<Status>,
    /// Interior points that fall below the chord of their neighbours.
    pub concavity_violations: Vec<String>,
    pub monotonicity_violations: Vec<String>,
}

impl ConcavityReport {
    pub fn is_clean(&self) -> bool {
        self.concavity_violations.is_empty() && self.monotonicity_violations.is_empty()
    }
}

pub fn concavity_scan(gate: &Gate, grid: &[f64], opts: &CapacityOptions) -> Result<ConcavityReport> {
    if grid.len() < 3 {
        return invalid("concavity needs at least three grid points");
    }
    if grid.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return invalid("grid must be strictly ascending");
    }
    let results = grid.iter().map(|&e| delta_chi_e(gate, e, opts)).collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    let mut concavity_violations = Vec::new();
    for i in 1..grid.len() - 1 {
        let t = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1]);
        let chord = values[i - 1] + t * (values[i + 1] - values[i - 1]);
        if values[i] < chord - OPTIMIZER_TOL {
            concavity_violations.push(format!("e={}: {:.6} below chord {:.6}", grid[i], values[i], chord));
        }
    }
    let monotonicity_violations = (1..grid.len())
        .filter(|&i| values[i] < values[i - 1] - OPTIMIZER_TOL)
        .map(|i| format!("e={}: {:.6} below e={}: {:.6}", grid[i], values[i], grid[i - 1], values[i - 1]))
        .collect();
    Ok(ConcavityReport {
        grid: grid.to_vec(),
        statuses: results.iter().map(|r| r.status).collect(),
        values,
        concavity_violations,
        monotonicity_violations,
    })
}

pub const Q_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumCapacity {
    pub value: f64,
    pub e: f64,
    pub status: Status,
    /// `|Q − ½ Δχ_{e+Q}|` at the returned `Q`.
    pub residual: f64,
    pub bisection_steps: usize,
}

/// Solves `Q = ½ Δχ_{e+Q}(U)` by bisection on `[0, log2 min(dA, dB)]`.
pub fn q_e(gate: &Gate, e: f64, opts: &CapacityOptions) -> Result<QuantumCapacity> {
    check_options(e, opts)?;
    let g = |q: f64| -> Result<(f64, Status)> {
        let r = delta_chi_e(gate, e + q, opts)?;
        Ok((0.5 * r.value - q, r.status))
    };
    let hi_bound = (gate.da.min(gate.db) as f64).log2();
    let (g0, s0) = g(0.0)?;
    if s0 == Status::Infeasible {
        return Ok(QuantumCapacity {
            value: 0.0,
            e,
            status: Status::Infeasible,
            residual: f64::NAN,
            bisection_steps: 0,
        });
    }
    let mut steps = 0;
    let (mut lo, mut hi) = (0.0, hi_bound);
    let mut status = s0;
    if g0 <= 0.0 {
        hi = 0.0;
    } else {
        let (gh, sh) = g(hi)?;
        if gh >= 0.0 {
            lo = hi;
            status = sh;
        }
        while hi - lo > Q_TOL {
            steps += 1;
            let mid = 0.5 * (lo + hi);
            let (gm, sm) = g(mid)?;
            if sm == Status::Infeasible || gm < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                status = sm;
            }
        }
    }
    let q = 0.5 * (lo + hi);
    let (gq, _) = g(q)?;
    Ok(QuantumCapacity {
        value: q,
        e,
        status,
        residual: gq.abs(),
        bisection_steps: steps,
    })
}
