use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::layout::{Party, RegisterLayout, Subsystem};
use super::povm::Isometry;
use crate::error::{invalid, Result};
use crate::linalg::{self, real, CMat, CVec, C64};

pub const NORM_TOL: f64 = 1e-12;
const SCHMIDT_CUTOFF: f64 = 1e-10;

/// Pure state over a labelled register layout. Amplitudes are stored
/// literally; global phase is only quotiented out by [`PureState::fidelity`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amplitudes: CVec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schmidt {
    /// Non-zero Schmidt coefficients, descending.
    pub coefficients: Vec<f64>,
    pub entropy_bits: f64,
}

impl Schmidt {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

impl PureState {
    pub fn new(layout: RegisterLayout, amplitudes: CVec) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return invalid(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.total_dim()
            ));
        }
        let n = amplitudes.norm_squared();
        if (n - 1.0).abs() > NORM_TOL {
            return invalid(format!("squared norm {n} is not 1"));
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Normalises `amplitudes` before construction.
    pub fn normalized(layout: RegisterLayout, amplitudes: CVec) -> Result<Self> {
        let n = amplitudes.norm();
        if n < 1e-300 {
            return invalid("cannot normalise the zero vector");
        }
        PureState::new(layout, amplitudes.unscale(n))
    }

    pub(crate) fn from_parts(layout: RegisterLayout, amplitudes: CVec) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.total_dim());
        PureState { layout, amplitudes }
    }

    pub fn basis(layout: RegisterLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() || digits.iter().zip(layout.dims()).any(|(&d, n)| d >= n) {
            return invalid("basis digits do not fit the layout");
        }
        let mut amps = CVec::zeros(layout.total_dim());
        amps[layout.index(digits)] = real(1.0);
        Ok(PureState::from_parts(layout, amps))
    }

    /// Single-subsystem state from raw amplitudes.
    pub fn single(sub: Subsystem, amplitudes: &[C64]) -> Result<Self> {
        let layout = RegisterLayout::new(vec![sub])?;
        PureState::new(layout, CVec::from_column_slice(amplitudes))
    }

    pub fn ket(label: &str, party: Party, dim: usize, value: usize) -> Result<Self> {
        let layout = RegisterLayout::new(vec![Subsystem::new(label, party, dim)])?;
        PureState::basis(layout, &[value])
    }

    pub fn qubit(label: &str, party: Party, alpha: C64, beta: C64) -> Result<Self> {
        PureState::single(Subsystem::qubit(label, party), &[alpha, beta])
    }

    pub fn plus(label: &str, party: Party) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::qubit(label, party, real(h), real(h))
    }

    /// `(1/√d) Σ_i |i⟩|i⟩` on two fresh subsystems.
    pub fn maximally_entangled(d: usize, a: Subsystem, b: Subsystem) -> Result<Self> {
        if d < 2 {
            return invalid(format!("maximally entangled state needs d >= 2, got {d}"));
        }
        let a = Subsystem { dim: d, ..a };
        let b = Subsystem { dim: d, ..b };
        let layout = RegisterLayout::new(vec![a, b])?;
        let mut amps = CVec::zeros(d * d);
        let w = real(1.0 / (d as f64).sqrt());
        for i in 0..d {
            amps[i * d + i] = w;
        }
        Ok(PureState::from_parts(layout, amps))
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amplitudes[self.layout.index(digits)]
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(PureState::from_parts(layout, self.amplitudes.kronecker(&other.amplitudes)))
    }

    /// Amplitudes reshaped to a (targets × rest) matrix.
    fn split(&self, targets: &[usize]) -> (CMat, Vec<(usize, usize)>) {
        let (t, r, map) = self.layout.split_indices(targets);
        let mut m = CMat::zeros(t, r);
        for (i, &(ti, ri)) in map.iter().enumerate() {
            m[(ti, ri)] = self.amplitudes[i];
        }
        (m, map)
    }

    fn merge(layout: RegisterLayout, targets: &[usize], m: &CMat) -> Self {
        let (_, _, map) = layout.split_indices(targets);
        let amps = CVec::from_iterator(map.len(), map.iter().map(|&(t, r)| m[(t, r)]));
        PureState::from_parts(layout, amps)
    }

    fn target_dim(&self, targets: &[usize]) -> usize {
        let dims = self.layout.dims();
        targets.iter().map(|&k| dims[k]).product()
    }

    /// Applies a square operator to the listed subsystems (first label is the
    /// most significant factor of `op`).
    pub fn apply(&self, op: &CMat, targets: &[&str]) -> Result<Self> {
        let pos = self.layout.positions(targets)?;
        let d = self.target_dim(&pos);
        if op.nrows() != d || op.ncols() != d {
            return invalid(format!(
                "operator is {}x{} but targets {:?} span dimension {d}",
                op.nrows(),
                op.ncols(),
                targets
            ));
        }
        let (mut m, _) = self.split(&pos);
        if linalg::is_diagonal(op) {
            for (i, mut row) in m.row_iter_mut().enumerate() {
                row *= op[(i, i)];
            }
        } else {
            m = op * m;
        }
        Ok(PureState::merge(self.layout.clone(), &pos, &m))
    }

    /// Applies an isometry whose output is `targets ⊗ appended`; the new
    /// subsystems are added at the end of the layout.
    pub fn apply_isometry(&self, iso: &Isometry, targets: &[&str], appended: &[Subsystem]) -> Result<Self> {
        let pos = self.layout.positions(targets)?;
        let d = self.target_dim(&pos);
        let extra: usize = appended.iter().map(|s| s.dim).product();
        if iso.input_dim() != d || iso.output_dim() != d * extra {
            return invalid(format!(
                "isometry {}->{} does not match targets of dimension {d} plus {extra}",
                iso.input_dim(),
                iso.output_dim()
            ));
        }
        let layout = self.layout.with_appended(appended)?;
        let (m, _) = self.split(&pos);
        let out = iso.matrix() * m;
        let mut new_pos = pos.clone();
        new_pos.extend(self.layout.len()..layout.len());
        Ok(PureState::merge(layout, &new_pos, &out))
    }

    /// `Σ_c |c⟩⟨c|_control ⊗ blocks[c]` on `targets`.
    pub fn apply_controlled(&self, control: &str, targets: &[&str], blocks: &[CMat]) -> Result<Self> {
        let cpos = self.layout.position(control)?;
        let tpos = self.layout.positions(targets)?;
        if tpos.contains(&cpos) {
            return invalid("control register cannot also be a target");
        }
        let cdim = self.layout.subsystems()[cpos].dim;
        let tdim = self.target_dim(&tpos);
        if blocks.len() != cdim {
            return invalid(format!("{} blocks for a control of dimension {cdim}", blocks.len()));
        }
        if blocks.iter().any(|b| b.nrows() != tdim || b.ncols() != tdim) {
            return invalid(format!("controlled blocks must be {tdim}x{tdim}"));
        }
        let mut all = vec![cpos];
        all.extend(&tpos);
        let (mut m, _) = self.split(&all);
        let r = m.ncols();
        for (ci, block) in blocks.iter().enumerate() {
            let rows = m.view((ci * tdim, 0), (tdim, r)).clone_owned();
            m.view_mut((ci * tdim, 0), (tdim, r)).copy_from(&(block * rows));
        }
        Ok(PureState::merge(self.layout.clone(), &all, &m))
    }

    /// `|x⟩_source → |x⟩_source |x⟩_copy`, the copy appended to the layout.
    pub fn coherent_copy(&self, source: &str, copy_label: &str, copy_party: Party) -> Result<Self> {
        let dim = self.layout.dim_of(source)?;
        let pos = self.layout.position(source)?;
        let layout = self
            .layout
            .with_appended(&[Subsystem::new(copy_label, copy_party, dim)])?;
        let mut amps = CVec::zeros(layout.total_dim());
        let stride: usize = self.layout.dims()[pos + 1..].iter().product();
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let x = (i / stride) % dim;
            amps[i * dim + x] = a;
        }
        Ok(PureState::from_parts(layout, amps))
    }

    pub fn with_party(&self, label: &str, party: Party) -> Result<Self> {
        Ok(PureState::from_parts(
            self.layout.with_party(label, party)?,
            self.amplitudes.clone(),
        ))
    }

    pub fn renamed(&self, label: &str, new_label: &str) -> Result<Self> {
        Ok(PureState::from_parts(
            self.layout.renamed(label, new_label)?,
            self.amplitudes.clone(),
        ))
    }

    /// Shrinks a subsystem to its first `new_dim` levels. The dropped levels
    /// must carry no weight.
    pub fn restrict(&self, label: &str, new_dim: usize) -> Result<Self> {
        let pos = self.layout.position(label)?;
        let sub = &self.layout.subsystems()[pos];
        if new_dim > sub.dim {
            return invalid("restrict cannot enlarge a subsystem");
        }
        let layout = self.layout.replaced(pos, Subsystem { dim: new_dim, ..sub.clone() })?;
        let mut leaked = 0.0;
        let mut amps = CVec::zeros(layout.total_dim());
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let d = self.layout.digits(i);
            if d[pos] >= new_dim {
                leaked += a.norm_sqr();
            } else {
                amps[layout.index(&d)] = a;
            }
        }
        if leaked > 1e-10 {
            return invalid(format!("restricting `{label}` would discard weight {leaked:.3e}"));
        }
        Ok(PureState::from_parts(layout, amps))
    }

    /// Same state with subsystems reordered to `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return invalid("permutation must list every subsystem exactly once");
        }
        let pos = self.layout.positions(order)?;
        let subs: Vec<Subsystem> = pos.iter().map(|&p| self.layout.subsystems()[p].clone()).collect();
        let layout = RegisterLayout::new(subs)?;
        let mut amps = CVec::zeros(self.dim());
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let d = self.layout.digits(i);
            let nd: Vec<usize> = pos.iter().map(|&p| d[p]).collect();
            amps[layout.index(&nd)] = a;
        }
        Ok(PureState::from_parts(layout, amps))
    }

    /// Reorders this state into the subsystem order of `layout`.
    pub fn aligned_to(&self, layout: &RegisterLayout) -> Result<Self> {
        let out = self.permuted(&layout.labels())?;
        if out.layout != *layout {
            return invalid(format!("layouts differ: {} vs {}", out.layout, layout));
        }
        Ok(out)
    }

    /// Reduced state of the listed subsystems (in the given order).
    pub fn reduced(&self, labels: &[&str]) -> Result<DensityMatrix> {
        if labels.is_empty() {
            return invalid("nothing to keep");
        }
        let pos = self.layout.positions(labels)?;
        let (m, _) = self.split(&pos);
        Ok(DensityMatrix::from_raw(&m * m.adjoint()))
    }

    /// Reduced state of every subsystem held by `kept`, in layout order.
    pub fn partial_trace(&self, kept: &[Party]) -> Result<DensityMatrix> {
        let present = self.layout.parties();
        let keep: Vec<Party> = present.iter().copied().filter(|p| kept.contains(p)).collect();
        if keep.is_empty() || keep.len() == present.len() {
            return invalid(format!(
                "kept parties {kept:?} must be a non-empty proper subset of {present:?}"
            ));
        }
        self.reduced(&self.layout.labels_of(&keep))
    }

    /// Schmidt data for the cut (subsystems held by `side`) | (everything else).
    pub fn schmidt(&self, side: &[Party]) -> Result<Schmidt> {
        let labels = self.layout.labels_of(side);
        self.schmidt_labels(&labels)
    }

    pub fn schmidt_labels(&self, side: &[&str]) -> Result<Schmidt> {
        if side.is_empty() || side.len() >= self.layout.len() {
            return invalid("Schmidt cut needs subsystems on both sides");
        }
        let pos = self.layout.positions(side)?;
        let (m, _) = self.split(&pos);
        let m = if m.nrows() > m.ncols() { m.transpose() } else { m };
        let mut sv: Vec<f64> = m
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .filter(|&s| s > SCHMIDT_CUTOFF)
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let probs: Vec<f64> = sv.iter().map(|s| s * s).collect();
        Ok(Schmidt {
            entropy_bits: linalg::entropy_bits(&probs),
            coefficients: sv,
        })
    }

    pub fn overlap(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return invalid(format!("layouts differ: {} vs {}", self.layout, other.layout));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨a|b⟩|²`, clamped into [0, 1].
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Complex conjugate in the computational basis.
    pub fn conjugate(&self) -> Self {
        PureState::from_parts(self.layout.clone(), self.amplitudes.map(|z| z.conj()))
    }

    pub fn projector(&self) -> CMat {
        linalg::outer(&self.amplitudes)
    }
}

/// `(1/√d) Σ_i |i⟩_A |i⟩_B` on subsystems labelled `A` and `B`.
pub fn make_bell(d: usize) -> Result<PureState> {
    PureState::maximally_entangled(d, Subsystem::new("A", Party::A, d), Subsystem::new("B", Party::B, d))
}

pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    a.fidelity(b)
}
