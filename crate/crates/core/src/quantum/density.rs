use crate::error::{invalid, Result};
use crate::linalg::{self, CMat};

const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, no eigenvalue below −1e-10.
    pub fn new(entries: CMat) -> Result<Self> {
        if !entries.is_square() {
            return invalid("density matrix must be square");
        }
        let herm = linalg::hermitian_deviation(&entries);
        if herm > DENSITY_TOL {
            return invalid(format!("not Hermitian (deviation {herm:.3e})"));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return invalid(format!("trace {tr} is not 1"));
        }
        let min = linalg::min_eigenvalue(&entries);
        if min < -DENSITY_TOL {
            return invalid(format!("negative eigenvalue {min:.3e}"));
        }
        Ok(DensityMatrix { entries })
    }

    pub(crate) fn from_raw(entries: CMat) -> Self {
        DensityMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    /// Entropy in bits; eigenvalues below 1e-12 count as zero.
    pub fn von_neumann_entropy(&self) -> f64 {
        linalg::entropy_bits(&self.eigenvalues())
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Convex mixture `Σ w_i ρ_i`. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| crate::Error::InvalidArgument("empty mixture".into()))?;
        let d = first.1.dim();
        let mut acc = CMat::zeros(d, d);
        for (w, rho) in parts {
            if rho.dim() != d || *w < 0.0 {
                return invalid("mixture needs equal dimensions and non-negative weights");
            }
            acc += rho.entries.scale(*w);
        }
        Ok(DensityMatrix { entries: acc })
    }
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.von_neumann_entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real, CVec};

    fn diag(v: &[f64]) -> DensityMatrix {
        DensityMatrix::new(CMat::from_diagonal(&CVec::from_iterator(v.len(), v.iter().map(|&x| real(x))))).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((diag(&[0.5, 0.5]).von_neumann_entropy() - 1.0).abs() < 1e-14);
        assert_eq!(diag(&[1.0, 0.0]).von_neumann_entropy(), 0.0);
        assert!((diag(&[0.5, 0.25, 0.25]).von_neumann_entropy() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid() {
        let bad_trace = CMat::from_diagonal(&CVec::from_vec(vec![real(0.5), real(0.6)]));
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMat::from_diagonal(&CVec::from_vec(vec![real(1.2), real(-0.2)]));
        assert!(DensityMatrix::new(negative).is_err());
        let mut nonherm = linalg::identity(2).scale(0.5);
        nonherm[(0, 1)] = real(0.1);
        assert!(DensityMatrix::new(nonherm).is_err());
    }
}
