//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Eigenvalues in `[-PSD_TOL, 0)` are treated as float noise.
pub const PSD_TOL: f64 = 1e-10;
/// Spectral weight below this is dropped from entropy sums.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn outer(v: &CVec) -> CMat {
    v * v.adjoint()
}

pub fn from_rows(rows: &[&[C64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Largest entry of `V†V − I`.
pub fn isometry_deviation(v: &CMat) -> f64 {
    let gram = v.adjoint() * v;
    max_abs_diff(&gram, &identity(v.ncols()))
}

pub fn is_diagonal(m: &CMat) -> bool {
    m.is_square()
        && m.iter()
            .enumerate()
            .all(|(idx, z)| idx % m.nrows() == idx / m.nrows() || *z == C64::new(0.0, 0.0))
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    if is_diagonal(m) {
        return m.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    }
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = hermitian_eigen(m);
    let diag = CVec::from_iterator(values.len(), values.iter().map(|&v| real(f(v))));
    &vectors * CMat::from_diagonal(&diag) * vectors.adjoint()
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let min = min_eigenvalue(m);
    if min < -PSD_TOL {
        return invalid(format!("matrix is not positive semidefinite (min eigenvalue {min:.3e})"));
    }
    if is_diagonal(m) {
        return Ok(CMat::from_diagonal(&m.diagonal().map(|z| real(z.re.max(0.0).sqrt()))));
    }
    // Eigenvalues at rounding level would otherwise turn into ~1e-8 roots.
    let (values, vectors) = hermitian_eigen(m);
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 64.0 * f64::EPSILON * scale;
    let diag = CVec::from_iterator(values.len(), values.iter().map(|&v| real(if v > floor { v.sqrt() } else { 0.0 })));
    Ok(&vectors * CMat::from_diagonal(&diag) * vectors.adjoint())
}

/// `−Σ λ log2 λ` with small weights dropped.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .filter(|&&p| p > ENTROPY_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum();
    s.max(0.0)
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

/// A complex number as a JSON `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub [f64; 2]);

impl From<C64> for Pair {
    fn from(z: C64) -> Self {
        Pair([z.re, z.im])
    }
}

impl From<Pair> for C64 {
    fn from(p: Pair) -> Self {
        C64::new(p.0[0], p.0[1])
    }
}

pub fn vector_to_pairs(v: &CVec) -> Vec<Pair> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn matrix_to_pairs(m: &CMat) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

pub fn matrix_from_pairs(rows: &[Vec<Pair>]) -> Result<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return invalid("matrix rows must be non-empty and of equal length");
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j].into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        let m = from_rows(&[&[real(0.75), c(0.0, 0.25)], &[c(0.0, -0.25), real(0.25)]]);
        let s = psd_sqrt(&m).unwrap();
        assert!(max_abs_diff(&(&s * &s), &m) < 1e-12);
    }

    #[test]
    fn sqrt_rejects_negative_spectrum() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![real(1.0), real(-0.1)]));
        assert!(psd_sqrt(&m).is_err());
        let noisy = CMat::from_diagonal(&CVec::from_vec(vec![real(1.0), real(-1e-12)]));
        assert!(psd_sqrt(&noisy).is_ok());
    }

    #[test]
    fn dyadic_entropy() {
        assert!((entropy_bits(&[0.5, 0.25, 0.25]) - 1.5).abs() < 1e-15);
        assert_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn eigenvalues_sorted_ascending() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![real(3.0), real(-1.0), real(2.0)]));
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }
}
