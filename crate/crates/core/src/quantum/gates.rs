//! Standard gates as dense matrices. Two-qubit gates list the control first.

use crate::linalg::{c, real, CMat};

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn x() -> CMat {
    CMat::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])
}

pub fn y() -> CMat {
    CMat::from_row_slice(2, 2, &[real(0.0), c(0.0, -1.0), c(0.0, 1.0), real(0.0)])
}

pub fn z() -> CMat {
    CMat::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(-1.0)])
}

pub fn h() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[real(s), real(s), real(s), real(-s)])
}

pub fn s() -> CMat {
    CMat::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), c(0.0, 1.0)])
}

/// Pauli by index: 0 → I, 1 → X, 2 → Y, 3 → Z.
pub fn pauli(k: usize) -> CMat {
    match k {
        0 => identity(2),
        1 => x(),
        2 => y(),
        3 => z(),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn pow(m: &CMat, e: usize) -> CMat {
    (0..e).fold(identity(m.nrows()), |acc, _| acc * m)
}

fn permutation(n: usize, f: impl Fn(usize) -> usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(f(i), i)] = real(1.0);
    }
    m
}

pub fn cnot() -> CMat {
    permutation(4, |i| if i >= 2 { i ^ 1 } else { i })
}

pub fn cz() -> CMat {
    let mut m = identity(4);
    m[(3, 3)] = real(-1.0);
    m
}

pub fn swap() -> CMat {
    permutation(4, |i| ((i & 1) << 1) | (i >> 1))
}

/// Named two-party gate used by the capacity tools.
pub fn named(name: &str) -> Option<CMat> {
    match name.to_ascii_lowercase().as_str() {
        "cnot" => Some(cnot()),
        "swap" => Some(swap()),
        "cz" => Some(cz()),
        "identity" | "id" | "i" => Some(identity(4)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{isometry_deviation, max_abs_diff};

    #[test]
    fn gates_are_unitary() {
        for g in [x(), y(), z(), h(), s(), cnot(), cz(), swap()] {
            assert!(isometry_deviation(&g) < 1e-15);
        }
    }

    #[test]
    fn y_is_i_xz() {
        let ixz = (x() * z()).scale(1.0).map(|v| v * c(0.0, 1.0));
        assert!(max_abs_diff(&y(), &ixz) < 1e-15);
    }

    #[test]
    fn swap_from_three_cnots() {
        let rev = swap() * cnot() * swap();
        assert!(max_abs_diff(&(cnot() * &rev * cnot()), &swap()) < 1e-15);
    }
}
