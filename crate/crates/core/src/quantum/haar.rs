//! Haar-random unitaries and states, and random POVMs for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use super::povm::Povm;
use crate::linalg::{self, c, CMat, CVec};

fn gaussian(rng: &mut impl Rng) -> crate::linalg::C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re * s, im * s)
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// QR of a complex Gaussian matrix with the phases of `diag(R)` pushed
/// into `Q`, which makes `Q` exactly Haar distributed.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniformly random unit vector in `C^d`.
pub fn haar_vector(d: usize, rng: &mut impl Rng) -> CVec {
    let v = CVec::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Random POVM with `outcomes` elements: `S^{-1/2} G_k†G_k S^{-1/2}`.
pub fn random_povm(dim: usize, outcomes: usize, rng: &mut impl Rng) -> Povm {
    let raws: Vec<CMat> = (0..outcomes)
        .map(|_| {
            let g = ginibre(dim, dim, rng);
            g.adjoint() * g
        })
        .collect();
    let total = raws.iter().fold(CMat::zeros(dim, dim), |acc, m| acc + m);
    let inv_sqrt = linalg::spectral_map(&total, |v| 1.0 / v.sqrt());
    let elements = raws
        .iter()
        .enumerate()
        .map(|(k, m)| (k.to_string(), &inv_sqrt * m * &inv_sqrt))
        .collect();
    Povm::new(elements).expect("random POVM is valid by construction")
}
