#![allow(dead_code)]

use freefermi::quadform::{make_coupling, QuadraticCoupling};
use freefermi::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Coupling with independent Gaussian hopping and pairing.
pub fn random_coupling(rng: &mut impl Rng, n: usize) -> QuadraticCoupling {
    let g = gaussian(rng, n);
    let h = gaussian(rng, n);
    make_coupling((&g + g.transpose()) * 0.5, (&h - h.transpose()) * 0.5).unwrap()
}

/// `Z + scale·noise`, a nearby Hamiltonian.
pub fn perturbed(rng: &mut impl Rng, zc: &QuadraticCoupling, scale: f64) -> QuadraticCoupling {
    let n = zc.size();
    QuadraticCoupling::from_z(&(zc.z() + gaussian(rng, n) * scale)).unwrap()
}

/// Haar-ish random orthogonal matrix from a QR factorization.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}
