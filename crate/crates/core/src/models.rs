//! Concrete Hamiltonian families.
//!
//! Matrix entries mirror the usual 1-based formulas (`A_ij`, `sign(j − i)`)
//! but are stored 0-based; the sign convention is unaffected by the shift.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quadform::{make_coupling, QuadraticCoupling};

/// Parameters of the fermionic model on the complete graph:
/// `A(μ)_ij = 1 + (μ − 1)·δ_ij`, `B(γ)_ij = γ·sign(j − i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteGraphParams {
    pub mu: f64,
    pub gamma: f64,
    pub size: usize,
}

impl CompleteGraphParams {
    pub fn new(mu: f64, gamma: f64, size: usize) -> Self {
        CompleteGraphParams { mu, gamma, size }
    }
}

/// Complete-graph coupling. `Z(μ, −γ) = Z(μ, γ)ᵀ` holds bit for bit.
pub fn complete_graph(p: &CompleteGraphParams) -> Result<QuadraticCoupling> {
    let l = p.size;
    if l < 2 || !l.is_multiple_of(2) {
        return Err(Error::OddSize(l));
    }
    // The diagonal 1 + (μ − 1) is stored as μ itself.
    let a = DMatrix::from_fn(l, l, |i, j| if i == j { p.mu } else { 1.0 });
    let b = DMatrix::from_fn(l, l, |i, j| match j.cmp(&i) {
        std::cmp::Ordering::Greater => p.gamma,
        std::cmp::Ordering::Less => -p.gamma,
        std::cmp::Ordering::Equal => 0.0,
    });
    make_coupling(a, b)
}

/// Two modes with `A = ε·σᶻ`, `B = iΔ·σʸ`: `Z = [[ε, −Δ], [Δ, −ε]]`.
pub fn two_mode_ex1(eps: f64, delta: f64) -> QuadraticCoupling {
    let a = DMatrix::from_row_slice(2, 2, &[eps, 0.0, 0.0, -eps]);
    make_coupling(a, pairing_block(delta)).expect("2×2 example is well formed")
}

/// Two modes with `A = ε·I`, `B = iΔ·σʸ`: `Z = [[ε, −Δ], [Δ, ε]]`, so that
/// `T` is the rotation by `atan2(Δ, ε)` and `Λ = √(ε² + Δ²)·I`.
pub fn two_mode_ex2(eps: f64, delta: f64) -> QuadraticCoupling {
    multimode_ex2(&[eps], &[delta]).expect("single block")
}

/// Block-diagonal extension of [`two_mode_ex2`] to `L = 2M` modes. Any two
/// members of the family have commuting orthogonal factors.
pub fn multimode_ex2(eps: &[f64], delta: &[f64]) -> Result<QuadraticCoupling> {
    if eps.len() != delta.len() {
        return Err(Error::LengthMismatch { left: eps.len(), right: delta.len() });
    }
    let m = eps.len();
    if m == 0 {
        return Err(Error::OddSize(0));
    }
    let mut a = DMatrix::zeros(2 * m, 2 * m);
    let mut b = DMatrix::zeros(2 * m, 2 * m);
    for (k, (&e, &d)) in eps.iter().zip(delta).enumerate() {
        a[(2 * k, 2 * k)] = e;
        a[(2 * k + 1, 2 * k + 1)] = e;
        b.view_mut((2 * k, 2 * k), (2, 2)).copy_from(&pairing_block(d));
    }
    make_coupling(a, b)
}

/// Rotation angle `atan2(Δ, ε)` of one multimode block.
pub fn ex2_angle(eps: f64, delta: f64) -> f64 {
    delta.atan2(eps)
}

// Real form of iΔσʸ.
fn pairing_block(delta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, delta, -delta, 0.0])
}
