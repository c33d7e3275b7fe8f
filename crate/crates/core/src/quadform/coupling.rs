use nalgebra::DMatrix;

use crate::error::{shape, Error, Result};
use crate::tolerance;

/// Real coupling matrix `Z = A − B` of a quadratic fermionic Hamiltonian
/// together with its symmetric hopping part `A` and antisymmetric pairing
/// part `B`.
///
/// `A` is exactly symmetric and `B` exactly antisymmetric: both are rebuilt
/// from their inputs by (anti)symmetrization, never merely checked.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCoupling {
    z: DMatrix<f64>,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
}

/// Builds a validated coupling from hopping `A` and pairing `B`.
///
/// Deviations from symmetry of `A` (antisymmetry of `B`) up to
/// [`tolerance::SYMMETRY`] are repaired; larger ones are rejected.
pub fn make_coupling(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<QuadraticCoupling> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape(a.nrows(), a.nrows()),
            found: format!("A {}, B {}", shape(a.nrows(), a.ncols()), shape(b.nrows(), b.ncols())),
        });
    }
    let l = a.nrows();
    if l == 0 || !l.is_multiple_of(2) {
        return Err(Error::OddSize(l));
    }

    let sym_dev = max_deviation(&a, 1.0);
    if sym_dev > tolerance::SYMMETRY {
        return Err(Error::NotSymmetric { deviation: sym_dev });
    }
    let anti_dev = max_deviation(&b, -1.0);
    if anti_dev > tolerance::SYMMETRY {
        return Err(Error::NotAntisymmetric { deviation: anti_dev });
    }

    let a = DMatrix::from_fn(l, l, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let b = DMatrix::from_fn(l, l, |i, j| 0.5 * (b[(i, j)] - b[(j, i)]));
    let z = &a - &b;
    Ok(QuadraticCoupling { z, a, b })
}

// max |M_ij − s·M_ji|
fn max_deviation(m: &DMatrix<f64>, s: f64) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - s * m[(j, i)]).abs());
        }
    }
    dev
}

impl QuadraticCoupling {
    /// Splits an arbitrary real `Z` into `A = (Z + Zᵀ)/2` and `B = (Zᵀ − Z)/2`.
    pub fn from_z(z: &DMatrix<f64>) -> Result<Self> {
        if !z.is_square() {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                found: shape(z.nrows(), z.ncols()),
            });
        }
        let l = z.nrows();
        let a = DMatrix::from_fn(l, l, |i, j| 0.5 * (z[(i, j)] + z[(j, i)]));
        let b = DMatrix::from_fn(l, l, |i, j| 0.5 * (z[(j, i)] - z[(i, j)]));
        make_coupling(a, b)
    }

    /// Number of fermionic modes `L`.
    pub fn size(&self) -> usize {
        self.z.nrows()
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    /// Symmetric hopping matrix `A`.
    pub fn hopping(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Antisymmetric pairing matrix `B`.
    pub fn pairing(&self) -> &DMatrix<f64> {
        &self.b
    }

    /// Applies an orthogonal change of single-particle basis, `A → QᵀAQ`,
    /// `B → QᵀBQ`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Result<Self> {
        let qt = q.transpose();
        make_coupling(&qt * &self.a * q, &qt * &self.b * q)
    }
}
