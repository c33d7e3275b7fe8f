//! Ground-state fidelities `F(Z, Z̃) = |⟨Ψ_Z, Ψ_Z̃⟩|` from the orthogonal
//! polar factors, and the second-order expansion `F = e^{−S}` with
//! `S ≈ −(1/16)·Tr(K′ δλ)²`.
//!
//! Every determinant is evaluated as a log-determinant with sign tracking, so
//! fidelities at `L` in the hundreds neither overflow nor underflow before the
//! final exponentiation.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};
use crate::groundstate::PairingMatrix;
use crate::quadform::orthogonal::check_orthogonal;
use crate::quadform::{log_abs_det, orthogonal_angles, orthogonal_log};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityMethod {
    Determinant,
    Angles,
    Perelomov,
    Commuting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityResult {
    /// Fidelity in `[0, 1]`.
    pub value: f64,
    /// `ln value`, `−∞` when the states are orthogonal.
    pub log_value: f64,
    pub method: FidelityMethod,
    /// Sign of `det(Tᵀ·T̃)`; `−1` means the ground states lie in different
    /// parity sectors.
    pub relative_orthogonal_det: i8,
}

impl FidelityResult {
    fn from_log(log_value: f64, method: FidelityMethod, relative_orthogonal_det: i8) -> Self {
        // Round-off can push the log a few ulps above 0 for identical states.
        let log_value = log_value.min(0.0);
        FidelityResult { value: log_value.exp(), log_value, method, relative_orthogonal_det }
    }

    fn zero(method: FidelityMethod, relative_orthogonal_det: i8) -> Self {
        FidelityResult { value: 0.0, log_value: f64::NEG_INFINITY, method, relative_orthogonal_det }
    }

    /// `S = −ln F`.
    pub fn s(&self) -> f64 {
        -self.log_value
    }
}

fn check_pair(t: &DMatrix<f64>, t_tilde: &DMatrix<f64>) -> Result<()> {
    if t.shape() != t_tilde.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape(t.nrows(), t.ncols()),
            found: shape(t_tilde.nrows(), t_tilde.ncols()),
        });
    }
    check_orthogonal(t)?;
    check_orthogonal(t_tilde)
}

/// `F = 2^{−L/2} |det(T + T̃)|^{1/2}`, exactly `0` when `det(Tᵀ·T̃) = −1`.
pub fn fidelity_det(t: &DMatrix<f64>, t_tilde: &DMatrix<f64>) -> Result<FidelityResult> {
    check_pair(t, t_tilde)?;
    Ok(fidelity_det_signed(t, log_abs_det(t).sign, t_tilde, log_abs_det(t_tilde).sign))
}

// Unchecked variant for callers that already know both factors are
// orthogonal and have their determinant signs at hand.
pub(crate) fn fidelity_det_signed(t: &DMatrix<f64>, sign: i8, t_tilde: &DMatrix<f64>, sign_tilde: i8) -> FidelityResult {
    if sign * sign_tilde < 0 {
        return FidelityResult::zero(FidelityMethod::Determinant, -1);
    }
    if t == t_tilde {
        return FidelityResult::from_log(0.0, FidelityMethod::Determinant, 1);
    }
    let ld = log_abs_det(&(t + t_tilde));
    if ld.is_zero() {
        return FidelityResult::zero(FidelityMethod::Determinant, 1);
    }
    let half_l = 0.5 * t.nrows() as f64;
    FidelityResult::from_log(0.5 * ld.log_abs - half_l * LN_2, FidelityMethod::Determinant, 1)
}

/// `F = Π_ν |cos(Θ_ν/2)|` with `e^{±iΘ_ν}` the spectrum of `Tᵀ·T̃`.
///
/// Refuses pairs with `det(Tᵀ·T̃) = −1`; [`fidelity_det`] returns `0` for them.
pub fn fidelity_angles(t: &DMatrix<f64>, t_tilde: &DMatrix<f64>) -> Result<FidelityResult> {
    check_pair(t, t_tilde)?;
    let spectrum = orthogonal_angles(&(t.transpose() * t_tilde))?;
    if spectrum.det_sign < 0 {
        return Err(Error::NegativeRelativeDeterminant);
    }
    let log: f64 = spectrum.angles.iter().map(|th| (0.5 * th).cos().abs().ln()).sum();
    if log == f64::NEG_INFINITY {
        return Ok(FidelityResult::zero(FidelityMethod::Angles, 1));
    }
    Ok(FidelityResult::from_log(log, FidelityMethod::Angles, 1))
}

/// `F = Π_ν |cos((θ_ν − θ̃_ν)/2)|` for commuting orthogonal factors with
/// matched rotation angles.
pub fn fidelity_commuting(theta: &[f64], theta_tilde: &[f64]) -> Result<f64> {
    if theta.len() != theta_tilde.len() {
        return Err(Error::LengthMismatch { left: theta.len(), right: theta_tilde.len() });
    }
    Ok(theta
        .iter()
        .zip(theta_tilde)
        .map(|(a, b)| (0.5 * (a - b)).cos().abs())
        .product())
}

/// Overlap of two Gaussian states from their pairing matrices:
/// `|det(I + GᵀG̃)|^{1/2} / (det(I + GᵀG)^{1/4} det(I + G̃ᵀG̃)^{1/4})`.
pub fn fidelity_perelomov(g: &PairingMatrix, g_tilde: &PairingMatrix) -> Result<FidelityResult> {
    let (g, gt) = (&g.g, &g_tilde.g);
    if g.shape() != gt.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape(g.nrows(), g.ncols()),
            found: shape(gt.nrows(), gt.ncols()),
        });
    }
    let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
    let cross = log_abs_det(&(&id + g.transpose() * gt));
    if cross.is_zero() {
        return Ok(FidelityResult::zero(FidelityMethod::Perelomov, 1));
    }
    let norm = log_abs_det(&(&id + g.transpose() * g)).log_abs
        + log_abs_det(&(&id + gt.transpose() * gt)).log_abs;
    Ok(FidelityResult::from_log(0.5 * cross.log_abs - 0.25 * norm, FidelityMethod::Perelomov, 1))
}

/// Second-order coefficient of `S = −ln F(λ, λ + δλ) ≈ S2·δλ²`.
#[derive(Debug, Clone)]
pub struct PerturbativeS {
    /// `S2 = −Tr(K′²)/16 ≥ 0`.
    pub s2: f64,
    /// Central-difference derivative of the generator `K(λ) = log T(λ)`.
    pub k_prime: DMatrix<f64>,
}

impl PerturbativeS {
    pub fn predicted_s(&self, dlambda: f64) -> f64 {
        self.s2 * dlambda * dlambda
    }
}

/// `K′` by central differences of the principal orthogonal logarithm with
/// step `dlambda`, then `S2 = −Tr(K′²)/16`.
pub fn perturbative_s<F>(t_of_lambda: F, lambda: f64, dlambda: f64) -> Result<PerturbativeS>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let log_at = |l: f64| {
        orthogonal_log(&t_of_lambda(l)).map_err(|e| match e {
            Error::NegativeDeterminant => Error::NonSpecialOrthogonal { lambda: l },
            other => other,
        })
    };
    let k_plus = log_at(lambda + dlambda)?.k;
    let k_minus = log_at(lambda - dlambda)?.k;
    let k_prime = (k_plus - k_minus) / (2.0 * dlambda);
    let s2 = -(&k_prime * &k_prime).trace() / 16.0;
    Ok(PerturbativeS { s2, k_prime })
}

/// Closed form of `S2` for the multimode two-mode-block family:
/// `S2 = ⅛ Σ_ν (ε_ν²/(ε_ν² + Δ_ν²) · D_ν)²`, `D_ν = Δ′_ν/ε_ν − Δ_ν ε′_ν/ε_ν²`.
///
/// Where `ε_ν = 0` (or the `D` form is not finite) the equivalent
/// `θ′_ν = (ε_ν Δ′_ν − Δ_ν ε′_ν)/(ε_ν² + Δ_ν²)` is used. A mode with
/// `ε_ν = Δ_ν = 0` and nonzero velocity gives `+∞`.
pub fn s2_example2(eps: &[f64], deps: &[f64], delta: &[f64], ddelta: &[f64]) -> Result<f64> {
    let n = eps.len();
    for other in [deps.len(), delta.len(), ddelta.len()] {
        if other != n {
            return Err(Error::LengthMismatch { left: n, right: other });
        }
    }
    let mut sum = 0.0;
    for k in 0..n {
        let (e, de, d, dd) = (eps[k], deps[k], delta[k], ddelta[k]);
        let r2 = e * e + d * d;
        let mut rate = if e != 0.0 {
            let big_d = dd / e - d * de / (e * e);
            e * e / r2 * big_d
        } else {
            f64::NAN
        };
        if !rate.is_finite() {
            rate = (e * dd - d * de) / r2;
        }
        if rate.is_nan() {
            // Gapless mode: θ undefined. Zero velocity contributes nothing.
            rate = if de == 0.0 && dd == 0.0 { 0.0 } else { f64::INFINITY };
        }
        sum += rate * rate;
    }
    Ok(sum / 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groundstate::pairing_matrix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn rot(th: f64) -> DMatrix<f64> {
        let (s, c) = th.sin_cos();
        DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
    }

    #[test]
    fn self_fidelity_is_one() {
        let t = rot(0.4);
        let f = fidelity_det(&t, &t).unwrap();
        assert_eq!(f.value, 1.0);
        assert_eq!(f.log_value, 0.0);
        assert_abs_diff_eq!(fidelity_angles(&t, &t).unwrap().value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn parity_mismatch_is_exactly_zero() {
        let sx = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let f = fidelity_det(&sx, &rot(0.3)).unwrap();
        assert_eq!(f.value, 0.0);
        assert_eq!(f.log_value, f64::NEG_INFINITY);
        assert_eq!(f.relative_orthogonal_det, -1);
        assert_eq!(fidelity_angles(&sx, &rot(0.3)).unwrap_err(), Error::NegativeRelativeDeterminant);
    }

    #[test]
    fn two_mode_cosine() {
        for &th in &[0.1, 1.0, 2.5, -2.0] {
            let f = fidelity_det(&DMatrix::identity(2, 2), &rot(th)).unwrap();
            assert_abs_diff_eq!(f.value, (0.5 * th).cos().abs(), epsilon = 1e-14);
        }
    }

    #[test]
    fn opposite_rotation_vanishes() {
        let f = fidelity_angles(&rot(0.2), &rot(0.2 + PI)).unwrap();
        assert!(f.value < 1e-15);
    }

    #[test]
    fn commuting_formula() {
        assert_eq!(fidelity_commuting(&[0.3, 1.2], &[0.3, 1.2]).unwrap(), 1.0);
        assert_abs_diff_eq!(
            fidelity_commuting(&[0.0], &[PI / 2.0]).unwrap(),
            0.5 * 2f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(matches!(fidelity_commuting(&[0.0], &[]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn perelomov_single_pair() {
        let g0 = pairing_matrix(&DMatrix::identity(2, 2)).unwrap();
        let g1 = pairing_matrix(&rot(PI / 2.0)).unwrap();
        assert_abs_diff_eq!(g1.t_values[0], 1.0, epsilon = 1e-15);
        let f = fidelity_perelomov(&g0, &g1).unwrap();
        assert_abs_diff_eq!(f.value, 0.5 * 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(fidelity_perelomov(&g1, &g1).unwrap().value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn shape_and_orthogonality_checks() {
        assert!(matches!(
            fidelity_det(&DMatrix::identity(2, 2), &DMatrix::identity(4, 4)),
            Err(Error::ShapeMismatch { .. })
        ));
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(matches!(fidelity_det(&bad, &bad), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn constant_family_has_zero_s2() {
        let t = rot(0.8);
        let ps = perturbative_s(|_| t.clone(), 0.0, 1e-5).unwrap();
        assert_eq!(ps.s2, 0.0);
    }

    #[test]
    fn single_mode_s2() {
        // θ(λ) = atan2(Δ(λ), ε(λ)) with ε = 1 + λ², Δ = sin λ.
        let theta = |l: f64| l.sin().atan2(1.0 + l * l);
        let lambda = 0.3;
        let ps = perturbative_s(|l| rot(theta(l)), lambda, 1e-5).unwrap();
        let h = 1e-6;
        let dtheta = (theta(lambda + h) - theta(lambda - h)) / (2.0 * h);
        assert_abs_diff_eq!(ps.s2, dtheta * dtheta / 8.0, epsilon = 1e-8);
    }

    #[test]
    fn s2_closed_form() {
        assert_eq!(s2_example2(&[1.0, 2.0], &[0.0, 0.0], &[0.5, 0.1], &[0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(s2_example2(&[1.0], &[0.0], &[0.0], &[1.0]).unwrap(), 0.125, epsilon = 1e-15);
        // ε = 0: θ′ = −Δ ε′/Δ² = −ε′/Δ.
        assert_abs_diff_eq!(s2_example2(&[0.0], &[2.0], &[0.5], &[7.0]).unwrap(), 16.0 / 8.0, epsilon = 1e-14);
        assert!(matches!(s2_example2(&[1.0], &[0.0, 1.0], &[0.0], &[0.0]), Err(Error::LengthMismatch { .. })));
    }
}
