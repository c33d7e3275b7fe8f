//! Ground-state structure carried by the orthogonal factor `T`: parity
//! sector, pairing matrix `G = (T − I)(T + I)⁻¹`, and the canonical paired
//! form of the ground state.

use nalgebra::{DMatrix, DVectorView};

use crate::error::{Error, Result};
use crate::quadform::{
    polar_decompose, AngleSpectrum, OrthogonalCanonicalForm, QuadraticCoupling,
};
use crate::quadform::orthogonal::check_orthogonal;
use crate::tolerance;

/// Multiplicity `p` of `−1` in `Sp(T)` and the ground-state parity `(−1)^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityInfo {
    pub p: usize,
    pub parity_sign: i8,
}

impl ParityInfo {
    pub fn is_even(&self) -> bool {
        self.parity_sign > 0
    }
}

pub fn parity_of(t: &DMatrix<f64>) -> Result<ParityInfo> {
    let form = OrthogonalCanonicalForm::new(t)?;
    Ok(ParityInfo { p: form.minus_one, parity_sign: form.det_sign() })
}

/// Antisymmetric pairing matrix of the Gaussian ground state
/// `exp(½ Σ c†_i G_ij c†_j)|0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingMatrix {
    pub g: DMatrix<f64>,
    /// `tan(θ_ν/2)` for the `L/2` angles of `T`, ascending.
    pub t_values: Vec<f64>,
}

impl PairingMatrix {
    pub fn size(&self) -> usize {
        self.g.nrows()
    }
}

/// Solves `(T + I)·G = T − I`. Requires `−1 ∉ Sp(T)`.
pub fn pairing_matrix(t: &DMatrix<f64>) -> Result<PairingMatrix> {
    check_orthogonal(t)?;
    let spectrum: AngleSpectrum = OrthogonalCanonicalForm::new(t)?.angle_spectrum();
    if spectrum.count_minus_one > 0 {
        return Err(Error::GNotDefined { multiplicity: spectrum.count_minus_one });
    }
    let n = t.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let plus = t + &id;
    let min_singular = crate::quadform::polar::singular_values(&plus)[0];
    if min_singular < tolerance::CAYLEY_CONDITION {
        return Err(Error::IllConditioned { min_singular });
    }
    let g = plus
        .lu()
        .solve(&(t - &id))
        .ok_or(Error::IllConditioned { min_singular })?;
    let defect = (&g + g.transpose()).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(defect < tolerance::PAIRING_ANTISYMMETRY) {
        return Err(Error::IllConditioned { min_singular });
    }
    let g = DMatrix::from_fn(n, n, |i, j| 0.5 * (g[(i, j)] - g[(j, i)]));
    let t_values = spectrum.angles.iter().map(|th| (0.5 * th).tan()).collect();
    Ok(PairingMatrix { g, t_values })
}

/// Ground state as a product of paired modes
/// `Π_ν [cos(θ_ν/2)|00⟩ + sin(θ_ν/2)|11⟩]_{ν,−ν}`.
///
/// The new modes are `d†_k = Σ_i U_ik c†_i` with `U = mode_frame`. Pair `ν`
/// occupies columns `2ν` (mode `−ν`) and `2ν + 1` (mode `ν`), and
/// `|11⟩_{ν,−ν} = d†_{2ν+1} d†_{2ν} |0⟩`.
///
/// In the odd-parity sector the last two columns are not paired: column
/// `L − 2` is an empty `+1` direction of `T` and column `L − 1` is the
/// occupied `−1` direction. `angles` then holds `L/2 − 1` entries.
#[derive(Debug, Clone)]
pub struct CanonicalGroundState {
    /// Pairing angles in `[0, π]`, in frame order.
    pub angles: Vec<f64>,
    pub mode_frame: DMatrix<f64>,
    pub parity: ParityInfo,
}

impl CanonicalGroundState {
    pub fn size(&self) -> usize {
        self.mode_frame.nrows()
    }

    /// `(cos(θ_ν/2), sin(θ_ν/2))` per pair.
    pub fn amplitudes(&self) -> Vec<(f64, f64)> {
        self.angles.iter().map(|th| ((0.5 * th).cos(), (0.5 * th).sin())).collect()
    }

    /// The singly occupied `−1` eigendirection of `T` (odd sector only).
    pub fn occupied_direction(&self) -> Option<DVectorView<'_, f64>> {
        (!self.parity.is_even()).then(|| self.mode_frame.column(self.size() - 1))
    }

    /// The empty `+1` eigendirection left unpaired (odd sector only).
    pub fn empty_direction(&self) -> Option<DVectorView<'_, f64>> {
        (!self.parity.is_even()).then(|| self.mode_frame.column(self.size() - 2))
    }
}

pub fn canonical_ground_state(zc: &QuadraticCoupling) -> Result<CanonicalGroundState> {
    let pf = polar_decompose(zc);
    if pf.is_singular {
        return Err(Error::SingularCoupling { min_singular: pf.min_singular });
    }
    Ok(canonical_from_orthogonal(&OrthogonalCanonicalForm::new(&pf.t)?))
}

pub(crate) fn canonical_from_orthogonal(form: &OrthogonalCanonicalForm) -> CanonicalGroundState {
    let n = form.size();
    let odd = form.det_sign() < 0;
    let mut angles = form.rotations.clone();
    let mut order: Vec<usize> = (0..2 * form.rotations.len()).collect();

    let plus: Vec<usize> = (form.plus_one_offset()..form.minus_one_offset()).collect();
    let minus: Vec<usize> = (form.minus_one_offset()..n).collect();
    for pair in plus.chunks_exact(2) {
        order.extend(pair);
        angles.push(0.0);
    }
    for pair in minus.chunks_exact(2) {
        order.extend(pair);
        angles.push(std::f64::consts::PI);
    }
    if odd {
        order.push(*plus.last().expect("odd sector has an unpaired +1"));
        order.push(*minus.last().expect("odd sector has an unpaired −1"));
    }
    let mode_frame = DMatrix::from_fn(n, n, |r, c| form.frame[(r, order[c])]);
    CanonicalGroundState {
        angles,
        mode_frame,
        parity: ParityInfo { p: form.minus_one, parity_sign: form.det_sign() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{complete_graph, two_mode_ex2, CompleteGraphParams};
    use crate::quadform::{make_coupling, max_abs};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn rot(th: f64) -> DMatrix<f64> {
        let (s, c) = th.sin_cos();
        DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
    }

    fn sigma_x() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn parity_of_simple_factors() {
        assert_eq!(parity_of(&DMatrix::identity(2, 2)).unwrap(), ParityInfo { p: 0, parity_sign: 1 });
        assert_eq!(parity_of(&sigma_x()).unwrap(), ParityInfo { p: 1, parity_sign: -1 });
    }

    #[test]
    fn parity_complete_graph() {
        let sign = |mu, gamma| {
            let pf = polar_decompose(&complete_graph(&CompleteGraphParams::new(mu, gamma, 6)).unwrap());
            parity_of(&pf.t).unwrap().parity_sign
        };
        assert_eq!(sign(0.5, 0.5), -1);
        assert_eq!(sign(2.0, 0.5), 1);
    }

    #[test]
    fn pairing_of_identity_is_zero() {
        let pm = pairing_matrix(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(pm.g, DMatrix::zeros(4, 4));
        assert_eq!(pm.t_values, vec![0.0, 0.0]);
    }

    #[test]
    fn pairing_of_rotation() {
        let th = 1.1;
        let pm = pairing_matrix(&rot(th)).unwrap();
        let t = (0.5 * th).tan();
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        assert!(max_abs(&(&pm.g - expect)) < 1e-14);
        assert_abs_diff_eq!(pm.t_values[0], t, epsilon = 1e-14);
    }

    #[test]
    fn pairing_undefined_with_minus_one() {
        assert_eq!(pairing_matrix(&sigma_x()).unwrap_err(), Error::GNotDefined { multiplicity: 1 });
        assert_eq!(
            pairing_matrix(&(-DMatrix::<f64>::identity(2, 2))).unwrap_err(),
            Error::GNotDefined { multiplicity: 2 }
        );
    }

    #[test]
    fn canonical_identity() {
        let zc = make_coupling(DMatrix::identity(2, 2), DMatrix::zeros(2, 2)).unwrap();
        let gs = canonical_ground_state(&zc).unwrap();
        assert_eq!(gs.angles, vec![0.0]);
        assert_eq!(gs.amplitudes(), vec![(1.0, 0.0)]);
        assert!(gs.parity.is_even());
    }

    #[test]
    fn canonical_example_two() {
        let gs = canonical_ground_state(&two_mode_ex2(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(gs.angles[0], PI / 4.0, epsilon = 1e-14);
        let (c, s) = gs.amplitudes()[0];
        assert_abs_diff_eq!(c, (PI / 8.0).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(s, (PI / 8.0).sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(c * c + s * s, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn canonical_rejects_singular() {
        let zc = make_coupling(DMatrix::from_diagonal(&nalgebra::dvector![1.0, 0.0]), DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(canonical_ground_state(&zc), Err(Error::SingularCoupling { .. })));
    }

    #[test]
    fn odd_sector_layout() {
        // Z = diag(−1, 1): T = Z, mode 1 occupied.
        let zc = make_coupling(DMatrix::from_diagonal(&nalgebra::dvector![-1.0, 1.0]), DMatrix::zeros(2, 2)).unwrap();
        let gs = canonical_ground_state(&zc).unwrap();
        assert_eq!(gs.parity, ParityInfo { p: 1, parity_sign: -1 });
        assert!(gs.angles.is_empty());
        let occ = gs.occupied_direction().unwrap();
        assert_abs_diff_eq!(occ[0].abs(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gs.empty_direction().unwrap()[1].abs(), 1.0, epsilon = 1e-15);
    }
}
