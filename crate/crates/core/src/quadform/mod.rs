//! Linear-algebra substrate: coupling matrices, the polar decomposition
//! `Z = P·T`, spectra of orthogonal matrices and stable log-determinants.

mod coupling;
pub(crate) mod logdet;
pub(crate) mod orthogonal;
pub(crate) mod polar;

pub use coupling::{make_coupling, QuadraticCoupling};
pub use logdet::{log_abs_det, LogDet};
pub use orthogonal::{
    orthogonal_angles, orthogonal_log, orthogonality_defect, AngleSpectrum,
    OrthogonalCanonicalForm, SkewGenerator,
};
pub use polar::{polar_decompose, polar_decompose_with, PolarForm};

use nalgebra::DMatrix;

/// Largest absolute entry, `‖M‖_max`.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
