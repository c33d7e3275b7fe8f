use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{self, ComputeSvdVectors};
use faer::diag::Diag;
use faer::{Mat, Par};
use nalgebra::{DMatrix, DVector};

use super::coupling::QuadraticCoupling;
use crate::tolerance;

/// Left polar decomposition `Z = P·T` of a coupling matrix, built from the
/// SVD `Z = U·Σ·Vᵀ` as `P = U·Σ·Uᵀ` and `T = U·Vᵀ`.
///
/// `P = √(Z·Zᵀ)` carries the single-particle energies (the singular values);
/// `T` fixes the many-body ground state. When `Z` is singular `T` is not
/// unique and `is_singular` is set. The returned factor then maps the kernel
/// of `Z` onto the kernel of `Zᵀ` by the orthogonal polar factor of the
/// projector product, which does not depend on the bases the SVD picked and
/// satisfies `T(Zᵀ) = T(Z)ᵀ`. If the two kernels have orthogonal directions
/// that map is itself ambiguous and the sign is fixed by `det T = +1`.
#[derive(Debug, Clone)]
pub struct PolarForm {
    pub p: DMatrix<f64>,
    pub t: DMatrix<f64>,
    /// Singular values in ascending order.
    pub singular_values: Vec<f64>,
    /// `U`, columns ordered like `singular_values`.
    pub left_frame: DMatrix<f64>,
    /// `V`, columns ordered like `singular_values`.
    pub right_frame: DMatrix<f64>,
    pub min_singular: f64,
    pub is_singular: bool,
    /// Threshold that was applied to `min_singular`.
    pub tol_sing: f64,
}

impl PolarForm {
    pub fn size(&self) -> usize {
        self.t.nrows()
    }

    pub fn max_singular(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

/// Polar decomposition with the default singularity threshold
/// `SINGULAR_RELATIVE · σ_max`.
pub fn polar_decompose(zc: &QuadraticCoupling) -> PolarForm {
    polar_decompose_with(zc, None)
}

/// Polar decomposition; `tol_sing = None` selects the relative default.
pub fn polar_decompose_with(zc: &QuadraticCoupling, tol_sing: Option<f64>) -> PolarForm {
    let z = zc.z();
    let n = z.nrows();
    let (sigma_desc, u_desc, v_desc) = svd_full(z);

    // faer orders singular values descending; flip to ascending.
    let singular_values: Vec<f64> = sigma_desc.iter().rev().copied().collect();
    let left_frame = DMatrix::from_fn(n, n, |i, j| u_desc[(i, n - 1 - j)]);
    let right_frame = DMatrix::from_fn(n, n, |i, j| v_desc[(i, n - 1 - j)]);

    let mut t = &left_frame * right_frame.transpose();
    let min_singular = singular_values.first().copied().unwrap_or(0.0);
    let max_singular = singular_values.last().copied().unwrap_or(0.0);
    let tol_sing = tol_sing.unwrap_or(tolerance::SINGULAR_RELATIVE * max_singular);
    let kernel = kernel_dim(&singular_values, tol_sing);
    if kernel > 0 {
        complete_on_kernel(&mut t, &left_frame.columns(0, kernel).into(), &right_frame.columns(0, kernel).into());
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| left_frame[(i, j)] * singular_values[j]);
    let mut p = &scaled * left_frame.transpose();
    p = (&p + p.transpose()) * 0.5;

    PolarForm {
        p,
        t,
        min_singular,
        is_singular: min_singular < tol_sing || max_singular == 0.0,
        tol_sing,
        singular_values,
        left_frame,
        right_frame,
    }
}

/// Orthogonal polar factor `T` alone, for hot loops that never need `P`.
pub(crate) struct OrthogonalFactor {
    pub t: DMatrix<f64>,
    pub min_singular: f64,
    pub is_singular: bool,
}

pub(crate) fn orthogonal_factor(zc: &QuadraticCoupling, tol_sing: Option<f64>) -> OrthogonalFactor {
    let z = zc.z();
    let n = z.nrows();
    let (sigma_desc, u, v) = svd_full(z);
    let prod = u.as_ref() * v.as_ref().transpose();
    let mut t = DMatrix::from_fn(n, n, |i, j| prod[(i, j)]);
    let min_singular = sigma_desc.last().copied().unwrap_or(0.0);
    let max_singular = sigma_desc.first().copied().unwrap_or(0.0);
    let tol_sing = tol_sing.unwrap_or(tolerance::SINGULAR_RELATIVE * max_singular);
    let ascending: Vec<f64> = sigma_desc.iter().rev().copied().collect();
    let kernel = kernel_dim(&ascending, tol_sing);
    if kernel > 0 {
        let uk = DMatrix::from_fn(n, kernel, |i, j| u[(i, n - 1 - j)]);
        let vk = DMatrix::from_fn(n, kernel, |i, j| v[(i, n - 1 - j)]);
        complete_on_kernel(&mut t, &uk, &vk);
    }
    OrthogonalFactor { t, min_singular, is_singular: min_singular < tol_sing || max_singular == 0.0 }
}

fn kernel_dim(ascending: &[f64], tol_sing: f64) -> usize {
    if ascending.last().is_some_and(|&m| m == 0.0) {
        return ascending.len();
    }
    ascending.iter().take_while(|&&s| s < tol_sing).count()
}

// Replaces the SVD's arbitrary kernel map `U_k·V_kᵀ` inside `t` by
// `U_k·W·V_kᵀ`, with `W` the orthogonal polar factor of `U_kᵀ·V_k`.
fn complete_on_kernel(t: &mut DMatrix<f64>, uk: &DMatrix<f64>, vk: &DMatrix<f64>) {
    *t -= uk * vk.transpose();
    let svd = (uk.transpose() * vk).svd(true, true);
    let a = svd.u.expect("u requested");
    let bt = svd.v_t.expect("v_t requested");
    let (smallest, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let ambiguous = svd.singular_values[smallest] < tolerance::ORTHOGONALITY;
    *t += uk * (&a * &bt) * vk.transpose();
    if ambiguous && super::log_abs_det(t).sign < 0 {
        // Reflect the least determined direction: W → W − 2·a_k·b_kᵀ.
        let flip = uk * (a.column(smallest) * bt.row(smallest)) * vk.transpose();
        *t -= flip * 2.0;
    }
}

/// Singular values of an arbitrary square matrix, ascending.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    let (s, _, _) = svd_full(m);
    DVector::from_iterator(s.len(), s.iter().rev().copied())
}

// Sequential faer SVD so results do not depend on the calling thread pool.
fn svd_full(m: &DMatrix<f64>) -> (Vec<f64>, Mat<f64>, Mat<f64>) {
    let n = m.nrows();
    let a = Mat::<f64>::from_fn(n, m.ncols(), |i, j| m[(i, j)]);
    let mut s = Diag::<f64>::zeros(n);
    let mut u = Mat::<f64>::zeros(n, n);
    let mut v = Mat::<f64>::zeros(n, n);
    let par = Par::Seq;
    let scratch = svd::svd_scratch::<f64>(
        n,
        n,
        ComputeSvdVectors::Full,
        ComputeSvdVectors::Full,
        par,
        Default::default(),
    );
    let mut buf = MemBuffer::new(scratch);
    let ok = svd::svd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Some(v.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    );
    if ok.is_err() || s.column_vector().iter().any(|x| !x.is_finite()) {
        // faer only fails to converge on non-finite input; fall back to nalgebra.
        return svd_nalgebra(m);
    }
    let sv = s.column_vector().iter().copied().collect();
    (sv, u, v)
}

fn svd_nalgebra(m: &DMatrix<f64>) -> (Vec<f64>, Mat<f64>, Mat<f64>) {
    let n = m.nrows();
    let svd = m.clone().svd(true, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let sv = order.iter().map(|&k| svd.singular_values[k]).collect();
    let um = Mat::from_fn(n, n, |i, j| u[(i, order[j])]);
    let vm = Mat::from_fn(n, n, |i, j| vt[(order[j], i)]);
    (sv, um, vm)
}
