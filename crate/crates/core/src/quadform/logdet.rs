use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::lu::partial_pivoting::factor::{lu_in_place, lu_in_place_scratch};
use faer::{Mat, Par};
use nalgebra::DMatrix;

use crate::tolerance;

/// `log|det M|` with the sign of `det M` tracked separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    /// `+1`, `−1`, or `0` for a (numerically) singular matrix.
    pub sign: i8,
}

impl LogDet {
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

/// Log-determinant by LU factorization with partial pivoting.
///
/// Returns `Σ log|u_ii|` and the product of the pivot signs including the
/// permutation parity. If any pivot falls below [`tolerance::LOG_DET_FLOOR`]
/// the result is `(−∞, 0)`.
///
/// # Panics
///
/// If `m` is not square.
pub fn log_abs_det(m: &DMatrix<f64>) -> LogDet {
    log_abs_det_pivots(m).0
}

/// [`log_abs_det`] plus the ratio `min|u_ii| / max|u_ii|` of the LU pivots,
/// a cheap indicator of near-singularity.
pub(crate) fn log_abs_det_pivots(m: &DMatrix<f64>) -> (LogDet, f64) {
    assert!(m.is_square(), "log_abs_det of a {}×{} matrix", m.nrows(), m.ncols());
    let n = m.nrows();
    let mut a = Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let mut perm = vec![0usize; n];
    let mut perm_inv = vec![0usize; n];
    let mut buf = MemBuffer::new(lu_in_place_scratch::<usize, f64>(n, n, Par::Seq, Default::default()));
    let (info, _) = lu_in_place(
        a.as_mut(),
        &mut perm,
        &mut perm_inv,
        Par::Seq,
        MemStack::new(&mut buf),
        Default::default(),
    );
    let mut sign: f64 = if info.transposition_count % 2 == 0 { 1.0 } else { -1.0 };
    let mut log_abs = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for i in 0..n {
        let d = a[(i, i)];
        if !(d.abs() >= tolerance::LOG_DET_FLOOR) {
            return (LogDet { log_abs: f64::NEG_INFINITY, sign: 0 }, 0.0);
        }
        lo = lo.min(d.abs());
        hi = hi.max(d.abs());
        log_abs += d.abs().ln();
        if d < 0.0 {
            sign = -sign;
        }
    }
    let ratio = if n == 0 { 1.0 } else { lo / hi };
    (LogDet { log_abs, sign: if sign < 0.0 { -1 } else { 1 } }, ratio)
}
