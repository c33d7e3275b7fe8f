use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};

use crate::error::{shape, Error, Result};
use crate::tolerance;

/// `max |Q·Qᵀ − I|`.
pub fn orthogonality_defect(q: &DMatrix<f64>) -> f64 {
    let n = q.nrows();
    let qqt = q * q.transpose();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((qqt[(i, j)] - target).abs());
        }
    }
    dev
}

pub(crate) fn check_orthogonal(q: &DMatrix<f64>) -> Result<()> {
    if !q.is_square() {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            found: shape(q.nrows(), q.ncols()),
        });
    }
    let dev = orthogonality_defect(q);
    if !(dev <= tolerance::ORTHOGONALITY) {
        return Err(Error::NotOrthogonal { deviation: dev });
    }
    Ok(())
}

/// Real Schur form `Q = V·R·Vᵀ`.
///
/// Francis QR without exceptional shifts can stall on structured orthogonal
/// matrices (cyclic permutations are the classic case). On failure the
/// decomposition is retried on `P·Q·Pᵀ` for a fixed pseudo-random orthogonal
/// `P`, and `V` is mapped back as `Pᵀ·V`.
fn real_schur(q: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = q.nrows();
    let max_iter = 60 * n.max(1);
    if let Some(schur) = Schur::try_new(q.clone(), f64::EPSILON, max_iter) {
        return Ok(schur.unpack());
    }
    for seed in 1..=4u64 {
        let p = scrambler(n, seed);
        let conj = &p * q * p.transpose();
        if let Some(schur) = Schur::try_new(conj, f64::EPSILON, max_iter) {
            let (v, t) = schur.unpack();
            return Ok((p.transpose() * v, t));
        }
    }
    Err(Error::SchurFailed)
}

// Deterministic orthogonal matrix: Q factor of a hashed dense matrix.
fn scrambler(n: usize, seed: u64) -> DMatrix<f64> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let m = DMatrix::from_fn(n, n, |_, _| {
        // splitmix64
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    });
    m.qr().q()
}

/// Real block-diagonal form `Q = W·D·Wᵀ` of an orthogonal matrix.
///
/// Columns of the orthogonal frame `W` are laid out as
/// `[rotation pairs | +1 eigenvectors | −1 eigenvectors]`. For rotation pair
/// `k` (columns `2k`, `2k+1`) the block of `D` is
/// `[[cos θ_k, −sin θ_k], [sin θ_k, cos θ_k]]` with `θ_k ∈ (0, π)`.
/// Eigenvalues within [`tolerance::UNIT_EIGENVALUE`] of `±1` are counted as
/// real even when the Schur solver kept them in a 2×2 block.
#[derive(Debug, Clone)]
pub struct OrthogonalCanonicalForm {
    pub frame: DMatrix<f64>,
    pub rotations: Vec<f64>,
    pub plus_one: usize,
    pub minus_one: usize,
}

impl OrthogonalCanonicalForm {
    pub fn new(q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q)?;
        let n = q.nrows();
        let (vecs, t) = real_schur(q)?;

        let tol = tolerance::UNIT_EIGENVALUE;
        let mut rotations: Vec<(f64, usize, usize)> = Vec::new();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && t[(i + 1, i)] != 0.0 {
                let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
                let phi = (0.5 * (c - b)).atan2(0.5 * (a + d));
                if 2.0 * (0.5 * phi).sin().abs() < tol {
                    plus.extend([i, i + 1]);
                } else if 2.0 * (0.5 * phi).cos().abs() < tol {
                    minus.extend([i, i + 1]);
                } else if phi > 0.0 {
                    rotations.push((phi, i, i + 1));
                } else {
                    // Swapping the two basis vectors turns R(φ) into R(−φ).
                    rotations.push((-phi, i + 1, i));
                }
                i += 2;
            } else {
                let v = t[(i, i)];
                if (v - 1.0).abs() < tol {
                    plus.push(i);
                } else if (v + 1.0).abs() < tol {
                    minus.push(i);
                } else {
                    return Err(Error::UnpairedRealEigenvalue { value: v });
                }
                i += 1;
            }
        }

        let mut order = Vec::with_capacity(n);
        for &(_, a, b) in &rotations {
            order.extend([a, b]);
        }
        order.extend(plus.iter().copied());
        order.extend(minus.iter().copied());
        let frame = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);

        Ok(OrthogonalCanonicalForm {
            frame,
            rotations: rotations.into_iter().map(|(th, _, _)| th).collect(),
            plus_one: plus.len(),
            minus_one: minus.len(),
        })
    }

    pub fn size(&self) -> usize {
        self.frame.nrows()
    }

    pub fn det_sign(&self) -> i8 {
        if self.minus_one.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Column index of the first `+1` eigenvector in `frame`.
    pub fn plus_one_offset(&self) -> usize {
        2 * self.rotations.len()
    }

    /// Column index of the first `−1` eigenvector in `frame`.
    pub fn minus_one_offset(&self) -> usize {
        2 * self.rotations.len() + self.plus_one
    }

    /// The block-diagonal factor `D`.
    pub fn block_diagonal(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut d = DMatrix::zeros(n, n);
        for (k, &th) in self.rotations.iter().enumerate() {
            let (s, c) = th.sin_cos();
            let a = 2 * k;
            d[(a, a)] = c;
            d[(a, a + 1)] = -s;
            d[(a + 1, a)] = s;
            d[(a + 1, a + 1)] = c;
        }
        for j in self.plus_one_offset()..self.minus_one_offset() {
            d[(j, j)] = 1.0;
        }
        for j in self.minus_one_offset()..n {
            d[(j, j)] = -1.0;
        }
        d
    }

    /// `W·D·Wᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.frame * self.block_diagonal() * self.frame.transpose()
    }

    pub fn angle_spectrum(&self) -> AngleSpectrum {
        let mut rotations = self.rotations.clone();
        rotations.sort_by(f64::total_cmp);
        let mut angles = rotations.clone();
        angles.extend(std::iter::repeat_n(0.0, self.plus_one / 2));
        angles.extend(std::iter::repeat_n(PI, self.minus_one / 2));
        // Odd counts of both +1 and −1 leave one mixed slot, reported as π.
        if self.plus_one % 2 == 1 {
            angles.push(PI);
        }
        angles.sort_by(f64::total_cmp);
        AngleSpectrum {
            angles,
            rotations,
            count_plus_one: self.plus_one,
            count_minus_one: self.minus_one,
            det_sign: self.det_sign(),
        }
    }
}

/// Rotation angles and real-eigenvalue counts of an orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpectrum {
    /// `L/2` angles in `[0, π]`, ascending: the rotation angles, `0` for each
    /// pair of `+1` eigenvalues, `π` for each pair of `−1` eigenvalues and one
    /// `π` for the `(+1, −1)` slot left when both counts are odd.
    pub angles: Vec<f64>,
    /// Angles of the genuine complex pairs `e^{±iθ}`, ascending, in `(0, π)`.
    pub rotations: Vec<f64>,
    pub count_plus_one: usize,
    /// Multiplicity `p` of the eigenvalue `−1`.
    pub count_minus_one: usize,
    pub det_sign: i8,
}

impl AngleSpectrum {
    /// Characteristic polynomial `det(x·I − Q)` rebuilt from the spectrum.
    pub fn char_poly(&self, x: f64) -> f64 {
        let pairs: f64 = self.rotations.iter().map(|th| x * x - 2.0 * x * th.cos() + 1.0).product();
        pairs * (x - 1.0).powi(self.count_plus_one as i32) * (x + 1.0).powi(self.count_minus_one as i32)
    }
}

/// Rotation angles of an orthogonal matrix from its real Schur form.
pub fn orthogonal_angles(q: &DMatrix<f64>) -> Result<AngleSpectrum> {
    Ok(OrthogonalCanonicalForm::new(q)?.angle_spectrum())
}

/// Skew-symmetric `K` with `exp(K) = T`, block angles in `(−π, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewGenerator {
    pub k: DMatrix<f64>,
}

/// Principal real logarithm of a special-orthogonal matrix.
///
/// Fails with [`Error::NegativeDeterminant`] when `det T = −1` and with
/// [`Error::AngleAtBranchCut`] when `−1` is (numerically) in the spectrum.
pub fn orthogonal_log(t: &DMatrix<f64>) -> Result<SkewGenerator> {
    let form = OrthogonalCanonicalForm::new(t)?;
    if form.det_sign() < 0 {
        return Err(Error::NegativeDeterminant);
    }
    if form.minus_one > 0 {
        return Err(Error::AngleAtBranchCut { angle: PI });
    }
    let n = form.size();
    let mut kd = DMatrix::zeros(n, n);
    for (k, &th) in form.rotations.iter().enumerate() {
        kd[(2 * k, 2 * k + 1)] = -th;
        kd[(2 * k + 1, 2 * k)] = th;
    }
    let k = &form.frame * kd * form.frame.transpose();
    let k = DMatrix::from_fn(n, n, |i, j| 0.5 * (k[(i, j)] - k[(j, i)]));
    Ok(SkewGenerator { k })
}
