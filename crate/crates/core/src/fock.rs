//! Brute-force Fock-space oracle for small systems.
//!
//! Basis index `n` encodes the occupations `(n_1, …, n_L)` with mode 1 in the
//! least significant bit. `c_i` carries the Jordan–Wigner phase
//! `(−1)^{Σ_{j<i} n_j}`. Everything here is dense and exponential in `L`,
//! capped at [`MAX_MODES`]; it exists to check the polar-factor formulas.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::groundstate::{CanonicalGroundState, PairingMatrix};
use crate::quadform::QuadraticCoupling;
use crate::tolerance;

pub const MAX_MODES: usize = 12;

fn check_size(modes: usize) -> Result<()> {
    if modes > MAX_MODES {
        return Err(Error::TooLarge { modes, max: MAX_MODES });
    }
    Ok(())
}

/// `c_i |n⟩ = sign · |n'⟩`, or `None` when mode `i` is empty.
pub fn annihilate(mode: usize, n: usize) -> Option<(usize, f64)> {
    let bit = 1usize << mode;
    (n & bit != 0).then(|| (n ^ bit, jw_sign(mode, n)))
}

/// `c†_i |n⟩ = sign · |n'⟩`, or `None` when mode `i` is occupied.
pub fn create(mode: usize, n: usize) -> Option<(usize, f64)> {
    let bit = 1usize << mode;
    (n & bit == 0).then(|| (n | bit, jw_sign(mode, n)))
}

fn jw_sign(mode: usize, n: usize) -> f64 {
    if (n & ((1usize << mode) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Dense matrix of `c_i` on `modes` modes.
pub fn annihilation_matrix(mode: usize, modes: usize) -> DMatrix<f64> {
    let dim = 1usize << modes;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        if let Some((k, s)) = annihilate(mode, n) {
            m[(k, n)] = s;
        }
    }
    m
}

/// Dense matrix of `c†_i` on `modes` modes.
pub fn creation_matrix(mode: usize, modes: usize) -> DMatrix<f64> {
    annihilation_matrix(mode, modes).transpose()
}

/// Real state vector on the `2^L`-dimensional Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub modes: usize,
    pub amplitudes: Vec<f64>,
}

impl FockVector {
    pub fn vacuum(modes: usize) -> Self {
        let mut amplitudes = vec![0.0; 1 << modes];
        amplitudes[0] = 1.0;
        FockVector { modes, amplitudes }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    /// `Σ_i coeffs_i c†_i |self⟩`.
    pub fn create_combination(&self, coeffs: &[f64]) -> FockVector {
        let mut out = vec![0.0; self.amplitudes.len()];
        for (n, &amp) in self.amplitudes.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                if let Some((k, s)) = create(i, n) {
                    out[k] += s * c * amp;
                }
            }
        }
        FockVector { modes: self.modes, amplitudes: out }
    }

    /// `½ Σ_ij G_ij c†_i c†_j |self⟩ = Σ_{i<j} G_ij c†_i c†_j |self⟩`.
    pub fn create_pairs(&self, g: &DMatrix<f64>) -> FockVector {
        let l = self.modes;
        let mut out = vec![0.0; self.amplitudes.len()];
        for (n, &amp) in self.amplitudes.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            for i in 0..l {
                for j in (i + 1)..l {
                    let gij = g[(i, j)];
                    if gij == 0.0 {
                        continue;
                    }
                    if let Some((m, s1)) = create(j, n) {
                        if let Some((k, s2)) = create(i, m) {
                            out[k] += gij * s1 * s2 * amp;
                        }
                    }
                }
            }
        }
        FockVector { modes: l, amplitudes: out }
    }

    /// Weight `Σ |a_n|²` on basis states of the given parity (`+1` even).
    pub fn parity_weight(&self, parity: i8) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(n, _)| basis_parity(*n) == parity)
            .map(|(_, a)| a * a)
            .sum()
    }
}

/// `(−1)^{Σ n_j}` of a basis state.
pub fn basis_parity(n: usize) -> i8 {
    if n.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `H = Σ_ij A_ij c†_i c_j + ½ Σ_ij (B_ij c†_i c†_j + B_ij c_j c_i)` as a
/// dense `2^L × 2^L` matrix.
pub fn build_fock_hamiltonian(zc: &QuadraticCoupling) -> Result<DMatrix<f64>> {
    let l = zc.size();
    check_size(l)?;
    let (a, b) = (zc.hopping(), zc.pairing());
    let dim = 1usize << l;
    let mut h = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        for i in 0..l {
            for j in 0..l {
                let aij = a[(i, j)];
                if aij != 0.0 {
                    if let Some((m, s1)) = annihilate(j, n) {
                        if let Some((k, s2)) = create(i, m) {
                            h[(k, n)] += aij * s1 * s2;
                        }
                    }
                }
                let bij = b[(i, j)];
                if bij != 0.0 {
                    if let Some((m, s1)) = create(j, n) {
                        if let Some((k, s2)) = create(i, m) {
                            h[(k, n)] += 0.5 * bij * s1 * s2;
                        }
                    }
                    if let Some((m, s1)) = annihilate(i, n) {
                        if let Some((k, s2)) = annihilate(j, m) {
                            h[(k, n)] += 0.5 * bij * s1 * s2;
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Lowest eigenpair of a Fock-space Hamiltonian.
#[derive(Debug, Clone)]
pub struct ExactGroundState {
    pub energy: f64,
    pub vector: FockVector,
    /// Eigenvalue of `(−1)^{Σ n_j}` on `vector`.
    pub parity_sector: i8,
    /// `E_1 − E_0` over the whole spectrum.
    pub gap: f64,
    pub degenerate: bool,
}

/// Dense symmetric eigensolve for the ground state.
///
/// A parity-conserving `H` is diagonalized sector by sector so the returned
/// vector is an exact parity eigenstate. On a degeneracy between sectors the
/// even one is returned and `degenerate` is set.
///
/// # Panics
///
/// If `h` is not square with a power-of-two dimension.
pub fn fock_ground_state(h: &DMatrix<f64>) -> ExactGroundState {
    let dim = h.nrows();
    assert!(h.is_square() && dim.is_power_of_two(), "not a Fock-space operator");
    let modes = dim.trailing_zeros() as usize;

    let conserves_parity = (0..dim).all(|c| {
        (0..dim).all(|r| basis_parity(r) == basis_parity(c) || h[(r, c)] == 0.0)
    });

    let (energy, amplitudes, mut spectrum) = if conserves_parity && dim > 1 {
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut spectrum = Vec::with_capacity(dim);
        for sector in [1i8, -1] {
            let idx: Vec<usize> = (0..dim).filter(|&n| basis_parity(n) == sector).collect();
            let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
            let (e0, v0, ev) = lowest(block);
            spectrum.extend(ev);
            if best.as_ref().is_none_or(|(e, _)| e0 < *e) {
                let mut full = vec![0.0; dim];
                for (k, &n) in idx.iter().enumerate() {
                    full[n] = v0[k];
                }
                best = Some((e0, full));
            }
        }
        let (e, v) = best.expect("two sectors");
        (e, v, spectrum)
    } else {
        let (e0, v0, ev) = lowest(h.clone());
        (e0, v0, ev)
    };

    spectrum.sort_by(f64::total_cmp);
    let gap = if spectrum.len() > 1 { spectrum[1] - spectrum[0] } else { f64::INFINITY };
    let vector = FockVector { modes, amplitudes }.normalized();
    let parity_sector = if vector.parity_weight(1) >= vector.parity_weight(-1) { 1 } else { -1 };
    ExactGroundState {
        energy,
        vector,
        parity_sector,
        gap,
        degenerate: gap < tolerance::DEGENERATE_GAP,
    }
}

fn lowest(m: DMatrix<f64>) -> (f64, Vec<f64>, Vec<f64>) {
    let eig = SymmetricEigen::new(m);
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k).iter().copied().collect();
    (eig.eigenvalues[k], v, eig.eigenvalues.iter().copied().collect())
}

/// Normalized `exp(½ Σ c†_i G_ij c†_j)|0⟩`. The pair-creation operator is
/// nilpotent, so the series stops after `L/2` terms.
pub fn gaussian_state_from_g(g: &PairingMatrix) -> Result<FockVector> {
    gaussian_state(&g.g)
}

pub fn gaussian_state(g: &DMatrix<f64>) -> Result<FockVector> {
    let l = g.nrows();
    check_size(l)?;
    let mut term = FockVector::vacuum(l);
    let mut sum = term.amplitudes.clone();
    for k in 1..=(l / 2) {
        term = term.create_pairs(g);
        term.amplitudes.iter_mut().for_each(|a| *a /= k as f64);
        sum.iter_mut().zip(&term.amplitudes).for_each(|(s, t)| *s += t);
    }
    Ok(FockVector { modes: l, amplitudes: sum }.normalized())
}

/// Builds the paired product state in the rotated modes
/// `d†_k = Σ_i U_ik c†_i` directly in the original Fock basis.
pub fn state_from_angles(gs: &CanonicalGroundState) -> Result<FockVector> {
    let l = gs.size();
    check_size(l)?;
    let frame = &gs.mode_frame;
    let column = |k: usize| -> Vec<f64> { frame.column(k).iter().copied().collect() };

    let mut state = FockVector::vacuum(l);
    if gs.occupied_direction().is_some() {
        state = state.create_combination(&column(l - 1));
    }
    for (nu, &theta) in gs.angles.iter().enumerate() {
        let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
        let pair = state.create_combination(&column(2 * nu)).create_combination(&column(2 * nu + 1));
        state
            .amplitudes
            .iter_mut()
            .zip(&pair.amplitudes)
            .for_each(|(a, p)| *a = c * *a + s * p);
    }
    Ok(state.normalized())
}

/// `|⟨v, w⟩|`.
pub fn fock_overlap(v: &FockVector, w: &FockVector) -> Result<f64> {
    if v.modes != w.modes {
        return Err(Error::ShapeMismatch {
            expected: format!("{} modes", v.modes),
            found: format!("{} modes", w.modes),
        });
    }
    Ok(v.amplitudes.iter().zip(&w.amplitudes).map(|(a, b)| a * b).sum::<f64>().abs())
}
