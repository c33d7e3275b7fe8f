//! Ground-state fidelity of quadratic (free) fermionic Hamiltonians.
//!
//! A Hamiltonian
//!
//! ```text
//! H = Σ_ij c†_i A_ij c_j + ½ Σ_ij (c†_i B_ij c†_j + h.c.)
//! ```
//!
//! with real symmetric `A` and real antisymmetric `B` is parametrized by the
//! single real matrix `Z = A − B`. The left polar decomposition `Z = P·T`
//! splits it into the single-particle spectrum (the singular values held by
//! `P`) and an orthogonal factor `T` that fixes the many-body ground state.
//! Fidelities between ground states reduce to determinants and spectra of
//! orthogonal matrices:
//!
//! ```text
//! F(Z, Z̃) = 2^{-L/2} |det(T + T̃)|^{1/2} = Π_ν |cos(Θ_ν / 2)|
//! ```
//!
//! where `e^{±iΘ_ν}` is the spectrum of `Tᵀ T̃`.
//!
//! Module map:
//!
//! * [`quadform`]: coupling matrices, polar decomposition, angle spectra of
//!   orthogonal matrices, log-determinants and the orthogonal logarithm.
//! * [`groundstate`]: parity sector, pairing matrix and the canonical paired
//!   ground state.
//! * [`fidelity`]: determinant, angle-product, Perelomov and commuting
//!   fidelity formulas plus the second-order expansion.
//! * [`models`]: the two-mode examples, the multimode commuting family and the
//!   complete-graph model.
//! * [`fock`]: brute-force Fock-space oracle for `L ≤ 12`.
//! * [`sweep`]: `(μ, γ)` grid sweeps, first-order boundary tracing and record
//!   output.

pub mod error;
pub mod fidelity;
pub mod fock;
pub mod groundstate;
pub mod models;
pub mod quadform;
pub mod sweep;
pub mod tolerance;

pub use error::{Error, Result};
pub use nalgebra::DMatrix;
