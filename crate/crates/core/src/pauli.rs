//! Pauli operators in the sign convention used throughout the crate.
//!
//! The two levels of each qubit are `|0>, |1>` in the computational basis and
//!
//! ```text
//! σ1 = |0><1| + |1><0|
//! σ2 = i|0><1| - i|1><0|
//! σ3 = |1><1| - |0><0|
//! ```
//!
//! so `σ2 = -Y` and `σ3 = -Z` relative to the textbook matrices. The set is
//! still a right-handed Pauli algebra (`σ1 σ2 = i σ3`) and `σ2 ⊗ σ2 = Y ⊗ Y`,
//! so determinants and the spin flip are unaffected. With this convention
//! `|0>` has Bloch vector `(0, 0, -1)`.

use crate::numerics::{Complex4x4, C64, ONE, ZERO};

pub type Mat2 = [[C64; 2]; 2];

const I: C64 = C64::new(0.0, 1.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const SIGMA_1: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA_2: Mat2 = [[ZERO, I], [C64::new(0.0, -1.0), ZERO]];
pub const SIGMA_3: Mat2 = [[C64::new(-1.0, 0.0), ZERO], [ZERO, ONE]];

/// `σ_0 = I, σ_1, σ_2, σ_3`.
pub const SIGMA: [Mat2; 4] = [IDENTITY, SIGMA_1, SIGMA_2, SIGMA_3];

/// `σ_μ ⊗ σ_ν`.
pub fn sigma_pair(mu: usize, nu: usize) -> Complex4x4 {
    Complex4x4::kron(&SIGMA[mu], &SIGMA[nu])
}

/// Projector onto outcome `sign` (±1) of a measurement of `σ_axis`,
/// `(I + sign σ_axis) / 2`, with `axis` in `1..=3`.
pub fn projector(axis: usize, sign: f64) -> Mat2 {
    let s = SIGMA[axis];
    let mut p = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            p[i][j] = (IDENTITY[i][j] + s[i][j] * sign) * 0.5;
        }
    }
    p
}

/// `σ2 ⊗ σ2`, the two-qubit spin-flip operator.
pub fn spin_flip_operator() -> Complex4x4 {
    sigma_pair(2, 2)
}

/// The SWAP gate.
pub fn swap() -> Complex4x4 {
    Complex4x4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Projector onto `(|00> + |11>)/√2`.
pub fn bell_projector() -> Complex4x4 {
    Complex4x4::from_real([
        [0.5, 0.0, 0.0, 0.5],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.5],
    ])
}
