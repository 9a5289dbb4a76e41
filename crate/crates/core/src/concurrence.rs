//! Wootters concurrence from the eigenvalues of the non-Hermitian product
//! `R = ρ̃ ρ`, its bi-orthogonal eigen-system, and a Hermitian-root oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    bilinear4, eig4, eigenvector_for, hermitian_eigen, hermitian_function, inner4, CVec4,
    Complex4x4, C64,
};
use crate::pauli;
use crate::states::DensityMatrix;

/// Negative eigenvalues of `R` down to `-CLAMP_TOLERANCE` are treated as zero.
pub const CLAMP_TOLERANCE: f64 = 1e-10;
/// Minimum gap between eigenvalues of `R` for the bi-orthogonal system.
pub const DEGENERACY_GAP: f64 = 1e-8;
/// Minimum eigenvalue of `R` for the bi-orthogonal system.
pub const MIN_EIGENVALUE: f64 = 1e-10;
/// Eigenvalues of ρ below this fraction of the largest count as null.
pub const RANK_TOLERANCE: f64 = 1e-13;

/// `ρ̃ = (σ2 ⊗ σ2) ρ* (σ2 ⊗ σ2)`.
pub fn spin_flip(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_trusted(spin_flip_of(rho.matrix()))
}

pub(crate) fn spin_flip_of(m: &Complex4x4) -> Complex4x4 {
    let y = pauli::spin_flip_operator();
    y * m.conj() * y
}

/// `R = ρ̃ ρ`.
pub fn r_matrix(rho: &DensityMatrix) -> Complex4x4 {
    r_of(rho.matrix())
}

pub(crate) fn r_of(m: &Complex4x4) -> Complex4x4 {
    spin_flip_of(m) * *m
}

/// Eigenvalues of `R`, descending, after projecting to real and clamping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct REigenvalues {
    pub r: [f64; 4],
    /// Some eigenvalue was negative and set to zero.
    pub clamped: bool,
    /// Largest imaginary part discarded.
    pub max_imag: f64,
}

impl REigenvalues {
    /// `√r1 - √r2 - √r3 - √r4`, unclamped at zero.
    pub fn margin(&self) -> f64 {
        let s = self.r.map(f64::sqrt);
        s[0] - s[1] - s[2] - s[3]
    }
}

pub fn r_eigenvalues(rho: &DensityMatrix) -> REigenvalues {
    r_eigenvalues_of(rho.matrix())
}

pub(crate) fn r_eigenvalues_of(m: &Complex4x4) -> REigenvalues {
    let e = eig4(&r_of(m));
    let max_imag = e.max_imag();
    let mut clamped = false;
    let mut r = e.real_parts();
    for x in r.iter_mut() {
        if *x < 0.0 {
            clamped |= *x < -CLAMP_TOLERANCE;
            *x = 0.0;
        }
    }
    r.sort_by(|a, b| b.total_cmp(a));
    // rank R ≤ rank ρ. On a rank-deficient ρ the surviving √r are the
    // singular values of τ_ij = √(λ_i λ_j) v_iᵀ Y v_j over the support,
    // which carry absolute rather than square-root rounding error.
    let (lambda, vecs) = hermitian_eigen(m);
    let tol = RANK_TOLERANCE * lambda[0].abs();
    let rank = lambda.iter().filter(|x| x.abs() > tol).count();
    if rank < 4 {
        r = support_r(&lambda, &vecs, rank);
    }
    REigenvalues { r, clamped, max_imag }
}

fn support_r(lambda: &[f64; 4], vecs: &Complex4x4, rank: usize) -> [f64; 4] {
    let y = pauli::spin_flip_operator();
    let col = |k: usize| -> CVec4 { std::array::from_fn(|i| vecs[(i, k)]) };
    let mut tau = Complex4x4::zeros();
    for i in 0..rank {
        let vi = col(i);
        for j in 0..rank {
            let yv = y.mul_vec(&col(j));
            tau[(i, j)] = bilinear4(&vi, &yv) * (lambda[i] * lambda[j]).sqrt();
        }
    }
    let (mut r, _) = hermitian_eigen(&(tau.adjoint() * tau));
    for x in r.iter_mut() {
        *x = x.max(0.0);
    }
    // the smallest singular value from |det τ| = Π σ
    let others: f64 = r[..rank - 1].iter().map(|x| x.sqrt()).product();
    if rank > 1 && others > 0.0 {
        let s = det_leading(&tau, rank).norm() / others;
        r[rank - 1] = s * s;
    }
    for x in r[rank..].iter_mut() {
        *x = 0.0;
    }
    r
}

fn det_leading(t: &Complex4x4, k: usize) -> C64 {
    match k {
        1 => t[(0, 0)],
        2 => t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)],
        _ => {
            t[(0, 0)] * (t[(1, 1)] * t[(2, 2)] - t[(1, 2)] * t[(2, 1)])
                - t[(0, 1)] * (t[(1, 0)] * t[(2, 2)] - t[(1, 2)] * t[(2, 0)])
                + t[(0, 2)] * (t[(1, 0)] * t[(2, 1)] - t[(1, 1)] * t[(2, 0)])
        }
    }
}

/// `max{√r1 - √r2 - √r3 - √r4, 0}`.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    concurrence_margin(rho).max(0.0)
}

/// `√r1 - √r2 - √r3 - √r4` without the clamp at zero; smooth across the
/// separable boundary.
pub fn concurrence_margin(rho: &DensityMatrix) -> f64 {
    r_eigenvalues(rho).margin()
}

pub(crate) fn concurrence_margin_of(m: &Complex4x4) -> f64 {
    r_eigenvalues_of(m).margin()
}

/// `max{λ1 - λ2 - λ3 - λ4, 0}` with `λ_n` the eigenvalues of
/// `√(√ρ ρ̃ √ρ)`, using only Hermitian eigen-decompositions.
pub fn concurrence_hermitian_oracle(rho: &DensityMatrix) -> f64 {
    let root = hermitian_function(rho.matrix(), |x| x.max(0.0).sqrt());
    let inner = root * *spin_flip(rho).matrix() * root;
    let (values, _) = hermitian_eigen(&inner);
    let l = values.map(|x| x.max(0.0).sqrt());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Eigenvalues of `R` with right eigenvectors `v_n` normalized by
/// `v_nᵀ (σ2⊗σ2) v_n = 1` and left eigenvectors `ṽ_n = (σ2⊗σ2) v_n*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceSpectrum {
    pub r: [f64; 4],
    pub right: [CVec4; 4],
    pub left: [CVec4; 4],
}

impl ConcurrenceSpectrum {
    /// `max |<ṽ_m|v_n> - δ_mn|`.
    pub fn biorthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                let target = if m == n { 1.0 } else { 0.0 };
                let d = inner4(&self.left[m], &self.right[n]) - C64::new(target, 0.0);
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `max |Σ_n |v_n><ṽ_n| - I|`.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = Complex4x4::zeros();
        for n in 0..4 {
            sum = sum + Complex4x4::outer(&self.right[n], &self.left[n]);
        }
        sum.max_abs_diff(&Complex4x4::identity())
    }

    /// `max |<v_m|ρ|v_n> - √r_n δ_mn|`.
    pub fn diagonal_defect(&self, rho: &DensityMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..4 {
            for n in 0..4 {
                let target = if m == n { self.r[n].sqrt() } else { 0.0 };
                let d = rho.matrix().sandwich(&self.right[m], &self.right[n]) - C64::new(target, 0.0);
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `max |<ṽ_n|R|v_n> - r_n|`.
    pub fn rayleigh_defect(&self, rho: &DensityMatrix) -> f64 {
        let r = r_matrix(rho);
        (0..4)
            .map(|n| (r.sandwich(&self.left[n], &self.right[n]) - C64::new(self.r[n], 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// `W = |v_1><v_1| - Σ_{n>1} |v_n><v_n|`, the gradient of the concurrence:
    /// `δC = Tr{W δρ}`.
    pub fn gradient_operator(&self) -> Complex4x4 {
        let mut w = Complex4x4::zeros();
        for n in 0..4 {
            let sign = if n == 0 { 1.0 } else { -1.0 };
            w = w + Complex4x4::outer(&self.right[n], &self.right[n]).scale_real(sign);
        }
        w
    }
}

/// Bi-orthogonal eigen-system of `R`; requires distinct, strictly positive
/// eigenvalues.
pub fn biorthogonal_system(rho: &DensityMatrix) -> Result<ConcurrenceSpectrum> {
    let eig = r_eigenvalues(rho);
    let r = eig.r;
    if r[3] < MIN_EIGENVALUE {
        return Err(Error::Degeneracy(format!("smallest eigenvalue of R is {:e}", r[3])));
    }
    let gap = (0..3).map(|n| r[n] - r[n + 1]).fold(f64::INFINITY, f64::min);
    if gap < DEGENERACY_GAP {
        return Err(Error::Degeneracy(format!("eigenvalues of R are {gap:e} apart")));
    }
    let rm = r_matrix(rho);
    let y = pauli::spin_flip_operator();
    let mut right = [[C64::new(0.0, 0.0); 4]; 4];
    let mut left = right;
    for n in 0..4 {
        let v = eigenvector_for(&rm, C64::new(r[n], 0.0));
        let beta = bilinear4(&v, &y.mul_vec(&v));
        if beta.norm() < 1e-12 {
            return Err(Error::Degeneracy(format!("eigenvector {n} is self-orthogonal")));
        }
        let scale = beta.sqrt();
        right[n] = v.map(|x| x / scale);
        left[n] = y.mul_vec(&right[n].map(|x| x.conj()));
    }
    Ok(ConcurrenceSpectrum { r, right, left })
}
