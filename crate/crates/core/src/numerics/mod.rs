//! Small dense linear-algebra kernels: 3×3 determinants and SVD, 4×4 complex
//! determinants and eigenvalues.

mod det;
mod eigen;
mod matrix;
mod poly;
mod svd;

pub use det::{det3_levi_civita, levi_civita};
pub use eigen::{
    characteristic_coefficients, eig4, eigenvector_for, hermitian_eigen, hermitian_function,
    Eigenvalues4, IMAG_PROJECTION,
};
pub use matrix::{
    bilinear4, cross3, dot3, inner4, norm3, norm4, scale3, sub3, CVec4, Complex4x4, Real3x3,
    Real4x4, Vec3, C64,
};
pub(crate) use matrix::{ONE, ZERO};
pub use poly::{solve_cubic, solve_quadratic, solve_quartic};
pub use svd::{svd3, symmetric_eigen3, Svd3, NULL_SINGULAR_VALUE};
