//! Sinisterness `S = det c = -16 det G`, its chiral SVD structure and the
//! closed forms for pure, Werner and X states.

use serde::{Deserialize, Serialize};

use crate::bloch::{decompose, decompose_matrix};
use crate::error::{Error, Result};
use crate::numerics::{det3_levi_civita, svd3, Complex4x4, Real3x3, Vec3, NULL_SINGULAR_VALUE};
use crate::states::{DensityMatrix, PureState, XStateParams};

/// Relative tolerance of the dual-path contract, `|Δ| ≤ tol·(1 + |S|)`.
pub const PATH_TOLERANCE: f64 = 1e-9;

/// The rearranged density matrix `G_{(2i+k),(2j+l)} = ρ_{ij,kl}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GMatrix(pub Complex4x4);

impl GMatrix {
    pub fn matrix(&self) -> &Complex4x4 {
        &self.0
    }

    /// `-16 det G`.
    pub fn sinisterness(&self) -> f64 {
        -16.0 * self.0.det().re
    }
}

/// Builds `G` from the entries of `ρ`.
pub fn g_matrix(rho: &DensityMatrix) -> GMatrix {
    GMatrix(g_of(rho.matrix()))
}

/// The same rearrangement for an arbitrary 4×4 matrix; linear in `m`.
pub fn g_of(m: &Complex4x4) -> Complex4x4 {
    let mut g = Complex4x4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    g[(2 * i + k, 2 * j + l)] = m[(2 * i + j, 2 * k + l)];
                }
            }
        }
    }
    g
}

/// `S = -16 det G(ρ)`.
pub fn sinisterness(rho: &DensityMatrix) -> f64 {
    sinisterness_of(rho.matrix())
}

pub(crate) fn sinisterness_of(m: &Complex4x4) -> f64 {
    -16.0 * g_of(m).det().re
}

/// `S = det c` from observable correlations.
pub fn sinisterness_from_correlations(c: &Real3x3) -> f64 {
    det3_levi_civita(c)
}

/// Both paths, failing with [`Error::PathDisagreement`] if they differ by
/// more than `PATH_TOLERANCE·(1 + |S|)`.
pub fn sinisterness_checked(rho: &DensityMatrix) -> Result<f64> {
    let det_g = sinisterness(rho);
    let det_c = sinisterness_from_correlations(&decompose(rho)?.c);
    check_paths(det_c, det_g)
}

pub(crate) fn check_paths(det_c: f64, det_g: f64) -> Result<f64> {
    if (det_c - det_g).abs() > PATH_TOLERANCE * (1.0 + det_g.abs()) || !det_g.is_finite() {
        return Err(Error::PathDisagreement { det_c, det_g });
    }
    Ok(det_g)
}

/// Correlation-path sinisterness for an arbitrary Hermitian matrix.
pub(crate) fn sinisterness_correlation_path(m: &Complex4x4) -> Result<f64> {
    Ok(sinisterness_from_correlations(&decompose_matrix(m)?.c))
}

/// Relative handedness of the two SVD frames of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    /// Opposite handedness, `det U · det V = -1`.
    Sinister,
    Dexter,
    /// Some singular value is below the null threshold.
    Undefined,
}

impl Chirality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Chirality::Sinister => "sinister",
            Chirality::Dexter => "dexter",
            Chirality::Undefined => "undefined",
        }
    }
}

/// `c = U diag(s) Vᵀ` with the handedness of each frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiralSVD {
    pub u: Real3x3,
    pub v: Real3x3,
    pub s: Vec3,
    #[serde(rename = "detU")]
    pub det_u: f64,
    #[serde(rename = "detV")]
    pub det_v: f64,
}

impl ChiralSVD {
    /// Factors `c` without checking rank.
    pub fn factor(c: &Real3x3) -> Self {
        let f = svd3(c);
        ChiralSVD {
            u: f.u,
            v: f.v,
            s: f.s,
            det_u: f.u.det().signum(),
            det_v: f.v.det().signum(),
        }
    }

    pub fn chirality(&self) -> Chirality {
        if self.s[2] < NULL_SINGULAR_VALUE {
            Chirality::Undefined
        } else if self.det_u * self.det_v < 0.0 {
            Chirality::Sinister
        } else {
            Chirality::Dexter
        }
    }

    /// `det U · det V · s1 s2 s3`.
    pub fn signed_volume(&self) -> f64 {
        self.det_u * self.det_v * self.s[0] * self.s[1] * self.s[2]
    }
}

/// Chiral SVD of `c`; fails when the smallest singular value is below
/// `1e-12`, where the frame signs carry no meaning.
pub fn chiral_svd(c: &Real3x3) -> Result<ChiralSVD> {
    let f = ChiralSVD::factor(c);
    if f.s[2] < NULL_SINGULAR_VALUE {
        return Err(Error::ChiralityUndefined { smallest: f.s[2] });
    }
    Ok(f)
}

/// Families with a closed-form sinisterness and concurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    Pure(PureState),
    Werner(f64),
    X(XStateParams),
}

impl ClosedForm {
    fn validate(&self) -> Result<()> {
        match self {
            ClosedForm::Pure(psi) => PureState::new(psi.0).map(|_| ()),
            ClosedForm::Werner(eps) => DensityMatrix::werner(*eps).map(|_| ()),
            ClosedForm::X(p) => p.validate(),
        }
    }

    /// Closed-form `S`: `-(2|αδ - βγ|)^4`, `-ε³`, or `-16(v² - u²)(qt - rs)`.
    pub fn sinisterness(&self) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            ClosedForm::Pure(psi) => -psi.concurrence().powi(4),
            ClosedForm::Werner(eps) => -eps.powi(3),
            ClosedForm::X(p) => -16.0 * (p.v * p.v - p.u * p.u) * (p.q * p.t - p.r * p.s),
        })
    }

    /// Closed-form concurrence.
    pub fn concurrence(&self) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            ClosedForm::Pure(psi) => psi.concurrence(),
            ClosedForm::Werner(eps) => ((3.0 * eps - 1.0) / 2.0).max(0.0),
            ClosedForm::X(p) => 2.0 * (p.u - (p.q * p.t).sqrt()).max(p.v - (p.r * p.s).sqrt()).max(0.0),
        })
    }

    pub fn construct(&self) -> Result<DensityMatrix> {
        match self {
            ClosedForm::Pure(psi) => DensityMatrix::from_pure(psi),
            ClosedForm::Werner(eps) => DensityMatrix::werner(*eps),
            ClosedForm::X(p) => DensityMatrix::x_state(p),
        }
    }
}
