//! Bloch vectors, the correlation matrix `c` and the full correlation matrix
//! `Γ_{μν} = <σ_μ ⊗ σ_ν>`, plus the Fano reconstruction of `ρ` from them.
//!
//! `c_ij = <σ_i ⊗ σ_j> - a_i b_j` carries no prefactor, so `Γ_ij = c_ij + a_i b_j`
//! and `det Γ = det c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, Complex4x4, Real3x3, Real4x4, Vec3, C64};
use crate::pauli;
use crate::states::{DensityMatrix, POSITIVITY_TOLERANCE};

/// Expectations with an imaginary part above this are reported as errors.
pub const IMAGINARY_RESIDUE: f64 = 1e-9;

/// Observable data of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBloch")]
pub struct BlochData {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Real3x3,
    pub gamma: Real4x4,
}

#[derive(Deserialize)]
struct RawBloch {
    a: Vec3,
    b: Vec3,
    c: Real3x3,
}

impl TryFrom<RawBloch> for BlochData {
    type Error = Error;

    fn try_from(raw: RawBloch) -> Result<Self> {
        let d = BlochData::from_parts(raw.a, raw.b, raw.c);
        let finite = d.a.iter().chain(d.b.iter()).all(|x| x.is_finite()) && d.c.is_finite();
        if !finite {
            return Err(Error::Parse("Bloch data contains non-finite entries".into()));
        }
        Ok(d)
    }
}

impl BlochData {
    /// Assembles `Γ` from `a`, `b` and `c`.
    pub fn from_parts(a: Vec3, b: Vec3, c: Real3x3) -> Self {
        let mut g = Real4x4::zeros();
        g.0[0][0] = 1.0;
        for i in 0..3 {
            g.0[i + 1][0] = a[i];
            g.0[0][i + 1] = b[i];
            for j in 0..3 {
                g.0[i + 1][j + 1] = c[(i, j)] + a[i] * b[j];
            }
        }
        BlochData { a, b, c, gamma: g }
    }

    /// True when the Bloch-vector lengths and all `Γ` entries are within
    /// `[-1, 1]` up to `1e-10`.
    pub fn is_physical_range(&self) -> bool {
        let tol = 1e-10;
        let na = self.a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = self.b.iter().map(|x| x * x).sum::<f64>().sqrt();
        na <= 1.0 + tol
            && nb <= 1.0 + tol
            && self.gamma.0.iter().flatten().all(|x| x.abs() <= 1.0 + tol)
    }
}

/// `Tr{ρ M}` without forming the product.
fn expectation(rho: &Complex4x4, m: &Complex4x4) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += rho[(i, j)] * m[(j, i)];
        }
    }
    acc
}

/// `Γ_{μν} = Tr{ρ σ_μ ⊗ σ_ν}`.
pub fn gamma_matrix(rho: &Complex4x4) -> Result<Real4x4> {
    let mut g = Real4x4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            let e = expectation(rho, &pauli::sigma_pair(mu, nu));
            if e.im.abs() > IMAGINARY_RESIDUE {
                return Err(Error::Numerical(format!(
                    "<σ{mu}⊗σ{nu}> has imaginary part {:e}",
                    e.im
                )));
            }
            g.0[mu][nu] = e.re;
        }
    }
    Ok(g)
}

/// Bloch vectors, correlation matrix and `Γ` of `ρ`.
pub fn decompose(rho: &DensityMatrix) -> Result<BlochData> {
    decompose_matrix(rho.matrix())
}

/// [`decompose`] for any Hermitian 4×4 matrix.
pub fn decompose_matrix(rho: &Complex4x4) -> Result<BlochData> {
    let gamma = gamma_matrix(rho)?;
    let a = [gamma.0[1][0], gamma.0[2][0], gamma.0[3][0]];
    let b = [gamma.0[0][1], gamma.0[0][2], gamma.0[0][3]];
    let mut c = Real3x3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            c[(i, j)] = gamma.0[i + 1][j + 1] - a[i] * b[j];
        }
    }
    Ok(BlochData { a, b, c, gamma })
}

/// Output of [`fano_reconstruct`]; the matrix is Hermitian with unit trace
/// but is PSD only for consistent Bloch data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FanoReconstruction {
    pub matrix: Complex4x4,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

impl FanoReconstruction {
    pub fn into_density(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix)
    }
}

/// `ρ = ¼ Σ Γ_{μν} σ_μ ⊗ σ_ν`.
pub fn fano_reconstruct(d: &BlochData) -> FanoReconstruction {
    let mut m = Complex4x4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            let g = d.gamma.0[mu][nu];
            if g != 0.0 {
                m = m + pauli::sigma_pair(mu, nu).scale_real(0.25 * g);
            }
        }
    }
    let min_eigenvalue = hermitian_eigen(&m).0[3];
    FanoReconstruction {
        matrix: m,
        min_eigenvalue,
        psd: min_eigenvalue >= -POSITIVITY_TOLERANCE,
    }
}

/// `Tr{Γᵀ Γ} / 4`, equal to `Tr{ρ²}`.
pub fn purity_from_gamma(gamma: &Real4x4) -> f64 {
    gamma.0.iter().flatten().map(|x| x * x).sum::<f64>() / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{PureState, QubitState};
    use proptest::prelude::*;

    fn assert_vec_close(a: &Vec3, b: &Vec3, tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn bell_correlations() {
        let rho = DensityMatrix::from_pure(&PureState::bell()).unwrap();
        let d = decompose(&rho).unwrap();
        assert_vec_close(&d.a, &[0.0; 3], 1e-15);
        assert_vec_close(&d.b, &[0.0; 3], 1e-15);
        assert!(d.c.max_abs_diff(&Real3x3::from_diagonal([1.0, -1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn ground_product_state() {
        let rho = DensityMatrix::product(&QubitState::zero(), &QubitState::zero());
        let d = decompose(&rho).unwrap();
        assert_vec_close(&d.a, &[0.0, 0.0, -1.0], 1e-15);
        assert_vec_close(&d.b, &[0.0, 0.0, -1.0], 1e-15);
        assert!(d.c.max_abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_empty() {
        let d = decompose(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(d.a, [0.0; 3]);
        assert_eq!(d.b, [0.0; 3]);
        assert_eq!(d.c.max_abs(), 0.0);
        assert!((purity_from_gamma(&d.gamma) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn reconstruct_empty_data() {
        let d = BlochData::from_parts([0.0; 3], [0.0; 3], Real3x3::zeros());
        let r = fano_reconstruct(&d);
        assert!(r.psd);
        assert!(r.matrix.max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-16);
    }

    #[test]
    fn werner_round_trip() {
        let rho = DensityMatrix::werner(0.7).unwrap();
        let back = fano_reconstruct(&decompose(&rho).unwrap());
        assert!(back.psd);
        assert!(back.matrix.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn inconsistent_correlations_flagged() {
        let d = BlochData::from_parts([0.0; 3], [0.0; 3], Real3x3::identity());
        let r = fano_reconstruct(&d);
        assert!(!r.psd);
        assert!(r.min_eigenvalue < -0.4);
        assert!(matches!(r.into_density(), Err(Error::Validation { .. })));
    }

    #[test]
    fn pure_state_purity() {
        let rho = DensityMatrix::from_pure(&PureState::random(11)).unwrap();
        let d = decompose(&rho).unwrap();
        assert!((purity_from_gamma(&d.gamma) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let d = decompose(&DensityMatrix::werner(0.5).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(d).unwrap();
        assert!(v.get("a").is_some() && v.get("b").is_some() && v.get("c").is_some());
        let back: BlochData = serde_json::from_value(serde_json::json!({
            "a": d.a, "b": d.b, "c": d.c
        }))
        .unwrap();
        assert_eq!(back, d);
    }

    proptest! {
        #[test]
        fn round_trip_and_identities(seed in any::<u64>()) {
            let rho = DensityMatrix::random(seed);
            let d = decompose(&rho).unwrap();
            prop_assert!(d.is_physical_range());
            let back = fano_reconstruct(&d);
            prop_assert!(back.matrix.max_abs_diff(rho.matrix()) < 1e-12);
            prop_assert!(decompose_matrix(&back.matrix).unwrap().gamma.0.iter().flatten()
                .zip(d.gamma.0.iter().flatten()).all(|(x, y)| (x - y).abs() < 1e-12));
            prop_assert!((purity_from_gamma(&d.gamma) - rho.purity()).abs() < 1e-12);
            let (dg, dc) = (d.gamma.det(), d.c.det());
            prop_assert!((dg - dc).abs() <= 1e-9 * dc.abs().max(1e-6));
        }

        #[test]
        fn products_are_uncorrelated(seed in any::<u64>()) {
            let mut rng = crate::rng::rng_from_seed(seed);
            let rho = DensityMatrix::product(
                &QubitState::random_with(&mut rng),
                &QubitState::random_with(&mut rng),
            );
            prop_assert!(decompose(&rho).unwrap().c.max_abs() < 1e-12);
        }
    }
}
