//! Construction, validation and seeded sampling of two-qubit density matrices.
//!
//! Matrices are stored in the computational basis ordered `|00>, |01>, |10>, |11>`
//! with the first qubit (A) as the outer index.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Invariant, Result};
use crate::numerics::{hermitian_eigen, inner4, CVec4, Complex4x4, C64, ZERO};
use crate::pauli::{self, Mat2};
use crate::rng::{rng_from_seed, StateRng};

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Mixing weight λ of the biased samplers is drawn uniformly from this range.
pub const BIAS_LAMBDA_RANGE: (f64, f64) = (0.8, 1.0);

/// A validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Complex4x4);

impl DensityMatrix {
    /// Validates `m` against the density-matrix invariants.
    pub fn new(m: Complex4x4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Validation {
                invariant: Invariant::Finiteness,
                deviation: f64::INFINITY,
            });
        }
        let herm = m.hermiticity_defect();
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::Validation {
                invariant: Invariant::Hermiticity,
                deviation: herm,
            });
        }
        let tr = m.trace();
        let trace_dev = (tr - C64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOLERANCE {
            return Err(Error::Validation {
                invariant: Invariant::Trace,
                deviation: trace_dev,
            });
        }
        let rho = DensityMatrix(m.hermitian_part());
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::Validation {
                invariant: Invariant::Positivity,
                deviation: -min,
            });
        }
        Ok(rho)
    }

    /// Wraps a matrix that is a density matrix by construction.
    pub(crate) fn from_trusted(m: Complex4x4) -> Self {
        DensityMatrix(m.hermitian_part())
    }

    pub fn matrix(&self) -> &Complex4x4 {
        &self.0
    }

    pub fn into_matrix(self) -> Complex4x4 {
        self.0
    }

    /// `ρ_{ij,kl} = <ij|ρ|kl>`.
    pub fn element(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.0[(2 * i + j, 2 * k + l)]
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigen(&self.0).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[3]
    }

    /// `Tr{ρ²}`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// `(1 - λ) ρ + λ σ`, λ ∈ [0, 1].
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> DensityMatrix {
        DensityMatrix::from_trusted(self.0.scale_real(1.0 - lambda) + other.0.scale_real(lambda))
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn conjugate_by(&self, u: &Complex4x4) -> DensityMatrix {
        DensityMatrix::from_trusted(*u * self.0 * u.adjoint())
    }

    /// `I / 4`.
    pub fn maximally_mixed() -> DensityMatrix {
        DensityMatrix(Complex4x4::identity().scale_real(0.25))
    }

    /// `|ψ><ψ|`.
    pub fn from_pure(psi: &PureState) -> Result<DensityMatrix> {
        let n2 = psi.norm_sqr();
        if (n2 - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Normalization {
                norm2: n2,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        Ok(DensityMatrix::from_trusted(Complex4x4::outer(&psi.0, &psi.0)))
    }

    /// Werner state `(1 - ε)/4 I + ε Π` with `Π` the projector onto
    /// `(|00> + |11>)/√2`; PSD exactly for `ε ∈ [-1/3, 1]`.
    pub fn werner(epsilon: f64) -> Result<DensityMatrix> {
        if !(-1.0 / 3.0..=1.0).contains(&epsilon) {
            return Err(Error::Range {
                name: "epsilon",
                value: epsilon,
                min: -1.0 / 3.0,
                max: 1.0,
            });
        }
        let m = Complex4x4::identity().scale_real((1.0 - epsilon) / 4.0)
            + pauli::bell_projector().scale_real(epsilon);
        Ok(DensityMatrix(m))
    }

    /// X-shaped state with diagonal `(q, r, s, t)`, inner anti-diagonal `u`
    /// and outer anti-diagonal `v`.
    pub fn x_state(p: &XStateParams) -> Result<DensityMatrix> {
        p.validate()?;
        let m = Complex4x4::from_real([
            [p.q, 0.0, 0.0, p.v],
            [0.0, p.r, p.u, 0.0],
            [0.0, p.u, p.s, 0.0],
            [p.v, 0.0, 0.0, p.t],
        ]);
        Ok(DensityMatrix(m))
    }

    /// `Σ p_n |ψ_n><ψ_n| ⊗ |φ_n><φ_n|`.
    pub fn from_ensemble(e: &EnsembleSpec) -> Result<DensityMatrix> {
        e.validate()?;
        let mut m = Complex4x4::zeros();
        for term in &e.terms {
            let product = PureState::product(&term.a, &term.b);
            m = m + Complex4x4::outer(&product.0, &product.0).scale_real(term.weight);
        }
        Ok(DensityMatrix::from_trusted(m))
    }

    /// `ρ_A ⊗ ρ_B` of two single-qubit pure states.
    pub fn product(a: &QubitState, b: &QubitState) -> DensityMatrix {
        let psi = PureState::product(a, b);
        DensityMatrix::from_trusted(Complex4x4::outer(&psi.0, &psi.0))
    }

    /// `T†T / Tr{T†T}` with the real and imaginary parts of every entry of
    /// `T` i.i.d. uniform on `[0, 1)`.
    pub fn random(seed: u64) -> DensityMatrix {
        Self::random_with(&mut rng_from_seed(seed))
    }

    pub fn random_with(rng: &mut StateRng) -> DensityMatrix {
        let mut t = Complex4x4::zeros();
        for z in t.0.iter_mut().flatten() {
            *z = C64::new(rng.gen::<f64>(), rng.gen::<f64>());
        }
        let m = t.adjoint() * t;
        let tr = m.trace().re;
        DensityMatrix::from_trusted(m.scale_real(1.0 / tr))
    }

    /// Random state biased toward the pure or Werner families:
    /// `(1 - λ) ρ_rand + λ σ` with λ uniform on [`BIAS_LAMBDA_RANGE`] and σ a
    /// Haar-random pure state or a Werner state with ε uniform on `[-1/3, 1]`.
    pub fn random_biased(seed: u64, mode: SamplingMode) -> DensityMatrix {
        Self::random_biased_with(&mut rng_from_seed(seed), mode)
    }

    pub fn random_biased_with(rng: &mut StateRng, mode: SamplingMode) -> DensityMatrix {
        let base = Self::random_with(rng);
        let target = match mode {
            SamplingMode::Uniform => return base,
            SamplingMode::TowardPure => {
                let psi = PureState::random_with(rng);
                DensityMatrix::from_trusted(Complex4x4::outer(&psi.0, &psi.0))
            }
            SamplingMode::TowardWerner => {
                let eps = rng.gen_range(-1.0 / 3.0..=1.0);
                DensityMatrix::werner(eps).expect("epsilon drawn inside the Werner range")
            }
        };
        let lambda = rng.gen_range(BIAS_LAMBDA_RANGE.0..BIAS_LAMBDA_RANGE.1);
        base.mix(&target, lambda)
    }
}

/// Biasing rule of [`DensityMatrix::random_biased`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    Uniform,
    TowardPure,
    TowardWerner,
}

impl SamplingMode {
    pub const ALL: [SamplingMode; 3] = [
        SamplingMode::Uniform,
        SamplingMode::TowardPure,
        SamplingMode::TowardWerner,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SamplingMode::Uniform => "uniform",
            SamplingMode::TowardPure => "toward-pure",
            SamplingMode::TowardWerner => "toward-werner",
        }
    }
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SamplingMode::Uniform),
            "toward-pure" => Ok(SamplingMode::TowardPure),
            "toward-werner" => Ok(SamplingMode::TowardWerner),
            other => Err(Error::Parse(format!("unknown sampling mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two-qubit pure state `α|00> + β|01> + γ|10> + δ|11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState(pub CVec4);

impl PureState {
    pub fn new(amplitudes: CVec4) -> Result<Self> {
        let psi = PureState(amplitudes);
        let n2 = psi.norm_sqr();
        if (n2 - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Normalization {
                norm2: n2,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        Ok(psi)
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVec4) -> Self {
        let n = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        PureState(amplitudes.map(|z| z / n))
    }

    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState([C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)])
    }

    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        PureState([a.0[0] * b.0[0], a.0[0] * b.0[1], a.0[1] * b.0[0], a.0[1] * b.0[1]])
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random(seed: u64) -> Self {
        Self::random_with(&mut rng_from_seed(seed))
    }

    pub fn random_with(rng: &mut StateRng) -> Self {
        let mut amps = [ZERO; 4];
        for z in amps.iter_mut() {
            *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        PureState::normalized(amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `2|αδ - βγ|`.
    pub fn concurrence(&self) -> f64 {
        let [a, b, g, d] = self.0;
        2.0 * (a * d - b * g).norm()
    }

    /// `|ψ̃> = (σ2 ⊗ σ2)|ψ*>`.
    pub fn spin_flipped(&self) -> Self {
        PureState(pauli::spin_flip_operator().mul_vec(&self.0.map(|z| z.conj())))
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        inner4(&self.0, &other.0)
    }
}

/// Single-qubit pure state `a|0> + b|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(pub [C64; 2]);

impl QubitState {
    pub fn normalized(amplitudes: [C64; 2]) -> Self {
        let n = (amplitudes[0].norm_sqr() + amplitudes[1].norm_sqr()).sqrt();
        QubitState(amplitudes.map(|z| z / n))
    }

    pub fn zero() -> Self {
        QubitState([C64::new(1.0, 0.0), ZERO])
    }

    pub fn one() -> Self {
        QubitState([ZERO, C64::new(1.0, 0.0)])
    }

    /// State with the given unit Bloch vector (paper sign convention, see
    /// [`crate::pauli`]).
    pub fn from_bloch(n: [f64; 3]) -> Self {
        // ρ = (I + n·σ)/2 with σ3 = diag(-1, 1): the |1> weight is (1 + n3)/2.
        let theta = n[2].clamp(-1.0, 1.0).acos();
        let phi = n[1].atan2(n[0]);
        // <σ1> = 2 Re(a* b), <σ2> = -2 Im(a* b) for a|0> + b|1>.
        let a = C64::new((theta / 2.0).sin(), 0.0);
        let b = C64::from_polar((theta / 2.0).cos(), -phi);
        QubitState::normalized([a, b])
    }

    pub fn random_with(rng: &mut StateRng) -> Self {
        QubitState::normalized([
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
        ])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    /// `<σ_i>` for `i = 1, 2, 3`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            let s: &Mat2 = &pauli::SIGMA[i + 1];
            let mut acc = ZERO;
            for r in 0..2 {
                for c in 0..2 {
                    acc += self.0[r].conj() * s[r][c] * self.0[c];
                }
            }
            *o = acc.re;
        }
        out
    }
}

/// One product term `p |ψ><ψ| ⊗ |φ><φ|` of a separable ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub a: QubitState,
    pub b: QubitState,
}

/// Convex mixture of product pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub terms: Vec<EnsembleTerm>,
}

impl EnsembleSpec {
    pub fn new(terms: Vec<EnsembleTerm>) -> Result<Self> {
        let e = EnsembleSpec { terms };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.terms.iter().map(|t| t.weight).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Weight { sum });
        }
        for t in &self.terms {
            if !(0.0..=1.0).contains(&t.weight) {
                return Err(Error::Range {
                    name: "weight",
                    value: t.weight,
                    min: 0.0,
                    max: 1.0,
                });
            }
            for q in [&t.a, &t.b] {
                let n2 = q.norm_sqr();
                if (n2 - 1.0).abs() > 1e-12 {
                    return Err(Error::Normalization {
                        norm2: n2,
                        tolerance: 1e-12,
                    });
                }
            }
        }
        Ok(())
    }

    /// `n` terms with Dirichlet(1,…,1) weights and Haar-random factors.
    pub fn random(seed: u64, n: usize) -> Self {
        let mut rng = rng_from_seed(seed);
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let total: f64 = raw.iter().sum();
        let terms = raw
            .iter()
            .map(|w| EnsembleTerm {
                weight: w / total,
                a: QubitState::random_with(&mut rng),
                b: QubitState::random_with(&mut rng),
            })
            .collect();
        EnsembleSpec { terms }
    }
}

/// Parameters of the X-shaped density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XStateParams {
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
}

impl XStateParams {
    pub fn validate(&self) -> Result<()> {
        let XStateParams { q, r, s, t, u, v } = *self;
        for (name, value) in [("q", q), ("r", r), ("s", s), ("t", t), ("u", u), ("v", v)] {
            if value.is_nan() || value < 0.0 {
                return Err(Error::Range {
                    name,
                    value,
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
        }
        let sum = q + r + s + t;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Weight { sum });
        }
        if (r * s).sqrt() < u {
            return Err(Error::Positivity(format!("sqrt(rs) = {} < u = {u}", (r * s).sqrt())));
        }
        if (q * t).sqrt() < v {
            return Err(Error::Positivity(format!("sqrt(qt) = {} < v = {v}", (q * t).sqrt())));
        }
        Ok(())
    }

    /// Uniformly random diagonal on the simplex and coherences uniform on
    /// their allowed ranges.
    pub fn random(seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
        let total: f64 = raw.iter().sum();
        let [q, r, s, t] = raw.map(|x| x / total);
        let u = rng.gen::<f64>() * (r * s).sqrt();
        let v = rng.gen::<f64>() * (q * t).sqrt();
        XStateParams { q, r, s, t, u, v }
    }
}

/// Haar-random `u_A ⊗ u_B`.
pub fn random_local_unitary(seed: u64) -> Complex4x4 {
    let mut rng = rng_from_seed(seed);
    let ua = random_su2(&mut rng);
    let ub = random_su2(&mut rng);
    Complex4x4::kron(&ua, &ub)
}

fn random_su2(rng: &mut StateRng) -> Mat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    let alpha = C64::new(a, b);
    let beta = C64::new(c, d);
    [[alpha, -beta.conj()], [beta, alpha.conj()]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ONE;

    fn assert_valid(rho: &DensityMatrix) {
        DensityMatrix::new(*rho.matrix()).expect("constructor output must validate");
    }

    #[test]
    fn basis_product_is_diagonal() {
        let rho = DensityMatrix::from_pure(&PureState([ONE, ZERO, ZERO, ZERO])).unwrap();
        let mut expected = Complex4x4::zeros();
        expected[(0, 0)] = ONE;
        assert_eq!(*rho.matrix(), expected);
    }

    #[test]
    fn bell_projector_corners() {
        let rho = DensityMatrix::from_pure(&PureState::bell()).unwrap();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_pure_state_rejected() {
        let err = DensityMatrix::from_pure(&PureState([ONE, ONE, ZERO, ZERO])).unwrap_err();
        assert!(matches!(err, Error::Normalization { .. }));
    }

    #[test]
    fn random_pure_state_has_unit_purity() {
        for seed in 0..20 {
            let rho = DensityMatrix::from_pure(&PureState::random(seed)).unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_endpoints_and_spectrum() {
        let mixed = DensityMatrix::werner(0.0).unwrap();
        assert!(mixed.matrix().max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-16);
        let bell = DensityMatrix::werner(1.0).unwrap();
        assert!(bell.matrix().max_abs_diff(&pauli::bell_projector()) < 1e-16);
        let third = DensityMatrix::werner(1.0 / 3.0).unwrap();
        let ev = third.eigenvalues();
        let expected = [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(matches!(DensityMatrix::werner(1.01), Err(Error::Range { .. })));
        assert!(matches!(DensityMatrix::werner(-0.34), Err(Error::Range { .. })));
    }

    #[test]
    fn x_state_cases() {
        let bell = DensityMatrix::x_state(&XStateParams { q: 0.5, r: 0.0, s: 0.0, t: 0.5, u: 0.0, v: 0.5 }).unwrap();
        let from_pure = DensityMatrix::from_pure(&PureState::bell()).unwrap();
        assert!(bell.matrix().max_abs_diff(from_pure.matrix()) < 1e-15);

        let flat = DensityMatrix::x_state(&XStateParams { q: 0.25, r: 0.25, s: 0.25, t: 0.25, u: 0.0, v: 0.0 }).unwrap();
        assert!(flat.matrix().max_abs_diff(DensityMatrix::maximally_mixed().matrix()) < 1e-16);

        // Blocks {00,11} and {01,10} decouple: eigenvalues (q+t)/2 ± sqrt(((q-t)/2)^2 + v^2), same for r, s, u.
        let p = XStateParams { q: 0.3, r: 0.2, s: 0.2, t: 0.3, u: 0.1, v: 0.25 };
        let rho = DensityMatrix::x_state(&p).unwrap();
        let mut expected: [f64; 4] = [0.3 + 0.25, 0.3 - 0.25, 0.2 + 0.1, 0.2 - 0.1];
        expected.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in rho.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }

        let bad = XStateParams { q: 0.05, r: 0.45, s: 0.45, t: 0.05, u: 0.5, v: 0.01 };
        assert!(matches!(DensityMatrix::x_state(&bad), Err(Error::Positivity(_))));
    }

    #[test]
    fn ensembles() {
        let single = EnsembleSpec::new(vec![EnsembleTerm { weight: 1.0, a: QubitState::zero(), b: QubitState::zero() }]).unwrap();
        let rho = DensityMatrix::from_ensemble(&single).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-16);
        assert!((rho.purity() - 1.0).abs() < 1e-15);

        let classical = EnsembleSpec::new(vec![
            EnsembleTerm { weight: 0.5, a: QubitState::zero(), b: QubitState::zero() },
            EnsembleTerm { weight: 0.5, a: QubitState::one(), b: QubitState::one() },
        ])
        .unwrap();
        let rho = DensityMatrix::from_ensemble(&classical).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| rho.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![0.5, 0.0, 0.0, 0.5]);

        let bad = EnsembleSpec {
            terms: vec![EnsembleTerm { weight: 0.7, a: QubitState::zero(), b: QubitState::zero() }],
        };
        assert!(matches!(DensityMatrix::from_ensemble(&bad), Err(Error::Weight { .. })));
    }

    #[test]
    fn random_density_is_valid_and_deterministic() {
        for seed in 0..50 {
            let rho = DensityMatrix::random(seed);
            assert_valid(&rho);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(rho.min_eigenvalue() >= -1e-12);
        }
        assert_eq!(DensityMatrix::random(42), DensityMatrix::random(42));
        assert_ne!(DensityMatrix::random(42), DensityMatrix::random(43));
    }

    #[test]
    fn mean_purity_in_range() {
        let n = 10_000;
        let mean = (0..n).map(|s| DensityMatrix::random(s).purity()).sum::<f64>() / n as f64;
        assert!(mean > 0.25 && mean < 1.0, "mean purity {mean}");
    }

    #[test]
    fn biased_samplers() {
        for seed in 0..30 {
            for mode in SamplingMode::ALL {
                let rho = DensityMatrix::random_biased(seed, mode);
                assert_valid(&rho);
                assert_eq!(rho, DensityMatrix::random_biased(seed, mode));
            }
            assert_eq!(
                DensityMatrix::random_biased(seed, SamplingMode::Uniform),
                DensityMatrix::random(seed)
            );
        }
        // λ ≥ 0.8 toward a pure state keeps purity well above the uniform mean.
        let pur = (0..200)
            .map(|s| DensityMatrix::random_biased(s, SamplingMode::TowardPure).purity())
            .fold(f64::INFINITY, f64::min);
        assert!(pur > 0.6);
    }

    #[test]
    fn mixing_toward_pure_limit() {
        let base = DensityMatrix::random(3);
        let pure = DensityMatrix::from_pure(&PureState::random(4)).unwrap();
        let close = base.mix(&pure, 1.0 - 1e-9);
        assert!((close.purity() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn validation_names_violated_invariant() {
        let mut m = *DensityMatrix::maximally_mixed().matrix();
        m[(0, 0)] = C64::new(0.15, 0.0);
        let err = DensityMatrix::new(m).unwrap_err();
        assert!(matches!(err, Error::Validation { invariant: Invariant::Trace, .. }));

        let mut m = *DensityMatrix::maximally_mixed().matrix();
        m[(0, 1)] = C64::new(0.1, 0.0);
        let err = DensityMatrix::new(m).unwrap_err();
        assert!(matches!(err, Error::Validation { invariant: Invariant::Hermiticity, .. }));

        let m = Complex4x4::from_real([
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ]) + Complex4x4::from_real([
            [0.0, 0.0, 0.0, 0.1],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.1, 0.0, 0.0, 0.0],
        ]);
        let err = DensityMatrix::new(m).unwrap_err();
        assert!(matches!(err, Error::Validation { invariant: Invariant::Positivity, .. }));
    }

    #[test]
    fn qubit_bloch_vectors() {
        assert_eq!(QubitState::zero().bloch_vector(), [0.0, 0.0, -1.0]);
        assert_eq!(QubitState::one().bloch_vector(), [0.0, 0.0, 1.0]);
        let n = [0.48, -0.6, 0.64];
        let q = QubitState::from_bloch(n);
        for (a, b) in q.bloch_vector().iter().zip(n) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn local_unitary_is_unitary() {
        let u = random_local_unitary(9);
        assert!((u * u.adjoint()).max_abs_diff(&Complex4x4::identity()) < 1e-14);
    }
}
