//! First-order variations of the concurrence and the sinisterness, the
//! terminating trace expansion of `Det{I + λA}`, and finite-difference checks
//! of both.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::concurrence::{biorthogonal_system, concurrence_margin_of, r_of, DEGENERACY_GAP};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, Complex4x4, C64};
use crate::pauli;
use crate::rng::rng_from_seed;
use crate::sinisterness::{g_of, sinisterness_of};
use crate::states::DensityMatrix;

/// Largest Hermiticity or trace defect accepted in a perturbation direction.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;
/// Finite-difference steps; Richardson combines the two.
pub const STEPS: (f64, f64) = (1e-5, 1e-6);

const HERMITIAN_R: f64 = 1e-10;

/// `Det{I + λA}` through order `order` in `λ`, written in traces of powers of
/// `A`. Order 4 is exact for 4×4 matrices.
pub fn det_expansion(a: &Complex4x4, lambda: f64, order: usize) -> Result<C64> {
    if !(1..=4).contains(&order) {
        return Err(Error::Range {
            name: "order",
            value: order as f64,
            min: 1.0,
            max: 4.0,
        });
    }
    let a2 = *a * *a;
    let a3 = a2 * *a;
    let t1 = a.trace();
    let t2 = a2.trace();
    let t3 = a3.trace();
    let t4 = (a3 * *a).trace();
    let terms = [
        C64::new(1.0, 0.0),
        t1,
        (t1 * t1 - t2) / 2.0,
        (t1 * t1 * t1 - t1 * t2 * 3.0 + t3 * 2.0) / 6.0,
        (t1 * t1 * t1 * t1 - t1 * t1 * t2 * 6.0 + t2 * t2 * 3.0 + t1 * t3 * 8.0 - t4 * 6.0) / 24.0,
    ];
    let mut sum = C64::new(0.0, 0.0);
    let mut power = 1.0;
    for term in &terms[..=order] {
        sum += term * power;
        power *= lambda;
    }
    Ok(sum)
}

fn check_direction(delta: &Complex4x4) -> Result<()> {
    let herm = delta.hermiticity_defect();
    let trace = delta.trace().norm();
    if herm > CONSTRAINT_TOLERANCE || trace > CONSTRAINT_TOLERANCE {
        return Err(Error::Constraint(format!(
            "δρ must be Hermitian and traceless (hermiticity defect {herm:e}, trace {trace:e})"
        )));
    }
    Ok(())
}

/// `W` with `δC = Tr{W δρ}`.
///
/// When `R` is Hermitian and its top eigenvalue is simple, the remaining
/// eigenvalues all enter with a minus sign, so `W = 2P_1 - I` for the top
/// eigenprojector `P_1` regardless of degeneracy below it. Otherwise `W` comes
/// from the bi-orthogonal system, which requires simple nonzero eigenvalues.
pub fn gradient_operator(rho: &DensityMatrix) -> Result<Complex4x4> {
    let r = r_of(rho.matrix());
    let scale = r.frobenius_norm();
    if r.hermiticity_defect() <= HERMITIAN_R * scale {
        let (values, vecs) = hermitian_eigen(&r);
        if values[0] - values[1] < DEGENERACY_GAP {
            return Err(Error::Degeneracy(format!(
                "top eigenvalues of R coincide ({:e}, {:e})",
                values[0], values[1]
            )));
        }
        let v = vecs.column(0);
        let p = Complex4x4::outer(&v, &v);
        return Ok(p.scale_real(2.0) - Complex4x4::identity());
    }
    Ok(biorthogonal_system(rho)?.gradient_operator())
}

/// First-order change of the concurrence along `δρ`.
pub fn concurrence_variation(rho: &DensityMatrix, delta: &Complex4x4) -> Result<f64> {
    check_direction(delta)?;
    if delta.frobenius_norm() == 0.0 {
        return Ok(0.0);
    }
    if concurrence_margin_of(rho.matrix()) <= 0.0 {
        return Err(Error::Constraint("the concurrence vanishes at ρ".into()));
    }
    let w = gradient_operator(rho)?;
    Ok((w * *delta).trace().re)
}

/// First-order change of the sinisterness along `δρ`,
/// `-16 Tr{adj(G) G(δρ)}`.
pub fn sinisterness_variation(rho: &DensityMatrix, delta: &Complex4x4) -> Result<f64> {
    check_direction(delta)?;
    let adj = g_of(rho.matrix()).adjugate();
    Ok(-16.0 * (adj * g_of(delta)).trace().re)
}

/// `(δC, δS)` for the Werner state `ρ_W(ε)` moved towards `ρ′`:
/// `δC = 2(Tr{Πρ′} - (3ε+1)/4)` and `δS = S_W (4/ε)(Tr{Πρ′} - (3ε+1)/4)`.
pub fn werner_variation(epsilon: f64, target: &DensityMatrix) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Range {
            name: "epsilon",
            value: epsilon,
            min: 0.0,
            max: 1.0,
        });
    }
    let t = bell_fidelity(target) - (3.0 * epsilon + 1.0) / 4.0;
    let s_w = -epsilon.powi(3);
    Ok((2.0 * t, s_w * 4.0 / epsilon * t))
}

/// `Tr{Πρ}` for the Bell projector `Π`.
pub fn bell_fidelity(rho: &DensityMatrix) -> f64 {
    (pauli::bell_projector() * *rho.matrix()).trace().re
}

/// Mixes `ρ′` with `Π` or with `(I - Π)/3` so that `Tr{Πρ′} = (3ε+1)/4`.
pub fn project_to_fidelity(target: &DensityMatrix, epsilon: f64) -> DensityMatrix {
    let want = (3.0 * epsilon + 1.0) / 4.0;
    let have = bell_fidelity(target);
    let pi = pauli::bell_projector();
    let (other, mu) = if have > want {
        ((Complex4x4::identity() - pi).scale_real(1.0 / 3.0), 1.0 - want / have)
    } else {
        (pi, (want - have) / (1.0 - have))
    };
    DensityMatrix::from_trusted(target.matrix().scale_real(1.0 - mu) + other.scale_real(mu))
}

/// Random traceless Hermitian direction with unit Frobenius norm.
pub fn random_direction(seed: u64) -> Complex4x4 {
    let mut rng = rng_from_seed(seed);
    let mut m = Complex4x4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let h = m.hermitian_part();
    let d = h - Complex4x4::identity().scale_real(h.trace().re / 4.0);
    d.scale_real(1.0 / d.frobenius_norm())
}

/// Analytic variations next to Richardson-extrapolated central differences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub analytic_dc: f64,
    pub analytic_ds: f64,
    pub numeric_dc: f64,
    pub numeric_ds: f64,
    /// Larger of the two steps actually used.
    pub step: f64,
    /// Number of times the steps were halved to keep `ρ ± λδρ` PSD.
    pub halvings: u32,
    pub rel_error_c: f64,
    pub rel_error_s: f64,
}

impl PerturbationReport {
    pub fn within(&self, tol: f64) -> bool {
        self.rel_error_c <= tol && self.rel_error_s <= tol
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both are below `1e-12`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn min_eigenvalue(m: &Complex4x4) -> f64 {
    hermitian_eigen(m).0[3]
}

/// Central difference of `f` along `δρ` at steps `h1 > h2`, combined as
/// `(100 D(h2) - D(h1)) / 99`.
pub fn richardson(f: impl Fn(&Complex4x4) -> f64, rho: &Complex4x4, delta: &Complex4x4, h1: f64, h2: f64) -> f64 {
    let central = |h: f64| {
        let plus = *rho + delta.scale_real(h);
        let minus = *rho - delta.scale_real(h);
        (f(&plus) - f(&minus)) / (2.0 * h)
    };
    let ratio = (h1 / h2).powi(2);
    (ratio * central(h2) - central(h1)) / (ratio - 1.0)
}

/// Compares the analytic variations with finite differences of the
/// concurrence margin and the sinisterness. The steps start at [`STEPS`] and
/// are halved until both `ρ ± λδρ` are PSD.
pub fn perturbation_report(rho: &DensityMatrix, delta: &Complex4x4) -> Result<PerturbationReport> {
    let analytic_dc = concurrence_variation(rho, delta)?;
    let analytic_ds = sinisterness_variation(rho, delta)?;
    let (mut h1, mut h2) = STEPS;
    let mut halvings = 0;
    let m = rho.matrix();
    while min_eigenvalue(&(*m + delta.scale_real(h1))) < 0.0 || min_eigenvalue(&(*m - delta.scale_real(h1))) < 0.0 {
        h1 /= 2.0;
        h2 /= 2.0;
        halvings += 1;
        if halvings > 60 {
            return Err(Error::Constraint("ρ sits on the boundary along δρ".into()));
        }
    }
    let numeric_dc = richardson(concurrence_margin_of, m, delta, h1, h2);
    let numeric_ds = richardson(sinisterness_of, m, delta, h1, h2);
    Ok(PerturbationReport {
        analytic_dc,
        analytic_ds,
        numeric_dc,
        numeric_ds,
        step: h1,
        halvings,
        rel_error_c: relative_error(analytic_dc, numeric_dc),
        rel_error_s: relative_error(analytic_ds, numeric_ds),
    })
}

/// Werner-state variant of [`perturbation_report`] along the mixture path
/// `ρ_W + λ(ρ′ - ρ_W)`, using [`werner_variation`] for the analytic side.
pub fn werner_report(epsilon: f64, target: &DensityMatrix) -> Result<PerturbationReport> {
    let (analytic_dc, analytic_ds) = werner_variation(epsilon, target)?;
    let w = DensityMatrix::werner(epsilon)?;
    let delta = *target.matrix() - *w.matrix();
    let (mut h1, mut h2) = STEPS;
    let mut halvings = 0;
    while min_eigenvalue(&(*w.matrix() - delta.scale_real(h1))) < 0.0 {
        h1 /= 2.0;
        h2 /= 2.0;
        halvings += 1;
        if halvings > 60 {
            return Err(Error::Constraint("ρ_W sits on the boundary along ρ′ - ρ_W".into()));
        }
    }
    let numeric_dc = richardson(concurrence_margin_of, w.matrix(), &delta, h1, h2);
    let numeric_ds = richardson(sinisterness_of, w.matrix(), &delta, h1, h2);
    Ok(PerturbationReport {
        analytic_dc,
        analytic_ds,
        numeric_dc,
        numeric_ds,
        step: h1,
        halvings,
        rel_error_c: relative_error(analytic_dc, numeric_dc),
        rel_error_s: relative_error(analytic_ds, numeric_ds),
    })
}

/// One-sided slopes `(δC/λ, δS/λ)` at `ρ_W` towards `ρ′` after projecting
/// `ρ′` onto the fidelity `(3ε+1)/4`; both vanish to first order.
pub fn werner_stationarity(epsilon: f64, target: &DensityMatrix, lambda: f64) -> Result<(f64, f64)> {
    let w = DensityMatrix::werner(epsilon)?;
    let projected = project_to_fidelity(target, epsilon);
    let moved = w.matrix().scale_real(1.0 - lambda) + projected.matrix().scale_real(lambda);
    let dc = (concurrence_margin_of(&moved) - concurrence_margin_of(w.matrix())) / lambda;
    let ds = (sinisterness_of(&moved) - sinisterness_of(w.matrix())) / lambda;
    Ok((dc, ds))
}
