//! Closed-form identity suite used by `sinister verify`.

use rand::Rng;
use serde::Serialize;

use crate::bloch::{decompose, fano_reconstruct, purity_from_gamma};
use crate::concurrence::{concurrence, concurrence_hermitian_oracle};
use crate::geometry::{max_volume_search, separable_sinisterness, MAX_VOLUME};
use crate::numerics::{det3_levi_civita, Complex4x4, C64};
use crate::perturbation::{det_expansion, werner_report};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sinisterness::{g_of, sinisterness_correlation_path, ClosedForm};
use crate::states::{DensityMatrix, EnsembleSpec, PureState, SamplingMode, XStateParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Skips the index rearrangement, so `G` is `ρ` itself.
    GIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub fault: Fault,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            samples: 200,
            fault: Fault::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

fn g_with(m: &Complex4x4, fault: Fault) -> Complex4x4 {
    match fault {
        Fault::None => g_of(m),
        Fault::GIndex => {
            let mut g = Complex4x4::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            g[(2 * i + k, 2 * j + l)] = m[(2 * i + k, 2 * j + l)];
                        }
                    }
                }
            }
            g
        }
    }
}

fn s_g(rho: &DensityMatrix, fault: Fault) -> f64 {
    -16.0 * g_with(rho.matrix(), fault).det().re
}

fn s_c(rho: &DensityMatrix) -> f64 {
    sinisterness_correlation_path(rho.matrix()).unwrap_or(f64::NAN)
}

fn worst(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |acc, x| if x.is_nan() { f64::INFINITY } else { acc.max(x) })
}

/// Runs every identity and reports the worst residual of each.
pub fn run_identities(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.samples.max(1);
    let seed = |k: usize, tag: u64| derive_seed(derive_seed(opts.seed, tag), k as u64);
    let mut out = Vec::new();

    let grid = (0..200).map(|k| -1.0 / 3.0 + (4.0 / 3.0) * k as f64 / 199.0);
    out.push(IdentityCheck::new(
        "werner-cube",
        worst(grid.map(|e| {
            let w = DensityMatrix::werner(e).expect("grid inside range");
            (s_g(&w, opts.fault) + e.powi(3)).abs().max((s_c(&w) + e.powi(3)).abs())
        })),
        1e-10,
    ));

    out.push(IdentityCheck::new(
        "dual-path",
        worst((0..n).map(|k| {
            let rho = DensityMatrix::random(seed(k, 1));
            let g = s_g(&rho, opts.fault);
            (s_c(&rho) - g).abs() / (1.0 + g.abs())
        })),
        1e-9,
    ));

    out.push(IdentityCheck::new(
        "pure-law",
        worst((0..n).map(|k| {
            let rho = DensityMatrix::from_pure(&PureState::random(seed(k, 2))).expect("normalized");
            (s_g(&rho, opts.fault) + concurrence(&rho).powi(4)).abs()
        })),
        1e-9,
    ));

    out.push(IdentityCheck::new(
        "x-state",
        worst((0..n).map(|k| {
            let f = ClosedForm::X(XStateParams::random(seed(k, 3)));
            let rho = f.construct().expect("valid parameters");
            let ds = (s_g(&rho, opts.fault) - f.sinisterness().unwrap_or(f64::NAN)).abs();
            let dc = (concurrence(&rho) - f.concurrence().unwrap_or(f64::NAN)).abs();
            ds.max(dc)
        })),
        1e-10,
    ));

    out.push(IdentityCheck::new(
        "separable-volumes",
        worst((0..n).map(|k| {
            let e = EnsembleSpec::random(seed(k, 4), 4);
            let rho = DensityMatrix::from_ensemble(&e).expect("valid ensemble");
            let pipeline = decompose(&rho).map(|d| det3_levi_civita(&d.c)).unwrap_or(f64::NAN);
            (separable_sinisterness(&e).unwrap_or(f64::NAN) - pipeline).abs()
        })),
        1e-9,
    ));

    out.push(IdentityCheck::new(
        "concurrence-oracle",
        worst((0..n).map(|k| {
            let rho = DensityMatrix::random_biased(seed(k, 5), SamplingMode::ALL[k % 3]);
            (concurrence(&rho) - concurrence_hermitian_oracle(&rho)).abs()
        })),
        1e-8,
    ));

    out.push(IdentityCheck::new(
        "purity-and-fano",
        worst((0..n).map(|k| {
            let rho = DensityMatrix::random(seed(k, 6));
            match decompose(&rho) {
                Ok(d) => (purity_from_gamma(&d.gamma) - rho.purity())
                    .abs()
                    .max(fano_reconstruct(&d).matrix.max_abs_diff(rho.matrix())),
                Err(_) => f64::NAN,
            }
        })),
        1e-12,
    ));

    let search = max_volume_search(opts.seed, 10_000);
    out.push(IdentityCheck::new(
        "max-volume",
        (search.volume - MAX_VOLUME).abs(),
        1e-4,
    ));
    out.push(IdentityCheck::new(
        "max-volume-bound",
        (search.volume - MAX_VOLUME).max(0.0),
        1e-9,
    ));

    out.push(IdentityCheck::new(
        "det-expansion",
        worst((0..n).map(|k| {
            let mut rng = rng_from_seed(seed(k, 7));
            let mut a = Complex4x4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    a[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let lambda = rng.gen_range(0.1..1.0);
            let exact = (Complex4x4::identity() + a.scale_real(lambda)).det();
            let series = det_expansion(&a, lambda, 4).unwrap_or(C64::new(f64::NAN, 0.0));
            (series - exact).norm() / exact.norm()
        })),
        1e-10,
    ));

    out.push(IdentityCheck::new(
        "werner-perturbation",
        worst((0..n.min(100)).map(|k| {
            let mut rng = rng_from_seed(seed(k, 8));
            let eps = rng.gen_range(0.1..0.99);
            let target = DensityMatrix::random_with(&mut rng);
            werner_report(eps, &target)
                .map(|r| r.rel_error_c.max(r.rel_error_s))
                .unwrap_or(f64::NAN)
        })),
        1e-3,
    ));

    out
}
