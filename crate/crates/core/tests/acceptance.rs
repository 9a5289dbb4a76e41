//! Acceptance run: every criterion at its stated scale and tolerance, one
//! PASS/FAIL line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use sinister_core::bloch::{decompose, fano_reconstruct, purity_from_gamma};
use sinister_core::concurrence::{concurrence, concurrence_hermitian_oracle};
use sinister_core::experiments::{estimator_convergence, scan_random_states};
use sinister_core::geometry::{climb_volume, max_volume_search, separable_sinisterness, VertexQuad, MAX_VOLUME};
use sinister_core::numerics::det3_levi_civita;
use sinister_core::perturbation::{det_expansion, werner_report, werner_stationarity};
use sinister_core::rng::{derive_seed, rng_from_seed};
use sinister_core::sinisterness::{sinisterness, sinisterness_from_correlations, ClosedForm};
use sinister_core::states::{random_local_unitary, DensityMatrix, EnsembleSpec, PureState, SamplingMode, XStateParams};
use sinister_core::{Complex4x4, C64};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |a, x| if x.is_nan() { f64::INFINITY } else { a.max(x) })
}

fn seed(tag: u64, k: usize) -> u64 {
    derive_seed(derive_seed(SEED, tag), k as u64)
}

fn werner_grid() -> impl Iterator<Item = f64> {
    (0..200).map(|k| -1.0 / 3.0 + (4.0 / 3.0) * k as f64 / 199.0)
}

fn werner_closed_form() -> Outcome {
    let worst = max(werner_grid().map(|e| {
        let w = DensityMatrix::werner(e).unwrap();
        let g = (sinisterness(&w) + e.powi(3)).abs();
        let c = (sinisterness_from_correlations(&decompose(&w).unwrap().c) + e.powi(3)).abs();
        g.max(c)
    }));
    outcome(worst < 1e-10, format!("max |S + ε³| over both paths = {worst:.3e} (< 1e-10)"))
}

fn pure_state_law() -> Outcome {
    let worst = max((0..10_000).map(|k| {
        let rho = DensityMatrix::from_pure(&PureState::random(seed(2, k))).unwrap();
        (sinisterness(&rho) + concurrence(&rho).powi(4)).abs()
    }));
    outcome(worst < 1e-9, format!("10^4 pure states, max |S + C⁴| = {worst:.3e} (< 1e-9)"))
}

fn dual_path() -> Outcome {
    let worst = (0..100_000usize)
        .into_par_iter()
        .map(|k| {
            let rho = DensityMatrix::random(seed(3, k));
            let g = sinisterness(&rho);
            let c = det3_levi_civita(&decompose(&rho).unwrap().c);
            (c - g).abs() / (1.0 + g.abs())
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst < 1e-9, format!("10^5 mixed states, max |det c + 16 det G|/(1+|S|) = {worst:.3e} (< 1e-9)"))
}

fn envelope() -> Outcome {
    let scan = scan_random_states(100_000, seed(4, 0), &SamplingMode::ALL).unwrap();
    let s = &scan.summary;
    let separable_ok = scan
        .records
        .iter()
        .filter(|r| r.separable)
        .all(|r| r.sinisterness.abs() <= 1.0 / 27.0 + 1e-9);
    let band = (0.05..=0.40).contains(&s.separable_fraction);
    outcome(
        s.violations() == 0 && separable_ok && band,
        format!(
            "10^5 mixed-mode states: upper {} lower {} separable-bound {} violations, separable fraction {:.4}",
            s.upper_violations, s.lower_violations, s.separable_violations, s.separable_fraction
        ),
    )
}

fn x_states() -> Outcome {
    let mut ds_max: f64 = 0.0;
    let mut dc_max: f64 = 0.0;
    let mut sign_ok = true;
    for k in 0..1000 {
        let f = ClosedForm::X(XStateParams::random(seed(5, k)));
        let rho = f.construct().unwrap();
        let (s, c) = (sinisterness(&rho), concurrence(&rho));
        ds_max = ds_max.max((s - f.sinisterness().unwrap()).abs());
        dc_max = dc_max.max((c - f.concurrence().unwrap()).abs());
        if c > 1e-12 && s >= 0.0 {
            sign_ok = false;
        }
    }
    outcome(
        ds_max < 1e-10 && dc_max < 1e-10 && sign_ok,
        format!("10^3 X states: max ΔS = {ds_max:.3e}, max ΔC = {dc_max:.3e}, entangled ⇒ S < 0: {sign_ok}"),
    )
}

fn separable_formula() -> Outcome {
    let four = max((0..1000).map(|k| {
        let e = EnsembleSpec::random(seed(6, k), 4);
        let rho = DensityMatrix::from_ensemble(&e).unwrap();
        (separable_sinisterness(&e).unwrap() - det3_levi_civita(&decompose(&rho).unwrap().c)).abs()
    }));
    let three = max((0..1000).map(|k| {
        let e = EnsembleSpec::random(seed(7, k), 3);
        sinisterness(&DensityMatrix::from_ensemble(&e).unwrap()).abs()
    }));
    outcome(
        four < 1e-9 && three < 1e-12,
        format!("4-term max |formula - det c| = {four:.3e} (< 1e-9); 3-term max |S| = {three:.3e} (< 1e-12)"),
    )
}

fn extremal_volume() -> Outcome {
    let searches: Vec<f64> = (0..10).map(|k| max_volume_search(seed(8, k), 10_000).volume).collect();
    let best_over = max(searches.iter().map(|v| v - MAX_VOLUME));
    let worst_short = max(searches.iter().map(|v| MAX_VOLUME - v));
    let regular = climb_volume(&VertexQuad::regular(), 1, &mut rng_from_seed(SEED)).volume;
    let reg_err = (regular - MAX_VOLUME).abs();
    outcome(
        best_over <= 1e-9 && worst_short <= 1e-4 && reg_err < 1e-10,
        format!(
            "10 searches of 10^4 steps: max excess {best_over:.3e}, max shortfall {worst_short:.3e}; regular start error {reg_err:.3e}"
        ),
    )
}

fn concurrence_cross_validation() -> Outcome {
    let oracle = max((0..1000).map(|k| {
        let rho = DensityMatrix::random_biased(seed(9, k), SamplingMode::ALL[k % 3]);
        (concurrence(&rho) - concurrence_hermitian_oracle(&rho)).abs()
    }));
    let grid = max(werner_grid().map(|e| {
        (concurrence(&DensityMatrix::werner(e).unwrap()) - ((3.0 * e - 1.0) / 2.0).max(0.0)).abs()
    }));
    outcome(
        oracle < 1e-8 && grid < 1e-10,
        format!("10^3 states max |C - oracle| = {oracle:.3e} (< 1e-8); Werner grid max error {grid:.3e} (< 1e-10)"),
    )
}

fn perturbation_formulas() -> Outcome {
    let mut worst_c: f64 = 0.0;
    let mut worst_s: f64 = 0.0;
    let mut worst_stationary: f64 = 0.0;
    for k in 0..100 {
        let mut rng = rng_from_seed(seed(10, k));
        let eps = rng.gen_range(0.1..1.0);
        let target = DensityMatrix::random_with(&mut rng);
        match werner_report(eps, &target) {
            Ok(r) => {
                worst_c = worst_c.max(r.rel_error_c);
                worst_s = worst_s.max(r.rel_error_s);
            }
            Err(_) => worst_c = f64::INFINITY,
        }
        let (dc, ds) = werner_stationarity(eps, &target, 1e-5).unwrap();
        worst_stationary = worst_stationary.max(ds.abs()).max(dc.abs());
    }
    outcome(
        worst_c < 1e-3 && worst_s < 1e-3 && worst_stationary < 1e-3,
        format!(
            "10^2 (ε, ρ′): max rel error δC {worst_c:.3e}, δS {worst_s:.3e} (< 1e-3); stationary slopes ≤ {worst_stationary:.3e} (< 1e-3)"
        ),
    )
}

fn determinant_expansion() -> Outcome {
    let worst = max((0..1000).map(|k| {
        let mut rng = rng_from_seed(seed(11, k));
        let mut a = Complex4x4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                a[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let lambda = rng.gen_range(0.1..=1.0);
        let exact = (Complex4x4::identity() + a.scale_real(lambda)).det();
        (det_expansion(&a, lambda, 4).unwrap() - exact).norm() / exact.norm()
    }));
    outcome(worst < 1e-10, format!("10^3 matrices, max relative error {worst:.3e} (< 1e-10)"))
}

fn measurement_estimator() -> Outcome {
    let ladder = [1_000, 10_000, 100_000];
    let bell = DensityMatrix::from_pure(&PureState::bell()).unwrap();
    let werner = DensityMatrix::werner(0.8).unwrap();
    let sb = estimator_convergence(&bell, &ladder, 50, seed(12, 0)).unwrap().slope.unwrap();
    let sw = estimator_convergence(&werner, &ladder, 50, seed(12, 1)).unwrap().slope.unwrap();
    let ok = |s: f64| (-0.65..=-0.35).contains(&s);
    outcome(
        ok(sb) && ok(sw),
        format!("log-log slope Bell {sb:.3} ({}), Werner(0.8) {sw:.3} ({}); band [-0.65, -0.35]", verdict(ok(sb)), verdict(ok(sw))),
    )
}

fn invariance() -> Outcome {
    let mut ds: f64 = 0.0;
    let mut dc: f64 = 0.0;
    let mut purity: f64 = 0.0;
    let mut fano: f64 = 0.0;
    for k in 0..1000 {
        let rho = DensityMatrix::random_biased(seed(13, k), SamplingMode::ALL[k % 3]);
        let moved = rho.conjugate_by(&random_local_unitary(seed(14, k)));
        ds = ds.max((sinisterness(&rho) - sinisterness(&moved)).abs());
        dc = dc.max((concurrence(&rho) - concurrence(&moved)).abs());
        let d = decompose(&rho).unwrap();
        purity = purity.max((purity_from_gamma(&d.gamma) - rho.purity()).abs());
        fano = fano.max(fano_reconstruct(&d).matrix.max_abs_diff(rho.matrix()));
    }
    outcome(
        ds < 1e-8 && dc < 1e-8 && purity < 1e-12 && fano < 1e-12,
        format!("10^3 local unitaries: ΔS {ds:.3e}, ΔC {dc:.3e} (< 1e-8); purity {purity:.3e}, Fano {fano:.3e} (< 1e-12)"),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "out of band"
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Werner closed form", Duration::from_secs(1), werner_closed_form),
        ("pure-state law", Duration::from_secs(10), pure_state_law),
        ("dual-path identity", Duration::from_secs(60), dual_path),
        ("concurrence/sinisterness envelope", Duration::from_secs(300), envelope),
        ("X-state identities", Duration::from_secs(10), x_states),
        ("separable formula", Duration::from_secs(30), separable_formula),
        ("extremal volume", Duration::from_secs(30), extremal_volume),
        ("concurrence cross-validation", Duration::from_secs(60), concurrence_cross_validation),
        ("perturbation formulas", Duration::from_secs(60), perturbation_formulas),
        ("determinant expansion", Duration::from_secs(10), determinant_expansion),
        ("measurement estimator", Duration::from_secs(300), measurement_estimator),
        ("invariance suite", Duration::from_secs(60), invariance),
    ];
    let mut failed = Vec::new();
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *budget;
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s, budget {}s]",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            failed.push(n + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
