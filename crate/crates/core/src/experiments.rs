//! Random-state scans against the concurrence/sinisterness envelope, and a
//! finite-shot simulation of the nine local Pauli measurement settings.

use std::io::{self, Write};

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::decompose;
use crate::concurrence::concurrence;
use crate::error::{Error, Result};
use crate::numerics::{det3_levi_civita, Complex4x4, Real3x3, Vec3};
use crate::pauli;
use crate::rng::{derive_seed, rng_from_seed, StateRng};
use crate::sinisterness::sinisterness;
use crate::states::{DensityMatrix, SamplingMode};

/// Tolerance on the envelope inequalities.
pub const ENVELOPE_TOLERANCE: f64 = 1e-9;
/// Concurrence at or below this counts as separable.
pub const SEPARABLE_THRESHOLD: f64 = 1e-12;
/// `|S| ≤ 1/27` for separable states.
pub const SEPARABLE_BOUND: f64 = 1.0 / 27.0;

pub const CSV_HEADER: &str = "seed,mode,concurrence,sinisterness,purity,separable,violation";

/// Which bound a record breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    None,
    /// `S > -C⁴`.
    Upper,
    /// `S < -((2C+1)/3)³`.
    Lower,
    /// `|S| > 1/27` at `C = 0`.
    SeparableBound,
}

impl Violation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Violation::None => "none",
            Violation::Upper => "upper",
            Violation::Lower => "lower",
            Violation::SeparableBound => "separable-bound",
        }
    }
}

/// `-C⁴`.
pub fn upper_envelope(c: f64) -> f64 {
    -c.powi(4)
}

/// `-((2C+1)/3)³`.
pub fn lower_envelope(c: f64) -> f64 {
    -((2.0 * c + 1.0) / 3.0).powi(3)
}

/// Classifies a `(C, S)` pair. Entangled states are checked against the two
/// envelopes, separable ones against `|S| ≤ 1/27`.
pub fn classify(c: f64, s: f64) -> Violation {
    classify_with(c, s, ENVELOPE_TOLERANCE)
}

pub fn classify_with(c: f64, s: f64, tolerance: f64) -> Violation {
    if c <= SEPARABLE_THRESHOLD {
        if s.abs() > SEPARABLE_BOUND + tolerance {
            return Violation::SeparableBound;
        }
    } else if s > upper_envelope(c) + tolerance {
        return Violation::Upper;
    } else if s < lower_envelope(c) - tolerance {
        return Violation::Lower;
    }
    Violation::None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub seed: u64,
    pub mode: SamplingMode,
    pub concurrence: f64,
    pub sinisterness: f64,
    pub purity: f64,
    pub separable: bool,
    pub violation: Violation,
}

impl ScanRecord {
    pub fn evaluate(seed: u64, mode: SamplingMode) -> Self {
        Self::evaluate_with(seed, mode, ENVELOPE_TOLERANCE)
    }

    pub fn evaluate_with(seed: u64, mode: SamplingMode, tolerance: f64) -> Self {
        let rho = DensityMatrix::random_biased(seed, mode);
        let c = concurrence(&rho);
        let s = sinisterness(&rho);
        ScanRecord {
            seed,
            mode,
            concurrence: c,
            sinisterness: s,
            purity: rho.purity(),
            separable: c <= SEPARABLE_THRESHOLD,
            violation: classify_with(c, s, tolerance),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub n: usize,
    pub separable: usize,
    pub separable_fraction: f64,
    pub upper_violations: usize,
    pub lower_violations: usize,
    pub separable_violations: usize,
    pub min_sinisterness: f64,
    pub max_sinisterness: f64,
    pub max_concurrence: f64,
}

impl ScanSummary {
    pub fn from_records(records: &[ScanRecord]) -> Self {
        let mut s = ScanSummary {
            n: records.len(),
            min_sinisterness: f64::INFINITY,
            max_sinisterness: f64::NEG_INFINITY,
            ..Default::default()
        };
        for r in records {
            s.separable += r.separable as usize;
            match r.violation {
                Violation::None => {}
                Violation::Upper => s.upper_violations += 1,
                Violation::Lower => s.lower_violations += 1,
                Violation::SeparableBound => s.separable_violations += 1,
            }
            s.min_sinisterness = s.min_sinisterness.min(r.sinisterness);
            s.max_sinisterness = s.max_sinisterness.max(r.sinisterness);
            s.max_concurrence = s.max_concurrence.max(r.concurrence);
        }
        s.separable_fraction = s.separable as f64 / s.n.max(1) as f64;
        s
    }

    pub fn violations(&self) -> usize {
        self.upper_violations + self.lower_violations + self.separable_violations
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scan {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// Samples `n` states in parallel. Record `k` uses mode `modes[k % len]` and
/// seed `derive_seed(seed, k)`; records are returned sorted by seed.
pub fn scan_random_states(n: usize, seed: u64, modes: &[SamplingMode]) -> Result<Scan> {
    scan_random_states_with(n, seed, modes, ENVELOPE_TOLERANCE)
}

/// [`scan_random_states`] with a custom envelope tolerance.
pub fn scan_random_states_with(n: usize, seed: u64, modes: &[SamplingMode], tolerance: f64) -> Result<Scan> {
    if n == 0 {
        return Err(Error::Constraint("a scan needs n ≥ 1".into()));
    }
    if modes.is_empty() {
        return Err(Error::Constraint("a scan needs at least one sampling mode".into()));
    }
    let mut records: Vec<ScanRecord> = (0..n)
        .into_par_iter()
        .map(|k| ScanRecord::evaluate_with(derive_seed(seed, k as u64), modes[k % modes.len()], tolerance))
        .collect();
    records.sort_by_key(|r| r.seed);
    let summary = ScanSummary::from_records(&records);
    Ok(Scan { records, summary })
}

/// Writes records as CSV with floats at 17 significant digits.
pub fn write_csv<W: Write>(records: &[ScanRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e},{},{}",
            r.seed,
            r.mode.as_str(),
            r.concurrence,
            r.sinisterness,
            r.purity,
            r.separable,
            r.violation.as_str()
        )?;
    }
    out.flush()
}

/// Outcome probabilities of one setting, indexed `[x][y]` with `0 ↔ +1`,
/// `1 ↔ -1`.
pub fn joint_probabilities(rho: &DensityMatrix, i: usize, j: usize) -> [[f64; 2]; 2] {
    let mut p = [[0.0; 2]; 2];
    for (xi, x) in [1.0, -1.0].into_iter().enumerate() {
        for (yi, y) in [1.0, -1.0].into_iter().enumerate() {
            let proj = Complex4x4::kron(&pauli::projector(i, x), &pauli::projector(j, y));
            p[xi][yi] = (proj * *rho.matrix()).trace().re.max(0.0);
        }
    }
    let total: f64 = p.iter().flatten().sum();
    for v in p.iter_mut().flatten() {
        *v /= total;
    }
    p
}

/// Moments of one setting: `(E[x], E[y], E[xy])`.
fn moments(p: &[[f64; 2]; 2]) -> (f64, f64, f64) {
    let ex = p[0][0] + p[0][1] - p[1][0] - p[1][1];
    let ey = p[0][0] + p[1][0] - p[0][1] - p[1][1];
    let exy = p[0][0] + p[1][1] - p[0][1] - p[1][0];
    (ex, ey, exy)
}

/// Finite-shot estimate of the Bloch data and the sinisterness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementEstimate {
    pub shots: u64,
    pub a: Vec3,
    pub b: Vec3,
    pub c: Real3x3,
    pub sinisterness: f64,
    pub exact: f64,
    pub standard_error: f64,
}

struct Setting {
    freq: [[f64; 2]; 2],
}

fn estimate_from(settings: &[[Setting; 3]; 3], shots: u64, exact: f64) -> MeasurementEstimate {
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    let mut c = Real3x3::zeros();
    let mut var = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let f = &settings[i][j].freq;
            let (ex, ey, exy) = moments(f);
            a[i] += ex / 3.0;
            b[j] += ey / 3.0;
            let cij = exy - ex * ey;
            c[(i, j)] = cij;
            // influence function of the plug-in covariance
            let mut m = 0.0;
            for (xi, x) in [1.0, -1.0].into_iter().enumerate() {
                for (yi, y) in [1.0, -1.0].into_iter().enumerate() {
                    let d = (x - ex) * (y - ey) - cij;
                    m += f[xi][yi] * d * d;
                }
            }
            var[i][j] = m / shots as f64;
        }
    }
    let s = det3_levi_civita(&c);
    let cof = cofactors(&c);
    let se2: f64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| cof[i][j].powi(2) * var[i][j]).sum();
    MeasurementEstimate {
        shots,
        a,
        b,
        c,
        sinisterness: s,
        exact,
        standard_error: se2.sqrt(),
    }
}

fn cofactors(c: &Real3x3) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            out[i][j] = c[(r0, c0)] * c[(r1, c1)] - c[(r0, c1)] * c[(r1, c0)];
        }
    }
    out
}

/// Draws `shots` outcome pairs for each of the nine settings `(σ_i, σ_j)` and
/// estimates `a`, `b`, `c` and `S = det c` from the counts.
pub fn simulate_measurements(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<MeasurementEstimate> {
    if shots == 0 {
        return Err(Error::Constraint("shots must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let settings: [[Setting; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let p = joint_probabilities(rho, i + 1, j + 1);
            let counts = multinomial(&mut rng, shots, &[p[0][0], p[0][1], p[1][0], p[1][1]]);
            let n = shots as f64;
            Setting {
                freq: [[counts[0] as f64 / n, counts[1] as f64 / n], [counts[2] as f64 / n, counts[3] as f64 / n]],
            }
        })
    });
    Ok(estimate_from(&settings, shots, sinisterness(rho)))
}

/// The estimator evaluated on exact outcome probabilities.
pub fn exact_estimate(rho: &DensityMatrix) -> MeasurementEstimate {
    let settings: [[Setting; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| Setting { freq: joint_probabilities(rho, i + 1, j + 1) }));
    let mut e = estimate_from(&settings, u64::MAX, sinisterness(rho));
    e.standard_error = 0.0;
    e
}

fn multinomial(rng: &mut StateRng, n: u64, p: &[f64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut left = n;
    let mut mass = 1.0;
    for k in 0..3 {
        if left == 0 {
            break;
        }
        let q = if mass > 0.0 { (p[k] / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(left, q).expect("probability in [0, 1]").sample(rng);
        out[k] = draw;
        left -= draw;
        mass -= p[k];
    }
    out[3] = left;
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub shots: u64,
    pub rms_error: f64,
    pub mean_bias: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub exact: f64,
    pub repeats: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log rms` against `log shots`; absent for a
    /// single rung.
    pub slope: Option<f64>,
}

/// RMS error of the estimated sinisterness over `repeats` runs per rung of
/// the shot ladder.
pub fn estimator_convergence(rho: &DensityMatrix, ladder: &[u64], repeats: usize, seed: u64) -> Result<ConvergenceTable> {
    if ladder.is_empty() || repeats == 0 {
        return Err(Error::Constraint("empty ladder or zero repeats".into()));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) || ladder[0] == 0 {
        return Err(Error::Constraint("shot ladder must be positive and ascending".into()));
    }
    let exact = sinisterness(rho);
    let rows: Vec<ConvergenceRow> = ladder
        .iter()
        .enumerate()
        .map(|(rung, &shots)| {
            let errors: Vec<f64> = (0..repeats)
                .into_par_iter()
                .map(|k| {
                    let s = derive_seed(derive_seed(seed, rung as u64), k as u64);
                    simulate_measurements(rho, shots, s).map(|e| e.sinisterness - exact).unwrap_or(f64::NAN)
                })
                .collect();
            let n = errors.len() as f64;
            ConvergenceRow {
                shots,
                rms_error: (errors.iter().map(|e| e * e).sum::<f64>() / n).sqrt(),
                mean_bias: errors.iter().sum::<f64>() / n,
            }
        })
        .collect();
    let slope = (rows.len() > 1).then(|| {
        let xs: Vec<f64> = rows.iter().map(|r| (r.shots as f64).ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.rms_error.ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(ConvergenceTable { exact, repeats, rows, slope })
}

/// Checks that the exact-probability estimator reproduces the Bloch data.
pub fn exact_estimate_defect(rho: &DensityMatrix) -> Result<f64> {
    let e = exact_estimate(rho);
    let d = decompose(rho)?;
    let mut worst = e.c.max_abs_diff(&d.c);
    for i in 0..3 {
        worst = worst.max((e.a[i] - d.a[i]).abs()).max((e.b[i] - d.b[i]).abs());
    }
    Ok(worst)
}
