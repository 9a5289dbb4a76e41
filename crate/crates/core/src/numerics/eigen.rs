use serde::{Deserialize, Serialize};

use super::matrix::{norm4, Complex4x4, C64, ONE, ZERO};
use super::poly::{solve_cubic, solve_quadratic, solve_quartic};

/// Eigenvalues whose imaginary part is below `IMAG_PROJECTION * (1 + |re|)`
/// are projected onto the real axis.
pub const IMAG_PROJECTION: f64 = 1e-9;

// Roots below this multiple of eps·‖M‖ are indistinguishable from zero.
const ZERO_FLOOR: f64 = 16.0;

/// Four eigenvalues sorted by descending real part, ties by descending
/// imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalues4(pub [C64; 4]);

impl Eigenvalues4 {
    pub fn new(mut values: [C64; 4]) -> Self {
        values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Eigenvalues4(values)
    }

    pub fn real_parts(&self) -> [f64; 4] {
        self.0.map(|z| z.re)
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.0.iter()
    }
}

/// Characteristic polynomial `x^4 + c3 x^3 + c2 x^2 + c1 x + c0` by the
/// Faddeev-LeVerrier recursion; returns `[c0, c1, c2, c3]`.
pub fn characteristic_coefficients(m: &Complex4x4) -> [C64; 4] {
    let id = Complex4x4::identity();
    let mut coeffs = [ZERO; 4];
    let mut mk = *m;
    let mut c = -mk.trace();
    coeffs[3] = c;
    for k in 2..=4 {
        mk = *m * (mk + id.scale(c));
        c = -mk.trace() / k as f64;
        coeffs[4 - k] = c;
    }
    coeffs
}

/// Eigenvalues of a general complex 4×4 matrix.
///
/// The characteristic polynomial comes from Faddeev-LeVerrier and is solved in
/// closed form with a Newton step per root. Roots are then grouped into
/// clusters; each cluster's invariant subspace is found by shifted subspace
/// iteration and its eigenvalues are recomputed from the projected matrix,
/// recursively. The projected matrix has the scale of the cluster, so
/// eigenvalues far below `eps·‖M‖^4` (which the 4×4 polynomial cannot carry)
/// are recovered to working precision. Roots below `16·eps·‖M‖` are set to
/// zero and near-real roots are projected onto the real axis.
pub fn eig4(m: &Complex4x4) -> Eigenvalues4 {
    let norm = m.frobenius_norm();
    let values = resolve(&DMat::from_4x4(m), 0);
    let floor = ZERO_FLOOR * f64::EPSILON * norm;
    let mut roots = [ZERO; 4];
    for (slot, mut r) in roots.iter_mut().zip(values) {
        if r.norm() <= floor {
            r = ZERO;
        }
        if r.im.abs() < IMAG_PROJECTION * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
        *slot = r;
    }
    Eigenvalues4::new(roots)
}

// Roots closer than this fraction of the spectral scale share a cluster.
const CLUSTER_GAP: f64 = 1e-3;
const MAX_SUBSPACE_ITERATIONS: usize = 100;
// Clusters are grown until every outside root is this many cluster radii away.
const SEPARATION: f64 = 2.0;
const MAX_DEPTH: usize = 4;

fn resolve(m: &DMat, depth: usize) -> Vec<C64> {
    let n = m.n;
    if n == 1 {
        return vec![m.at(0, 0)];
    }
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return vec![ZERO; n];
    }
    let roots = m.polynomial_roots();
    if depth >= MAX_DEPTH || roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return roots;
    }
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max).max(norm * f64::EPSILON);
    let clusters = grow_clusters(&roots, single_linkage(&roots, CLUSTER_GAP * scale));
    if clusters.len() == 1 {
        // One cluster: shift it to the origin and resolve at the smaller scale.
        let sigma = roots.iter().sum::<C64>() / n as f64;
        let spread = roots.iter().map(|r| (r - sigma).norm()).fold(0.0, f64::max);
        if spread < 0.5 * scale {
            return resolve(&m.shifted(sigma), depth + 1).into_iter().map(|r| r + sigma).collect();
        }
        return roots;
    }
    let mut out = Vec::with_capacity(n);
    for cluster in clusters {
        let k = cluster.len();
        let sigma = cluster.iter().map(|&i| roots[i]).sum::<C64>() / k as f64;
        let basis = invariant_subspace(m, sigma, k);
        out.extend(resolve(&m.project(&basis), depth + 1));
    }
    out
}

// Merges each cluster with its nearest outside root until the subspace
// iteration for every cluster contracts by at least 1/SEPARATION per step.
fn grow_clusters(roots: &[C64], mut clusters: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let mut merge = None;
        for (ci, c) in clusters.iter().enumerate() {
            let sigma = c.iter().map(|&i| roots[i]).sum::<C64>() / c.len() as f64;
            let radius = c.iter().map(|&i| (roots[i] - sigma).norm()).fold(0.0, f64::max);
            let nearest = clusters
                .iter()
                .enumerate()
                .filter(|(cj, _)| *cj != ci)
                .flat_map(|(cj, other)| other.iter().map(move |&j| (cj, (roots[j] - sigma).norm())))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((cj, d)) = nearest {
                if d < SEPARATION * radius {
                    merge = Some((ci.min(cj), ci.max(cj)));
                    break;
                }
            }
        }
        match merge {
            Some((a, b)) => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
            }
            None => return clusters,
        }
    }
}

fn single_linkage(roots: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= gap {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match clusters.iter_mut().find(|c| label[c[0]] == label[i]) {
            Some(c) => c.push(i),
            None => clusters.push(vec![i]),
        }
    }
    clusters
}

// Orthonormal basis (as columns) of the dominant invariant subspace of
// (M - σ)^-1 with dimension k.
fn invariant_subspace(m: &DMat, sigma: C64, k: usize) -> Vec<Vec<C64>> {
    let n = m.n;
    let shifted = m.shifted(sigma);
    let mut cols: Vec<Vec<C64>> = (0..k)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let t = (1 + i + 5 * j) as f64;
                    C64::new((1.3 * t).sin() + 0.5, (0.7 * t).cos())
                })
                .collect()
        })
        .collect();
    orthonormalize(&mut cols);
    let tol = 8.0 * f64::EPSILON * m.frobenius_norm();
    for _ in 0..MAX_SUBSPACE_ITERATIONS {
        for c in cols.iter_mut() {
            *c = shifted.solve(c);
        }
        orthonormalize(&mut cols);
        if m.subspace_residual(&cols) <= tol {
            break;
        }
    }
    cols
}

fn orthonormalize(cols: &mut [Vec<C64>]) {
    let n = cols.first().map_or(0, |c| c.len());
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: C64 = done[i].iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in rest[0].iter_mut().zip(done[i].iter()) {
                    *x -= proj * q;
                }
            }
        }
        let mut nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm.is_nan() || nrm <= 1e-300 || nrm.is_infinite() {
            // Lost rank: restart this column from a unit vector.
            cols[j] = (0..n).map(|i| if i == j % n { ONE } else { ZERO }).collect();
            nrm = 1.0;
        }
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
}

/// Small dense square matrix used by the recursive eigenvalue refinement.
#[derive(Clone, Debug)]
struct DMat {
    n: usize,
    a: Vec<C64>,
}

impl DMat {
    fn from_4x4(m: &Complex4x4) -> Self {
        DMat { n: 4, a: m.0.iter().flatten().copied().collect() }
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn shifted(&self, sigma: C64) -> DMat {
        let mut out = self.clone();
        for i in 0..self.n {
            out.a[i * self.n + i] -= sigma;
        }
        out
    }

    fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    fn mul(&self, other: &DMat) -> DMat {
        let n = self.n;
        let mut a = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (0..n).map(|k| self.at(i, k) * other.at(k, j)).sum();
            }
        }
        DMat { n, a }
    }

    /// `Qᴴ M Q` for orthonormal columns `Q`.
    fn project(&self, q: &[Vec<C64>]) -> DMat {
        let k = q.len();
        let mq: Vec<Vec<C64>> = q.iter().map(|c| self.mul_vec(c)).collect();
        let mut a = vec![ZERO; k * k];
        for i in 0..k {
            for j in 0..k {
                a[i * k + j] = q[i].iter().zip(mq[j].iter()).map(|(x, y)| x.conj() * y).sum();
            }
        }
        DMat { n: k, a }
    }

    /// `‖M Q - Q (Qᴴ M Q)‖_F`, zero for an exact invariant subspace.
    fn subspace_residual(&self, q: &[Vec<C64>]) -> f64 {
        let b = self.project(q);
        let k = q.len();
        let mut total = 0.0;
        for j in 0..k {
            let mut r = self.mul_vec(&q[j]);
            for i in 0..k {
                let bij = b.at(i, j);
                for (x, qi) in r.iter_mut().zip(q[i].iter()) {
                    *x -= qi * bij;
                }
            }
            total += r.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        total.sqrt()
    }

    /// Gaussian elimination with partial pivoting; exactly singular pivots
    /// are replaced by a tiny value so the routine can serve inverse iteration.
    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut a = self.a.clone();
        let mut x = b.to_vec();
        let tiny = f64::EPSILON * self.frobenius_norm().max(f64::MIN_POSITIVE) * 1e-3;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
                .unwrap_or(col);
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                x.swap(pivot, col);
            }
            if a[col * n + col].norm() < tiny {
                a[col * n + col] = C64::new(tiny, 0.0);
            }
            for row in col + 1..n {
                let f = a[row * n + col] / a[col * n + col];
                for k in col..n {
                    let upper = a[col * n + k];
                    a[row * n + k] -= f * upper;
                }
                let upper = x[col];
                x[row] -= f * upper;
            }
        }
        for col in (0..n).rev() {
            let mut acc = x[col];
            for k in col + 1..n {
                acc -= a[col * n + k] * x[k];
            }
            x[col] = acc / a[col * n + col];
        }
        x
    }

    /// Faddeev-LeVerrier coefficients `[c0, .., c_{n-1}]` of the monic
    /// characteristic polynomial.
    fn characteristic(&self) -> Vec<C64> {
        let n = self.n;
        let mut coeffs = vec![ZERO; n];
        let mut mk = self.clone();
        let trace = |m: &DMat| (0..n).map(|i| m.at(i, i)).sum::<C64>();
        let mut c = -trace(&mk);
        coeffs[n - 1] = c;
        for k in 2..=n {
            mk = self.mul(&mk.shifted(-c));
            c = -trace(&mk) / k as f64;
            coeffs[n - k] = c;
        }
        coeffs
    }

    fn polynomial_roots(&self) -> Vec<C64> {
        let c = self.characteristic();
        let roots: Vec<C64> = match self.n {
            1 => vec![-c[0]],
            2 => solve_quadratic(c[1], c[0]).to_vec(),
            3 => solve_cubic(c[2], c[1], c[0]).to_vec(),
            _ => return solve_quartic(&[c[0], c[1], c[2], c[3]]).to_vec(),
        };
        roots.into_iter().map(|x| newton_step(&c, x)).collect()
    }
}

// One Newton step on the monic polynomial, kept if it lowers the residual.
fn newton_step(c: &[C64], x: C64) -> C64 {
    let eval = |x: C64| {
        let mut p = ONE;
        let mut dp = ZERO;
        for k in (0..c.len()).rev() {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        (p, dp)
    };
    let (p, dp) = eval(x);
    if dp.norm() == 0.0 {
        return x;
    }
    let next = x - p / dp;
    if eval(next).0.norm() < p.norm() {
        next
    } else {
        x
    }
}

/// Eigen-decomposition of a Hermitian 4×4 matrix by complex Jacobi rotations.
/// Returns real eigenvalues in descending order and the unitary matrix whose
/// columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &Complex4x4) -> ([f64; 4], Complex4x4) {
    let mut a = m.hermitian_part();
    let mut v = Complex4x4::identity();
    let scale = a.frobenius_norm();
    for _sweep in 0..50 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in p + 1..4 {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= (1e-17 * scale).powi(2) || off == 0.0 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = D R: D rotates the phase of index q so that a_pq is
                // real, R is the real plane rotation that annihilates it.
                let mut j = Complex4x4::identity();
                j[(p, p)] = C64::new(c, 0.0);
                j[(p, q)] = C64::new(s, 0.0);
                j[(q, p)] = -phase.conj() * s;
                j[(q, q)] = phase.conj() * c;
                a = j.adjoint() * a * j;
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                v = v * j;
            }
        }
    }
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let mut values = [0.0; 4];
    let mut vecs = Complex4x4::zeros();
    for (new, &old) in order.iter().enumerate() {
        values[new] = a[(old, old)].re;
        for r in 0..4 {
            vecs[(r, new)] = v[(r, old)];
        }
    }
    (values, vecs)
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn hermitian_function(m: &Complex4x4, f: impl Fn(f64) -> f64) -> Complex4x4 {
    let (values, vecs) = hermitian_eigen(m);
    let mut out = Complex4x4::zeros();
    for k in 0..4 {
        let fk = f(values[k]);
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] += vecs[(i, k)] * vecs[(j, k)].conj() * fk;
            }
        }
    }
    out
}

/// Right eigenvector for a known eigenvalue by inverse iteration.
pub fn eigenvector_for(m: &Complex4x4, value: C64) -> [C64; 4] {
    let shift = value + C64::new(1e-13 * (1.0 + value.norm()), 0.0);
    let shifted = *m - Complex4x4::identity().scale(shift);
    let mut v = [ONE, C64::new(0.5, 0.25), C64::new(-0.3, 0.7), C64::new(0.2, -0.1)];
    for _ in 0..4 {
        let w = shifted.solve(&v);
        let n = norm4(&w);
        if !n.is_finite() || n == 0.0 {
            break;
        }
        v = w.map(|x| x / n);
    }
    v
}
