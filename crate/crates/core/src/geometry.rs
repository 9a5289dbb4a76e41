//! Tetrahedron volumes over Bloch vectors, the separable-state determinant
//! formula and a search for the largest tetrahedron inscribed in the unit
//! sphere.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cross3, dot3, norm3, scale3, sub3, Vec3};
use crate::rng::{derive_seed, rng_from_seed, StateRng};
use crate::states::EnsembleSpec;

/// `8 / (9√3)`, the volume of the regular tetrahedron inscribed in the unit
/// sphere.
pub const MAX_VOLUME: f64 = 0.513_200_239_279_667_4;

/// Edge length of that tetrahedron, `√(8/3)`.
pub const REGULAR_EDGE: f64 = 1.632_993_161_855_452;

const RESTARTS: usize = 10;

/// Four points in space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VertexQuad(pub [Vec3; 4]);

impl VertexQuad {
    /// Regular tetrahedron on the unit sphere with positive volume.
    pub fn regular() -> Self {
        let s = 1.0 / 3f64.sqrt();
        VertexQuad([[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]])
    }

    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut q = *self;
        q.0.swap(i, j);
        q
    }

    /// The six pairwise distances.
    pub fn edges(&self) -> [f64; 6] {
        let p = &self.0;
        let mut out = [0.0; 6];
        let mut n = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                out[n] = norm3(&sub3(&p[i], &p[j]));
                n += 1;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

/// Signed volume `[(a1-a2)×(a2-a3)]·(a3-a4) / 6`.
///
/// Evaluated on the lexicographically sorted vertices and multiplied by the
/// sign of the sorting permutation, so a transposition flips the sign
/// bit-exactly.
pub fn quad_volume(q: &VertexQuad) -> f64 {
    let mut order = [0usize, 1, 2, 3];
    let key = |n: usize| q.0[n];
    let mut sign = 1.0;
    for i in 1..4 {
        let mut j = i;
        while j > 0 && lex_less(&key(order[j]), &key(order[j - 1])) {
            order.swap(j, j - 1);
            sign = -sign;
            j -= 1;
        }
    }
    let [a1, a2, a3, a4] = order.map(key);
    sign * dot3(&cross3(&sub3(&a1, &a2), &sub3(&a2, &a3)), &sub3(&a3, &a4)) / 6.0
}

fn lex_less(x: &Vec3, y: &Vec3) -> bool {
    for i in 0..3 {
        match x[i].total_cmp(&y[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// `T_klm = [(a_k - ā)×(a_l - ā)]·(a_m - ā)` with `ā = Σ p_n a_n`.
/// Indices are 0-based.
pub fn triple_product(q: &VertexQuad, weights: &[f64; 4], k: usize, l: usize, m: usize) -> Result<f64> {
    if k > 3 || l > 3 || m > 3 || k == l || l == m || k == m {
        return Err(Error::Index(k, l, m));
    }
    let mut mean = [0.0; 3];
    for (p, a) in weights.iter().zip(&q.0) {
        for i in 0..3 {
            mean[i] += p * a[i];
        }
    }
    let (x, y, z) = (sub3(&q.0[k], &mean), sub3(&q.0[l], &mean), sub3(&q.0[m], &mean));
    Ok(dot3(&cross3(&x, &y), &z))
}

/// `36 p1 p2 p3 p4 V(a) V(b)` for a product ensemble. Fewer than four terms
/// give zero.
pub fn separable_sinisterness(e: &EnsembleSpec) -> Result<f64> {
    if e.terms.len() > 4 {
        return Err(Error::Cardinality(e.terms.len()));
    }
    if e.terms.len() < 4 {
        return Ok(0.0);
    }
    let a = VertexQuad(std::array::from_fn(|n| e.terms[n].a.bloch_vector()));
    let b = VertexQuad(std::array::from_fn(|n| e.terms[n].b.bloch_vector()));
    let p: f64 = e.terms.iter().map(|t| t.weight).product();
    Ok(36.0 * p * quad_volume(&a) * quad_volume(&b))
}

/// Result of a volume search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumeSearch {
    pub volume: f64,
    pub vertices: VertexQuad,
    pub iterations: usize,
}

fn to_sphere(theta: f64, phi: f64) -> Vec3 {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn angles(v: &Vec3) -> (f64, f64) {
    let n = norm3(v);
    let u = if n > 0.0 { scale3(v, 1.0 / n) } else { [0.0, 0.0, 1.0] };
    (u[2].clamp(-1.0, 1.0).acos(), u[1].atan2(u[0]))
}

/// Hill climbing in spherical coordinates from `start`, with a step that
/// grows on success and shrinks on failure.
pub fn climb_volume(start: &VertexQuad, iterations: usize, rng: &mut StateRng) -> VolumeSearch {
    let mut ang: [(f64, f64); 4] = std::array::from_fn(|n| angles(&start.0[n]));
    let place = |ang: &[(f64, f64); 4]| VertexQuad(std::array::from_fn(|n| to_sphere(ang[n].0, ang[n].1)));
    let mut best = place(&ang);
    let mut best_v = quad_volume(&best).abs();
    let mut step = 0.3;
    for _ in 0..iterations {
        let mut trial = ang;
        for t in trial.iter_mut() {
            t.0 += step * rng.sample::<f64, _>(StandardNormal);
            t.1 += step * rng.sample::<f64, _>(StandardNormal);
        }
        let q = place(&trial);
        let v = quad_volume(&q).abs();
        if v > best_v {
            ang = trial;
            best = q;
            best_v = v;
            step *= 1.5;
        } else {
            step *= 0.9;
        }
        step = step.clamp(1e-12, 1.0);
    }
    VolumeSearch { volume: best_v, vertices: best, iterations }
}

/// Largest `|V|` found over four unit vectors by random restarts and hill
/// climbing, spending `iterations` steps in total.
pub fn max_volume_search(seed: u64, iterations: usize) -> VolumeSearch {
    let restarts = RESTARTS.min(iterations.max(1));
    let per = (iterations.max(1) / restarts).max(1);
    (0..restarts)
        .map(|k| {
            let mut rng = rng_from_seed(derive_seed(seed, k as u64));
            let start = VertexQuad(std::array::from_fn(|_| random_unit(&mut rng)));
            climb_volume(&start, per, &mut rng)
        })
        .max_by(|x, y| x.volume.total_cmp(&y.volume))
        .map(|mut s| {
            s.iterations = iterations;
            s
        })
        .expect("at least one restart")
}

fn random_unit(rng: &mut StateRng) -> Vec3 {
    loop {
        let v: Vec3 = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = norm3(&v);
        if n > 1e-8 {
            return scale3(&v, 1.0 / n);
        }
    }
}
