use super::matrix::{cross3, dot3, norm3, scale3, sub3, Real3x3, Vec3};

/// Singular values below this are treated as zero when completing `U`.
pub const NULL_SINGULAR_VALUE: f64 = 1e-12;

/// Factors `m = U diag(s) V^T`, singular values nonincreasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Svd3 {
    pub u: Real3x3,
    pub s: Vec3,
    pub v: Real3x3,
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric 3×3 matrix.
/// Returns eigenvalues and the matrix whose columns are the eigenvectors.
pub fn symmetric_eigen3(a: &Real3x3) -> (Vec3, Real3x3) {
    let mut a = *a;
    let mut v = Real3x3::identity();
    for _sweep in 0..64 {
        let off = a.0[0][1].powi(2) + a.0[0][2].powi(2) + a.0[1][2].powi(2);
        let diag = a.0[0][0].powi(2) + a.0[1][1].powi(2) + a.0[2][2].powi(2);
        if off <= f64::EPSILON * f64::EPSILON * diag * 1e-4 || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a.0[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a.0[q][q] - a.0[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A <- J^T A J with J the (p, q) plane rotation.
            for k in 0..3 {
                let akp = a.0[k][p];
                let akq = a.0[k][q];
                a.0[k][p] = c * akp - s * akq;
                a.0[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a.0[p][k];
                let aqk = a.0[q][k];
                a.0[p][k] = c * apk - s * aqk;
                a.0[q][k] = s * apk + c * aqk;
            }
            for k in 0..3 {
                let vkp = v.0[k][p];
                let vkq = v.0[k][q];
                v.0[k][p] = c * vkp - s * vkq;
                v.0[k][q] = s * vkp + c * vkq;
            }
        }
    }
    ([a.0[0][0], a.0[1][1], a.0[2][2]], v)
}

fn normalize(v: Vec3) -> Vec3 {
    let n = norm3(&v);
    scale3(&v, 1.0 / n)
}

/// Unit vector orthogonal to `u`, picked deterministically from the
/// coordinate axis least aligned with `u`.
fn orthogonal_unit(u: &Vec3) -> Vec3 {
    let axis = (0..3)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    normalize(cross3(u, &e))
}

/// Singular value decomposition of a real 3×3 matrix.
///
/// `V` holds the eigenvectors of `m^T m` (Jacobi), singular values are the
/// norms `|m v_i|`, and `U` is built column by column from `m v_i / s_i` with
/// Gram-Schmidt. The third column of `U` is always `±u1 × u2`, the sign taken
/// from `m v3` when `s3` is resolvable, so the chirality signs `det U`,
/// `det V` are deterministic. Null columns are completed by cross products.
pub fn svd3(m: &Real3x3) -> Svd3 {
    let (_, vecs) = symmetric_eigen3(&(m.transpose() * *m));
    let mut cols: Vec<(f64, Vec3, Vec3)> = (0..3)
        .map(|i| {
            let v = vecs.column(i);
            let mv = m.mul_vec(&v);
            (norm3(&mv), v, mv)
        })
        .collect();
    cols.sort_by(|a, b| b.0.total_cmp(&a.0));

    let s = [cols[0].0, cols[1].0, cols[2].0];
    let v = Real3x3::from_columns([cols[0].1, cols[1].1, cols[2].1]);

    let u1 = if s[0] >= NULL_SINGULAR_VALUE {
        scale3(&cols[0].2, 1.0 / s[0])
    } else {
        [1.0, 0.0, 0.0]
    };
    let u1 = normalize(u1);
    let u2 = if s[1] >= NULL_SINGULAR_VALUE {
        let w = cols[1].2;
        normalize(sub3(&w, &scale3(&u1, dot3(&u1, &w))))
    } else {
        orthogonal_unit(&u1)
    };
    let mut u3 = cross3(&u1, &u2);
    if s[2] >= NULL_SINGULAR_VALUE && dot3(&u3, &cols[2].2) < 0.0 {
        u3 = scale3(&u3, -1.0);
    }
    let u = Real3x3::from_columns([u1, u2, normalize(u3)]);
    Svd3 { u, s, v }
}
