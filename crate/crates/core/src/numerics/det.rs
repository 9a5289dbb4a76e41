use super::matrix::Real3x3;

/// Sign of the permutation `(i, j, k)` of `(0, 1, 2)`, zero when an index repeats.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Determinant as the fully contracted double Levi-Civita sum
/// `(1/6) Σ ε_ijk ε_lmn m_il m_jm m_kn`.
///
/// Only the 36 index combinations with both symbols nonzero contribute, so the
/// sum runs over pairs of permutations.
pub fn det3_levi_civita(m: &Real3x3) -> f64 {
    const PERMS: [(usize, usize, usize); 6] =
        [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)];
    let mut sum = 0.0;
    for &(i, j, k) in &PERMS {
        let e1 = levi_civita(i, j, k);
        for &(l, p, n) in &PERMS {
            let e2 = levi_civita(l, p, n);
            sum += e1 * e2 * m.0[i][l] * m.0[j][p] * m.0[k][n];
        }
    }
    sum / 6.0
}
