use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type Vec3 = [f64; 3];
pub type CVec4 = [C64; 4];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// `<a|b>` with the conjugate on the left.
pub fn inner4(a: &CVec4, b: &CVec4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `a^T b` without conjugation.
pub fn bilinear4(a: &CVec4, b: &CVec4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm4(a: &CVec4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Real 3×3 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Real3x3(pub [[f64; 3]; 3]);

impl Real3x3 {
    pub const fn zeros() -> Self {
        Real3x3([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Real3x3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn from_diagonal(d: Vec3) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut m = Self::zeros();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = col[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        [
            dot3(&self.0[0], v),
            dot3(&self.0[1], v),
            dot3(&self.0[2], v),
        ]
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Real3x3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Real3x3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for Real3x3 {
    type Output = Real3x3;
    fn mul(self, rhs: Real3x3) -> Real3x3 {
        let mut out = Real3x3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Real 4×4 matrix, row major. Used for the Γ coherence matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Real4x4(pub [[f64; 4]; 4]);

impl Real4x4 {
    pub const fn zeros() -> Self {
        Real4x4([[0.0; 4]; 4])
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
        det
    }

    pub fn to_complex(&self) -> Complex4x4 {
        let mut m = Complex4x4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(self.0[i][j], 0.0);
            }
        }
        m
    }
}

impl Mul for Real4x4 {
    type Output = Real4x4;
    fn mul(self, rhs: Real4x4) -> Real4x4 {
        let mut out = Real4x4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Dense complex 4×4 matrix, row major, in the two-qubit computational basis
/// `|00>, |01>, |10>, |11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex4x4(pub [[C64; 4]; 4]);

impl Complex4x4 {
    pub const fn zeros() -> Self {
        Complex4x4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_diagonal([ONE; 4])
    }

    pub fn from_diagonal(d: [C64; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    /// `|a><b|`
    pub fn outer(a: &CVec4, b: &CVec4) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = a[i] * b[j].conj();
            }
        }
        m
    }

    /// Kronecker product of two 2×2 matrices; `a` acts on the first qubit.
    pub fn kron(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                t.0[j][i] = self.0[i][j].conj();
            }
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        let mut t = *self;
        t.0.iter_mut().flatten().for_each(|x| *x = x.conj());
        t
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut t = *self;
        t.0.iter_mut().flatten().for_each(|x| *x *= s);
        t
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn mul_vec(&self, v: &CVec4) -> CVec4 {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    pub fn column(&self, j: usize) -> CVec4 {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }

    /// `<a|M|b>`
    pub fn sandwich(&self, a: &CVec4, b: &CVec4) -> C64 {
        inner4(a, &self.mul_vec(b))
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap_or(col);
            if a[pivot][col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    let upper = a[col][k];
                    a[row][k] -= f * upper;
                }
            }
        }
        det
    }

    /// Classical adjugate (transposed cofactor matrix); `M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Self {
        let mut adj = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let rows: Vec<usize> = (0..4).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
                let m = |r: usize, c: usize| self.0[rows[r]][cols[c]];
                let minor = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                adj.0[j][i] = minor * sign;
            }
        }
        adj
    }

    /// Solves `M x = b` by Gaussian elimination with partial pivoting.
    /// Exactly singular pivots are replaced by a tiny value so the routine can
    /// serve inverse iteration.
    pub fn solve(&self, b: &CVec4) -> CVec4 {
        let mut a = self.0;
        let mut x = *b;
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&p, &q| a[p][col].norm().total_cmp(&a[q][col].norm()))
                .unwrap_or(col);
            a.swap(pivot, col);
            x.swap(pivot, col);
            if a[col][col].norm() < f64::EPSILON * scale * 1e-3 {
                a[col][col] = C64::new(f64::EPSILON * scale * 1e-3, 0.0);
            }
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    let upper = a[col][k];
                    a[row][k] -= f * upper;
                }
                let upper = x[col];
                x[row] -= f * upper;
            }
        }
        for col in (0..4).rev() {
            let mut acc = x[col];
            for k in col + 1..4 {
                acc -= a[col][k] * x[k];
            }
            x[col] = acc / a[col][col];
        }
        x
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

impl Index<(usize, usize)> for Complex4x4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Complex4x4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for Complex4x4 {
    type Output = Complex4x4;
    fn add(mut self, rhs: Complex4x4) -> Complex4x4 {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for Complex4x4 {
    type Output = Complex4x4;
    fn sub(mut self, rhs: Complex4x4) -> Complex4x4 {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl Neg for Complex4x4 {
    type Output = Complex4x4;
    fn neg(self) -> Complex4x4 {
        self.scale_real(-1.0)
    }
}

impl Mul for Complex4x4 {
    type Output = Complex4x4;
    fn mul(self, rhs: Complex4x4) -> Complex4x4 {
        let mut out = Complex4x4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}
