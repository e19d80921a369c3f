//! Small fixed-size linear algebra over a generic [`Scalar`].
//!
//! Everything here is frame algebra on R^3: vectors, 3x3 matrices, the
//! Levi-Civita symbol, and the handful of contractions (`tr`, `tau`, `sym2`,
//! `skew_of_vec`) that the operator stack is built from. All conventions fix
//! the orientation eps_123 = +1.

use crate::scalar::Scalar;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

/// Levi-Civita symbol with eps_123 = +1 (0-indexed arguments).
pub fn eps(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<S>(pub [S; 3]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<S>(pub [[S; 3]; 3]);

pub type V3 = Vec3<f64>;
pub type M3 = Mat3<f64>;

impl<S: Scalar> Vec3<S> {
    pub fn zero() -> Self {
        Vec3([S::zero(); 3])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = S::one();
        v
    }

    pub fn dot(self, o: Self) -> S {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Self) -> Self {
        Vec3([
            self.0[1] * o.0[2] - self.0[2] * o.0[1],
            self.0[2] * o.0[0] - self.0[0] * o.0[2],
            self.0[0] * o.0[1] - self.0[1] * o.0[0],
        ])
    }

    pub fn norm2(self) -> S {
        self.dot(self)
    }

    pub fn scale(self, s: S) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn outer(self, o: Self) -> Mat3<S> {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i] * o.0[j];
            }
        }
        m
    }

    pub fn map_value(self) -> Vec3<f64> {
        Vec3([self.0[0].value(), self.0[1].value(), self.0[2].value()])
    }
}

impl V3 {
    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn sup(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl<S: Scalar> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> IndexMut<usize> for Vec3<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.0[i]
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn zero() -> Self {
        Mat3([[S::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = S::one();
        }
        m
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn set_row(&mut self, i: usize, v: Vec3<S>) {
        self.0[i] = v.0;
    }

    pub fn transpose(self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn trace(self) -> S {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn scale(self, s: S) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] * s;
            }
        }
        m
    }

    /// Frobenius pairing sum_ij A_ij B_ij.
    pub fn inner(self, o: Self) -> S {
        let mut acc = S::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + self.0[i][j] * o.0[i][j];
            }
        }
        acc
    }

    pub fn norm2(self) -> S {
        self.inner(self)
    }

    pub fn mul_vec(self, v: Vec3<S>) -> Vec3<S> {
        Vec3([
            self.row(0).dot(v),
            self.row(1).dot(v),
            self.row(2).dot(v),
        ])
    }

    pub fn mul_mat(self, o: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = S::zero();
                for k in 0..3 {
                    acc = acc + self.0[i][k] * o.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }

    pub fn det(self) -> S {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn inverse(self) -> Self {
        let m = self.0;
        let inv_det = self.det().recip();
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let mut out = Self::zero();
        out.0[0][0] = cof(1, 2, 1, 2) * inv_det;
        out.0[0][1] = -cof(0, 2, 1, 2) * inv_det;
        out.0[0][2] = cof(0, 1, 1, 2) * inv_det;
        out.0[1][0] = -cof(1, 2, 0, 2) * inv_det;
        out.0[1][1] = cof(0, 2, 0, 2) * inv_det;
        out.0[1][2] = -cof(0, 1, 0, 2) * inv_det;
        out.0[2][0] = cof(1, 2, 0, 1) * inv_det;
        out.0[2][1] = -cof(0, 2, 0, 1) * inv_det;
        out.0[2][2] = cof(0, 1, 0, 1) * inv_det;
        out
    }

    pub fn map_value(self) -> Mat3<f64> {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j].value();
            }
        }
        m
    }
}

impl M3 {
    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn sup(self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_symmetric(self, tol: f64) -> bool {
        (self - self.transpose()).sup() <= tol
    }
}

impl<S: Scalar> Add for Mat3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] + o.0[i][j];
            }
        }
        m
    }
}

impl<S: Scalar> Sub for Mat3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] - o.0[i][j];
            }
        }
        m
    }
}

impl<S: Scalar> Neg for Mat3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = -m.0[i][j];
            }
        }
        m
    }
}

/// Skew matrix of a covector under the orientation convention:
/// `skew_of_vec(s)_ij = eps_ijk s_k`. This is the matrix form of `*_3 s`.
pub fn skew_of_vec<S: Scalar>(s: Vec3<S>) -> Mat3<S> {
    let mut m = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = S::zero();
            for k in 0..3 {
                let e = eps(i, j, k);
                if e != 0.0 {
                    acc = acc + S::from_f64(e) * s.0[k];
                }
            }
            m.0[i][j] = acc;
        }
    }
    m
}

/// Inverse of [`skew_of_vec`] on skew matrices: `v_k = 1/2 eps_ijk m_ij`.
pub fn vec_of_skew<S: Scalar>(m: Mat3<S>) -> Vec3<S> {
    Vec3([
        (m.0[1][2] - m.0[2][1]) * S::from_f64(0.5),
        (m.0[2][0] - m.0[0][2]) * S::from_f64(0.5),
        (m.0[0][1] - m.0[1][0]) * S::from_f64(0.5),
    ])
}

/// tr(a) = sum_i a_ii.
pub fn tr<S: Scalar>(a: Mat3<S>) -> S {
    a.trace()
}

/// tau(a)_k = sum_ij eps_ijk a_ij, the star of the wedge `sum_i e_i ^ a(e_i)`.
pub fn tau<S: Scalar>(a: Mat3<S>) -> Vec3<S> {
    let mut v = Vec3::zero();
    for k in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            for j in 0..3 {
                let e = eps(i, j, k);
                if e != 0.0 {
                    acc = acc + S::from_f64(e) * a.0[i][j];
                }
            }
        }
        v.0[k] = acc;
    }
    v
}

/// S(a) = a + a^T, the symmetrization without the 1/2.
pub fn sym2<S: Scalar>(a: Mat3<S>) -> Mat3<S> {
    a + a.transpose()
}

/// iota(s) S(a): contraction of the covector into the symmetrized tensor,
/// `(S(a) s)_i = sum_j (a_ij + a_ji) s_j`.
pub fn iota_sym<S: Scalar>(s: Vec3<S>, a: Mat3<S>) -> Vec3<S> {
    sym2(a).mul_vec(s)
}
