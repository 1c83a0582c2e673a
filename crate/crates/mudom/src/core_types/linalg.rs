//! Fixed-size complex matrices and the handful of dense operations the
//! domain code needs: determinants, principal minors, operator norms and
//! the permutation conjugations that leave μ invariant.

use crate::error::{MudomError, Result};
use num_complex::Complex64;

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[Complex; 2]; 2]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3(pub [[Complex; 3]; 3]);

impl Matrix2 {
    pub fn zero() -> Self {
        Matrix2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex) -> Self {
        Matrix2([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn det(&self) -> Complex {
        let a = &self.0;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Matrix2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * other.0[0][j] + self.0[i][1] * other.0[1][j];
            }
        }
        Matrix2(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += other.0[i][j];
            }
        }
        Matrix2(out)
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|v| *v *= c);
        Matrix2(out)
    }

    /// Inverse by adjugate; fails when |det| ≤ `tol`.
    pub fn inverse(&self, tol: f64) -> Result<Self> {
        let d = self.det();
        if d.norm() <= tol {
            return Err(MudomError::SingularResolvent(d.norm()));
        }
        let a = &self.0;
        Ok(Matrix2([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]))
    }

    pub fn operator_norm(&self) -> f64 {
        let h = self.adjoint().mul(self);
        hermitian2_max_eig(h.0[0][0].re, h.0[1][1].re, h.0[0][1]).max(0.0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }
}

impl Matrix3 {
    pub fn zero() -> Self {
        Matrix3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 3])
    }

    pub fn diag(d: [Complex; 3]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    /// Entry with 1-based indices, matching the a_ij notation.
    pub fn a(&self, i: usize, j: usize) -> Complex {
        self.0[i - 1][j - 1]
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - other.0[i][j])
    }

    pub fn det(&self) -> Complex {
        det3(self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }

    pub fn operator_norm(&self) -> f64 {
        nalgebra::Matrix3::from_fn(|i, j| self.0[i][j]).singular_values().max()
    }

    /// Largest entry modulus of M - I; used for unitarity checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn det3(a: &Matrix3) -> Complex {
    let m = &a.0;
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of the principal 2×2 submatrix on rows/columns `rows`
/// (1-based, one of (1,2), (1,3), (2,3)).
pub fn principal_minor(a: &Matrix3, rows: (usize, usize)) -> Result<Complex> {
    match rows {
        (1, 2) | (1, 3) | (2, 3) => {
            let (i, j) = rows;
            Ok(a.a(i, i) * a.a(j, j) - a.a(i, j) * a.a(j, i))
        }
        (i, j) => Err(MudomError::InvalidIndexPair(i, j)),
    }
}

/// The three conjugations under which μ_E(3;3;1,1,1) is invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// J₁AJ₁ with J₁ the anti-diagonal flip.
    J1J1,
    /// J₁AJ₂ with the cyclic pair (3,1,2).
    J1J2,
    /// J̃₁AJ̃₂ with the cyclic pair (2,3,1).
    J1tJ2t,
}

impl Conjugation {
    pub const ALL: [Conjugation; 3] = [Conjugation::J1J1, Conjugation::J1J2, Conjugation::J1tJ2t];

    /// Row permutation σ such that the result is b_ij = a_{σ(i)σ(j)}.
    fn perm(self) -> [usize; 3] {
        match self {
            Conjugation::J1J1 => [2, 1, 0],
            Conjugation::J1J2 => [2, 0, 1],
            Conjugation::J1tJ2t => [1, 2, 0],
        }
    }
}

pub fn conjugate_by(a: &Matrix3, which: Conjugation) -> Matrix3 {
    let p = which.perm();
    Matrix3::from_fn(|i, j| a.0[p[i]][p[j]])
}

fn hermitian2_max_eig(a: f64, d: f64, b: Complex) -> f64 {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    mean + half.hypot(b.norm())
}
