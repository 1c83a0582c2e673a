//! Block linear-fractional transforms M_A(X) = A₁₁ + A₁₂X(I − A₂₂X)⁻¹A₂₁ at
//! the two 3×3 splittings, and the norm identities they satisfy.
//!
//! With the (1,2)×(1,2) split and X = diag(z₂, z₃), γ̃ = (I − A₂₂X)⁻¹A₂₁ and
//! η̃ = (1, Xγ̃) give
//!
//! ```text
//! 1 − G(w)* G(z) = γ̃(w)*(I − W*Z)γ̃(z) + η̃(w)*(I − A*A)η̃(z),
//! ```
//!
//! and with the (2,1)×(2,1) split, γ = (1 − a₃₃z)⁻¹(a₃₁ a₃₂), η = (I₂; zγ),
//!
//! ```text
//! I₂ − F(w)* F(z) = γ(w)*(1 − w̄z)γ(z) + η(w)*(I − A*A)η(z).
//! ```
//!
//! Both follow from Aη = (value; γ), so the defects are pure rounding error.

use crate::core_types::{Complex, Matrix2, Matrix3, ONE, ZERO};
use crate::error::{MudomError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSplit {
    /// A₁₁ is 1×1, A₂₂ is 2×2.
    OnePlusTwo,
    /// A₁₁ is 2×2, A₂₂ is 1×1.
    TwoPlusOne,
}

/// Argument or value of a transform: scalar or 2×2 block, depending on the split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Block {
    Scalar(Complex),
    Matrix(Matrix2),
}

/// γ̃ and η̃ for the (1,2) split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaEta2d {
    pub gamma: [Complex; 2],
    pub eta: [Complex; 3],
}

/// γ (a 1×2 row) and η = (I₂; zγ) (a 3×2 matrix) for the (2,1) split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaEta1d {
    pub gamma: [Complex; 2],
    pub eta: [[Complex; 2]; 3],
}

/// The 1+1 transform of a 2×2 matrix: m₁₁ + m₁₂ z (1 − m₂₂ z)⁻¹ m₂₁.
pub fn mobius_scalar(m: &Matrix2, z: Complex, tol: f64) -> Result<Complex> {
    let d = 1.0 - m.0[1][1] * z;
    if d.norm() <= tol {
        return Err(MudomError::SingularResolvent(d.norm()));
    }
    Ok(m.0[0][0] + m.0[0][1] * z * m.0[1][0] / d)
}

fn lower_block(a: &Matrix3) -> Matrix2 {
    Matrix2([[a.0[1][1], a.0[1][2]], [a.0[2][1], a.0[2][2]]])
}

/// (I − A₂₂X)⁻¹ for the (1,2) split.
fn resolvent_1p2(a: &Matrix3, x: &Matrix2, tol: f64) -> Result<Matrix2> {
    let m = Matrix2::identity().add(&lower_block(a).mul(x).scale(-ONE));
    m.inverse(tol)
}

pub fn mobius(a: &Matrix3, split: BlockSplit, x: &Block, tol: f64) -> Result<Block> {
    match (split, x) {
        (BlockSplit::OnePlusTwo, Block::Matrix(x)) => {
            let r = resolvent_1p2(a, x, tol)?;
            let g = r.mul(&Matrix2([[a.0[1][0], ZERO], [a.0[2][0], ZERO]]));
            let row = Matrix2([[a.0[0][1], a.0[0][2]], [ZERO, ZERO]]).mul(x).mul(&g);
            Ok(Block::Scalar(a.0[0][0] + row.0[0][0]))
        }
        (BlockSplit::TwoPlusOne, Block::Scalar(z)) => {
            let d = 1.0 - a.0[2][2] * z;
            if d.norm() <= tol {
                return Err(MudomError::SingularResolvent(d.norm()));
            }
            let k = z / d;
            let f = Matrix2::from_fn(|i, j| a.0[i][j] + a.0[i][2] * k * a.0[2][j]);
            Ok(Block::Matrix(f))
        }
        _ => Err(MudomError::DomainViolation(
            "block argument does not match the split".into(),
        )),
    }
}

fn diag2(z2: Complex, z3: Complex) -> Matrix2 {
    Matrix2([[z2, ZERO], [ZERO, z3]])
}

/// G_A(diag(z₂, z₃)).
pub fn g_of_A(a: &Matrix3, z2: Complex, z3: Complex, tol: f64) -> Result<Complex> {
    match mobius(a, BlockSplit::OnePlusTwo, &Block::Matrix(diag2(z2, z3)), tol)? {
        Block::Scalar(v) => Ok(v),
        Block::Matrix(_) => unreachable!("(1,2) split yields a scalar"),
    }
}

/// F_A(z₃).
pub fn f_of_A(a: &Matrix3, z3: Complex, tol: f64) -> Result<Matrix2> {
    match mobius(a, BlockSplit::TwoPlusOne, &Block::Scalar(z3), tol)? {
        Block::Matrix(m) => Ok(m),
        Block::Scalar(_) => unreachable!("(2,1) split yields a block"),
    }
}

pub fn gamma_eta_2d(a: &Matrix3, z2: Complex, z3: Complex, tol: f64) -> Result<GammaEta2d> {
    let r = resolvent_1p2(a, &diag2(z2, z3), tol)?;
    let g0 = r.0[0][0] * a.0[1][0] + r.0[0][1] * a.0[2][0];
    let g1 = r.0[1][0] * a.0[1][0] + r.0[1][1] * a.0[2][0];
    Ok(GammaEta2d { gamma: [g0, g1], eta: [ONE, z2 * g0, z3 * g1] })
}

pub fn gamma_eta_1d(a: &Matrix3, z3: Complex, tol: f64) -> Result<GammaEta1d> {
    let d = 1.0 - a.0[2][2] * z3;
    if d.norm() <= tol {
        return Err(MudomError::SingularResolvent(d.norm()));
    }
    let gamma = [a.0[2][0] / d, a.0[2][1] / d];
    Ok(GammaEta1d {
        gamma,
        eta: [[ONE, ZERO], [ZERO, ONE], [z3 * gamma[0], z3 * gamma[1]]],
    })
}

/// u* M v for a 3×3 M.
fn quad3(u: &[Complex; 3], m: &Matrix3, v: &[Complex; 3]) -> Complex {
    let mut s = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            s += u[i].conj() * m.0[i][j] * v[j];
        }
    }
    s
}

fn defect_matrix(a: &Matrix3) -> Matrix3 {
    Matrix3::identity().sub(&a.adjoint().mul(a))
}

pub fn identity_defect_2d(
    a: &Matrix3,
    z: (Complex, Complex),
    w: (Complex, Complex),
    tol: f64,
) -> Result<f64> {
    let gz = g_of_A(a, z.0, z.1, tol)?;
    let gw = g_of_A(a, w.0, w.1, tol)?;
    let ez = gamma_eta_2d(a, z.0, z.1, tol)?;
    let ew = gamma_eta_2d(a, w.0, w.1, tol)?;
    let lhs = 1.0 - gw.conj() * gz;
    let rhs = ew.gamma[0].conj() * (1.0 - w.0.conj() * z.0) * ez.gamma[0]
        + ew.gamma[1].conj() * (1.0 - w.1.conj() * z.1) * ez.gamma[1]
        + quad3(&ew.eta, &defect_matrix(a), &ez.eta);
    Ok((lhs - rhs).norm())
}

pub fn identity_defect_1d(a: &Matrix3, z3: Complex, w3: Complex, tol: f64) -> Result<f64> {
    let fz = f_of_A(a, z3, tol)?;
    let fw = f_of_A(a, w3, tol)?;
    let ez = gamma_eta_1d(a, z3, tol)?;
    let ew = gamma_eta_1d(a, w3, tol)?;
    let d = defect_matrix(a);
    let lhs = Matrix2::identity().add(&fw.adjoint().mul(&fz).scale(-ONE));
    let scale = 1.0 - w3.conj() * z3;
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let col = |e: &GammaEta1d, k: usize| [e.eta[0][k], e.eta[1][k], e.eta[2][k]];
            let rhs = ew.gamma[i].conj() * scale * ez.gamma[j] + quad3(&col(&ew, i), &d, &col(&ez, j));
            worst = worst.max((lhs.0[i][j] - rhs).norm());
        }
    }
    Ok(worst)
}

/// G_{F_A(z₃)}(z₂): the (2,1) transform followed by the scalar one.
pub fn cascade(a: &Matrix3, z2: Complex, z3: Complex, tol: f64) -> Result<Complex> {
    let f = f_of_A(a, z3, tol)?;
    mobius_scalar(&f, z2, tol)
}
