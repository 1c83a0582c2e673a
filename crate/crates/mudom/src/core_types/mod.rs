//! Scalars, fixed-size vectors and matrices, sampling, scan configuration
//! and the JSON encodings shared by every other module.

pub mod json;
pub mod linalg;
pub mod points;
pub mod sampling;
pub mod scan;

pub use linalg::{conjugate_by, det3, principal_minor, Complex, Conjugation, Matrix2, Matrix3, ONE, ZERO};
pub use points::{Point2, Point3, Point5, Point7};
pub use sampling::{random_contraction, random_unitary};
pub use scan::{ScanConfig, State, Verdict};

pub fn operator_norm3(a: &Matrix3) -> f64 {
    a.operator_norm()
}

pub fn operator_norm2(a: &Matrix2) -> f64 {
    a.operator_norm()
}
