//! Closed-form oracles for the tetrablock and the symmetrized bidisc.

use crate::core_types::{Complex, Point2, Point3, ScanConfig, Verdict};
use crate::error::{MudomError, Result};

/// Ψ(z, c) = (c₁ − z c₃)/(1 − c₂ z).
pub fn psi(z: Complex, c: &Point3, tol: f64) -> Result<Complex> {
    let [c1, c2, c3] = c.0;
    let d = 1.0 - c2 * z;
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok((c1 - z * c3) / d)
}

fn one_sided(c1: Complex, c2: Complex, c3: Complex) -> f64 {
    (1.0 - c2.norm_sqr()) - ((c1 - c2.conj() * c3).norm() + (c1 * c2 - c3).norm())
}

/// Signed tetrablock margin: positive exactly on G, non-negative on Γ.
/// Both variants (c₁ ↔ c₂) are evaluated and the smaller one returned.
pub fn tetra_margin(c: &Point3) -> f64 {
    let [c1, c2, c3] = c.0;
    one_sided(c1, c2, c3).min(one_sided(c2, c1, c3))
}

pub fn in_G_tetra(c: &Point3, cfg: &ScanConfig) -> Verdict {
    Verdict::open(tetra_margin(c), vec![], cfg)
}

pub fn in_Gamma_tetra(c: &Point3, cfg: &ScanConfig) -> Verdict {
    Verdict::closed(tetra_margin(c), vec![], cfg)
}

/// Largest violation of |c₃| = 1, |c₂| ≤ 1, c₁ = c̄₂c₃.
pub fn bgamma_deviation(c: &Point3) -> f64 {
    let [c1, c2, c3] = c.0;
    let unimodular = (c3.norm() - 1.0).abs();
    let bounded = (c2.norm() - 1.0).max(0.0);
    let relation = (c1 - c2.conj() * c3).norm();
    unimodular.max(bounded).max(relation)
}

pub fn in_bGamma_tetra(c: &Point3, cfg: &ScanConfig) -> Verdict {
    Verdict::closed(-bgamma_deviation(c), vec![], cfg)
}

/// θ₁(s, p) = (s/2, s/2, p).
pub fn bidisc_to_tetra(q: &Point2) -> Point3 {
    let h = q.s() * 0.5;
    Point3([h, h, q.p()])
}

pub fn in_G_bidisc(q: &Point2, cfg: &ScanConfig) -> Verdict {
    in_G_tetra(&bidisc_to_tetra(q), cfg)
}

pub fn in_Gamma_bidisc(q: &Point2, cfg: &ScanConfig) -> Verdict {
    in_Gamma_tetra(&bidisc_to_tetra(q), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::sampling::{disc_point, gaussian_complex, rng};
    use crate::core_types::{Matrix2, State};
    use crate::realization::mobius_scalar;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }
    fn p3(a: f64, b: f64, d: f64) -> Point3 {
        Point3::from_re([a, b, d])
    }

    #[test]
    fn psi_examples() {
        let cc = Point3([c(0.3, 0.1), c(0.2, 0.0), c(0.5, 0.5)]);
        assert_eq!(psi(c(0.0, 0.0), &cc, 1e-9).unwrap(), cc.0[0]);
        assert_eq!(psi(c(0.5, 0.0), &p3(0.0, 0.0, 1.0), 1e-9).unwrap(), c(-0.5, 0.0));
        assert!(psi(c(1.0, 0.0), &p3(0.0, 1.0, 0.0), 1e-9).is_err());
    }

    #[test]
    fn psi_matches_scalar_lft() {
        let mut r = rng(11);
        for _ in 0..200 {
            let m = Matrix2([
                [gaussian_complex(&mut r), gaussian_complex(&mut r)],
                [gaussian_complex(&mut r), gaussian_complex(&mut r)],
            ]);
            let z = disc_point(&mut r, 0.3);
            let cc = Point3([m.0[0][0], m.0[1][1], m.det()]);
            let lft = mobius_scalar(&m, z, 1e-12).unwrap();
            assert!((psi(z, &cc, 1e-12).unwrap() - lft).norm() < 1e-11 * (1.0 + lft.norm()));
        }
    }

    #[test]
    fn margin_examples() {
        assert_eq!(tetra_margin(&p3(0.0, 0.0, 0.0)), 1.0);
        assert_eq!(tetra_margin(&p3(1.0, 1.0, 1.0)), 0.0);
        assert_eq!(tetra_margin(&p3(0.0, 0.0, 2.0)), -1.0);
    }

    #[test]
    fn verdict_examples() {
        let cfg = ScanConfig::default();
        assert_eq!(in_G_tetra(&p3(0.2, 0.3, 0.05), &cfg).state, State::Inside);
        assert_eq!(in_G_tetra(&p3(1.0, 1.0, 1.0), &cfg).state, State::BoundaryBand);
        assert_eq!(in_G_tetra(&p3(2.0, 0.0, 0.0), &cfg).state, State::Outside);
        assert_eq!(in_Gamma_tetra(&p3(1.0, 1.0, 1.0), &cfg).state, State::Inside);
    }

    #[test]
    fn bgamma_examples() {
        let cfg = ScanConfig::default();
        let u = c(0.3, -0.4);
        let v = Complex::from_polar(1.0, 0.7);
        assert!(in_bGamma_tetra(&Point3([u.conj() * v, u, v]), &cfg).is_inside());
        assert!(in_bGamma_tetra(&p3(0.0, 0.0, 1.0), &cfg).is_inside());
        assert_eq!(in_bGamma_tetra(&p3(0.5, 0.0, 1.0), &cfg).state, State::Outside);
    }

    #[test]
    fn bidisc_examples() {
        let cfg = ScanConfig::default();
        let q = |s: f64, p: f64| Point2::from_re([s, p]);
        assert!(in_G_bidisc(&q(0.0, 0.0), &cfg).is_inside());
        assert_eq!(in_G_bidisc(&q(2.0, 1.0), &cfg).state, State::BoundaryBand);
        // closed-set banding counts the boundary point as a member
        assert_eq!(in_Gamma_bidisc(&q(2.0, 1.0), &cfg).state, State::Inside);
        assert_eq!(in_Gamma_bidisc(&q(3.0, 0.0), &cfg).state, State::Outside);
    }

    #[test]
    fn bidisc_oracle_matches_root_moduli() {
        // (s, p) ∈ G iff both roots of λ² − sλ + p lie in D.
        let cfg = ScanConfig::default();
        let mut r = rng(5);
        for _ in 0..2000 {
            let (a, b) = (disc_point(&mut r, 1.4), disc_point(&mut r, 1.4));
            let q = Point2([a + b, a * b]);
            let expect = a.norm() < 1.0 && b.norm() < 1.0;
            if (a.norm() - 1.0).abs() < 1e-3 || (b.norm() - 1.0).abs() < 1e-3 {
                continue;
            }
            assert_eq!(in_G_bidisc(&q, &cfg).is_inside(), expect, "{a} {b}");
        }
        let _ = r.random::<u8>();
    }

    #[test]
    fn contractions_land_inside() {
        let cfg = ScanConfig::default();
        let mut r = rng(3);
        for _ in 0..1000 {
            let m = Matrix2([
                [gaussian_complex(&mut r), gaussian_complex(&mut r)],
                [gaussian_complex(&mut r), gaussian_complex(&mut r)],
            ]);
            let s = r.random_range(0.05..0.999) / m.operator_norm();
            let b = m.scale(c(s, 0.0));
            let v = in_G_tetra(&Point3([b.0[0][0], b.0[1][1], b.det()]), &cfg);
            assert!(v.margin > 0.0, "margin {}", v.margin);
        }
    }
}
