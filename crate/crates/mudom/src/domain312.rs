//! The C⁵ domains G/Γ_E(3;2;1,2), coordinates x̃ = (x₁, x₂, x₃, y₁, y₂).
//!
//! Membership: the quadratic y₂z² − y₁z + 1 has no zero in the closed disc
//! (open disc for Γ) and sup |Ψ₃| < 1 (≤ 1), where
//! Ψ₃(z) = (x₃z² − x₂z + x₁)/(y₂z² − y₁z + 1).
//! Independent checks: the p-fiber into the tetrablock, and the η-bridge
//! from C⁷ (x ∈ G₃₃₃ iff Φ_η(x) ∈ G₃₁₂ for every unimodular η).

use crate::core_types::scan::{circle_max, circle_min, disc_min, Extremum, SINGULAR};
use crate::core_types::{Complex, Matrix3, Point2, Point3, Point5, Point7, ScanConfig, Verdict, ZERO};
use crate::domain333::{in_G_333, in_Gamma_333};
use crate::error::{MudomError, Result};
use crate::tetrablock::tetra_margin;

pub fn pi312(a: &Matrix3) -> Point5 {
    let minor = |i: usize, j: usize| a.a(i, i) * a.a(j, j) - a.a(i, j) * a.a(j, i);
    Point5([a.a(1, 1), minor(1, 2) + minor(1, 3), a.det(), a.a(2, 2) + a.a(3, 3), minor(2, 3)])
}

fn psi3_parts(z: Complex, xt: &Point5) -> (Complex, Complex) {
    let [x1, x2, x3, y1, y2] = xt.0;
    ((x3 * z - x2) * z + x1, (y2 * z - y1) * z + 1.0)
}

pub fn psi3(z: Complex, xt: &Point5, tol: f64) -> Result<Complex> {
    let (n, d) = psi3_parts(z, xt);
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok(n / d)
}

/// 1 − max|w| over the roots w of w² − y₁w + y₂. The zeros of
/// y₂z² − y₁z + 1 are the reciprocals 1/w, so this is positive exactly when
/// they all lie outside the closed disc; the linear (y₂ = 0) and constant
/// cases appear as w = 0 roots and need no special handling.
pub fn root_margin(xt: &Point5) -> f64 {
    let (y1, y2) = (xt.y1(), xt.y2());
    let d = (y1 * y1 - 4.0 * y2).sqrt();
    let w = ((y1 + d) * 0.5).norm().max(((y1 - d) * 0.5).norm());
    1.0 - w
}

/// Ψ₃ is constant (= x₁) when x₃ = x₁y₂ and x₂ = x₁y₁.
pub fn is_degenerate_312(xt: &Point5, tol: f64) -> bool {
    let [x1, x2, x3, y1, y2] = xt.0;
    (x3 - x1 * y2).norm() <= tol && (x2 - x1 * y1).norm() <= tol
}

fn psi3_abs(xt: &Point5, tol: f64) -> impl Fn(Complex) -> f64 + '_ {
    move |z| {
        let (n, d) = psi3_parts(z, xt);
        let dn = d.norm();
        if dn < tol {
            SINGULAR
        } else {
            n.norm() / dn
        }
    }
}

fn sup_psi3(xt: &Point5, rho: f64, cfg: &ScanConfig) -> Extremum<1> {
    circle_max(rho, cfg.torus_n, cfg.refine_iters, psi3_abs(xt, cfg.tol))
}

fn sup_psi3_shrinking(xt: &Point5, cfg: &ScanConfig) -> Extremum<1> {
    let mut best = Extremum { value: f64::NEG_INFINITY, at: [ZERO] };
    for rho in ScanConfig::shrinking_radii() {
        let e = sup_psi3(xt, rho, cfg);
        if e.value > best.value {
            best = e;
        }
    }
    best
}

pub fn in_G_312(xt: &Point5, cfg: &ScanConfig) -> Verdict {
    let roots = root_margin(xt);
    let band = cfg.boundary_band;
    if roots < -band {
        return Verdict::open(roots, vec![], cfg);
    }
    if is_degenerate_312(xt, cfg.tol) {
        return Verdict::open(roots.min(1.0 - xt.x1().norm()), vec![ZERO], cfg);
    }
    let e = if roots > band { sup_psi3(xt, 1.0, cfg) } else { sup_psi3_shrinking(xt, cfg) };
    Verdict::open(roots.min(1.0 - e.value), e.at.to_vec(), cfg)
}

pub fn in_Gamma_312(xt: &Point5, cfg: &ScanConfig) -> Verdict {
    let roots = root_margin(xt);
    if roots < -cfg.boundary_band {
        return Verdict::closed(roots, vec![], cfg);
    }
    if is_degenerate_312(xt, cfg.tol) {
        return Verdict::closed(roots.min(1.0 - xt.x1().norm()), vec![ZERO], cfg);
    }
    let e = sup_psi3_shrinking(xt, cfg);
    Verdict::closed(roots.min(1.0 - e.value), e.at.to_vec(), cfg)
}

pub fn bidisc_fiber(xt: &Point5, z1: Complex, tol: f64) -> Result<Point2> {
    let [x1, x2, x3, y1, y2] = xt.0;
    let d = 1.0 - z1 * x1;
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok(Point2([(y1 - z1 * x2) / d, (y2 - z1 * x3) / d]))
}

fn p_fiber_parts(xt: &Point5, z: Complex) -> ([Complex; 3], Complex) {
    let [x1, x2, x3, y1, y2] = xt.0;
    (
        [2.0 * x1 - z * x2, y1 - 2.0 * z * y2, x2 - 2.0 * z * x3],
        2.0 - y1 * z,
    )
}

/// (p₁, p₂, p₃) with p₁ = (2x₁ − zx₂)/(2 − y₁z), p₂ = (y₁ − 2zy₂)/(2 − y₁z),
/// p₃ = (x₂ − 2zx₃)/(2 − y₁z).
pub fn p_fiber(xt: &Point5, z: Complex, tol: f64) -> Result<Point3> {
    let (n, d) = p_fiber_parts(xt, z);
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok(Point3(n.map(|v| v / d)))
}

fn p_fiber_margin(xt: &Point5, tol: f64) -> impl Fn(Complex) -> f64 + Sync + '_ {
    move |z| {
        let (n, d) = p_fiber_parts(xt, z);
        if d.norm() < tol {
            -SINGULAR
        } else {
            tetra_margin(&Point3(n.map(|v| v / d)))
        }
    }
}

const INNER_RADIUS: f64 = 1.0 - 1.0 / 4096.0;

/// Open-domain test: the p-fiber stays in the tetrablock over the closed disc.
pub fn in_G_312_pfiber(xt: &Point5, cfg: &ScanConfig) -> Verdict {
    let base = 1.0 - 0.5 * xt.y1().norm();
    let band = cfg.boundary_band;
    if base < -band {
        return Verdict::open(base, vec![2.0 / xt.y1()], cfg);
    }
    let rmax = if base > band { 1.0 } else { INNER_RADIUS };
    let e = disc_min(rmax, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, p_fiber_margin(xt, cfg.tol));
    Verdict::open(base.min(e.value), e.at.to_vec(), cfg)
}

/// Closed-domain test: the p-fiber stays in Γ-tetrablock over the open disc.
pub fn in_Gamma_312_pfiber(xt: &Point5, cfg: &ScanConfig) -> Verdict {
    let base = 1.0 - 0.5 * xt.y1().norm();
    if base < -cfg.boundary_band {
        return Verdict::closed(base, vec![2.0 / xt.y1()], cfg);
    }
    let e = disc_min(INNER_RADIUS, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, p_fiber_margin(xt, cfg.tol));
    Verdict::closed(base.min(0.0).min(e.value), e.at.to_vec(), cfg)
}

/// Φ_η(x) = (x₁, x₃ + ηx₅, ηx₇, x₂ + ηx₄, ηx₆).
pub fn phi_eta(x: &Point7, eta: Complex) -> Point5 {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    Point5([x1, x3 + eta * x5, eta * x7, x2 + eta * x4, eta * x6])
}

/// i₂(x) = Φ₁(x).
pub fn retract_pair(x: &Point7) -> Point5 {
    phi_eta(x, Complex::new(1.0, 0.0))
}

/// θ₂(x̃) = (x₁, y₁/2, x₂/2, y₁/2, x₂/2, y₂, x₃); a right inverse of i₂.
pub fn embed(xt: &Point5) -> Point7 {
    let [x1, x2, x3, y1, y2] = xt.0;
    Point7([x1, y1 * 0.5, x2 * 0.5, y1 * 0.5, x2 * 0.5, y2, x3])
}

pub const BRIDGE_PHASES: usize = 64;

/// Worst margin of `test(Φ_η(x))` over unimodular η: a 64-phase grid, then
/// a golden-section style refinement around the worst phase.
fn bridge_worst(x: &Point7, cfg: &ScanConfig, test: impl Fn(&Point5) -> Verdict) -> (Verdict, Complex) {
    let eval = |t: f64| {
        let eta = Complex::from_polar(1.0, t);
        (test(&phi_eta(x, eta)), eta)
    };
    let step = std::f64::consts::TAU / BRIDGE_PHASES as f64;
    let mut best_t = 0.0;
    let mut best = eval(0.0);
    for k in 1..BRIDGE_PHASES {
        let t = k as f64 * step;
        let v = eval(t);
        if v.0.margin < best.0.margin {
            best = v;
            best_t = t;
        }
    }
    let mut h = step * 0.5;
    for _ in 0..cfg.refine_iters.min(8) {
        for t in [best_t - h, best_t + h] {
            let v = eval(t);
            if v.0.margin < best.0.margin {
                best = v;
                best_t = t;
            }
        }
        h *= 0.5;
    }
    best
}

/// x ∈ G₃₃₃ through the C⁵ bridge; the witness is the worst η followed by
/// the inner witness.
pub fn bridge_in_G(x: &Point7, cfg: &ScanConfig) -> Verdict {
    let (v, eta) = bridge_worst(x, cfg, |p| in_G_312(p, cfg));
    let mut w = vec![eta];
    w.extend(v.witness);
    Verdict::open(v.margin, w, cfg)
}

pub fn bridge_in_Gamma(x: &Point7, cfg: &ScanConfig) -> Verdict {
    let (v, eta) = bridge_worst(x, cfg, |p| in_Gamma_312(p, cfg));
    let mut w = vec![eta];
    w.extend(v.witness);
    Verdict::closed(v.margin, w, cfg)
}

/// Worst p-fiber tetrablock margin on one circle; used by diagnostics.
pub fn p_fiber_circle_min(xt: &Point5, rho: f64, cfg: &ScanConfig) -> f64 {
    circle_min(rho, cfg.disc_ntheta, cfg.refine_iters, p_fiber_margin(xt, cfg.tol)).value
}

/// Consistency helper: membership of x ∈ C⁷ in G₃₃₃ next to the bridge.
pub fn bridge_agrees(x: &Point7, cfg: &ScanConfig, closed: bool) -> Option<bool> {
    let (a, b) = if closed {
        (in_Gamma_333(x, cfg), bridge_in_Gamma(x, cfg))
    } else {
        (in_G_333(x, cfg), bridge_in_G(x, cfg))
    };
    let sure = 10.0 * cfg.boundary_band;
    if a.margin.abs() <= sure || b.margin.abs() <= sure {
        None
    } else {
        Some(a.state == b.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::sampling::{disc_point, rng};
    use crate::core_types::{random_contraction, State, ONE};
    use crate::domain333::pi333;
    use crate::realization::g_of_A;
    use crate::tetrablock::in_G_bidisc;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }
    fn cfg() -> ScanConfig {
        ScanConfig::default()
    }
    const I: Complex = Complex::new(0.0, 1.0);

    /// Roots of y₂z² − y₁z + 1 by the textbook formula on the original
    /// polynomial (independent of `root_margin`).
    fn min_root_modulus(xt: &Point5) -> f64 {
        let (a, b) = (xt.y2(), -xt.y1());
        if a.norm() < 1e-14 {
            return if b.norm() < 1e-14 { f64::INFINITY } else { (1.0 / b).norm() };
        }
        let d = (b * b - 4.0 * a).sqrt();
        ((-b + d) / (2.0 * a)).norm().min(((-b - d) / (2.0 * a)).norm())
    }

    #[test]
    fn pi312_examples() {
        assert_eq!(pi312(&Matrix3::zero()), Point5::zero());
        assert_eq!(pi312(&Matrix3::identity()), Point5::from_re([1.0, 2.0, 1.0, 2.0, 1.0]));
        for s in 0..50 {
            let a = random_contraction(s, 1.2);
            assert!(retract_pair(&pi333(&a)).max_abs_diff(&pi312(&a)) < 1e-14);
        }
    }

    #[test]
    fn psi3_examples() {
        let xt = Point5([c(0.1, 0.2), c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.1), c(0.2, 0.2)]);
        assert_eq!(psi3(ZERO, &xt, 1e-9).unwrap(), xt.x1());
        let mut r = rng(7);
        for s in 0..100 {
            let a = random_contraction(s, 0.99);
            let z = disc_point(&mut r, 1.0);
            let g = g_of_A(&a, z, z, 1e-12).unwrap();
            assert!((psi3(z, &pi312(&a), 1e-12).unwrap() - g).norm() < 1e-12);
        }
        let x1 = c(0.3, -0.2);
        let (y1, y2) = (c(0.4, 0.1), c(-0.2, 0.3));
        let d = Point5([x1, x1 * y1, x1 * y2, y1, y2]);
        assert!(is_degenerate_312(&d, 1e-14));
        for _ in 0..20 {
            let z = disc_point(&mut r, 1.0);
            assert!((psi3(z, &d, 1e-12).unwrap() - x1).norm() < 1e-14);
        }
        assert!(psi3(ONE, &Point5::from_re([0.0, 0.0, 0.0, 1.0, 0.0]), 1e-9).is_err());
    }

    #[test]
    fn root_margin_matches_direct_roots() {
        let mut r = rng(8);
        for _ in 0..2000 {
            let xt = Point5([ZERO, ZERO, ZERO, disc_point(&mut r, 2.5), disc_point(&mut r, 1.5)]);
            let m = min_root_modulus(&xt);
            if (m - 1.0).abs() < 1e-6 {
                continue;
            }
            assert_eq!(root_margin(&xt) > 0.0, m > 1.0, "{xt:?}");
        }
        assert_eq!(root_margin(&Point5::zero()), 1.0);
        // linear: y₂ = 0, root 1/y₁
        assert!(root_margin(&Point5::from_re([0.0, 0.0, 0.0, 0.5, 0.0])) > 0.0);
        assert!(root_margin(&Point5::from_re([0.0, 0.0, 0.0, 1.5, 0.0])) < 0.0);
    }

    #[test]
    fn membership_examples() {
        let cfg = cfg();
        assert!(in_G_312(&Point5::zero(), &cfg).is_inside());
        let w = Point5::from_re([1.0, 2.0, 2.0, 1.0, 1.0]);
        assert_eq!(in_Gamma_312(&w.scale(I), &cfg).state, State::Outside);
        let x = Point5([ONE, c(1.0, 1.0), c(1.0, 1.0), I, I]);
        let y = Point5([-I, c(1.0, -1.0), c(-1.0, -1.0), I, -ONE]);
        assert_eq!(in_Gamma_312(&x.midpoint(&y), &cfg).state, State::Outside);
        // π̃(I) = (1,2,1,2,1) is a boundary point
        assert!(in_Gamma_312(&pi312(&Matrix3::identity()), &cfg).inside_or_band());
        for s in 0..30 {
            assert!(in_G_312(&pi312(&random_contraction(s, 0.98)), &cfg).is_inside());
            assert!(in_Gamma_312(&pi312(&random_contraction(s, 1.0)), &cfg).inside_or_band());
        }
    }

    #[test]
    fn bidisc_fiber_examples() {
        let cfg = cfg();
        let xt = Point5([c(0.1, 0.2), c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.1), c(0.2, 0.2)]);
        assert_eq!(bidisc_fiber(&xt, ZERO, 1e-9).unwrap(), Point2([xt.y1(), xt.y2()]));
        assert_eq!(bidisc_fiber(&Point5::zero(), c(0.3, 0.3), 1e-9).unwrap(), Point2::zero());
        let mut r = rng(12);
        for s in 0..100 {
            let xt = pi312(&random_contraction(s, 0.95));
            let z = disc_point(&mut r, 1.0);
            assert!(in_G_bidisc(&bidisc_fiber(&xt, z, 1e-12).unwrap(), &cfg).is_inside());
        }
    }

    #[test]
    fn p_fiber_examples() {
        let xt = Point5([c(0.1, 0.2), c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.1), c(0.2, 0.2)]);
        let p = p_fiber(&xt, ZERO, 1e-9).unwrap();
        assert!(p.max_abs_diff(&Point3([xt.x1(), xt.y1() * 0.5, xt.x2() * 0.5])) < 1e-16);
        assert_eq!(p_fiber(&Point5::zero(), c(0.5, 0.5), 1e-9).unwrap(), Point3::zero());
        assert!(p_fiber(&Point5::from_re([0.0, 0.0, 0.0, 2.0, 0.0]), ONE, 1e-9).is_err());
    }

    #[test]
    fn p_fiber_oracle_agrees() {
        let cfg = cfg();
        let mut r = rng(13);
        let mut compared = 0;
        for s in 0..40u64 {
            let xt = match s % 3 {
                0 => pi312(&random_contraction(s, 0.95)),
                1 => pi312(&random_contraction(s, 0.95)).scale(c(1.5, 0.0)),
                _ => Point5([0; 5].map(|_| disc_point(&mut r, 1.2))),
            };
            let sure = 10.0 * cfg.boundary_band;
            let (a, b) = (in_G_312(&xt, &cfg), in_G_312_pfiber(&xt, &cfg));
            if a.margin.abs() > sure && b.margin.abs() > sure {
                assert_eq!(a.state, b.state, "{xt:?}");
                compared += 1;
            }
            let (a, b) = (in_Gamma_312(&xt, &cfg), in_Gamma_312_pfiber(&xt, &cfg));
            if a.margin.abs() > sure && b.margin.abs() > sure {
                assert_eq!(a.state, b.state, "{xt:?}");
            }
        }
        assert!(compared >= 30);
    }

    #[test]
    fn phi_eta_examples() {
        let x = Point7::from_re([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        assert_eq!(phi_eta(&x, ONE), Point5::from_re([1.0, 8.0, 7.0, 6.0, 6.0]));
        assert_eq!(phi_eta(&Point7::zero(), I), Point5::zero());
    }

    #[test]
    fn bridge_law_on_samples() {
        let cfg = cfg();
        let mut r = rng(14);
        for s in 0..12u64 {
            let x = match s % 3 {
                0 => pi333(&random_contraction(s, 0.95)),
                1 => pi333(&random_contraction(s, 0.95).scale(c(1.5, 0.0))),
                _ => Point7([0; 7].map(|_| disc_point(&mut r, 1.0))),
            };
            if let Some(agree) = bridge_agrees(&x, &cfg, false) {
                assert!(agree, "{x:?}");
            }
        }
    }

    #[test]
    fn retraction_examples() {
        assert_eq!(embed(&Point5::zero()), Point7::zero());
        let mut r = rng(15);
        for _ in 0..100 {
            let xt = Point5([0; 5].map(|_| disc_point(&mut r, 3.0)));
            assert_eq!(retract_pair(&embed(&xt)), xt);
        }
        for s in 0..20 {
            let a = random_contraction(s, 1.0);
            assert!(retract_pair(&pi333(&a)).max_abs_diff(&pi312(&a)) < 1e-14);
        }
    }
}
