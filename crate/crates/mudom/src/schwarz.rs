//! Schwarz-lemma necessary conditions for analytic discs φ: D → Γ with
//! φ(0) = 0 and φ(λ₀) = x, plus the scalar Pick test.
//!
//! Each fiber of x is pushed through the tetrablock Schwarz quantities
//! (|f₁ − f̄₂f₃| + |f₁f₂ − f₃|)/(1 − |f₂|²) and its (f₁ ↔ f₂) twin; their
//! sups over the closed disc must not exceed |λ₀|. A report with
//! `necessary_ok = false` rules out every such disc; `true` proves nothing.

use nalgebra::DMatrix;

use crate::core_types::scan::{disc_max, Extremum, SINGULAR};
use crate::core_types::{Complex, Point3, Point5, Point7, ScanConfig, State};
use crate::domain312::{in_G_312, p_fiber};
use crate::domain333::{fiber, in_G_333, Fiber};
use crate::error::{MudomError, Result};

/// (|f₁ − f̄₂f₃| + |f₁f₂ − f₃|)/(1 − |f₂|²).
pub fn schwarz_q1(f: &Point3) -> f64 {
    let [f1, f2, f3] = f.0;
    let den = 1.0 - f2.norm_sqr();
    if den <= 0.0 {
        return SINGULAR;
    }
    ((f1 - f2.conj() * f3).norm() + (f1 * f2 - f3).norm()) / den
}

/// (|f₂ − f̄₁f₃| + |f₁f₂ − f₃|)/(1 − |f₁|²).
pub fn schwarz_q2(f: &Point3) -> f64 {
    let [f1, f2, f3] = f.0;
    schwarz_q1(&Point3([f2, f1, f3]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    G1,
    G2,
    H1,
    H2,
    I1,
    I2,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [Quantity::G1, Quantity::G2, Quantity::H1, Quantity::H2, Quantity::I1, Quantity::I2];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::G1 => "G1",
            Quantity::G2 => "G2",
            Quantity::H1 => "H1",
            Quantity::H2 => "H2",
            Quantity::I1 => "I1",
            Quantity::I2 => "I2",
        }
    }

    /// G over x̃(z₁), H over ỹ(z₂), I over z̃(z₃).
    pub fn fiber(self) -> Fiber {
        match self {
            Quantity::G1 | Quantity::G2 => Fiber::X,
            Quantity::H1 | Quantity::H2 => Fiber::Y,
            Quantity::I1 | Quantity::I2 => Fiber::Z,
        }
    }

    fn first(self) -> bool {
        matches!(self, Quantity::G1 | Quantity::H1 | Quantity::I1)
    }
}

fn require_in_g(margin: f64, state: State) -> Result<()> {
    if state != State::Inside {
        return Err(MudomError::TargetNotInG(margin));
    }
    Ok(())
}

fn quantity_scan(x: &Point7, q: Quantity, cfg: &ScanConfig) -> Extremum<1> {
    let which = q.fiber();
    let eval = |z: Complex| match fiber(x, which, z, cfg.tol) {
        Ok(t) if q.first() => schwarz_q1(&t.value),
        Ok(t) => schwarz_q2(&t.value),
        Err(_) => SINGULAR,
    };
    disc_max(1.0, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, eval)
}

/// Sup of one quantity over the closed disc.
pub fn sup_quantity(x: &Point7, which: Quantity, cfg: &ScanConfig) -> Result<f64> {
    let v = in_G_333(x, cfg);
    require_in_g(v.margin, v.state)?;
    Ok(quantity_scan(x, which, cfg).value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzReport333 {
    pub lambda0: Complex,
    /// G1, G2, H1, H2, I1, I2 in `Quantity::ALL` order.
    pub values: [f64; 6],
    pub necessary_ok: bool,
    /// Largest quantity and the disc point where it was found.
    pub worst: (Quantity, Complex),
}

impl SchwarzReport333 {
    pub fn get(&self, q: Quantity) -> f64 {
        self.values[Quantity::ALL.iter().position(|&p| p == q).expect("listed")]
    }
}

fn check_lambda0(lambda0: Complex) -> Result<f64> {
    let r = lambda0.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(MudomError::Lambda0OutOfRange(r));
    }
    Ok(r)
}

pub fn schwarz_necessary_333(lambda0: Complex, x: &Point7, cfg: &ScanConfig) -> Result<SchwarzReport333> {
    let r = check_lambda0(lambda0)?;
    let v = in_G_333(x, cfg);
    require_in_g(v.margin, v.state)?;
    let mut values = [0.0; 6];
    let mut worst = (Quantity::G1, Complex::new(0.0, 0.0));
    let mut worst_value = f64::NEG_INFINITY;
    for (k, q) in Quantity::ALL.into_iter().enumerate() {
        let e = quantity_scan(x, q, cfg);
        values[k] = e.value;
        if e.value > worst_value {
            worst_value = e.value;
            worst = (q, e.at[0]);
        }
    }
    let necessary_ok = values.iter().all(|&g| g <= r + cfg.boundary_band);
    Ok(SchwarzReport333 { lambda0, values, necessary_ok, worst })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzReport312 {
    pub lambda0: Complex,
    pub gt1: f64,
    pub gt2: f64,
    pub necessary_ok: bool,
}

fn p_scan(xt: &Point5, first: bool, cfg: &ScanConfig) -> Extremum<1> {
    let eval = |z: Complex| match p_fiber(xt, z, cfg.tol) {
        Ok(p) if first => schwarz_q1(&p),
        Ok(p) => schwarz_q2(&p),
        Err(_) => SINGULAR,
    };
    disc_max(1.0, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, eval)
}

pub fn schwarz_necessary_312(lambda0: Complex, xt: &Point5, cfg: &ScanConfig) -> Result<SchwarzReport312> {
    let r = check_lambda0(lambda0)?;
    let v = in_G_312(xt, cfg);
    require_in_g(v.margin, v.state)?;
    let gt1 = p_scan(xt, true, cfg).value;
    let gt2 = p_scan(xt, false, cfg).value;
    let necessary_ok = gt1.max(gt2) <= r + cfg.boundary_band;
    Ok(SchwarzReport312 { lambda0, gt1, gt2, necessary_ok })
}

/// Which one-sided branch applies to a fiber: 1 if |f₂| ≤ |f₁| on every
/// scanned point of the closed disc, 2 if |f₁| ≤ |f₂| everywhere, None if
/// neither modulus dominates.
pub fn dominant_branch(x: &Point7, which: Fiber, cfg: &ScanConfig) -> Option<u8> {
    let gap = |z: Complex| match fiber(x, which, z, cfg.tol) {
        Ok(t) => t.value.0[1].norm() - t.value.0[0].norm(),
        Err(_) => f64::NAN,
    };
    let hi = disc_max(1.0, cfg.disc_nr, cfg.disc_ntheta, 0, gap).value;
    let lo = -disc_max(1.0, cfg.disc_nr, cfg.disc_ntheta, 0, |z| -gap(z)).value;
    if hi <= 0.0 {
        Some(1)
    } else if lo >= 0.0 {
        Some(2)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PickResult {
    pub psd: bool,
    pub min_eig: f64,
}

/// PSD test of ((1 − λ̄ᵢλⱼ)/(1 − z̄ᵢzⱼ)) by Hermitian eigendecomposition.
pub fn pick_matrix_psd(nodes: &[Complex], values: &[Complex]) -> Result<PickResult> {
    if nodes.len() != values.len() {
        return Err(MudomError::LengthMismatch(nodes.len(), values.len()));
    }
    for (i, z) in nodes.iter().enumerate() {
        if !(z.norm() < 1.0) {
            return Err(MudomError::DomainViolation(format!("node {i} has |z| = {} >= 1", z.norm())));
        }
        if nodes[..i].iter().any(|w| (w - z).norm() <= 1e-14) {
            return Err(MudomError::DuplicateNodes);
        }
    }
    let n = nodes.len();
    if n == 0 {
        return Ok(PickResult { psd: true, min_eig: 0.0 });
    }
    let p = DMatrix::from_fn(n, n, |i, j| {
        (1.0 - values[i].conj() * values[j]) / (1.0 - nodes[i].conj() * nodes[j])
    });
    let eig = p.symmetric_eigenvalues();
    let min_eig = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = eig.iter().map(|e| e.abs()).fold(0.0, f64::max);
    Ok(PickResult { psd: min_eig >= -64.0 * f64::EPSILON * scale.max(1.0), min_eig })
}

/// A point on a caller-supplied analytic disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiscPoint {
    C7(Point7),
    C5(Point5),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagationReport {
    pub states: Vec<State>,
    pub margins: Vec<f64>,
    pub any_inside: bool,
    /// Outside samples on a disc that also has an Inside sample.
    pub violations: Vec<usize>,
    /// Samples in the boundary band on such a disc.
    pub band_flags: Vec<usize>,
}

impl PropagationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An analytic disc in Γ that touches G lies in G entirely; sampled
/// verdicts that break this point at a non-analytic input or at a margin
/// problem.
pub fn membership_propagation_check(samples: &[(f64, DiscPoint)], cfg: &ScanConfig) -> PropagationReport {
    let verdicts: Vec<_> = samples
        .iter()
        .map(|(_, p)| match p {
            DiscPoint::C7(x) => in_G_333(x, cfg),
            DiscPoint::C5(x) => in_G_312(x, cfg),
        })
        .collect();
    let any_inside = verdicts.iter().any(|v| v.is_inside());
    let pick = |s: State| -> Vec<usize> {
        if !any_inside {
            return vec![];
        }
        verdicts.iter().enumerate().filter(|(_, v)| v.state == s).map(|(i, _)| i).collect()
    };
    PropagationReport {
        states: verdicts.iter().map(|v| v.state).collect(),
        margins: verdicts.iter().map(|v| v.margin).collect(),
        any_inside,
        violations: pick(State::Outside),
        band_flags: pick(State::BoundaryBand),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::sampling::{disc_point, gaussian_complex, rng};
    use crate::core_types::{random_contraction, Matrix2, Matrix3, ONE, ZERO};
    use crate::domain312::pi312;
    use crate::domain333::pi333;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }
    fn cfg() -> ScanConfig {
        ScanConfig::default()
    }

    #[test]
    fn zero_point() {
        let cfg = cfg();
        for q in Quantity::ALL {
            assert_eq!(sup_quantity(&Point7::zero(), q, &cfg).unwrap(), 0.0);
        }
        assert!(schwarz_necessary_333(c(0.2, 0.0), &Point7::zero(), &cfg).unwrap().necessary_ok);
        assert!(schwarz_necessary_312(c(0.2, 0.0), &Point5::zero(), &cfg).unwrap().necessary_ok);
    }

    #[test]
    fn preconditions() {
        let cfg = cfg();
        assert!(matches!(
            schwarz_necessary_333(ZERO, &Point7::zero(), &cfg),
            Err(MudomError::Lambda0OutOfRange(_))
        ));
        assert!(matches!(
            schwarz_necessary_333(ONE, &Point7::zero(), &cfg),
            Err(MudomError::Lambda0OutOfRange(_))
        ));
        assert!(matches!(
            schwarz_necessary_333(c(0.5, 0.0), &Point7::ones(), &cfg),
            Err(MudomError::TargetNotInG(_))
        ));
        assert!(matches!(sup_quantity(&Point7::ones(), Quantity::G1, &cfg), Err(MudomError::TargetNotInG(_))));
    }

    #[test]
    fn scaled_contractions_pass() {
        let cfg = cfg();
        for s in 0..8 {
            let cm = random_contraction(s, 1.0);
            for l in [0.3, 0.5, 0.7] {
                let a = cm.scale(c(l, 0.0));
                let r = schwarz_necessary_333(c(l, 0.0), &pi333(&a), &cfg).unwrap();
                assert!(r.necessary_ok, "{r:?}");
                let r5 = schwarz_necessary_312(c(l, 0.0), &pi312(&a), &cfg).unwrap();
                assert!(r5.necessary_ok, "{r5:?}");
            }
        }
    }

    #[test]
    fn large_point_small_lambda_fails() {
        let cfg = cfg();
        let a = random_contraction(4, 0.9);
        let r = schwarz_necessary_333(c(0.1, 0.0), &pi333(&a), &cfg).unwrap();
        assert!(!r.necessary_ok);
        assert!(r.get(r.worst.0) > 0.1);
        let r5 = schwarz_necessary_312(c(0.1, 0.0), &pi312(&a), &cfg).unwrap();
        assert!(!r5.necessary_ok);
    }

    #[test]
    fn constant_fiber_reduces_to_single_point() {
        // only x₂, x₄, x₆ non-zero: x̃(z₁) = (x₂, x₄, x₆) for every z₁
        let cfg = cfg();
        let x = Point7([ZERO, c(0.3, 0.1), ZERO, c(-0.2, 0.2), ZERO, c(0.05, -0.1), ZERO]);
        let g1 = sup_quantity(&x, Quantity::G1, &cfg).unwrap();
        assert!((g1 - schwarz_q1(&Point3([x.x(2), x.x(4), x.x(6)]))).abs() < 1e-15);
    }

    #[test]
    fn dominant_branch_fixes_the_max() {
        // With |f₂| ≤ |f₁| pointwise on the tetrablock the first quantity is
        // the larger one, so the reported max is the branch value.
        let mut r = rng(41);
        for _ in 0..2000 {
            let m = Matrix2([[gaussian_complex(&mut r), gaussian_complex(&mut r)], [gaussian_complex(&mut r), gaussian_complex(&mut r)]]);
            let m = m.scale(c(r.random_range(0.05..0.99) / m.operator_norm(), 0.0));
            let f = Point3([m.0[0][0], m.0[1][1], m.det()]);
            let (q1, q2) = (schwarz_q1(&f), schwarz_q2(&f));
            if f.0[1].norm() <= f.0[0].norm() {
                assert!(q1 >= q2 - 1e-12, "{f:?} {q1} {q2}");
            } else {
                assert!(q2 >= q1 - 1e-12, "{f:?} {q1} {q2}");
            }
        }
        let cfg = cfg();
        let x = pi333(&Matrix3::diag([c(0.6, 0.0), c(0.2, 0.1), c(0.3, 0.0)]));
        for w in Fiber::ALL {
            let (first, second) = match w {
                Fiber::X => (Quantity::G1, Quantity::G2),
                Fiber::Y => (Quantity::H1, Quantity::H2),
                Fiber::Z => (Quantity::I1, Quantity::I2),
            };
            let (a, b) = (sup_quantity(&x, first, &cfg).unwrap(), sup_quantity(&x, second, &cfg).unwrap());
            match dominant_branch(&x, w, &cfg) {
                Some(1) => assert!((a.max(b) - a).abs() < 1e-12),
                Some(2) => assert!((a.max(b) - b).abs() < 1e-12),
                _ => {}
            }
        }
    }

    #[test]
    fn grid_monotonicity() {
        let x = pi333(&random_contraction(2, 0.8));
        let mut prev = 0.0;
        for (nr, nt) in [(3, 16), (5, 32), (9, 64), (17, 128)] {
            let cfg = ScanConfig { disc_nr: nr, disc_ntheta: nt, refine_iters: 0, ..cfg() };
            let v = sup_quantity(&x, Quantity::I1, &cfg).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn pick_examples() {
        let h = c(0.5, 0.0);
        assert!(pick_matrix_psd(&[ZERO, h], &[ZERO, c(0.25, 0.0)]).unwrap().psd);
        assert!(!pick_matrix_psd(&[ZERO, h], &[ZERO, c(0.75, 0.0)]).unwrap().psd);
        assert!(pick_matrix_psd(&[h], &[c(0.9, 0.0)]).unwrap().psd);
        assert!(!pick_matrix_psd(&[h], &[c(1.1, 0.0)]).unwrap().psd);
        assert!(matches!(pick_matrix_psd(&[h, h], &[ZERO, ZERO]), Err(MudomError::DuplicateNodes)));
        assert!(matches!(pick_matrix_psd(&[h], &[]), Err(MudomError::LengthMismatch(1, 0))));
    }

    #[test]
    fn pick_two_point_law() {
        let mut r = rng(42);
        for _ in 0..1000 {
            let l0 = disc_point(&mut r, 0.95);
            let w = disc_point(&mut r, 1.0);
            if (w.norm() - l0.norm()).abs() < 1e-12 || l0.norm() < 1e-12 {
                continue;
            }
            let res = pick_matrix_psd(&[ZERO, l0], &[ZERO, w]).unwrap();
            assert_eq!(res.psd, w.norm() <= l0.norm());
        }
    }

    #[test]
    fn propagation_examples() {
        let cfg = cfg();
        let cm = random_contraction(5, 0.95);
        let disc: Vec<_> = (0..32)
            .map(|k| {
                let l = Complex::from_polar(0.9 * (k as f64 + 1.0) / 32.0, k as f64);
                (k as f64, DiscPoint::C7(pi333(&cm.scale(l))))
            })
            .collect();
        let rep = membership_propagation_check(&disc, &cfg);
        assert!(rep.ok() && rep.states.iter().all(|s| *s == State::Inside));
        let zero: Vec<_> = (0..4).map(|k| (k as f64, DiscPoint::C5(Point5::zero()))).collect();
        assert!(membership_propagation_check(&zero, &cfg).ok());
        let near = [
            (0.5, DiscPoint::C7(pi333(&Matrix3::identity().scale(c(0.5, 0.0))))),
            (1.0, DiscPoint::C7(pi333(&Matrix3::identity().scale(c(1.0 - 1e-9, 0.0))))),
        ];
        let rep = membership_propagation_check(&near, &cfg);
        assert!(rep.ok());
        assert_eq!(rep.band_flags, vec![1]);
    }
}
