//! Candidate distinguished boundaries
//!
//! K = {x ∈ Γ₃₃₃ : x₁ = x̄₆x₇, x₃ = x̄₄x₇, x₅ = x̄₂x₇, |x₇| = 1} and
//! K₁ = {x̃ ∈ Γ₃₁₂ : x₁ = ȳ₂x₃, x₂ = ȳ₁x₃, |x₃| = 1},
//! with the conjugate forms (x₂ = x̄₅x₇, x₄ = x̄₃x₇; y₂ = x̄₁x₃, y₁ = x̄₂x₃)
//! checked as well. The parametrisations are not assumed to land in Γ:
//! callers re-verify with the Γ oracle.

use crate::core_types::scan::{circle_max, disc_max, SINGULAR};
use crate::core_types::{random_unitary, Complex, Point5, Point7, ScanConfig, State, Verdict};
use crate::core_types::sampling::sub_seed;
use crate::domain312::{in_Gamma_312, phi_eta, pi312};
use crate::domain333::{fiber, in_Gamma_333, pi333, Fiber};
use crate::error::{MudomError, Result};
use crate::tetrablock::bgamma_deviation;

/// Largest violation of the K relations.
pub fn k_relation_deviation(x: &Point7) -> f64 {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    [
        (x1 - x6.conj() * x7).norm(),
        (x3 - x4.conj() * x7).norm(),
        (x5 - x2.conj() * x7).norm(),
        (x2 - x5.conj() * x7).norm(),
        (x4 - x3.conj() * x7).norm(),
        (x7.norm() - 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Largest violation of the K₁ relations.
pub fn k1_relation_deviation(xt: &Point5) -> f64 {
    let [x1, x2, x3, y1, y2] = xt.0;
    [
        (x1 - y2.conj() * x3).norm(),
        (x2 - y1.conj() * x3).norm(),
        (y2 - x1.conj() * x3).norm(),
        (y1 - x2.conj() * x3).norm(),
        (x3.norm() - 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Relations decide the state once Γ membership holds; otherwise Outside.
fn relation_verdict(dev: f64, gamma: Verdict, cfg: &ScanConfig) -> Verdict {
    let b = cfg.boundary_band;
    let (state, margin) = if !gamma.inside_or_band() {
        (State::Outside, (-dev).min(gamma.margin))
    } else if dev < b {
        (State::Inside, -dev)
    } else if dev < 10.0 * b {
        (State::BoundaryBand, -dev)
    } else {
        (State::Outside, -dev)
    };
    Verdict { state, margin, witness: gamma.witness, config: *cfg }
}

pub fn in_K(x: &Point7, cfg: &ScanConfig) -> Verdict {
    let dev = k_relation_deviation(x);
    relation_verdict(dev, in_Gamma_333(x, cfg), cfg)
}

pub fn in_K1(xt: &Point5, cfg: &ScanConfig) -> Verdict {
    let dev = k1_relation_deviation(xt);
    relation_verdict(dev, in_Gamma_312(xt, cfg), cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryReport {
    pub n: usize,
    pub seed: u64,
    pub worst_k_deviation: f64,
    pub worst_k1_deviation: f64,
    pub worst_k_margin: f64,
    pub worst_k1_margin: f64,
    /// Sample indices whose image was not Inside K or K₁.
    pub failures: Vec<usize>,
}

impl UnitaryReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// π333(U) ∈ K and pi312(U) ∈ K₁ for `n` Haar unitaries.
pub fn unitary_image_checks(seed: u64, n: usize, cfg: &ScanConfig) -> UnitaryReport {
    let mut rep = UnitaryReport {
        n,
        seed,
        worst_k_deviation: 0.0,
        worst_k1_deviation: 0.0,
        worst_k_margin: f64::INFINITY,
        worst_k1_margin: f64::INFINITY,
        failures: vec![],
    };
    for i in 0..n {
        let u = random_unitary(sub_seed(seed, i as u64));
        let x = pi333(&u);
        let xt = pi312(&u);
        let (k, k1) = (in_K(&x, cfg), in_K1(&xt, cfg));
        rep.worst_k_deviation = rep.worst_k_deviation.max(k_relation_deviation(&x));
        rep.worst_k1_deviation = rep.worst_k1_deviation.max(k1_relation_deviation(&xt));
        rep.worst_k_margin = rep.worst_k_margin.min(k.margin);
        rep.worst_k1_margin = rep.worst_k1_margin.min(k1.margin);
        if !k.is_inside() || !k1.is_inside() {
            rep.failures.push(i);
        }
    }
    rep
}

fn unit_check(u: Complex, tol: f64) -> Result<()> {
    if (u.norm() - 1.0).abs() > tol || !u.is_finite() {
        return Err(MudomError::DomainViolation(format!("|u| = {} is not 1", u.norm())));
    }
    Ok(())
}

fn radius_check(name: &str, c: Complex, r: f64, tol: f64) -> Result<()> {
    if c.norm() > r + tol || !c.is_finite() {
        return Err(MudomError::DomainViolation(format!("|{name}| = {} exceeds {r}", c.norm())));
    }
    Ok(())
}

const PARAM_TOL: f64 = 1e-12;

/// (c₄, c₅, c₆, u) ↦ (c̄₆u, c̄₅u, c̄₄u, c₄, c₅, c₆, u).
pub fn param_K(c: [Complex; 3], u: Complex) -> Result<Point7> {
    for (k, ck) in c.iter().enumerate() {
        radius_check(&format!("c{}", k + 4), *ck, 1.0, PARAM_TOL)?;
    }
    unit_check(u, PARAM_TOL)?;
    let [c4, c5, c6] = c;
    Ok(Point7([c6.conj() * u, c5.conj() * u, c4.conj() * u, c4, c5, c6, u]))
}

/// (y₁, y₂, u) ↦ (ȳ₂u, ȳ₁u, u, y₁, y₂) with |y₁| ≤ 2, |y₂| ≤ 1.
pub fn param_K1(y1: Complex, y2: Complex, u: Complex) -> Result<Point5> {
    radius_check("y1", y1, 2.0, PARAM_TOL)?;
    radius_check("y2", y2, 1.0, PARAM_TOL)?;
    unit_check(u, PARAM_TOL)?;
    Ok(Point5([y2.conj() * u, y1.conj() * u, u, y1, y2]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberCase {
    /// |x₄| < 1 and |x₂| < 1: fibers over T.
    Torus,
    /// |x₄| = 1: fibers over D.
    UnitX4,
    /// |x₂| = 1: fibers over D.
    UnitX2,
    /// |x₄| > 1 or |x₂| > 1: no case of the characterisation applies.
    Excluded,
}

impl FiberCase {
    pub fn name(self) -> &'static str {
        match self {
            FiberCase::Torus => "torus",
            FiberCase::UnitX4 => "unit_x4",
            FiberCase::UnitX2 => "unit_x2",
            FiberCase::Excluded => "excluded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberBoundaryReport {
    pub case: FiberCase,
    /// Sup of the bΓ-tetrablock deviation of z̃ over the case's parameter set.
    pub z_deviation: f64,
    /// Same for ỹ.
    pub y_deviation: f64,
    pub holds: bool,
}

const INNER_RADIUS: f64 = 1.0 - 1.0 / 4096.0;

fn fiber_deviation(x: &Point7, which: Fiber, on_disc: bool, cfg: &ScanConfig) -> f64 {
    let f = |z: Complex| match fiber(x, which, z, cfg.tol) {
        Ok(t) => bgamma_deviation(&t.value),
        Err(_) => SINGULAR,
    };
    if on_disc {
        disc_max(INNER_RADIUS, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, f).value
    } else {
        circle_max(1.0, cfg.torus_n, cfg.refine_iters, f).value
    }
}

/// The fiber characterisation of K through z̃ and ỹ, with the case split
/// on |x₄| and |x₂|.
pub fn fiber_boundary_check(x: &Point7, cfg: &ScanConfig) -> FiberBoundaryReport {
    let b = cfg.boundary_band;
    let (m4, m2) = (x.x(4).norm(), x.x(2).norm());
    let case = if (m4 - 1.0).abs() <= b {
        FiberCase::UnitX4
    } else if (m2 - 1.0).abs() <= b {
        FiberCase::UnitX2
    } else if m4 < 1.0 && m2 < 1.0 {
        FiberCase::Torus
    } else {
        FiberCase::Excluded
    };
    if case == FiberCase::Excluded {
        return FiberBoundaryReport { case, z_deviation: f64::INFINITY, y_deviation: f64::INFINITY, holds: false };
    }
    let on_disc = case != FiberCase::Torus;
    let z_deviation = fiber_deviation(x, Fiber::Z, on_disc, cfg);
    let y_deviation = fiber_deviation(x, Fiber::Y, on_disc, cfg);
    FiberBoundaryReport { case, z_deviation, y_deviation, holds: z_deviation.max(y_deviation) < b }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KBridgeReport {
    pub k: Verdict,
    /// Worst in_K1 verdict over the η grid.
    pub k1_worst: Verdict,
    pub worst_eta: Complex,
    /// None when either side sits in the boundary band.
    pub agree: Option<bool>,
}

/// x ∈ K against Φ_η(x) ∈ K₁ for all unimodular η.
pub fn k_bridge_check(x: &Point7, cfg: &ScanConfig) -> KBridgeReport {
    let k = in_K(x, cfg);
    let n = crate::domain312::BRIDGE_PHASES;
    let mut worst: Option<(Verdict, Complex)> = None;
    for j in 0..n {
        let eta = Complex::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64);
        let v = in_K1(&phi_eta(x, eta), cfg);
        if worst.as_ref().is_none_or(|w| v.margin < w.0.margin) {
            worst = Some((v, eta));
        }
    }
    let (k1_worst, worst_eta) = worst.expect("grid is non-empty");
    let decided = |v: &Verdict| v.state != State::BoundaryBand;
    let agree = (decided(&k) && decided(&k1_worst)).then(|| k.is_inside() == k1_worst.is_inside());
    KBridgeReport { k, k1_worst, worst_eta, agree }
}
