//! The C⁷ domains G/Γ_E(3;3;1,1,1).
//!
//! A point x is tested three independent ways:
//!
//! * the gate triple (x₂, x₄, x₆) in the tetrablock plus sup |Ψ⁽¹⁾| < 1 over
//!   the torus (the primary oracle);
//! * each one-variable fiber x̃(z₁), ỹ(z₂), z̃(z₃) staying in the tetrablock
//!   over the closed disc;
//! * the C⁵ bridge, see [`crate::domain312`].
//!
//! μ_E is found by bisection on the radius r of the polydisc, using
//! R_x(r·w) = R_{x⁽ʳ⁾}(w).

use crate::core_types::scan::{circle_max, disc_min, torus_max, Extremum, SINGULAR};
use crate::core_types::{Complex, Matrix3, Point3, Point7, ScanConfig, Verdict, ONE, ZERO};
use crate::error::{MudomError, Result};
use crate::tetrablock::tetra_margin;

pub fn pi333(a: &Matrix3) -> Point7 {
    let minor = |i: usize, j: usize| a.a(i, i) * a.a(j, j) - a.a(i, j) * a.a(j, i);
    Point7([
        a.a(1, 1),
        a.a(2, 2),
        minor(1, 2),
        a.a(3, 3),
        minor(1, 3),
        minor(2, 3),
        a.det(),
    ])
}

/// R_x(z) = 1 − x₁z₁ − x₂z₂ + x₃z₁z₂ − x₄z₃ + x₅z₁z₃ + x₆z₂z₃ − x₇z₁z₂z₃.
pub fn r_poly(x: &Point7, z: [Complex; 3]) -> Complex {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    let [z1, z2, z3] = z;
    1.0 - x1 * z1 - x2 * z2 + x3 * z1 * z2 - x4 * z3 + x5 * z1 * z3 + x6 * z2 * z3
        - x7 * z1 * z2 * z3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    /// x̃(z₁)
    X,
    /// ỹ(z₂)
    Y,
    /// z̃(z₃)
    Z,
}

impl Fiber {
    pub const ALL: [Fiber; 3] = [Fiber::X, Fiber::Y, Fiber::Z];

    pub fn name(self) -> &'static str {
        match self {
            Fiber::X => "x",
            Fiber::Y => "y",
            Fiber::Z => "z",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberTriple {
    pub which: Fiber,
    pub at: Complex,
    pub value: Point3,
}

/// Numerators and denominator of a fiber: (n₁, n₂, n₃, d).
fn fiber_parts(x: &Point7, which: Fiber, z: Complex) -> ([Complex; 3], Complex) {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    match which {
        Fiber::X => ([x2 - z * x3, x4 - z * x5, x6 - z * x7], 1.0 - x1 * z),
        Fiber::Y => ([x1 - z * x3, x4 - z * x6, x5 - z * x7], 1.0 - x2 * z),
        Fiber::Z => ([x1 - z * x5, x2 - z * x6, x3 - z * x7], 1.0 - x4 * z),
    }
}

/// The coordinate whose modulus decides whether the fiber denominator can
/// vanish on the closed disc: x₁, x₂ or x₄.
pub fn fiber_pivot(x: &Point7, which: Fiber) -> Complex {
    match which {
        Fiber::X => x.0[0],
        Fiber::Y => x.0[1],
        Fiber::Z => x.0[3],
    }
}

pub fn fiber(x: &Point7, which: Fiber, at: Complex, tol: f64) -> Result<FiberTriple> {
    let (n, d) = fiber_parts(x, which, at);
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok(FiberTriple { which, at, value: Point3(n.map(|v| v / d)) })
}

/// x'_{J⁽ⁱ⁾}: (x₂,x₄,x₆), (x₁,x₄,x₅), (x₁,x₂,x₃) for i = 1, 2, 3.
pub fn gate_triple(i: usize, x: &Point7) -> Point3 {
    let g = |a: usize, b: usize, c: usize| Point3([x.x(a), x.x(b), x.x(c)]);
    match i {
        1 => g(2, 4, 6),
        2 => g(1, 4, 5),
        _ => g(1, 2, 3),
    }
}

/// Numerator and denominator of Ψ⁽ⁱ⁾ at z = the two free variables in
/// increasing index order.
fn psi_parts(i: usize, z: (Complex, Complex), x: &Point7) -> (Complex, Complex) {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    let (a, b) = z;
    match i {
        1 => (x1 - a * x3 - b * x5 + a * b * x7, 1.0 - a * x2 - b * x4 + a * b * x6),
        2 => (x2 - a * x3 - b * x6 + a * b * x7, 1.0 - a * x1 - b * x4 + a * b * x5),
        _ => (x4 - a * x5 - b * x6 + a * b * x7, 1.0 - a * x1 - b * x2 + a * b * x3),
    }
}

/// Ψ⁽ⁱ⁾; `z` holds the variables of J⁽ⁱ⁾ = {1,2,3}∖{i} in increasing order.
pub fn psi_i(i: usize, z: (Complex, Complex), x: &Point7, tol: f64) -> Result<Complex> {
    if !(1..=3).contains(&i) {
        return Err(MudomError::DomainViolation(format!("psi index {i} not in 1..=3")));
    }
    let (n, d) = psi_parts(i, z, x);
    if d.norm() < tol {
        return Err(MudomError::DenominatorVanishes(d.norm()));
    }
    Ok(n / d)
}

/// True when Ψ⁽ⁱ⁾ collapses to a constant (numerator = constant × denominator).
pub fn is_degenerate(i: usize, x: &Point7, tol: f64) -> bool {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    let checks = match i {
        1 => [x7 - x6 * x1, x3 - x2 * x1, x5 - x4 * x1],
        2 => [x7 - x5 * x2, x3 - x2 * x1, x6 - x4 * x2],
        _ => [x7 - x3 * x4, x6 - x2 * x4, x5 - x4 * x1],
    };
    checks.iter().all(|c| c.norm() <= tol)
}

fn degenerate_constant(i: usize, x: &Point7) -> Complex {
    match i {
        1 => x.x(1),
        2 => x.x(2),
        _ => x.x(4),
    }
}

fn psi_abs(i: usize, x: &Point7, tol: f64) -> impl Fn(Complex, Complex) -> f64 + Sync + '_ {
    move |a, b| {
        let (n, d) = psi_parts(i, (a, b), x);
        let dn = d.norm();
        if dn < tol {
            SINGULAR
        } else {
            n.norm() / dn
        }
    }
}

/// Sup estimate of |Ψ⁽ⁱ⁾| over ρT².
pub fn sup_psi_radius(i: usize, x: &Point7, rho: f64, cfg: &ScanConfig) -> Extremum<2> {
    torus_max(rho, cfg.torus_n, cfg.refine_iters, psi_abs(i, x, cfg.tol))
}

/// Sup estimate of |Ψ⁽ⁱ⁾| over T² (a lower bound for the true sup).
pub fn sup_psi_torus(i: usize, x: &Point7, cfg: &ScanConfig) -> Result<(f64, [Complex; 2])> {
    let gate = tetra_margin(&gate_triple(i, x));
    if gate < -cfg.boundary_band {
        return Err(MudomError::FiberBaseOutside(gate));
    }
    let e = sup_psi_radius(i, x, 1.0, cfg);
    Ok((e.value, e.at))
}

/// Max over the shrinking tori (1 − 2⁻ᵏ)T², k = 1..=12.
pub fn sup_psi_shrinking(i: usize, x: &Point7, cfg: &ScanConfig) -> Extremum<2> {
    let mut best = Extremum { value: f64::NEG_INFINITY, at: [ZERO; 2] };
    for rho in ScanConfig::shrinking_radii() {
        let e = sup_psi_radius(i, x, rho, cfg);
        if e.value > best.value {
            best = e;
        }
    }
    best
}

/// Open-domain test via Ψ⁽¹⁾ over the torus.
pub fn in_G_333(x: &Point7, cfg: &ScanConfig) -> Verdict {
    let gate = tetra_margin(&gate_triple(1, x));
    let band = cfg.boundary_band;
    if gate < -band {
        return Verdict::open(gate, vec![], cfg);
    }
    if is_degenerate(1, x, cfg.tol) {
        return Verdict::open(gate.min(1.0 - degenerate_constant(1, x).norm()), vec![ZERO, ZERO], cfg);
    }
    // With the gate strictly inside, the denominator has no zero on the
    // closed bidisc and the torus carries the sup. Near the gate boundary the
    // denominator may vanish on T², so approach it from inside instead.
    let e = if gate > band {
        sup_psi_radius(1, x, 1.0, cfg)
    } else {
        sup_psi_shrinking(1, x, cfg)
    };
    Verdict::open(gate.min(1.0 - e.value), e.at.to_vec(), cfg)
}

/// Closed-domain test: gate in Γ-tetrablock and sup |Ψ⁽¹⁾| ≤ 1 over the
/// open bidisc, approached through shrinking tori.
pub fn in_Gamma_333(x: &Point7, cfg: &ScanConfig) -> Verdict {
    let gate = tetra_margin(&gate_triple(1, x));
    if gate < -cfg.boundary_band {
        return Verdict::closed(gate, vec![], cfg);
    }
    if is_degenerate(1, x, cfg.tol) {
        return Verdict::closed(gate.min(1.0 - degenerate_constant(1, x).norm()), vec![ZERO, ZERO], cfg);
    }
    let e = sup_psi_shrinking(1, x, cfg);
    Verdict::closed(gate.min(1.0 - e.value), e.at.to_vec(), cfg)
}

fn fiber_margin(x: &Point7, which: Fiber, tol: f64) -> impl Fn(Complex) -> f64 + Sync + '_ {
    move |z| {
        let (n, d) = fiber_parts(x, which, z);
        if d.norm() < tol {
            -SINGULAR
        } else {
            tetra_margin(&Point3(n.map(|v| v / d)))
        }
    }
}

/// Inf of the fiber's tetrablock margin over the disc of radius `rmax`.
pub fn fiber_inf_margin(x: &Point7, which: Fiber, rmax: f64, cfg: &ScanConfig) -> Extremum<1> {
    disc_min(rmax, cfg.disc_nr, cfg.disc_ntheta, cfg.refine_iters, fiber_margin(x, which, cfg.tol))
}

const INNER_RADIUS: f64 = 1.0 - 1.0 / 4096.0;

/// Open-domain test through one fiber over the closed disc.
pub fn in_G_333_fiberwise(x: &Point7, which: Fiber, cfg: &ScanConfig) -> Verdict {
    let pivot = fiber_pivot(x, which);
    let base = 1.0 - pivot.norm();
    let band = cfg.boundary_band;
    if base < -band {
        // 1 − pivot·z vanishes at z = 1/pivot inside the closed disc.
        return Verdict::open(base, vec![pivot.inv()], cfg);
    }
    let rmax = if base > band { 1.0 } else { INNER_RADIUS };
    let e = fiber_inf_margin(x, which, rmax, cfg);
    Verdict::open(base.min(e.value), e.at.to_vec(), cfg)
}

/// Closed-domain test through one fiber over the open disc.
pub fn in_Gamma_333_fiberwise(x: &Point7, which: Fiber, cfg: &ScanConfig) -> Verdict {
    let pivot = fiber_pivot(x, which);
    let base = 1.0 - pivot.norm();
    if base < -cfg.boundary_band {
        return Verdict::closed(base, vec![pivot.inv()], cfg);
    }
    let e = fiber_inf_margin(x, which, INNER_RADIUS, cfg);
    Verdict::closed(base.min(0.0).min(e.value), e.at.to_vec(), cfg)
}

/// Coordinate permutations induced by permuting (z₁, z₂, z₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Permutation {
    /// z₁ ↔ z₂
    P12,
    /// z₁ ↔ z₃
    P13,
    /// z₂ ↔ z₃
    P23,
    /// new (z₁,z₂,z₃) = old (z₃,z₁,z₂)
    C1,
    /// new (z₁,z₂,z₃) = old (z₂,z₃,z₁)
    C2,
}

impl Permutation {
    pub const ALL: [Permutation; 5] = [
        Permutation::P12,
        Permutation::P13,
        Permutation::P23,
        Permutation::C1,
        Permutation::C2,
    ];

    fn indices(self) -> [usize; 7] {
        match self {
            Permutation::P12 => [1, 0, 2, 3, 5, 4, 6],
            Permutation::P13 => [3, 1, 5, 0, 4, 2, 6],
            Permutation::P23 => [0, 3, 4, 1, 2, 5, 6],
            Permutation::C1 => [3, 0, 4, 1, 5, 2, 6],
            Permutation::C2 => [1, 3, 5, 0, 2, 4, 6],
        }
    }

    /// σ with R_{permute(x)}(z) = R_x(w), w_{σ(k)} = z_k.
    pub fn variable_map(self) -> [usize; 3] {
        match self {
            Permutation::P12 => [1, 0, 2],
            Permutation::P13 => [2, 1, 0],
            Permutation::P23 => [0, 2, 1],
            Permutation::C1 => [2, 0, 1],
            Permutation::C2 => [1, 2, 0],
        }
    }
}

pub fn permute(x: &Point7, which: Permutation) -> Point7 {
    Point7(which.indices().map(|k| x.0[k]))
}

/// x⁽ʳ⁾ = (rx₁, rx₂, r²x₃, rx₄, r²x₅, r²x₆, r³x₇).
pub fn scale_for_radius(x: &Point7, r: f64) -> Point7 {
    const W: [i32; 7] = [1, 1, 2, 1, 2, 2, 3];
    let mut out = x.0;
    for (o, w) in out.iter_mut().zip(W) {
        *o *= r.powi(w);
    }
    Point7(out)
}

/// Multiplies every coordinate except the pivot (x₁, x₂ or x₄) by r.
pub fn starlike_scale(x: &Point7, r: f64, pivot: usize) -> Result<Point7> {
    if !(0.0..1.0).contains(&r) {
        return Err(MudomError::DomainViolation(format!("starlike radius {r} not in [0, 1)")));
    }
    starlike_scale_unchecked(x, r, pivot)
}

pub(crate) fn starlike_scale_unchecked(x: &Point7, r: f64, pivot: usize) -> Result<Point7> {
    if ![1, 2, 4].contains(&pivot) {
        return Err(MudomError::DomainViolation(format!("pivot {pivot} not in {{1, 2, 4}}")));
    }
    let mut out = x.0;
    for (k, o) in out.iter_mut().enumerate() {
        if k + 1 != pivot {
            *o *= r;
        }
    }
    Ok(Point7(out))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuResult {
    pub mu: f64,
    /// Largest radius verified inside; 1/μ up to the bracket width.
    pub witness_r: f64,
    pub iterations: usize,
    pub degenerate: bool,
}

/// μ_E(3;3;1,1,1)(A).
///
/// Bisection on μ ↦ membership of x⁽¹ᐟᵘ⁾ in G, seeded at r = 1/(1+‖A‖). The
/// open-set oracle is used for the bracket test because μ(A) < 1/r exactly
/// when x⁽ʳ⁾ ∈ G, and a single torus scan per step keeps the search cheap;
/// both sets share the boundary where the bracket closes.
pub fn mu_E333(a: &Matrix3, cfg: &ScanConfig) -> MuResult {
    let x = pi333(a);
    if x.0.iter().all(|c| c.norm() <= cfg.tol) {
        return MuResult { mu: 0.0, witness_r: f64::INFINITY, iterations: 0, degenerate: true };
    }
    let inside = |r: f64| in_G_333(&scale_for_radius(&x, r), cfg).margin > 0.0;
    let mut iterations = 0usize;
    let mut lo = 1.0 / (1.0 + a.operator_norm());
    while !inside(lo) && iterations < 64 {
        lo *= 0.5;
        iterations += 1;
    }
    let mut hi = lo * 2.0;
    while inside(hi) {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > 400 {
            // x⁽ʳ⁾ stays in G for astronomically large r: μ is zero to
            // working precision even though the closed form did not trigger.
            return MuResult { mu: 1.0 / lo, witness_r: lo, iterations, degenerate: false };
        }
    }
    // μ ∈ [1/hi, 1/lo]
    while 1.0 / lo - 1.0 / hi > cfg.tol * (1.0f64).max(1.0 / lo) && iterations < 400 {
        let mid_mu = 0.5 * (1.0 / lo + 1.0 / hi);
        let r = 1.0 / mid_mu;
        if inside(r) {
            lo = r;
        } else {
            hi = r;
        }
        iterations += 1;
    }
    MuResult { mu: 0.5 * (1.0 / lo + 1.0 / hi), witness_r: lo, iterations, degenerate: false }
}

/// Outcome of the search for a strict-contraction preimage of x.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreimageSearch {
    /// False when the closed-form parametrisation does not apply (some
    /// off-diagonal product vanishes); nothing is claimed then.
    pub attempted: bool,
    pub best_norm: f64,
    pub matrix: Option<Matrix3>,
}

impl PreimageSearch {
    pub fn found(&self) -> bool {
        self.attempted && self.best_norm < 1.0
    }
}

/// Looks for A with π(A) = x and ‖A‖ < 1.
///
/// Every preimage with non-zero off-diagonal entries has diagonal (x₁,x₂,x₄),
/// products a₁₂a₂₁, a₁₃a₃₁, a₂₃a₃₂ fixed by the minors, and u = a₁₂a₂₃a₃₁ a
/// root of u² − qu + a₁₂a₂₁a₁₃a₃₁a₂₃a₃₂ = 0 from det A. The remaining freedom
/// is a diagonal similarity, so the search minimises ‖DAD⁻¹‖ over positive
/// diagonal D (a convex problem in log D) for each root.
pub fn contractive_preimage(x: &Point7, cfg: &ScanConfig) -> PreimageSearch {
    let [x1, x2, x3, x4, x5, x6, x7] = x.0;
    let p12 = x1 * x2 - x3;
    let p13 = x1 * x4 - x5;
    let p23 = x2 * x4 - x6;
    let q = x7 - (x1 * x2 * x4 - x1 * p23 - x2 * p13 - x4 * p12);
    let prod = p12 * p13 * p23;
    let none = PreimageSearch { attempted: false, best_norm: f64::INFINITY, matrix: None };
    let tiny = cfg.tol;
    if p12.norm() < tiny || p13.norm() < tiny || p23.norm() < tiny {
        return none;
    }
    let disc = (q * q - 4.0 * prod).sqrt();
    let mut best: Option<(f64, Matrix3)> = None;
    for u in [(q + disc) * 0.5, (q - disc) * 0.5] {
        if u.norm() < tiny {
            continue;
        }
        let build = |t: [f64; 2]| {
            let (s1, s2) = (Complex::new(t[0].exp(), 0.0), Complex::new(t[1].exp(), 0.0));
            Matrix3([
                [x1, s1, p13 * s1 * s2 / u],
                [p12 / s1, x2, s2],
                [u / (s1 * s2), p23 / s2, x4],
            ])
        };
        let mut t = [0.5 * p12.norm().ln(), 0.5 * p23.norm().ln()];
        let mut val = build(t).operator_norm();
        let mut h = 1.0;
        for _ in 0..400 {
            let mut moved = false;
            for d in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]] {
                let c = [t[0] + h * d[0], t[1] + h * d[1]];
                let v = build(c).operator_norm();
                if v < val {
                    t = c;
                    val = v;
                    moved = true;
                    break;
                }
            }
            if !moved {
                h *= 0.5;
                if h < 1e-12 {
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|b| val < b.0) {
            best = Some((val, build(t)));
        }
    }
    match best {
        Some((n, m)) => PreimageSearch { attempted: true, best_norm: n, matrix: Some(m) },
        None => none,
    }
}

/// Max |Ψ⁽¹⁾| on one circle of the torus, used by diagnostics.
pub fn sup_psi_circle(x: &Point7, z3: Complex, cfg: &ScanConfig) -> f64 {
    let f = psi_abs(1, x, cfg.tol);
    circle_max(1.0, cfg.torus_n, cfg.refine_iters, |z2| f(z2, z3)).value
}

pub fn ones7() -> Point7 {
    Point7([ONE; 7])
}
