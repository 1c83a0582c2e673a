//! Geometric witnesses for Γ₃₃₃: non-convexity, the simple-connectedness
//! homotopy, separating polynomials (polynomial convexity) and the lift of
//! C⁵ hyperplanes through Φ_η (linear convexity).

use crate::core_types::sampling::sub_seed;
use crate::core_types::{random_contraction, Complex, Matrix2, Point3, Point7, ScanConfig, Verdict, ONE};
use crate::domain333::{in_Gamma_333, pi333, psi_i, starlike_scale_unchecked, sup_psi_shrinking};
use crate::error::{MudomError, Result};
use crate::tetrablock::tetra_margin;

#[derive(Clone, Debug, PartialEq)]
pub struct NonconvexityWitness {
    pub x: Point7,
    pub y: Point7,
    pub midpoint: Point7,
    pub verdicts: [Verdict; 3],
}

/// x = (1, i, i, 1, 1, i, i), y = (−i, 1, −i, −i, −1, i, 1) and their
/// midpoint, each tested for membership in Γ.
pub fn nonconvexity_witness(cfg: &ScanConfig) -> NonconvexityWitness {
    let i = Complex::new(0.0, 1.0);
    let x = Point7([ONE, i, i, ONE, ONE, i, i]);
    let y = Point7([-i, ONE, -i, -i, -ONE, i, ONE]);
    let midpoint = x.midpoint(&y);
    let verdicts = [in_Gamma_333(&x, cfg), in_Gamma_333(&y, cfg), in_Gamma_333(&midpoint, cfg)];
    NonconvexityWitness { x, y, midpoint, verdicts }
}

/// H(s, t): for s ≤ ½ the path (2sγ₁(t), 0, …, 0) out of the origin, for
/// s ≥ ½ the pivot-1 starlike scaling of γ(t) with factor 2s − 1.
pub fn homotopy_point(gamma_t: &Point7, s: f64) -> Point7 {
    if s <= 0.5 {
        let mut out = Point7::zero();
        out.0[0] = gamma_t.0[0] * (2.0 * s);
        out
    } else {
        starlike_scale_unchecked(gamma_t, 2.0 * s - 1.0, 1).expect("pivot 1 is valid")
    }
}

/// H(s, ·) over the sampled path; inputs and outputs are verified in Γ.
pub fn homotopy_H(gamma_samples: &[(f64, Point7)], s: f64, cfg: &ScanConfig) -> Result<Vec<Point7>> {
    if !(0.0..=1.0).contains(&s) {
        return Err(MudomError::DomainViolation(format!("s = {s} not in [0, 1]")));
    }
    let mut out = Vec::with_capacity(gamma_samples.len());
    for &(t, g) in gamma_samples {
        if !in_Gamma_333(&g, cfg).inside_or_band() {
            return Err(MudomError::PathLeavesGamma { s, t });
        }
        let h = homotopy_point(&g, s);
        if !in_Gamma_333(&h, cfg).inside_or_band() {
            return Err(MudomError::PathLeavesGamma { s, t });
        }
        out.push(h);
    }
    Ok(out)
}

fn fn_matrix(x: &Point7, z0: Complex, w0: Complex) -> Matrix2 {
    let (x1, x4, x5) = (x.x(1), x.x(4), x.x(5));
    // B·diag(z₀, w₀) with B = [[x₁, x₁x₄ − x₅], [1, x₄]]
    Matrix2([[x1 * z0, (x1 * x4 - x5) * w0], [z0, x4 * w0]])
}

/// f_N(x) = (x₂ − z₀x₃ − w₀x₆ + z₀w₀x₇)·det Σ_{k=0}^{N} (B_x M)ᵏ.
///
/// Intended for |z₀|, |w₀| < 1, where f_N → Ψ⁽²⁾((z₀, w₀), x) on Γ.
pub fn fn_polynomial(x: &Point7, z0: Complex, w0: Complex, n: usize) -> Complex {
    let t = fn_matrix(x, z0, w0);
    let mut power = Matrix2::identity();
    let mut sum = Matrix2::identity();
    for _ in 0..n {
        power = power.mul(&t);
        sum = sum.add(&power);
    }
    let lead = x.x(2) - z0 * x.x(3) - w0 * x.x(6) + z0 * w0 * x.x(7);
    lead * sum.det()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    TetraLift,
    FNPolynomial,
    Hyperplane,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::TetraLift => "TetraLift",
            CertificateKind::FNPolynomial => "FNPolynomial",
            CertificateKind::Hyperplane => "Hyperplane",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateData {
    /// A base triple of the target lies outside Γ-tetrablock; any
    /// tetrablock separator composed with the coordinate projection works.
    TetraLift { triple: [usize; 3], margin: f64 },
    FNPolynomial { z0: Complex, w0: Complex, n: usize, epsilon: f64, psi2_at_target: f64 },
    /// Affine functional L(x) = Σ cₖxₖ + constant.
    Hyperplane { coefficients: [Complex; 7], constant: Complex },
}

/// Value semantics by kind:
/// TetraLift and FNPolynomial report a separating function h with
/// `value_at_target` = h(target) > 1 ≥ `sup_on_sample` = max h(samples);
/// Hyperplane reports `value_at_target` = |L(target)| and `sup_on_sample`
/// = min |L| over the samples (the hyperplane misses them when positive).
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationCertificate {
    pub data: CertificateData,
    pub sup_on_sample: f64,
    pub value_at_target: f64,
    pub sample_seed: u64,
    pub samples: usize,
}

impl SeparationCertificate {
    pub fn kind(&self) -> CertificateKind {
        match self.data {
            CertificateData::TetraLift { .. } => CertificateKind::TetraLift,
            CertificateData::FNPolynomial { .. } => CertificateKind::FNPolynomial,
            CertificateData::Hyperplane { .. } => CertificateKind::Hyperplane,
        }
    }
}

pub const SEPARATION_SEED: u64 = 0x5e9a_4a7e;
pub const SEPARATION_SAMPLES: usize = 1000;
const MAX_N: usize = 4096;

/// π-images of contractions with ‖A‖ < 1, which lie in G ⊂ Γ.
pub fn gamma_samples(seed: u64, n: usize) -> Vec<Point7> {
    (0..n).map(|i| pi333(&random_contraction(sub_seed(seed, i as u64), 1.0))).collect()
}

const TRIPLES: [[usize; 3]; 3] = [[1, 2, 3], [1, 4, 5], [2, 4, 6]];

fn triple(x: &Point7, idx: [usize; 3]) -> Point3 {
    Point3(idx.map(|k| x.x(k)))
}

/// A function that is > 1 at `a` and ≤ 1 on sampled points of Γ.
pub fn separate(a: &Point7, cfg: &ScanConfig) -> Result<SeparationCertificate> {
    if in_Gamma_333(a, cfg).inside_or_band() {
        return Err(MudomError::TargetNotOutside);
    }
    let samples = gamma_samples(SEPARATION_SEED, SEPARATION_SAMPLES);
    let worst = TRIPLES
        .iter()
        .map(|&t| (t, tetra_margin(&triple(a, t))))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("three triples");
    if worst.1 < -cfg.boundary_band {
        let (idx, margin) = worst;
        let sup = samples.iter().map(|y| 1.0 - tetra_margin(&triple(y, idx))).fold(f64::NEG_INFINITY, f64::max);
        let cert = SeparationCertificate {
            data: CertificateData::TetraLift { triple: idx, margin },
            sup_on_sample: sup,
            value_at_target: 1.0 - margin,
            sample_seed: SEPARATION_SEED,
            samples: samples.len(),
        };
        if sup > 1.0 {
            return Err(MudomError::SeparationNotCertified(format!("tetrablock margin sup {sup} > 1 on samples")));
        }
        return Ok(cert);
    }
    let e = sup_psi_shrinking(2, a, cfg);
    if e.value <= 1.0 {
        return Err(MudomError::SeparationNotCertified(format!("sup |Psi2| = {} <= 1", e.value)));
    }
    let [z0, w0] = e.at;
    let psi2 = |y: &Point7| psi_i(2, (z0, w0), y, cfg.tol);
    let target = psi2(a)?;
    let epsilon = (target.norm() - 1.0) / 3.0;
    let mut reference = vec![(*a, target)];
    for y in &samples {
        reference.push((*y, psi2(y)?));
    }
    // Smallest N whose truncation error is below ε at the target and on
    // every sample.
    let defect = |n: usize| {
        reference.iter().map(|(y, p)| (fn_polynomial(y, z0, w0, n) - p).norm()).fold(0.0, f64::max)
    };
    let mut n = 0;
    while defect(n) >= epsilon {
        n = if n == 0 { 1 } else { n * 2 };
        if n > MAX_N {
            return Err(MudomError::SeparationNotCertified(format!("no N <= {MAX_N} reaches epsilon {epsilon}")));
        }
    }
    let (mut lo, mut hi) = (n / 2, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if defect(mid) < epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n = if defect(lo) < epsilon { lo } else { hi };
    let scale = 1.0 / (1.0 + epsilon);
    let value_at_target = fn_polynomial(a, z0, w0, n).norm() * scale;
    let sup_on_sample =
        samples.iter().map(|y| fn_polynomial(y, z0, w0, n).norm() * scale).fold(f64::NEG_INFINITY, f64::max);
    if sup_on_sample > 1.0 || value_at_target <= 1.0 {
        return Err(MudomError::SeparationNotCertified(format!(
            "f_N: target {value_at_target}, sample sup {sup_on_sample}"
        )));
    }
    Ok(SeparationCertificate {
        data: CertificateData::FNPolynomial { z0, w0, n, epsilon, psi2_at_target: target.norm() },
        sup_on_sample,
        value_at_target,
        sample_seed: SEPARATION_SEED,
        samples: samples.len(),
    })
}

/// L with L(x) = l(Φ_η(x)) for l(y) = Σ aₖyₖ + c on C⁵:
/// coefficients (a₁, a₄, a₂, a₄η, a₂η, a₅η, a₃η) and the same constant.
pub fn hyperplane_lift(l: [Complex; 5], c: Complex, eta: Complex) -> ([Complex; 7], Complex) {
    let [a1, a2, a3, a4, a5] = l;
    ([a1, a4, a2, a4 * eta, a2 * eta, a5 * eta, a3 * eta], c)
}

pub fn eval_affine7(coefficients: &[Complex; 7], constant: Complex, x: &Point7) -> Complex {
    coefficients.iter().zip(x.0.iter()).map(|(a, b)| a * b).sum::<Complex>() + constant
}

/// Certificate for the lift of a C⁵ hyperplane through Φ_η, measured
/// against `target` and sampled Γ points.
pub fn hyperplane_certificate(l: [Complex; 5], c: Complex, eta: Complex, target: &Point7) -> SeparationCertificate {
    let (coefficients, constant) = hyperplane_lift(l, c, eta);
    let samples = gamma_samples(SEPARATION_SEED, SEPARATION_SAMPLES);
    let miss = samples.iter().map(|y| eval_affine7(&coefficients, constant, y).norm()).fold(f64::INFINITY, f64::min);
    SeparationCertificate {
        value_at_target: eval_affine7(&coefficients, constant, target).norm(),
        data: CertificateData::Hyperplane { coefficients, constant },
        sup_on_sample: miss,
        sample_seed: SEPARATION_SEED,
        samples: samples.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::sampling::{disc_point, rng};
    use crate::core_types::{State, ZERO};
    use crate::domain312::phi_eta;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }
    fn cfg() -> ScanConfig {
        ScanConfig::default()
    }

    /// det Σ_{k≤N} Tᵏ from tr T and det T only, via power sums.
    fn det_neumann_by_traces(t: Complex, d: Complex, n: usize) -> Complex {
        let mut p = vec![c(2.0, 0.0), t];
        for k in 2..=n {
            p.push(t * p[k - 1] - d * p[k - 2]);
        }
        let mut total = ZERO;
        let mut dm = ONE;
        for m in 0..=n {
            let mut inner = ONE;
            for pl in p.iter().take(n - m + 1).skip(1) {
                inner += pl;
            }
            total += dm * inner;
            dm *= d;
        }
        total
    }

    #[test]
    fn nonconvexity_midpoint_is_outside() {
        let w = nonconvexity_witness(&cfg());
        assert!(w.verdicts[0].inside_or_band());
        assert_eq!(w.verdicts[2].state, State::Outside);
    }

    #[test]
    fn homotopy_examples() {
        let g = pi333(&random_contraction(3, 0.8));
        assert_eq!(homotopy_point(&g, 1.0), g);
        assert_eq!(homotopy_point(&g, 0.0), Point7::zero());
        let mut half = Point7::zero();
        half.0[0] = g.0[0];
        assert_eq!(homotopy_point(&g, 0.5), half);
        // both branches agree at the junction
        let above = homotopy_point(&g, 0.5 + 1e-12);
        assert!(above.max_abs_diff(&half) < 1e-11);
        let path: Vec<(f64, Point7)> = (0..4).map(|k| (k as f64 / 4.0, pi333(&random_contraction(k, 0.9)))).collect();
        for s in [0.0, 0.3, 0.5, 0.8, 1.0] {
            assert_eq!(homotopy_H(&path, s, &cfg()).unwrap().len(), 4);
        }
        assert!(homotopy_H(&path, 1.5, &cfg()).is_err());
        let bad = [(0.0, Point7::ones().scale(c(0.0, 1.0)))];
        assert!(matches!(homotopy_H(&bad, 0.5, &cfg()), Err(MudomError::PathLeavesGamma { .. })));
    }

    #[test]
    fn fn_polynomial_examples() {
        let x = Point7([0; 7].map(|k: i32| c(0.1 * k as f64, 0.05)));
        let (z0, w0) = (c(0.3, 0.2), c(-0.4, 0.1));
        let lead = x.x(2) - z0 * x.x(3) - w0 * x.x(6) + z0 * w0 * x.x(7);
        assert_eq!(fn_polynomial(&x, z0, w0, 0), lead);
        assert_eq!(fn_polynomial(&Point7::zero(), z0, w0, 7), ZERO);
    }

    #[test]
    fn fn_polynomial_matches_trace_expansion() {
        let mut r = rng(21);
        for n in [0, 1, 2, 5, 17] {
            for _ in 0..50 {
                let x = Point7([0; 7].map(|_| disc_point(&mut r, 1.0)));
                let (z0, w0) = (disc_point(&mut r, 0.9), disc_point(&mut r, 0.9));
                let tr = x.x(1) * z0 + x.x(4) * w0;
                let det = x.x(5) * z0 * w0;
                let lead = x.x(2) - z0 * x.x(3) - w0 * x.x(6) + z0 * w0 * x.x(7);
                let oracle = lead * det_neumann_by_traces(tr, det, n);
                let v = fn_polynomial(&x, z0, w0, n);
                assert!((v - oracle).norm() < 1e-12 * (1.0 + oracle.norm()), "n={n}");
            }
        }
    }

    #[test]
    fn fn_polynomial_converges_to_psi2() {
        let mut r = rng(22);
        for s in 0..20 {
            let x = pi333(&random_contraction(s, 0.95));
            let (z0, w0) = (disc_point(&mut r, 0.9), disc_point(&mut r, 0.9));
            let p = psi_i(2, (z0, w0), &x, 1e-12).unwrap();
            assert!((fn_polynomial(&x, z0, w0, 400) - p).norm() < 1e-9);
        }
    }

    #[test]
    fn separate_examples() {
        let cfg = cfg();
        assert!(matches!(separate(&Point7::zero(), &cfg), Err(MudomError::TargetNotOutside)));
        let two = separate(&Point7::ones().scale(c(2.0, 0.0)), &cfg).unwrap();
        assert_eq!(two.kind(), CertificateKind::TetraLift);
        assert!(two.value_at_target > 1.0 && two.sup_on_sample <= 1.0);
        // all base triples in the tetrablock, |Ψ⁽²⁾| = 2|z₁z₃| reaches 2
        let mut e7 = Point7::zero();
        e7.0[6] = c(2.0, 0.0);
        let cert = separate(&e7, &cfg).unwrap();
        assert_eq!(cert.kind(), CertificateKind::FNPolynomial);
        assert!(cert.value_at_target > 1.0 && cert.sup_on_sample <= 1.0, "{cert:?}");
    }

    #[test]
    fn separate_generic_fn_certificate() {
        let cfg = cfg();
        let mut x = pi333(&random_contraction(9, 0.9));
        x.0[6] = c(-1.5, 2.0);
        let cert = separate(&x, &cfg).unwrap();
        assert!(cert.value_at_target > 1.0 && cert.sup_on_sample <= 1.0, "{cert:?}");
        if let CertificateData::FNPolynomial { n, .. } = cert.data {
            assert!(n <= MAX_N);
        }
    }

    #[test]
    fn hyperplane_examples() {
        let k = c(0.7, 0.1);
        let (l, cc) = hyperplane_lift([ONE, ZERO, ZERO, ZERO, ZERO], k, c(0.3, 0.4));
        assert_eq!(l, [ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO]);
        assert_eq!(cc, k);
        let a = [c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0), c(9.0, 1.0)];
        let (l0, _) = hyperplane_lift(a, ZERO, ZERO);
        assert_eq!(l0, [a[0], a[3], a[1], ZERO, ZERO, ZERO, ZERO]);
        let mut r = rng(23);
        for _ in 0..200 {
            let a = [0; 5].map(|_| disc_point(&mut r, 2.0));
            let cc = disc_point(&mut r, 2.0);
            let eta = disc_point(&mut r, 1.0);
            let x = Point7([0; 7].map(|_| disc_point(&mut r, 2.0)));
            let (l, k) = hyperplane_lift(a, cc, eta);
            let y = phi_eta(&x, eta);
            let direct: Complex = a.iter().zip(y.0.iter()).map(|(p, q)| p * q).sum::<Complex>() + cc;
            assert!((eval_affine7(&l, k, &x) - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn hyperplane_certificate_through_outside_point() {
        // x₁ = 2 is never attained on Γ (|x₁| ≤ 1 there)
        let mut t = Point7::zero();
        t.0[0] = c(2.0, 0.0);
        let cert = hyperplane_certificate([ONE, ZERO, ZERO, ZERO, ZERO], c(-2.0, 0.0), ONE, &t);
        assert_eq!(cert.kind(), CertificateKind::Hyperplane);
        assert_eq!(cert.value_at_target, 0.0);
        assert!(cert.sup_on_sample > 0.5);
    }
}
