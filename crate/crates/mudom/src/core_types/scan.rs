//! Scan configuration, three-state verdicts and the grid searches shared
//! by every oracle.
//!
//! All grids use phases `φ₀ + 2πk/n` with φ₀ a fixed multiple of the golden
//! angle, so a grid of size n is a subset of the grid of size 2n and no grid
//! point sits on the real axis, where boundary points tend to have their
//! removable singularities. Reductions pick the first extremum in
//! row-major order, which makes results independent of the thread count.

use super::linalg::Complex;
use crate::error::{MudomError, Result};
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

pub const GOLDEN_ANGLE: f64 = PI * (3.0 - 2.236_067_977_499_79);

/// Value reported by scan objectives at points where a denominator
/// vanishes; large enough to push any margin far negative, but finite so it
/// serialises.
pub const SINGULAR: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    pub torus_n: usize,
    pub disc_nr: usize,
    pub disc_ntheta: usize,
    pub refine_iters: usize,
    pub tol: f64,
    pub boundary_band: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            torus_n: 512,
            disc_nr: 64,
            disc_ntheta: 256,
            refine_iters: 40,
            tol: 1e-9,
            boundary_band: 1e-7,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.torus_n < 8 {
            return Err(MudomError::DomainViolation("torus_n must be at least 8".into()));
        }
        if self.disc_nr < 2 || self.disc_ntheta < 8 {
            return Err(MudomError::DomainViolation(
                "disc grid needs disc_nr >= 2 and disc_ntheta >= 8".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(MudomError::DomainViolation("tol must be positive".into()));
        }
        if !(self.boundary_band >= self.tol && self.boundary_band.is_finite()) {
            return Err(MudomError::DomainViolation("boundary_band must be >= tol".into()));
        }
        Ok(())
    }

    /// Radii 1 − 2⁻ᵏ, k = 1..=12, used to approach the torus from inside.
    pub fn shrinking_radii() -> impl Iterator<Item = f64> {
        (1..=12).map(|k| 1.0 - 0.5f64.powi(k))
    }

    pub fn band(&self) -> f64 {
        self.boundary_band
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum State {
    Inside,
    BoundaryBand,
    Outside,
}

impl State {
    pub fn as_str(self) -> &'static str {
        match self {
            State::Inside => "Inside",
            State::BoundaryBand => "BoundaryBand",
            State::Outside => "Outside",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub state: State,
    pub margin: f64,
    pub witness: Vec<Complex>,
    pub config: ScanConfig,
}

impl Verdict {
    /// Verdict for an open set: strictly positive margin beyond the band is
    /// required for Inside.
    pub fn open(margin: f64, witness: Vec<Complex>, config: &ScanConfig) -> Self {
        let b = config.boundary_band;
        let state = if margin > b {
            State::Inside
        } else if margin >= -b {
            State::BoundaryBand
        } else {
            State::Outside
        };
        Verdict { state, margin, witness, config: *config }
    }

    /// Verdict for a closed set: margins within the band count as members,
    /// a further decade below the band is reported as BoundaryBand.
    pub fn closed(margin: f64, witness: Vec<Complex>, config: &ScanConfig) -> Self {
        let b = config.boundary_band;
        let state = if margin >= -b {
            State::Inside
        } else if margin >= -10.0 * b {
            State::BoundaryBand
        } else {
            State::Outside
        };
        Verdict { state, margin, witness, config: *config }
    }

    pub fn is_inside(&self) -> bool {
        self.state == State::Inside
    }

    pub fn inside_or_band(&self) -> bool {
        self.state != State::Outside
    }
}

/// Location and value of a scan extremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum<const D: usize> {
    pub value: f64,
    pub at: [Complex; D],
}

fn sanitize_max(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn sanitize_min(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

static THREADS: OnceLock<usize> = OnceLock::new();

/// Worker count: `MUDOM_THREADS` if set, capped by the available cores.
pub fn thread_count() -> usize {
    *THREADS.get_or_init(|| {
        let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        match std::env::var("MUDOM_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(n) if n >= 1 => n.min(avail),
            _ => avail,
        }
    })
}

/// Ordered parallel map over `0..n`.
pub fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = thread_count().min(n.max(1));
    if threads <= 1 || n < 32 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let lo = (t * chunk).min(n);
                let hi = ((t + 1) * chunk).min(n);
                s.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    })
}

fn phases(n: usize, offset: f64) -> Vec<Complex> {
    (0..n)
        .map(|k| Complex::from_polar(1.0, offset + TAU * k as f64 / n as f64))
        .collect()
}

/// Refinement runs until the step has been halved `iters` times; moves
/// are capped so a drifting search still terminates.
const MAX_MOVES_PER_HALVING: usize = 8;

/// Pattern search in a 2-parameter space; `eval` maps parameters to the
/// objective (to be maximised), `clamp` projects back to the feasible set.
fn compass<F, C>(start: [f64; 2], start_val: f64, steps: [f64; 2], iters: usize, eval: F, clamp: C) -> ([f64; 2], f64)
where
    F: Fn([f64; 2]) -> f64,
    C: Fn([f64; 2]) -> [f64; 2],
{
    let (mut p, mut best) = (start, start_val);
    let mut h = steps;
    const DIRS: [[f64; 2]; 8] = [
        [1.0, 0.0],
        [-1.0, 0.0],
        [0.0, 1.0],
        [0.0, -1.0],
        [1.0, 1.0],
        [1.0, -1.0],
        [-1.0, 1.0],
        [-1.0, -1.0],
    ];
    let (mut halvings, mut moves) = (0, 0);
    while halvings < iters && moves < MAX_MOVES_PER_HALVING * iters {
        let mut cand: Option<([f64; 2], f64)> = None;
        for d in DIRS {
            let q = clamp([p[0] + d[0] * h[0], p[1] + d[1] * h[1]]);
            let v = sanitize_max(eval(q));
            if v > cand.map_or(best, |c| c.1) {
                cand = Some((q, v));
            }
        }
        match cand {
            Some((q, v)) => {
                p = q;
                best = v;
                moves += 1;
            }
            None => {
                h = [h[0] * 0.5, h[1] * 0.5];
                halvings += 1;
            }
        }
    }
    (p, best)
}

fn compass1<F: Fn(f64) -> f64>(start: f64, start_val: f64, step: f64, iters: usize, eval: F) -> (f64, f64) {
    let (mut p, mut best, mut h) = (start, start_val, step);
    let (mut halvings, mut moves) = (0, 0);
    while halvings < iters && moves < MAX_MOVES_PER_HALVING * iters {
        let up = sanitize_max(eval(p + h));
        let down = sanitize_max(eval(p - h));
        if up > best && up >= down {
            p += h;
            best = up;
            moves += 1;
        } else if down > best {
            p -= h;
            best = down;
            moves += 1;
        } else {
            h *= 0.5;
            halvings += 1;
        }
    }
    (p, best)
}

/// Estimate of sup |·| style objectives over the torus ρT², as a lower
/// bound: n×n grid then compass refinement at the best cell.
pub fn torus_max<F>(rho: f64, n: usize, refine: usize, f: F) -> Extremum<2>
where
    F: Fn(Complex, Complex) -> f64 + Sync,
{
    let a = phases(n, GOLDEN_ANGLE);
    let b = phases(n, 2.0 * GOLDEN_ANGLE);
    let rows = par_map(n, |j| {
        let z1 = a[j] * rho;
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (k, bk) in b.iter().enumerate() {
            let v = sanitize_max(f(z1, bk * rho));
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    });
    let mut arg = (f64::NEG_INFINITY, 0usize, 0usize);
    for (j, (v, k)) in rows.into_iter().enumerate() {
        if v > arg.0 {
            arg = (v, j, k);
        }
    }
    let step = TAU / n as f64;
    let t0 = [
        GOLDEN_ANGLE + step * arg.1 as f64,
        2.0 * GOLDEN_ANGLE + step * arg.2 as f64,
    ];
    let at = |t: [f64; 2]| [Complex::from_polar(rho, t[0]), Complex::from_polar(rho, t[1])];
    let (t, value) = compass(
        t0,
        arg.0,
        [step, step],
        refine,
        |t| {
            let z = at(t);
            f(z[0], z[1])
        },
        |t| t,
    );
    Extremum { value, at: at(t) }
}

/// Sup estimate over the circle ρT.
pub fn circle_max<F: Fn(Complex) -> f64>(rho: f64, n: usize, refine: usize, f: F) -> Extremum<1> {
    let step = TAU / n as f64;
    let mut arg = (f64::NEG_INFINITY, 0usize);
    for k in 0..n {
        let v = sanitize_max(f(Complex::from_polar(rho, GOLDEN_ANGLE + step * k as f64)));
        if v > arg.0 {
            arg = (v, k);
        }
    }
    let (t, value) = compass1(GOLDEN_ANGLE + step * arg.1 as f64, arg.0, step, refine, |t| {
        f(Complex::from_polar(rho, t))
    });
    Extremum { value, at: [Complex::from_polar(rho, t)] }
}

/// Sup estimate over the closed disc of radius `rmax` on an nr×nθ polar
/// grid (radii rmax·i/(nr−1), so both the centre and the rim are sampled).
pub fn disc_max<F>(rmax: f64, nr: usize, ntheta: usize, refine: usize, f: F) -> Extremum<1>
where
    F: Fn(Complex) -> f64 + Sync,
{
    let ph = phases(ntheta, GOLDEN_ANGLE);
    let dr = rmax / (nr.max(2) - 1) as f64;
    let rows = par_map(nr, |i| {
        let r = dr * i as f64;
        let mut best = (f64::NEG_INFINITY, 0usize);
        let count = if i == 0 { 1 } else { ntheta };
        for (k, p) in ph.iter().take(count).enumerate() {
            let v = sanitize_max(f(p * r));
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    });
    let mut arg = (f64::NEG_INFINITY, 0usize, 0usize);
    for (i, (v, k)) in rows.into_iter().enumerate() {
        if v > arg.0 {
            arg = (v, i, k);
        }
    }
    let step = TAU / ntheta as f64;
    let p0 = [dr * arg.1 as f64, GOLDEN_ANGLE + step * arg.2 as f64];
    let (p, value) = compass(
        p0,
        arg.0,
        [dr, step],
        refine,
        |p| f(Complex::from_polar(p[0], p[1])),
        |p| [p[0].clamp(0.0, rmax), p[1]],
    );
    Extremum { value, at: [Complex::from_polar(p[0], p[1])] }
}

/// Infimum counterpart of [`disc_max`].
pub fn disc_min<F>(rmax: f64, nr: usize, ntheta: usize, refine: usize, f: F) -> Extremum<1>
where
    F: Fn(Complex) -> f64 + Sync,
{
    let e = disc_max(rmax, nr, ntheta, refine, |z| -sanitize_min(f(z)));
    Extremum { value: -e.value, at: e.at }
}

/// Infimum over the circle ρT.
pub fn circle_min<F: Fn(Complex) -> f64>(rho: f64, n: usize, refine: usize, f: F) -> Extremum<1> {
    let e = circle_max(rho, n, refine, |z| -sanitize_min(f(z)));
    Extremum { value: -e.value, at: e.at }
}
