//! Seeded sampling. Every call builds a fresh `ChaCha20Rng::seed_from_u64`
//! from its seed, so identical seeds give identical matrices on every
//! platform and no state is shared between calls.

use super::linalg::{Complex, Matrix3, ZERO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Derives the seed of the `i`-th item of a sampled family.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    // splitmix64 finaliser over (seed, i)
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(i.wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_complex<R: Rng>(r: &mut R) -> Complex {
    let re: f64 = r.sample(StandardNormal);
    let im: f64 = r.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng>(r: &mut R) -> Matrix3 {
    let mut m = Matrix3::zero();
    for v in m.0.iter_mut().flatten() {
        *v = gaussian_complex(r);
    }
    m
}

/// A Ginibre sample rescaled to operator norm `norm_bound·(1−u)`,
/// u uniform in (0, 0.5).
pub fn random_contraction(seed: u64, norm_bound: f64) -> Matrix3 {
    let mut r = rng(seed);
    let g = ginibre(&mut r);
    let u: f64 = r.random_range(f64::EPSILON..0.5);
    let n = g.operator_norm();
    g.scale(Complex::new(norm_bound * (1.0 - u) / n, 0.0))
}

/// Haar-distributed unitary: Gram–Schmidt QR of a Ginibre sample. The
/// R factor produced this way has positive real diagonal, which is the
/// phase normalisation that makes Q Haar-distributed.
pub fn random_unitary(seed: u64) -> Matrix3 {
    let mut r = rng(seed);
    let g = ginibre(&mut r);
    let mut cols: [[Complex; 3]; 3] = [[ZERO; 3]; 3];
    for j in 0..3 {
        let mut v = [g.0[0][j], g.0[1][j], g.0[2][j]];
        // two passes of modified Gram–Schmidt for orthogonality to ~1e-16
        for _ in 0..2 {
            for q in cols.iter().take(j) {
                let proj: Complex = (0..3).map(|k| q[k].conj() * v[k]).sum();
                for k in 0..3 {
                    v[k] -= proj * q[k];
                }
            }
        }
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        cols[j] = v.map(|c| c / n);
    }
    Matrix3::from_fn(|i, j| cols[j][i])
}

/// Uniform sample of the closed disc of radius `radius`.
pub fn disc_point<R: Rng>(r: &mut R, radius: f64) -> Complex {
    let rho = radius * r.random::<f64>().sqrt();
    let t = r.random_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(rho, t)
}

pub fn circle_point<R: Rng>(r: &mut R) -> Complex {
    Complex::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))
}
