use super::linalg::{Complex, ZERO};

/// A point of C⁷ in the order (a₁₁, a₂₂, det A₁₂, a₃₃, det A₁₃, det A₂₃, det A).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point7(pub [Complex; 7]);

/// A point of C⁵ in the order (x₁, x₂, x₃, y₁, y₂).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point5(pub [Complex; 5]);

/// A tetrablock point (c₁, c₂, c₃).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point3(pub [Complex; 3]);

/// A symmetrized-bidisc point (s, p).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2(pub [Complex; 2]);

macro_rules! point_common {
    ($t:ident, $n:expr) => {
        impl $t {
            pub const DIM: usize = $n;

            pub fn zero() -> Self {
                $t([ZERO; $n])
            }

            pub fn from_re(v: [f64; $n]) -> Self {
                $t(v.map(|r| Complex::new(r, 0.0)))
            }

            pub fn scale(&self, c: Complex) -> Self {
                $t(self.0.map(|v| v * c))
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.0;
                for (o, v) in out.iter_mut().zip(other.0.iter()) {
                    *o += v;
                }
                $t(out)
            }

            pub fn midpoint(&self, other: &Self) -> Self {
                self.add(other).scale(Complex::new(0.5, 0.0))
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|c| c.is_finite())
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(other.0.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }
        }
    };
}

point_common!(Point7, 7);
point_common!(Point5, 5);
point_common!(Point3, 3);
point_common!(Point2, 2);

impl Point7 {
    pub fn ones() -> Self {
        Self::from_re([1.0; 7])
    }

    /// 1-based coordinate access, x(1) = x₁.
    pub fn x(&self, k: usize) -> Complex {
        self.0[k - 1]
    }
}

impl Point5 {
    pub fn x1(&self) -> Complex {
        self.0[0]
    }
    pub fn x2(&self) -> Complex {
        self.0[1]
    }
    pub fn x3(&self) -> Complex {
        self.0[2]
    }
    pub fn y1(&self) -> Complex {
        self.0[3]
    }
    pub fn y2(&self) -> Complex {
        self.0[4]
    }
}

impl Point2 {
    pub fn s(&self) -> Complex {
        self.0[0]
    }
    pub fn p(&self) -> Complex {
        self.0[1]
    }
}
