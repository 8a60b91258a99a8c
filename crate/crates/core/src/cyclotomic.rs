//! Exact arithmetic in Z[√2] and Z[ζ], ζ = e^{iπ/4}.
//!
//! The octagon group has all matrix entries in these rings (up to one fixed
//! real scalar), so conjugacy keys and length comparisons can be made exactly.

use std::cmp::Ordering;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// `a + b√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ZSqrt2 {
    pub a: i64,
    pub b: i64,
}

impl ZSqrt2 {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2
    }

    /// Sign of `a + b√2`, computed exactly.
    pub fn signum(self) -> i32 {
        let (a, b) = (self.a as i128, self.b as i128);
        let sa = a.signum();
        let sb = b.signum();
        if sa == sb || sb == 0 {
            return sa as i32;
        }
        if sa == 0 {
            return sb as i32;
        }
        // opposite signs: compare a² with 2b²
        match (a * a).cmp(&(2 * b * b)) {
            Ordering::Greater => sa as i32,
            Ordering::Less => sb as i32,
            Ordering::Equal => 0,
        }
    }
}

impl Ord for ZSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl PartialOrd for ZSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ZSqrt2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for ZSqrt2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for ZSqrt2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)
    }
}

/// `c0 + c1 ζ + c2 ζ² + c3 ζ³` with ζ⁴ = −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Z8 {
    pub c: [i64; 4],
}

impl Z8 {
    pub const ZERO: Z8 = Z8 { c: [0, 0, 0, 0] };
    pub const ONE: Z8 = Z8 { c: [1, 0, 0, 0] };
    /// α = 1 + √2 = 1 + ζ − ζ³.
    pub const ALPHA: Z8 = Z8 { c: [1, 1, 0, -1] };

    pub const fn new(c: [i64; 4]) -> Self {
        Self { c }
    }

    /// ζ^k.
    pub fn zeta_pow(k: usize) -> Self {
        Self::ONE.mul_zeta_pow(k)
    }

    /// Multiply by ζ^k (a signed rotation of the coefficients).
    #[inline]
    pub fn mul_zeta_pow(self, k: usize) -> Self {
        let k = k % 8;
        let mut out = [0i64; 4];
        for (j, &v) in self.c.iter().enumerate() {
            let e = j + k;
            let (idx, sign) = if e % 8 < 4 { (e % 8, 1) } else { (e % 8 - 4, -1) };
            out[idx] = sign * v;
        }
        Self { c: out }
    }

    /// Multiply by α = 1 + ζ − ζ³.
    #[inline]
    pub fn mul_alpha(self) -> Self {
        let [c0, c1, c2, c3] = self.c;
        // z + ζz − ζ³z
        Self {
            c: [c0 - c3 + c1, c1 + c0 + c2, c2 + c1 + c3, c3 + c2 - c0],
        }
    }

    /// Complex conjugate: ζ ↦ ζ⁻¹ = −ζ³.
    #[inline]
    pub fn conj(self) -> Self {
        let [c0, c1, c2, c3] = self.c;
        Self { c: [c0, -c3, -c2, -c1] }
    }

    /// `|z|²` as an element of Z[√2].
    #[inline]
    pub fn norm_sq(self) -> ZSqrt2 {
        let [a0, a1, a2, a3] = self.c;
        ZSqrt2::new(
            a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3,
            a0 * a1 + a1 * a2 + a2 * a3 - a0 * a3,
        )
    }

    /// `2 Re z` as an element of Z[√2].
    #[inline]
    pub fn re2(self) -> ZSqrt2 {
        ZSqrt2::new(2 * self.c[0], self.c[1] - self.c[3])
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        let [a0, a1, a2, a3] = self.c;
        let (a0, a1, a2, a3) = (a0 as f64, a1 as f64, a2 as f64, a3 as f64);
        Complex64::new(a0 + (a1 - a3) * FRAC_1_SQRT_2, a2 + (a1 + a3) * FRAC_1_SQRT_2)
    }

    pub fn is_zero(self) -> bool {
        self.c == [0; 4]
    }

    pub fn max_abs_coeff(self) -> i64 {
        self.c.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl Add for Z8 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            c: [
                self.c[0] + o.c[0],
                self.c[1] + o.c[1],
                self.c[2] + o.c[2],
                self.c[3] + o.c[3],
            ],
        }
    }
}

impl Sub for Z8 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self {
            c: [
                self.c[0] - o.c[0],
                self.c[1] - o.c[1],
                self.c[2] - o.c[2],
                self.c[3] - o.c[3],
            ],
        }
    }
}

impl Neg for Z8 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            c: [-self.c[0], -self.c[1], -self.c[2], -self.c[3]],
        }
    }
}

impl Mul for Z8 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let a = self.c;
        let b = o.c;
        let mut p = [0i64; 7];
        for i in 0..4 {
            for j in 0..4 {
                p[i + j] += a[i] * b[j];
            }
        }
        Self {
            c: [p[0] - p[4], p[1] - p[5], p[2] - p[6], p[3]],
        }
    }
}

impl Mul<i64> for Z8 {
    type Output = Self;
    #[inline]
    fn mul(self, k: i64) -> Self {
        Self {
            c: [self.c[0] * k, self.c[1] * k, self.c[2] * k, self.c[3] * k],
        }
    }
}
