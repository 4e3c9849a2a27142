//! Real, complex and quaternion entries behind a single trait so the matrix
//! sampler and the Householder reduction are written once for β = 1, 2, 4.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// A real quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    // Hamilton product.
    #[inline(always)]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl AddAssign for Quaternion {
    #[inline(always)]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline(always)]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Matrix entry type of a Gaussian β-ensemble.
///
/// `BETA` is the number of real components; `conj` is the involution under
/// which the sampled matrices are self-adjoint.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const BETA: u32;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;

    /// Magnitude of the non-real part.
    fn imag_norm(self) -> f64 {
        (self.norm_sqr() - self.re() * self.re()).max(0.0).sqrt()
    }

    fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit-modulus factor `x / |x|`; one when `x` vanishes.
    fn phase(self) -> Self {
        let r = self.abs();
        if r == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / r)
        }
    }

    /// Real components in storage order.
    fn components(self) -> [f64; 4];

    /// An off-diagonal entry whose `BETA` real components are i.i.d. N(0, 1).
    fn sample_offdiag<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const BETA: u32 = 1;

    #[inline(always)]
    fn zero() -> Self {
        0.0
    }
    #[inline(always)]
    fn one() -> Self {
        1.0
    }
    #[inline(always)]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn re(self) -> f64 {
        self
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
    #[inline(always)]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline(always)]
    fn imag_norm(self) -> f64 {
        0.0
    }
    #[inline(always)]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    /// The real reflector keeps the positive multiple of e₁, so the phase is
    /// always one (never `sign(x)`).
    #[inline(always)]
    fn phase(self) -> Self {
        1.0
    }
    fn components(self) -> [f64; 4] {
        [self, 0.0, 0.0, 0.0]
    }
    #[inline(always)]
    fn sample_offdiag<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    const BETA: u32 = 2;

    #[inline(always)]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline(always)]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline(always)]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline(always)]
    fn re(self) -> f64 {
        self.re
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline(always)]
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline(always)]
    fn imag_norm(self) -> f64 {
        self.im.abs()
    }
    fn components(self) -> [f64; 4] {
        [self.re, self.im, 0.0, 0.0]
    }
    #[inline(always)]
    fn sample_offdiag<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}

impl Scalar for Quaternion {
    const BETA: u32 = 4;

    #[inline(always)]
    fn zero() -> Self {
        Quaternion::default()
    }
    #[inline(always)]
    fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }
    #[inline(always)]
    fn from_real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }
    #[inline(always)]
    fn re(self) -> f64 {
        self.w
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }
    #[inline(always)]
    fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
    #[inline(always)]
    fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
    fn components(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
    #[inline(always)]
    fn sample_offdiag<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_units_anticommute() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, Quaternion::from_real(-1.0));
    }

    #[test]
    fn conj_product_is_norm() {
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.5);
        let p = q * q.conj();
        assert!((p.w - q.norm_sqr()).abs() < 1e-14);
        assert!(p.imag_norm() < 1e-14);
        let z = Complex64::new(1.0, -2.0);
        assert!(((z * Scalar::conj(z)).re - 5.0).abs() < 1e-14);
    }

    #[test]
    fn phase_is_unit() {
        let q = Quaternion::new(1.0, 2.0, -2.0, 4.0);
        assert!((q.phase().abs() - 1.0).abs() < 1e-15);
        assert_eq!(Scalar::phase(-3.0_f64), 1.0);
        assert_eq!(Complex64::zero().phase(), Complex64::one());
    }
}
