//! Double-double scalar (about 32 significant digits) usable wherever the
//! crate is generic over [`Real`].
//!
//! Arithmetic and the elementary functions come from `twofloat`; this module
//! only supplies the trait plumbing nalgebra needs.

use crate::scalar::Real;
use approx::{AbsDiffEq, RelativeEq, UlpsEq};
use simba::scalar::{ComplexField, Field, RealField, SubsetOf};
use simba::simd::{PrimitiveSimdValue, SimdValue};
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use twofloat::{consts, TwoFloat};

/// `2^-104`. `TwoFloat::EPSILON` is the smallest normal `f64`, which no
/// iterative solver can reach.
const EPSILON: f64 = f64::EPSILON * f64::EPSILON;

/// A double-double number.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(TwoFloat);

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        Self(TwoFloat::from(x))
    }

    /// Nearest `f64`.
    pub fn to_f64(self) -> f64 {
        self.0.hi() + self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.0.hi(), self.0.lo())
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr for DoubleDouble {
            type Output = Self;
            #[inline]
            fn $f(self, rhs: Self) -> Self {
                Self($tr::$f(self.0, rhs.0))
            }
        }
        impl $atr for DoubleDouble {
            #[inline]
            fn $af(&mut self, rhs: Self) {
                $atr::$af(&mut self.0, rhs.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

/// Long division by the leading word with two correction steps.
///
/// `twofloat`'s own quotient forms `1 - b·(1/b)` without a fused multiply-add
/// and so keeps only about 53 bits.
fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    if !q1.is_finite() || q1 == 0.0 {
        return TwoFloat::from(q1);
    }
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        Self(quotient(self.0, rhs.0))
    }
}

impl DivAssign for DoubleDouble {
    #[inline]
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs
    }
}
binop!(Rem, rem, RemAssign, rem_assign);

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self(TwoFloat::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Self)
    }
}

impl Signed for DoubleDouble {
    fn abs(&self) -> Self {
        Self(self.0.abs())
    }
    fn abs_sub(&self, other: &Self) -> Self {
        Self(Signed::abs_sub(&self.0, &other.0))
    }
    fn signum(&self) -> Self {
        Self(self.0.signum())
    }
    fn is_positive(&self) -> bool {
        self.0 > 0.0
    }
    fn is_negative(&self) -> bool {
        self.0 < 0.0
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        TwoFloat::from_i64(n).map(Self)
    }
    fn from_u64(n: u64) -> Option<Self> {
        TwoFloat::from_u64(n).map(Self)
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Self::new(n))
    }
    fn from_f32(n: f32) -> Option<Self> {
        Some(Self::new(n as f64))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(DoubleDouble::to_f64(*self))
    }
}

impl AbsDiffEq for DoubleDouble {
    type Epsilon = Self;
    fn default_epsilon() -> Self {
        Self(TwoFloat::from(EPSILON))
    }
    fn abs_diff_eq(&self, other: &Self, epsilon: Self) -> bool {
        (self.0 - other.0).abs() <= epsilon.0
    }
}

impl RelativeEq for DoubleDouble {
    fn default_max_relative() -> Self {
        Self(TwoFloat::from(EPSILON))
    }
    fn relative_eq(&self, other: &Self, epsilon: Self, max_relative: Self) -> bool {
        let diff = (self.0 - other.0).abs();
        if diff <= epsilon.0 {
            return true;
        }
        let largest = self.0.abs().max(other.0.abs());
        diff <= largest * max_relative.0
    }
}

impl UlpsEq for DoubleDouble {
    fn default_max_ulps() -> u32 {
        4
    }
    fn ulps_eq(&self, other: &Self, epsilon: Self, max_ulps: u32) -> bool {
        // Counts ulps of the leading component only.
        self.abs_diff_eq(other, epsilon) || self.0.hi().ulps_eq(&other.0.hi(), f64::EPSILON, max_ulps)
    }
}

impl SimdValue for DoubleDouble {
    const LANES: usize = 1;
    type Element = Self;
    type SimdBool = bool;

    fn splat(val: Self) -> Self {
        val
    }
    fn extract(&self, _: usize) -> Self {
        *self
    }
    unsafe fn extract_unchecked(&self, _: usize) -> Self {
        *self
    }
    fn replace(&mut self, _: usize, val: Self) {
        *self = val
    }
    unsafe fn replace_unchecked(&mut self, _: usize, val: Self) {
        *self = val
    }
    fn select(self, cond: bool, other: Self) -> Self {
        if cond {
            self
        } else {
            other
        }
    }
}

impl PrimitiveSimdValue for DoubleDouble {}

impl Field for DoubleDouble {}

impl SubsetOf<DoubleDouble> for DoubleDouble {
    fn to_superset(&self) -> Self {
        *self
    }
    fn from_superset_unchecked(element: &Self) -> Self {
        *element
    }
    fn is_in_subset(_: &Self) -> bool {
        true
    }
}

macro_rules! float_subset {
    ($t:ty) => {
        impl SubsetOf<DoubleDouble> for $t {
            fn to_superset(&self) -> DoubleDouble {
                DoubleDouble::new(*self as f64)
            }
            fn from_superset_unchecked(element: &DoubleDouble) -> Self {
                DoubleDouble::to_f64(*element) as $t
            }
            fn is_in_subset(_: &DoubleDouble) -> bool {
                true
            }
        }
    };
}

float_subset!(f32);
float_subset!(f64);

macro_rules! unary {
    ($($f:ident),*) => {$(
        #[inline]
        fn $f(self) -> Self {
            Self(self.0.$f())
        }
    )*};
}

impl ComplexField for DoubleDouble {
    type RealField = Self;

    unary!(floor, ceil, round, trunc, fract, sin, cos, tan, asin, acos, atan, sinh, cosh, tanh, asinh,
        acosh, atanh, log2, log10, ln, ln_1p, sqrt, exp, exp2, exp_m1, cbrt);

    fn recip(self) -> Self {
        Self::one() / self
    }
    fn from_real(re: Self) -> Self {
        re
    }
    fn real(self) -> Self {
        self
    }
    fn imaginary(self) -> Self {
        Self::zero()
    }
    fn modulus(self) -> Self {
        Self(self.0.abs())
    }
    fn modulus_squared(self) -> Self {
        self * self
    }
    fn argument(self) -> Self {
        if self.0 >= 0.0 {
            Self::zero()
        } else {
            Self(consts::PI)
        }
    }
    fn norm1(self) -> Self {
        Self(self.0.abs())
    }
    fn scale(self, factor: Self) -> Self {
        self * factor
    }
    fn unscale(self, factor: Self) -> Self {
        self / factor
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn abs(self) -> Self {
        Self(self.0.abs())
    }
    fn hypot(self, other: Self) -> Self {
        // Scaled: twofloat squares directly and underflows below about 1e-154.
        let (a, b) = (self.0.abs(), other.0.abs());
        let (small, big) = if a <= b { (a, b) } else { (b, a) };
        if big == 0.0 {
            return Self::zero();
        }
        let r = Self(small) / Self(big);
        Self(big) * (Self::one() + r * r).sqrt()
    }
    fn conjugate(self) -> Self {
        self
    }
    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.0.sin_cos();
        (Self(s), Self(c))
    }
    fn log(self, base: Self) -> Self {
        Self(self.0.log(base.0))
    }
    fn powi(self, n: i32) -> Self {
        Self(self.0.powi(n))
    }
    fn powf(self, n: Self) -> Self {
        Self(self.0.powf(n.0))
    }
    fn powc(self, n: Self) -> Self {
        Self(self.0.powf(n.0))
    }
    fn is_finite(&self) -> bool {
        self.0.is_valid()
    }
    fn try_sqrt(self) -> Option<Self> {
        if self.0 >= 0.0 {
            Some(Self(self.0.sqrt()))
        } else {
            None
        }
    }
}

impl RealField for DoubleDouble {
    fn is_sign_positive(&self) -> bool {
        self.0.is_sign_positive()
    }
    fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }
    fn copysign(self, sign: Self) -> Self {
        Self(self.0.copysign(sign.0))
    }
    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
    fn clamp(self, min: Self, max: Self) -> Self {
        RealField::max(RealField::min(self, max), min)
    }
    fn atan2(self, other: Self) -> Self {
        Self(self.0.atan2(other.0))
    }
    fn min_value() -> Option<Self> {
        Some(Self(TwoFloat::MIN))
    }
    fn max_value() -> Option<Self> {
        Some(Self(TwoFloat::MAX))
    }
    fn pi() -> Self {
        Self(consts::PI)
    }
    fn two_pi() -> Self {
        Self(consts::TAU)
    }
    fn frac_pi_2() -> Self {
        Self(consts::FRAC_PI_2)
    }
    fn frac_pi_3() -> Self {
        Self(consts::FRAC_PI_3)
    }
    fn frac_pi_4() -> Self {
        Self(consts::FRAC_PI_4)
    }
    fn frac_pi_6() -> Self {
        Self(consts::FRAC_PI_6)
    }
    fn frac_pi_8() -> Self {
        Self(consts::FRAC_PI_8)
    }
    fn frac_1_pi() -> Self {
        Self(consts::FRAC_1_PI)
    }
    fn frac_2_pi() -> Self {
        Self(consts::FRAC_2_PI)
    }
    fn frac_2_sqrt_pi() -> Self {
        Self(consts::FRAC_2_SQRT_PI)
    }
    fn e() -> Self {
        Self(consts::E)
    }
    fn log2_e() -> Self {
        Self(consts::LOG2_E)
    }
    fn log10_e() -> Self {
        Self(consts::LOG10_E)
    }
    fn ln_2() -> Self {
        Self(consts::LN_2)
    }
    fn ln_10() -> Self {
        Self(consts::LN_10)
    }
}

impl Real for DoubleDouble {
    fn eps() -> Self {
        Self(TwoFloat::from(EPSILON))
    }
}
