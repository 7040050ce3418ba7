//! Scalar coefficients for the algebra tower.
//!
//! Every structure (multivectors, polynomials, stems, slice functions) is
//! generic over the scalar kind: exact arbitrary-precision rationals drive
//! the symbolic certificates, binary floats drive the numeric oracle.

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Operations the tower needs from its coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + 'static {
    /// True for the exact instantiation; selects strict evaluation rules.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division; callers guarantee `rhs != 0`.
    fn div(&self, rhs: &Self) -> Self;
    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Lossy conversion from an exact rational (exact for `Rat` itself).
    fn from_rat(r: &Rat) -> Self;
    fn to_f64(&self) -> f64;
    /// Square root within the scalar domain: perfect squares only for
    /// rationals, ordinary `sqrt` for floats. `None` when unrepresentable.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Integer power; negative exponents require a nonzero base.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            Self::one().div(self)
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if Zero::is_zero(self) {
            return Some(<Rat as Zero>::zero());
        }
        let num = self.numer();
        let den = self.denom();
        let sn = num.sqrt();
        let sd = den.sqrt();
        if &(&sn * &sn) == num && &(&sd * &sd) == den {
            Some(Rat::new(sn, sd))
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }
}

/// Parses "p/q" or "p" into an exact rational.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if Zero::is_zero(&d) {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Renders an exact rational as "p/q" with an explicit denominator.
pub fn rat_to_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
