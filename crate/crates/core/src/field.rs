//! Exact scalars over the rationals and prime fields.
//!
//! A [`Scalar`] carries enough information to do arithmetic on its own (prime
//! field elements remember their modulus), so vectors and matrices can use the
//! ordinary operator traits. Mixing scalars from different fields is an
//! invariant violation and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::FieldError;

/// Largest admissible characteristic (exclusive).
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// The prime field of characteristic `p`; `p` must be a prime below 2^31.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_CHARACTERISTIC {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Parses the field tags `Q` and `F<p>`.
    pub fn parse_tag(tag: &str) -> Result<Self, FieldError> {
        let tag = tag.trim();
        if tag == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        match tag.strip_prefix('F').map(str::parse::<u64>) {
            Some(Ok(p)) => FieldSpec::prime(p),
            _ => Err(FieldError::BadTag(tag.to_string())),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Mod { value: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let value = n.rem_euclid(*p as i64) as u32;
                Scalar::Mod { value, p: *p }
            }
        }
    }

    /// Image of the rational `num/den`; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::Prime(p) => {
                let modulus = BigInt::from(*p);
                let reduce = |x: &BigInt| {
                    let r = x % &modulus;
                    let r = if r.is_negative() { r + &modulus } else { r };
                    r.to_u32().expect("residue fits in u32")
                };
                let n = Scalar::Mod { value: reduce(num), p: *p };
                let d = Scalar::Mod { value: reduce(den), p: *p };
                let d_inv = d.inv().ok_or(FieldError::ZeroDenominator)?;
                Ok(n * d_inv)
            }
        }
    }

    /// Parses `n`, `-n` or `n/d` into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let text = text.trim();
        let bad = || FieldError::BadScalar(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(text).map_err(|_| bad())?, BigInt::one()),
        };
        self.from_fraction(&num, &den)
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod { value: pow_mod(*value, *p - 2, *p), p: *p },
        })
    }

    /// `self += a * b`, the inner step of every elimination loop.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Mod { value, p }, Scalar::Mod { value: x, .. }, Scalar::Mod { value: y, .. }) => {
                let prod = (*x as u64 * *y as u64) % *p as u64;
                *value = ((*value as u64 + prod) % *p as u64) as u32;
            }
            (Scalar::Rat(r), Scalar::Rat(x), Scalar::Rat(y)) => {
                if !x.is_zero() && !y.is_zero() {
                    *r += x * y;
                }
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $modop:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat($rat(a, b)),
                    (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                        Scalar::Mod { value: $modop(*a as u64, *b as u64, *p as u64) as u32, p: *p }
                    }
                    _ => panic!("field mismatch in scalar arithmetic"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a: u64, b: u64, p: u64| (a + b) % p);
binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a: u64, b: u64, p: u64| (a + p - b) % p);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: u64, b: u64, p: u64| (a * b) % p);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Mod { value, p } => Scalar::Mod { value: (*p - *value) % *p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        assert_eq!(FieldSpec::prime(5).unwrap(), FieldSpec::Prime(5));
        assert!(matches!(FieldSpec::prime(6), Err(FieldError::NotPrime(6))));
        assert!(matches!(FieldSpec::prime(1), Err(FieldError::NotPrime(1))));
        assert!(FieldSpec::prime(1 << 31).is_err());
        assert_eq!(FieldSpec::prime(2147483647).unwrap().characteristic(), 2147483647);
    }

    #[test]
    fn tags_round_trip() {
        for tag in ["Q", "F2", "F3", "F101"] {
            assert_eq!(FieldSpec::parse_tag(tag).unwrap().tag(), tag);
        }
        assert!(FieldSpec::parse_tag("F4").is_err());
        assert!(FieldSpec::parse_tag("R").is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = FieldSpec::Prime(7);
        let a = f.from_i64(3);
        let b = f.from_i64(-2);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), f.from_i64(5));
        assert_eq!(-&a, f.from_i64(4));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn big_characteristic_does_not_overflow() {
        let f = FieldSpec::prime(2147483647).unwrap();
        let a = f.from_i64(2147483646);
        assert_eq!(&a * &a, f.one());
        let mut acc = a.clone();
        acc.add_mul(&a, &a);
        assert_eq!(acc, f.zero());
    }

    #[test]
    fn parse_fractions() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse_scalar("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse_scalar("4").unwrap().to_string(), "4");
        let f5 = FieldSpec::Prime(5);
        assert_eq!(f5.parse_scalar("1/2").unwrap(), f5.from_i64(3));
        assert!(f5.parse_scalar("1/5").is_err());
        assert!(q.parse_scalar("x").is_err());
    }
}
