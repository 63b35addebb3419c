//! Exact field elements: arbitrary-precision rationals or residues modulo a
//! prime `p < 2^31`.
//!
//! Every [`Scalar`] is kept in canonical form (reduced fraction with a
//! positive denominator, or a residue in `[0, p)`), so `==` is exact
//! mathematical equality.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// `F_p`; `p` must be a prime below `2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Residue { value: n.rem_euclid(p as i64) as u32, modulus: p },
        }
    }

    /// Residue `value mod p`. Panics over the rationals.
    pub fn residue(&self, value: u64) -> Scalar {
        match *self {
            Field::Rationals => panic!("residue() called over the rationals"),
            Field::Prime(p) => Scalar::Residue { value: (value % p as u64) as u32, modulus: p },
        }
    }

    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::ScalarParse { text: alloc::format!("{num}/{den}"), reason: "zero denominator" });
        }
        match *self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64().unwrap_or(0);
                let d = den.mod_floor(&pb).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(Error::ScalarParse {
                        text: alloc::format!("{num}/{den}"),
                        reason: "denominator divisible by the characteristic",
                    });
                }
                let inv = mod_pow(d, p as u64 - 2, p as u64);
                Ok(self.residue(n * inv % p as u64))
            }
        }
    }

    /// Parses `"n"` or `"n/d"` with optional signs on either part.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = |reason| Error::ScalarParse { text: text.to_string(), reason };
        let t = text.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad("invalid numerator"))?;
        let den: BigInt = d.parse().map_err(|_| bad("invalid denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        self.from_ratio(num, den)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An exact element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mod_pow(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    /// The residue as an integer, for canonical ordering of search output.
    pub fn residue_value(&self) -> Option<u32> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, modulus: m2 }) if modulus == m2 => {
                Scalar::Residue { value: ((*a as u64 + *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => mismatch(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, modulus: m2 }) if modulus == m2 => {
                Scalar::Residue { value: ((*a as u64 * *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Residue { value, modulus }, Scalar::Residue { value: b, modulus: m2 }) if modulus == m2 => {
                *value = ((*value as u64 + *b as u64) % *modulus as u64) as u32;
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            _ => mismatch(),
        }
    }
}

impl fmt::Display for Scalar {
    /// Integers print bare, other rationals as `n/d`, residues as their
    /// representative in `[0, p)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn canonical_form_of_parsed_rationals() {
        let q = Field::Rationals;
        assert_eq!(format!("{}", q.parse("3/-6").unwrap()), "-1/2");
        assert_eq!(format!("{}", q.parse("-4/2").unwrap()), "-2");
        assert_eq!(q.parse("2/4").unwrap(), q.parse("1/2").unwrap());
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_parsing_and_inverse() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse("3/-6").unwrap(), f7.from_i64(3)); // -1/2 = -4 = 3
        assert_eq!(f7.parse("-1").unwrap(), f7.from_i64(6));
        assert!(f7.parse("1/14").is_err());
        let a = f7.from_i64(3);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert!(f7.zero().inv().is_none());
    }

    #[test]
    fn primality_is_checked() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(2_147_483_647).is_ok());
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
        assert!(Field::prime(1 << 31).is_err());
    }

    #[test]
    fn rational_sum_agrees_two_ways() {
        let q = Field::Rationals;
        let (a, b, c, d) = (3i64, 4i64, -5i64, 6i64);
        let lhs = &q.parse(&format!("{a}/{b}")).unwrap() + &q.parse(&format!("{c}/{d}")).unwrap();
        let rhs = q.parse(&format!("{}/{}", a * d + b * c, b * d)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mod_p_agrees_with_bigint_reduction() {
        let p = 1_000_003u64;
        let f = Field::prime(p).unwrap();
        let xs = [123_456_789i64, -987_654_321, 42, i64::MAX / 3];
        for &x in &xs {
            for &y in &xs {
                let prod = &f.from_i64(x) * &f.from_i64(y);
                let oracle = (BigInt::from(x) * BigInt::from(y)).mod_floor(&BigInt::from(p));
                assert_eq!(prod, f.residue(oracle.to_u64().unwrap()));
                let sum = &f.from_i64(x) + &f.from_i64(y);
                let oracle = (BigInt::from(x) + BigInt::from(y)).mod_floor(&BigInt::from(p));
                assert_eq!(sum, f.residue(oracle.to_u64().unwrap()));
            }
        }
    }
}
