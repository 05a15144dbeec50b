//! Exact scalar arithmetic over the rationals or a prime field.
//!
//! Every matrix and every module in this crate carries a [`FieldSpec`]; all
//! arithmetic in one computation happens over a single field and no floating
//! point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field: exact rationals or Z/p for a prime p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    /// Prime field of the given characteristic, elements stored in the
    /// symmetric range (-p/2, p/2].
    PrimeField {
        characteristic: u64,
    },
}

/// A scalar. The variant must agree with the [`FieldSpec`] of the ambient
/// computation; mixing variants is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime(i64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// A prime field; rejects composite or oversized characteristics.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > (1 << 31) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField { characteristic: p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField { characteristic } => *characteristic,
        }
    }

    fn sym(p: u64, v: i128) -> i64 {
        let p = p as i128;
        let mut r = v % p;
        if r < 0 {
            r += p;
        }
        if r > p / 2 {
            r -= p;
        }
        r as i64
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField { .. } => Scalar::Prime(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::PrimeField { characteristic } => {
                Scalar::Prime(Self::sym(*characteristic, 1))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField { characteristic } => {
                Scalar::Prime(Self::sym(*characteristic, v as i128))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (FieldSpec::PrimeField { characteristic }, Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(Self::sym(*characteristic, *x as i128 + *y as i128))
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::PrimeField { characteristic }, Scalar::Prime(x)) => {
                Scalar::Prime(Self::sym(*characteristic, -(*x as i128)))
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (FieldSpec::PrimeField { characteristic }, Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(Self::sym(*characteristic, *x as i128 * *y as i128))
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()).into(),
            (FieldSpec::PrimeField { characteristic }, Scalar::Prime(x)) => {
                // extended Euclid on (x mod p, p)
                let p = *characteristic as i128;
                let mut r = (*x as i128).rem_euclid(p);
                let mut old_r = p;
                let (mut s, mut old_s) = (1i128, 0i128);
                while r != 0 {
                    let q = old_r / r;
                    let tmp_r = old_r - q * r;
                    old_r = r;
                    r = tmp_r;
                    let tmp_s = old_s - q * s;
                    old_s = s;
                    s = tmp_s;
                }
                debug_assert_eq!(old_r, 1);
                Some(Scalar::Prime(Self::sym(*characteristic, s)))
            }
            _ => panic!("scalar/field variant mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Parses the exact scalar grammar `-?[0-9]+(/[1-9][0-9]*)?`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let err = || Error::ScalarParse(s.to_string());
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let valid_int = |t: &str| -> bool {
            let body = t.strip_prefix('-').unwrap_or(t);
            !body.is_empty() && body.chars().all(|c| c.is_ascii_digit())
        };
        if !valid_int(num_str) {
            return Err(err());
        }
        let num: BigInt = num_str.parse().map_err(|_| err())?;
        let den: BigInt = match den_str {
            Some(d) => {
                if d.is_empty()
                    || !d.chars().all(|c| c.is_ascii_digit())
                    || d.starts_with('0')
                {
                    return Err(err());
                }
                d.parse().map_err(|_| err())?
            }
            None => BigInt::one(),
        };
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::PrimeField { characteristic } => {
                let p = BigInt::from(*characteristic);
                let num_mod = ((num % &p) + &p) % &p;
                let den_mod = ((den % &p) + &p) % &p;
                let num_i = i128::try_from(&num_mod).map_err(|_| err())?;
                let den_i = i128::try_from(&den_mod).map_err(|_| err())?;
                let n = Scalar::Prime(Self::sym(*characteristic, num_i));
                let d = Scalar::Prime(Self::sym(*characteristic, den_i));
                self.div(&n, &d)
            }
        }
    }

    /// Canonical rendering matching the parse grammar.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime(v) => v.to_string(),
        }
    }

    /// Small random scalar for randomized isomorphism trials.
    pub fn random<R: Rng>(&self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rationals => self.from_i64(rng.gen_range(-3i64..=3)),
            FieldSpec::PrimeField { characteristic } => {
                self.from_i64(rng.gen_range(0..*characteristic) as i64)
            }
        }
    }
}

impl Scalar {
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime(v) => *v == 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let q = FieldSpec::rationals();
        for s in ["0", "1", "-1", "3/2", "-7/5", "10/3"] {
            let v = q.parse(s).unwrap();
            assert_eq!(q.format(&v), s);
        }
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("1/01").is_err());
        assert!(q.parse("").is_err());
        assert!(q.parse("a").is_err());
        assert!(q.parse("1.5").is_err());
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = FieldSpec::rationals();
        let a = q.parse("1/3").unwrap();
        let b = q.parse("1/6").unwrap();
        assert_eq!(q.add(&a, &b), q.parse("1/2").unwrap());
        assert_eq!(q.mul(&a, &b), q.parse("1/18").unwrap());
        assert_eq!(q.inv(&a).unwrap(), q.parse("3").unwrap());
        assert!(q.inv(&q.zero()).is_none());
    }

    #[test]
    fn prime_field_symmetric_range() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(5);
        assert_eq!(a, Scalar::Prime(-2));
        let inv = f.inv(&f.from_i64(3)).unwrap();
        assert_eq!(f.mul(&inv, &f.from_i64(3)), f.one());
        assert!(FieldSpec::prime(6).is_err());
        assert!(FieldSpec::prime(1).is_err());
    }

    #[test]
    fn prime_field_parse_divides() {
        let f = FieldSpec::prime(5).unwrap();
        // 3/2 = 3 * inverse(2) = 3 * 3 = 9 = -1 mod 5
        assert_eq!(f.parse("3/2").unwrap(), Scalar::Prime(-1));
        assert!(f.parse("1/5").is_err());
    }
}
