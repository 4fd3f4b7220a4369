//! Exact scalars: arbitrary-precision rationals and prime-field residues.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a polynomial or matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Format(format!("{p} is not a prime")))
        }
    }

    /// 0 for the rationals.
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// True when the integer `k` is invertible in the field.
    pub fn admits_division_by(self, k: u64) -> bool {
        match self {
            Field::Rational => k != 0,
            Field::Prime(p) => !k.is_multiple_of(p),
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps a rational into this field; fails when the denominator vanishes mod p.
    pub fn rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let num = reduce_bigint(q.numer(), p);
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(Error::FieldTooSmall(format!(
                        "denominator {} vanishes in F_{p}",
                        q.denom()
                    )));
                }
                Ok(Scalar::Prime {
                    value: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses a field tag: `Q` or `Fp:<p>`.
    pub fn parse_tag(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        if tag == "Q" {
            return Ok(Field::Rational);
        }
        let p = tag
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Format(format!("unknown field tag {tag:?}")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Format(format!("bad prime in field tag {tag:?}")))?;
        Field::prime(p)
    }

    /// Parses a scalar literal (`a`, `-a` or `a/b`) into this field.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Format(format!("bad scalar literal {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = match den {
            Some(b) => BigInt::from_str(b.trim()).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        self.rational(&BigRational::new(num, den))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An element of [`Field`]. Arithmetic between different fields panics;
/// public entry points validate fields before reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// `self / rhs`; panics on division by zero.
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    /// Negative rationals; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    /// Residue modulo a (different) prime `p`, if the denominator is a unit there.
    pub(crate) fn reduce_mod(&self, p: u64) -> Option<u64> {
        match self {
            Scalar::Rational(q) => {
                let den = reduce_bigint(q.denom(), p);
                (den != 0).then(|| mul_mod(reduce_bigint(q.numer(), p), inv_mod(den, p), p))
            }
            Scalar::Prime { value, modulus } => (*modulus == p).then_some(*value),
        }
    }

    /// Number of bits in numerator plus denominator; a tie-break height.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Rational(q) => q.numer().bits() + q.denom().bits(),
            Scalar::Prime { value, .. } => 64 - value.leading_zeros() as u64,
        }
    }

    fn check(&self, rhs: &Scalar) {
        assert_eq!(self.field(), rhs.field(), "scalar field mismatch");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                (p, a).cmp(&(q, b))
            }
            _ => self.field().cmp(&other.field()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime {
                    value: add_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime {
                    value: mul_mod(*a, *b, *modulus),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(p as i128) as u64
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
