//! Exact field elements: rationals, or residues modulo a prime.
//!
//! A rational value is the neutral representation: mixing a rational with a
//! residue converts the rational into the residue's field. `Scalar::zero()` and
//! `Scalar::one()` therefore work in every field without carrying a context.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Characteristic of the ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize)]
pub enum Field {
    #[default]
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    /// Maps a rational constant into this field. Fails when the denominator
    /// vanishes modulo p.
    pub fn embed(self, value: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(Scalar::Rat(value.clone())),
            Field::Prime(p) => rational_mod(value, p).map(|v| Scalar::Mod { v, p }),
        }
    }

    /// Brings a scalar into this field; `None` if that is impossible.
    pub fn convert(self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (_, Scalar::Rat(r)) => self.embed(r),
            (Field::Prime(p), Scalar::Mod { p: q, .. }) if p == *q => Some(x.clone()),
            _ => None,
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("residue fits in u64")
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "division by zero in GF({p})");
    pow_mod(a, p - 2, p)
}

fn rational_mod(r: &BigRational, p: u64) -> Option<u64> {
    let num = reduce_int(r.numer(), p);
    let den = reduce_int(r.denom(), p);
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    /// True when the value is written with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn inverse(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Rat(r.recip())
            }
            Scalar::Mod { v, p } => Scalar::Mod { v: inv_mod(*v, *p), p: *p },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rationals,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    fn residue(&self, p: u64) -> u64 {
        match self {
            Scalar::Rat(r) => rational_mod(r, p).expect("denominator divisible by the characteristic"),
            Scalar::Mod { v, p: q } => {
                assert_eq!(p, *q, "scalars from different prime fields");
                *v
            }
        }
    }

    fn binary(&self, rhs: &Scalar, rat: impl Fn(&BigRational, &BigRational) -> BigRational, modp: impl Fn(u64, u64, u64) -> u64) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat(a, b)),
            (Scalar::Mod { p, .. }, _) | (_, Scalar::Mod { p, .. }) => {
                let p = *p;
                Scalar::Mod { v: modp(self.residue(p), rhs.residue(p), p), p }
            }
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Mod { p, .. }, _) | (_, Scalar::Mod { p, .. }) => self.residue(*p) == other.residue(*p),
        }
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for deterministic output; it is not a field order
/// in characteristic p.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { p, .. }, _) | (_, Scalar::Mod { p, .. }) => self.residue(*p).cmp(&other.residue(*p)),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b, p| ((a as u128 + p as u128 - b as u128) % p as u128) as u64)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, mul_mod)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inverse()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Mod { v, p } => Scalar::Mod { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}
