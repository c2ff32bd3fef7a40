//! Exact coefficient fields: arbitrary-precision rationals and prime fields F_p.
//!
//! The field is chosen at run time, so elements carry enough information to do
//! arithmetic on their own. Mixing elements of different fields is a logic
//! error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::Error;

/// A coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
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

impl Field {
    /// F_p, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field, Error> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Parses `q` or `fp:<prime>`.
    pub fn parse(s: &str) -> Result<Field, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let p: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field `{s}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("unknown field `{s}` (expected `q` or `fp:<prime>`)")))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match *self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElem::Mod { value: v.rem_euclid(p as i64) as u64, p },
        }
    }

    /// Parses a coefficient string: `p/q` or an integer for rationals, a
    /// decimal residue (or any integer, reduced) for F_p. A fraction is also
    /// accepted over F_p as long as its denominator is invertible.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, Error> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        match *self {
            Field::Rational => {
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(FieldElem::Rat(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.try_into().expect("residue fits in u64")
                };
                let n = FieldElem::Mod { value: reduce(&num), p };
                let d = FieldElem::Mod { value: reduce(&den), p };
                let d_inv = d.inv().ok_or_else(|| {
                    Error::Parse(format!("denominator of `{s}` vanishes in characteristic {p}"))
                })?;
                Ok(&n * &d_inv)
            }
        }
    }

    /// Elements `0, 1, ..., n-1` of the field, failing when the field has fewer
    /// than `n` elements.
    pub fn distinct_elements(&self, n: usize) -> Result<Vec<FieldElem>, Error> {
        if let Field::Prime(p) = *self {
            if (n as u64) > p {
                return Err(Error::FieldTooSmall { needed: n, size: p });
            }
        }
        Ok((0..n as i64).map(|i| self.from_i64(i)).collect())
    }

    /// A random element: a small integer in `-3..=3` over Q, a uniform residue
    /// over F_p.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        match *self {
            Field::Rational => self.from_i64(rng.gen_range(-3..=3)),
            Field::Prime(p) => FieldElem::Mod { value: rng.gen_range(0..p), p },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let x = self.random_elem(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rat(_) => Field::Rational,
            FieldElem::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(r) => FieldElem::Rat(r.recip()),
            FieldElem::Mod { value, p } => FieldElem::Mod { value: mod_pow(*value, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Small integer value, if the element is an integer representable in i64.
    /// Residues are returned in `0..p`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElem::Rat(r) if r.is_integer() => r.to_integer().try_into().ok(),
            FieldElem::Rat(_) => None,
            FieldElem::Mod { value, .. } => i64::try_from(*value).ok(),
        }
    }

    fn check(&self, other: &FieldElem) {
        assert_eq!(self.field(), other.field(), "mixed-field arithmetic");
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                let (n, d) = (r.numer(), r.denom());
                if d.is_negative() {
                    write!(f, "{}/{}", -n, -d)
                } else {
                    write!(f, "{n}/{d}")
                }
            }
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, .. }) => {
                FieldElem::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.check(rhs);
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, .. }) => {
                FieldElem::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { value, p } => FieldElem::Mod { value: (p - value) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}
