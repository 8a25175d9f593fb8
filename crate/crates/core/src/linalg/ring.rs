use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact scalar. Integers and residues are stored with denominator one.
pub type Scalar = BigRational;

/// Coefficient ring of every module in an exact category of free modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    /// Residues are kept in `[0, p)`.
    PrimeField(u64),
}

const MAX_PRIME: u64 = 1 << 31;

fn is_prime(p: u64) -> bool {
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

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.reduce_int(BigInt::from(v))
    }

    pub(crate) fn reduce_int(&self, v: BigInt) -> Scalar {
        match self {
            Ring::PrimeField(p) => Scalar::from_integer(v.mod_floor(&BigInt::from(*p))),
            _ => Scalar::from_integer(v),
        }
    }

    /// Canonical representative of an arbitrary rational, if it lies in the ring.
    pub fn try_reduce(&self, x: Scalar) -> Result<Scalar> {
        match self {
            Ring::Rationals => Ok(x),
            Ring::Integers => {
                if x.is_integer() {
                    Ok(x)
                } else {
                    Err(Error::NotInRing { value: x.to_string(), ring: *self })
                }
            }
            Ring::PrimeField(p) => {
                let p_big = BigInt::from(*p);
                let den = x.denom().mod_floor(&p_big);
                if den.is_zero() {
                    return Err(Error::NotInRing { value: x.to_string(), ring: *self });
                }
                let inv = mod_inverse(&den, &p_big);
                let num = (x.numer() * inv).mod_floor(&p_big);
                Ok(Scalar::from_integer(num))
            }
        }
    }

    pub(crate) fn norm(&self, x: Scalar) -> Scalar {
        match self {
            Ring::PrimeField(p) => {
                debug_assert!(x.is_integer());
                Scalar::from_integer(x.numer().mod_floor(&BigInt::from(*p)))
            }
            _ => x,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(-a)
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Ring::Integers => a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Integers => a.abs().is_one().then(|| a.clone()),
            Ring::Rationals => (!a.is_zero()).then(|| a.recip()),
            Ring::PrimeField(p) => {
                if a.is_zero() {
                    return None;
                }
                let p_big = BigInt::from(*p);
                Some(Scalar::from_integer(mod_inverse(a.numer(), &p_big)))
            }
        }
    }

    /// Short label used in check names and reports: `Z`, `Q`, `F5`.
    pub fn label(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::PrimeField(p) => format!("F{p}"),
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let g = a.mod_floor(p).extended_gcd(p);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(p)
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Accepts `Z`, `Q`, `Fp:p` and `Fp` shorthand `F<p>`.
impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            _ => {
                let digits = s
                    .strip_prefix("Fp:")
                    .or_else(|| s.strip_prefix('F'))
                    .ok_or_else(|| Error::Parse(format!("unknown ring `{s}`")))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime in ring `{s}`")))?;
                Ring::prime_field(p)
            }
        }
    }
}

/// Integer value of a scalar that is known to be integral.
pub(crate) fn as_integer(x: &Scalar) -> &BigInt {
    debug_assert!(x.is_integer());
    x.numer()
}

pub(crate) fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}
