//! Exact coefficient rings.
//!
//! A [`Ring`] value is a small descriptor (it may carry a runtime modulus)
//! and does all arithmetic on its [`Ring::Elem`] values, which are always
//! kept in canonical form. Integers and rationals are backed by the
//! num-traits numeric tower through [`NumRing`]; residues modulo `m` by
//! [`ZMod`].

mod num;
mod zmod;

use std::fmt;
use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::RngCore;

use crate::error::{Error, Result};

pub use self::num::{ExactNumber, NumRing};
pub use self::zmod::ZMod;

/// Descriptor of a supported coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    ZMod(u64),
}

impl RingSpec {
    pub fn characteristic(self) -> u64 {
        match self {
            RingSpec::Integers | RingSpec::Rationals => 0,
            RingSpec::ZMod(m) => m,
        }
    }

    /// `k * r = 0` implies `r = 0`.
    pub fn is_k_torsion_free(self, k: u64) -> bool {
        assert!(k >= 1, "torsion order must be positive");
        match self {
            RingSpec::Integers | RingSpec::Rationals => true,
            RingSpec::ZMod(m) => num_integer::gcd(k, m) == 1,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("int"),
            RingSpec::Rationals => f.write_str("rat"),
            RingSpec::ZMod(m) => write!(f, "zmod:{m}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "int" => Ok(RingSpec::Integers),
            "rat" => Ok(RingSpec::Rationals),
            _ => {
                let m = s
                    .strip_prefix("zmod:")
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidRing(s.to_string()))?;
                if m < 2 || m > u32::MAX as u64 {
                    return Err(Error::InvalidRing(s.to_string()));
                }
                Ok(RingSpec::ZMod(m))
            }
        }
    }
}

/// A commutative ring with identity and exact, canonical arithmetic.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> RingSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Image of an integer under the unique ring map from the integers.
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    /// Integer representative: the value itself over the integers, the
    /// residue in `[0, m)` modulo `m`, and `None` for non-integral rationals.
    fn to_integer(&self, a: &Self::Elem) -> Option<BigInt>;

    /// Exact value as a fraction, for the characteristic-zero rings.
    fn to_rational(&self, a: &Self::Elem) -> Option<BigRational>;

    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_field(&self) -> bool;

    /// Number of elements, when finite and representable.
    fn cardinality(&self) -> Option<u64>;

    fn parse_elem(&self, literal: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Uniform over a finite ring; over infinite rings, small values with
    /// numerators (and denominators) bounded by `bound`.
    fn random_elem(&self, rng: &mut dyn RngCore, bound: u32) -> Self::Elem;

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    fn is_k_torsion_free(&self, k: u64) -> bool {
        self.spec().is_k_torsion_free(k)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a * b + c`, the inner step of every dot product.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(&self.mul(a, b), c)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.spec(), other.spec()))
        }
    }
}
