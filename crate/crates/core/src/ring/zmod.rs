use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::{Ring, RingSpec};
use crate::error::{Error, Result};

/// Integers modulo `m` for any `m >= 2`, prime or composite.
///
/// Elements are residues in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZMod {
    modulus: u64,
}

impl ZMod {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 || modulus > u32::MAX as u64 {
            return Err(Error::InvalidRing(format!("zmod:{modulus}")));
        }
        Ok(ZMod { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_prime_modulus(&self) -> bool {
        let m = self.modulus;
        m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0)
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }
}

impl Ring for ZMod {
    type Elem = u64;

    fn spec(&self) -> RingSpec {
        RingSpec::ZMod(self.modulus)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn mul_add(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        (a * b + c) % self.modulus
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits in u64")
    }

    fn to_integer(&self, a: &u64) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }

    fn to_rational(&self, _: &u64) -> Option<num_rational::BigRational> {
        None
    }

    fn inverse(&self, a: &u64) -> Option<u64> {
        let ext = (*a as i64).extended_gcd(&(self.modulus as i64));
        (ext.gcd == 1).then(|| self.from_i64(ext.x))
    }

    fn is_field(&self) -> bool {
        self.is_prime_modulus()
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.modulus)
    }

    fn parse_elem(&self, literal: &str) -> Result<u64> {
        let s = literal.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidScalar {
                literal: literal.to_string(),
                ring: self.spec(),
            });
        }
        let v: BigInt = s.parse().map_err(|_| Error::InvalidScalar {
            literal: literal.to_string(),
            ring: self.spec(),
        })?;
        Ok(self.from_bigint(&v))
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, _bound: u32) -> u64 {
        rng.gen_range(0..self.modulus)
    }
}
