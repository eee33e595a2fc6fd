use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{Ring, RingSpec};
use crate::error::{Error, Result};

/// Exact characteristic-zero number types usable as ring elements.
pub trait ExactNumber:
    Num + Signed + Clone + Debug + Display + Eq + Hash + Send + Sync + 'static
{
    const SPEC: RingSpec;

    fn from_bigint(v: &BigInt) -> Self;
    fn to_integer(&self) -> Option<BigInt>;
    fn to_rational(&self) -> BigRational;
    fn try_inverse(&self) -> Option<Self>;
    fn parse_literal(s: &str) -> Option<Self>;
    fn random(rng: &mut dyn RngCore, bound: u32) -> Self;
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn random_int(rng: &mut dyn RngCore, bound: u32) -> i64 {
    let b = bound as i64;
    rng.gen_range(-b..=b)
}

impl ExactNumber for BigInt {
    const SPEC: RingSpec = RingSpec::Integers;

    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_integer(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn try_inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_bigint(s)
    }

    fn random(rng: &mut dyn RngCore, bound: u32) -> Self {
        BigInt::from(random_int(rng, bound))
    }
}

impl ExactNumber for BigRational {
    const SPEC: RingSpec = RingSpec::Rationals;

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            None => parse_bigint(s).map(BigRational::from_integer),
            Some((n, d)) => {
                let n = parse_bigint(n)?;
                let d = parse_bigint(d)?;
                (!d.is_zero()).then(|| BigRational::new(n, d))
            }
        }
    }

    fn random(rng: &mut dyn RngCore, bound: u32) -> Self {
        let n = random_int(rng, bound);
        let d = rng.gen_range(1..=bound.max(1) as i64);
        BigRational::new(n.into(), d.into())
    }
}

/// The ring of an exact number type, e.g. `NumRing<BigInt>` for the
/// integers and `NumRing<BigRational>` for the rationals.
pub struct NumRing<T>(PhantomData<fn() -> T>);

impl<T> NumRing<T> {
    pub const fn new() -> Self {
        NumRing(PhantomData)
    }
}

impl<T> Default for NumRing<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for NumRing<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for NumRing<T> {}

impl<T> PartialEq for NumRing<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Eq for NumRing<T> {}

impl<T: ExactNumber> Debug for NumRing<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumRing({})", T::SPEC)
    }
}

impl<T: ExactNumber> Ring for NumRing<T> {
    type Elem = T;

    fn spec(&self) -> RingSpec {
        T::SPEC
    }

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }

    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn neg(&self, a: &T) -> T {
        -a.clone()
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn from_i64(&self, v: i64) -> T {
        T::from_bigint(&BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> T {
        T::from_bigint(v)
    }

    fn to_integer(&self, a: &T) -> Option<BigInt> {
        a.to_integer()
    }

    fn to_rational(&self, a: &T) -> Option<BigRational> {
        Some(a.to_rational())
    }

    fn inverse(&self, a: &T) -> Option<T> {
        a.try_inverse()
    }

    fn is_field(&self) -> bool {
        T::SPEC == RingSpec::Rationals
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn parse_elem(&self, literal: &str) -> Result<T> {
        T::parse_literal(literal.trim()).ok_or_else(|| Error::InvalidScalar {
            literal: literal.to_string(),
            ring: T::SPEC,
        })
    }

    fn format_elem(&self, a: &T) -> String {
        a.to_string()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, bound: u32) -> T {
        T::random(rng, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Integers, Rationals};

    #[test]
    fn rational_product() {
        let q = Rationals::new();
        let a = q.parse_elem("1/2").unwrap();
        let b = q.parse_elem("2/3").unwrap();
        assert_eq!(q.format_elem(&q.mul(&a, &b)), "1/3");
    }

    #[test]
    fn rationals_are_canonical() {
        let q = Rationals::new();
        let a = q.parse_elem("4/-6").unwrap();
        assert_eq!(q.format_elem(&a), "-2/3");
        assert_eq!(a.denom(), &BigInt::from(3));
        assert_eq!(q.format_elem(&q.parse_elem("6/3").unwrap()), "2");
        assert!(q.parse_elem("1/0").is_err());
        assert!(q.parse_elem("1.5").is_err());
    }

    #[test]
    fn integer_inverse() {
        let z = Integers::new();
        let a = z.parse_elem("123456789012345678901234567890").unwrap();
        assert!(z.is_zero(&z.add(&a, &z.neg(&a))));
        assert_eq!(z.inverse(&z.from_i64(-1)), Some(z.from_i64(-1)));
        assert_eq!(z.inverse(&z.from_i64(2)), None);
        assert!(z.parse_elem("1/2").is_err());
    }

    #[test]
    fn to_integer_only_for_integral_values() {
        let q = Rationals::new();
        assert_eq!(q.to_integer(&q.parse_elem("-8/4").unwrap()), Some(BigInt::from(-2)));
        assert_eq!(q.to_integer(&q.parse_elem("1/3").unwrap()), None);
    }
}
