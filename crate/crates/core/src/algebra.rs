//! Elements of the incidence algebra of a finite poset.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::ring::Ring;

/// An element `Σ α(x, y) e_xy` of the incidence algebra, stored densely
/// over the comparable-pair basis of its poset.
#[derive(Clone)]
pub struct FiElement<R: Ring> {
    poset: Arc<Poset>,
    ring: R,
    coeffs: Vec<R::Elem>,
}

pub(crate) fn same_poset(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<R: Ring> FiElement<R> {
    pub fn zero(poset: &Arc<Poset>, ring: &R) -> Self {
        FiElement {
            poset: poset.clone(),
            ring: ring.clone(),
            coeffs: vec![ring.zero(); poset.basis_len()],
        }
    }

    /// The identity `δ = Σ_x e_x`.
    pub fn identity(poset: &Arc<Poset>, ring: &R) -> Self {
        Self::scalar(poset, ring, ring.one())
    }

    /// `c · δ`.
    pub fn scalar(poset: &Arc<Poset>, ring: &R, c: R::Elem) -> Self {
        let mut out = Self::zero(poset, ring);
        for p in poset.diagonal_pairs() {
            out.coeffs[p] = c.clone();
        }
        out
    }

    /// `e_xy` by element index.
    pub fn basis(poset: &Arc<Poset>, ring: &R, x: usize, y: usize) -> Result<Self> {
        let p = poset.pair_index(x, y).ok_or_else(|| {
            Error::NotComparable(poset.name(x).to_string(), poset.name(y).to_string())
        })?;
        Ok(Self::basis_pair(poset, ring, p))
    }

    pub fn basis_by_name(poset: &Arc<Poset>, ring: &R, x: &str, y: &str) -> Result<Self> {
        Self::basis(poset, ring, poset.index_of(x)?, poset.index_of(y)?)
    }

    /// The basis element of pair index `p`.
    pub fn basis_pair(poset: &Arc<Poset>, ring: &R, p: usize) -> Self {
        let mut out = Self::zero(poset, ring);
        out.coeffs[p] = ring.one();
        out
    }

    pub fn from_coeffs(poset: &Arc<Poset>, ring: &R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.len() != poset.basis_len() {
            return Err(Error::DimensionMismatch {
                expected: poset.basis_len(),
                found: coeffs.len(),
            });
        }
        Ok(FiElement {
            poset: poset.clone(),
            ring: ring.clone(),
            coeffs,
        })
    }

    /// Builds an element from a coefficient function on comparable pairs.
    pub fn from_fn(poset: &Arc<Poset>, ring: &R, mut f: impl FnMut(usize, usize) -> R::Elem) -> Self {
        let coeffs = poset.pairs().iter().map(|&(x, y)| f(x, y)).collect();
        FiElement {
            poset: poset.clone(),
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, p: usize) -> &R::Elem {
        &self.coeffs[p]
    }

    pub fn set_coeff(&mut self, p: usize, value: R::Elem) {
        self.coeffs[p] = value;
    }

    /// `α(x, y)`; zero when `x` is not below `y`.
    pub fn get(&self, x: usize, y: usize) -> R::Elem {
        match self.poset.pair_index(x, y) {
            Some(p) => self.coeffs[p].clone(),
            None => self.ring.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        self.ring.check_same(&other.ring)?;
        if !same_poset(&self.poset, &other.poset) {
            return Err(Error::PosetMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(&self.ring, a, b))
            .collect();
        Ok(FiElement {
            poset: self.poset.clone(),
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    /// Convolution `(αβ)(x, y) = Σ_{x<=z<=y} α(x, z) β(z, y)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let ring = &self.ring;
        let coeffs = (0..self.coeffs.len())
            .map(|p| {
                self.poset
                    .factorizations(p)
                    .iter()
                    .fold(ring.zero(), |acc, &(l, r)| {
                        ring.mul_add(&self.coeffs[l], &other.coeffs[r], &acc)
                    })
            })
            .collect();
        Ok(FiElement {
            poset: self.poset.clone(),
            ring: ring.clone(),
            coeffs,
        })
    }

    /// Lie product `αβ - βα`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|r, a| r.mul(c, a))
    }

    fn map_coeffs(&self, f: impl Fn(&R, &R::Elem) -> R::Elem) -> Self {
        FiElement {
            poset: self.poset.clone(),
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| f(&self.ring, a)).collect(),
        }
    }

    /// `α · e_q` for the basis element of pair `q = (c, d)`: the column `c`
    /// of `α` moved to column `d`.
    pub fn mul_basis_right(&self, q: usize) -> Self {
        let (c, d) = self.poset.pair(q);
        let mut out = Self::zero(&self.poset, &self.ring);
        for (p, &(a, b)) in self.poset.pairs().iter().enumerate() {
            if b == c && !self.ring.is_zero(&self.coeffs[p]) {
                let t = self.poset.pair_index(a, d).expect("transitivity");
                out.coeffs[t] = self.coeffs[p].clone();
            }
        }
        out
    }

    /// `e_q · α` for `q = (c, d)`: the row `d` of `α` moved to row `c`.
    pub fn mul_basis_left(&self, q: usize) -> Self {
        let (c, d) = self.poset.pair(q);
        let mut out = Self::zero(&self.poset, &self.ring);
        for (p, &(a, b)) in self.poset.pairs().iter().enumerate() {
            if a == d && !self.ring.is_zero(&self.coeffs[p]) {
                let t = self.poset.pair_index(c, b).expect("transitivity");
                out.coeffs[t] = self.coeffs[p].clone();
            }
        }
        out
    }

    /// `[α, e_q]`.
    pub fn bracket_basis(&self, q: usize) -> Self {
        let right = self.mul_basis_right(q);
        let left = self.mul_basis_left(q);
        right.zip_with(&left, |r, a, b| r.sub(a, b)).expect("same poset")
    }

    /// `α|_x^y`: keeps the coefficients on pairs `(x, v)` and `(u, y)` with
    /// `u, v` in `[x, y]`, zero elsewhere. Requires `x < y`.
    pub fn restrict(&self, x: usize, y: usize) -> Result<Self> {
        if !self.poset.lt(x, y) {
            return Err(Error::NotStrictlyBelow(
                self.poset.name(x).to_string(),
                self.poset.name(y).to_string(),
            ));
        }
        let poset = &self.poset;
        let mut out = Self::zero(poset, &self.ring);
        for (p, &(a, b)) in poset.pairs().iter().enumerate() {
            let keep = (a == x && poset.leq(b, y)) || (b == y && poset.leq(x, a));
            if keep {
                out.coeffs[p] = self.coeffs[p].clone();
            }
        }
        Ok(out)
    }

    /// `α_D = Σ_x α(x, x) e_x`.
    pub fn diagonal(&self) -> Self {
        let mut out = Self::zero(&self.poset, &self.ring);
        for (p, &(a, b)) in self.poset.pairs().iter().enumerate() {
            if a == b {
                out.coeffs[p] = self.coeffs[p].clone();
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.poset
            .pairs()
            .iter()
            .zip(&self.coeffs)
            .all(|(&(a, b), c)| a == b || self.ring.is_zero(c))
    }

    /// Membership in the center: diagonal, and `α(x, x) = α(y, y)` for all `x < y`.
    pub fn is_central(&self) -> bool {
        self.is_diagonal()
            && self
                .poset
                .strict_pairs()
                .all(|(x, y)| self.get(x, x) == self.get(y, y))
    }
}

impl<R: Ring> PartialEq for FiElement<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_poset(&self.poset, &other.poset) && self.coeffs == other.coeffs
    }
}

impl<R: Ring> Eq for FiElement<R> {}

impl<R: Ring> fmt::Debug for FiElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiElement[{}]({self})", self.ring.spec())
    }
}

/// Sum notation, e.g. `2 e(1,2) + e(2,2)`; `0` for the zero element.
impl<R: Ring> fmt::Display for FiElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let (x, y) = self.poset.pair(p);
            if !self.ring.is_one(c) {
                write!(f, "{} ", self.ring.format_elem(c))?;
            }
            write!(f, "e({},{})", self.poset.name(x), self.poset.name(y))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $call:ident) => {
        /// # Panics
        /// When the operands live over different posets or rings; use the
        /// `try_` method to get an error instead.
        impl<R: Ring> $trait<&FiElement<R>> for &FiElement<R> {
            type Output = FiElement<R>;

            fn $method(self, rhs: &FiElement<R>) -> FiElement<R> {
                self.$call(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<R: Ring> $trait<FiElement<R>> for FiElement<R> {
            type Output = FiElement<R>;

            fn $method(self, rhs: FiElement<R>) -> FiElement<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

binary_op!(Add, add, try_add);
binary_op!(Sub, sub, try_sub);
binary_op!(Mul, mul, try_mul);

impl<R: Ring> Neg for &FiElement<R> {
    type Output = FiElement<R>;

    fn neg(self) -> FiElement<R> {
        self.map_coeffs(|r, a| r.neg(a))
    }
}

impl<R: Ring> Neg for FiElement<R> {
    type Output = FiElement<R>;

    fn neg(self) -> FiElement<R> {
        -&self
    }
}
