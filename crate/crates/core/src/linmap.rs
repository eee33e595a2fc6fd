//! Linear endomorphisms of the incidence algebra.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_poset, FiElement};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::ring::Ring;

/// A linear map given by its `B × B` matrix over the pair basis: column
/// `j` holds the coefficients of `L(e_j)`.
///
/// Entries are stored column-major, so `as_slice()[j * B + i]` is the
/// coefficient of `e_i` in `L(e_j)`. The same layout is used for the
/// unknowns of the constraint systems.
#[derive(Clone)]
pub struct LinMap<R: Ring> {
    poset: Arc<Poset>,
    ring: R,
    data: Vec<R::Elem>,
}

impl<R: Ring> LinMap<R> {
    pub fn zero(poset: &Arc<Poset>, ring: &R) -> Self {
        let b = poset.basis_len();
        LinMap {
            poset: poset.clone(),
            ring: ring.clone(),
            data: vec![ring.zero(); b * b],
        }
    }

    pub fn identity(poset: &Arc<Poset>, ring: &R) -> Self {
        Self::from_fn(poset, ring, |row, col| if row == col { ring.one() } else { ring.zero() })
    }

    /// `f(row, col)` is the coefficient of `e_row` in `L(e_col)`.
    pub fn from_fn(poset: &Arc<Poset>, ring: &R, mut f: impl FnMut(usize, usize) -> R::Elem) -> Self {
        let b = poset.basis_len();
        let mut data = Vec::with_capacity(b * b);
        for col in 0..b {
            for row in 0..b {
                data.push(f(row, col));
            }
        }
        LinMap {
            poset: poset.clone(),
            ring: ring.clone(),
            data,
        }
    }

    /// Column-major entries, as produced by [`LinMap::as_slice`].
    pub fn from_vec(poset: &Arc<Poset>, ring: &R, data: Vec<R::Elem>) -> Result<Self> {
        let b = poset.basis_len();
        if data.len() != b * b {
            return Err(Error::DimensionMismatch {
                expected: b * b,
                found: data.len(),
            });
        }
        Ok(LinMap {
            poset: poset.clone(),
            ring: ring.clone(),
            data,
        })
    }

    /// The map sending `e_j` to `images[j]`.
    pub fn from_images(poset: &Arc<Poset>, ring: &R, images: &[FiElement<R>]) -> Result<Self> {
        let b = poset.basis_len();
        if images.len() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                found: images.len(),
            });
        }
        let mut data = Vec::with_capacity(b * b);
        for img in images {
            if !same_poset(img.poset(), poset) {
                return Err(Error::PosetMismatch);
            }
            ring.check_same(img.ring())?;
            data.extend_from_slice(img.coeffs());
        }
        Ok(LinMap {
            poset: poset.clone(),
            ring: ring.clone(),
            data,
        })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.poset.basis_len()
    }

    pub fn as_slice(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<R::Elem> {
        self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> &R::Elem {
        &self.data[col * self.dim() + row]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: R::Elem) {
        let b = self.dim();
        self.data[col * b + row] = value;
    }

    /// `L(e_col)`.
    pub fn image_of_basis(&self, col: usize) -> FiElement<R> {
        let b = self.dim();
        FiElement::from_coeffs(&self.poset, &self.ring, self.data[col * b..(col + 1) * b].to_vec())
            .expect("column has basis length")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| self.ring.is_zero(c))
    }

    fn check_compatible(&self, poset: &Arc<Poset>, ring: &R) -> Result<()> {
        self.ring.check_same(ring)?;
        if !same_poset(&self.poset, poset) {
            return Err(Error::PosetMismatch);
        }
        Ok(())
    }

    /// `L(α)`.
    pub fn apply(&self, alpha: &FiElement<R>) -> Result<FiElement<R>> {
        self.check_compatible(alpha.poset(), alpha.ring())?;
        let b = self.dim();
        let ring = &self.ring;
        let mut out = vec![ring.zero(); b];
        for (col, a) in alpha.coeffs().iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (row, slot) in out.iter_mut().enumerate() {
                let m = &self.data[col * b + row];
                if !ring.is_zero(m) {
                    *slot = ring.mul_add(m, a, slot);
                }
            }
        }
        FiElement::from_coeffs(&self.poset, ring, out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.check_compatible(&other.poset, &other.ring)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(&self.ring, a, b))
            .collect();
        Ok(LinMap {
            poset: self.poset.clone(),
            ring: self.ring.clone(),
            data,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        LinMap {
            poset: self.poset.clone(),
            ring: self.ring.clone(),
            data: self.data.iter().map(|a| self.ring.mul(c, a)).collect(),
        }
    }

    /// `self ∘ other`, i.e. `α ↦ self(other(α))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(&other.poset, &other.ring)?;
        let b = self.dim();
        let ring = &self.ring;
        let mut data = vec![ring.zero(); b * b];
        for col in 0..b {
            for mid in 0..b {
                let o = &other.data[col * b + mid];
                if ring.is_zero(o) {
                    continue;
                }
                for row in 0..b {
                    let s = &self.data[mid * b + row];
                    if !ring.is_zero(s) {
                        data[col * b + row] = ring.mul_add(s, o, &data[col * b + row]);
                    }
                }
            }
        }
        Ok(LinMap {
            poset: self.poset.clone(),
            ring: ring.clone(),
            data,
        })
    }

    /// `L∘M − M∘L`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    /// `α ↦ L(α)_D`.
    pub fn diagonal_part(&self) -> Self {
        let poset = self.poset.clone();
        Self::from_fn(&poset, &self.ring, |row, col| {
            let (x, y) = self.poset.pair(row);
            if x == y {
                self.entry(row, col).clone()
            } else {
                self.ring.zero()
            }
        })
    }

    /// `ad_β : α ↦ βα − αβ`.
    pub fn inner_derivation(beta: &FiElement<R>) -> Self {
        let poset = beta.poset().clone();
        let ring = beta.ring().clone();
        let images: Vec<_> = (0..poset.basis_len())
            .map(|q| beta.bracket_basis(q))
            .collect();
        Self::from_images(&poset, &ring, &images).expect("images share the poset")
    }
}

impl<R: Ring> PartialEq for LinMap<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_poset(&self.poset, &other.poset) && self.data == other.data
    }
}

impl<R: Ring> Eq for LinMap<R> {}

impl<R: Ring> fmt::Debug for LinMap<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMap[{}] {{", self.ring.spec())?;
        for col in 0..self.dim() {
            let (x, y) = self.poset.pair(col);
            writeln!(
                f,
                "  e({},{}) -> {}",
                self.poset.name(x),
                self.poset.name(y),
                self.image_of_basis(col)
            )?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ZMod;

    fn setup() -> (Arc<Poset>, ZMod) {
        (Arc::new(Poset::diamond()), ZMod::new(7).unwrap())
    }

    fn sample_map(p: &Arc<Poset>, r: &ZMod, seed: u64) -> LinMap<ZMod> {
        LinMap::from_fn(p, r, |i, j| (seed + 3 * i as u64 + 5 * j as u64 + (i * j) as u64) % 7)
    }

    fn sample_elem(p: &Arc<Poset>, r: &ZMod, seed: u64) -> FiElement<ZMod> {
        FiElement::from_fn(p, r, |x, y| (seed + 2 * x as u64 + 3 * y as u64) % 7)
    }

    #[test]
    fn identity_and_zero_act_as_expected() {
        let (p, r) = setup();
        let a = sample_elem(&p, &r, 4);
        assert_eq!(LinMap::identity(&p, &r).apply(&a).unwrap(), a);
        assert!(LinMap::zero(&p, &r).apply(&a).unwrap().is_zero());
    }

    #[test]
    fn basis_action_is_a_column() {
        let (p, r) = setup();
        let l = sample_map(&p, &r, 1);
        for q in 0..p.basis_len() {
            let img = l.apply(&FiElement::basis_pair(&p, &r, q)).unwrap();
            assert_eq!(img, l.image_of_basis(q));
        }
    }

    #[test]
    fn map_algebra() {
        let (p, r) = setup();
        let l = sample_map(&p, &r, 1);
        let m = sample_map(&p, &r, 2);
        assert!(l.try_sub(&l).unwrap().is_zero());
        assert_eq!(LinMap::identity(&p, &r).compose(&l).unwrap(), l);
        assert_eq!(l.compose(&LinMap::identity(&p, &r)).unwrap(), l);
        let a = sample_elem(&p, &r, 3);
        let lhs = l.try_add(&m).unwrap().apply(&a).unwrap();
        let rhs = &l.apply(&a).unwrap() + &m.apply(&a).unwrap();
        assert_eq!(lhs, rhs);
        let composed = l.compose(&m).unwrap().apply(&a).unwrap();
        assert_eq!(composed, l.apply(&m.apply(&a).unwrap()).unwrap());
    }

    #[test]
    fn inner_derivation_of_identity_vanishes() {
        let (p, r) = setup();
        assert!(LinMap::inner_derivation(&FiElement::identity(&p, &r)).is_zero());
    }

    #[test]
    fn inner_derivation_on_two_chain() {
        let p = Arc::new(Poset::chain(2));
        let r = ZMod::new(5).unwrap();
        let e = |x, y| FiElement::basis(&p, &r, x, y).unwrap();
        let ad = LinMap::inner_derivation(&e(0, 1));
        assert_eq!(ad.apply(&e(0, 0)).unwrap(), -e(0, 1));
        assert_eq!(ad.apply(&e(1, 1)).unwrap(), e(0, 1));
        assert!(ad.apply(&e(0, 1)).unwrap().is_zero());
    }

    #[test]
    fn inner_derivation_matches_definition() {
        let (p, r) = setup();
        let beta = sample_elem(&p, &r, 5);
        let ad = LinMap::inner_derivation(&beta);
        let a = sample_elem(&p, &r, 6);
        assert_eq!(ad.apply(&a).unwrap(), beta.commutator(&a).unwrap());
    }

    #[test]
    fn mismatched_dimensions() {
        let (p, r) = setup();
        assert!(matches!(
            LinMap::from_vec(&p, &r, vec![0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        let other = Arc::new(Poset::chain(4));
        let a = FiElement::identity(&other, &r);
        assert_eq!(LinMap::identity(&p, &r).apply(&a), Err(Error::PosetMismatch));
    }
}
