//! Incremental row-echelon builders used to compress large constraint sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::ring::Ring;

pub(crate) type SparseRow<E> = Vec<(usize, E)>;

/// `row - f * v` for sorted sparse rows.
fn sparse_axpy<R: Ring>(ring: &R, row: &[(usize, R::Elem)], f: &R::Elem, v: &[(usize, R::Elem)]) -> SparseRow<R::Elem> {
    let mut out = Vec::with_capacity(row.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < v.len() {
        let take_row = j == v.len() || (i < row.len() && row[i].0 < v[j].0);
        let take_v = i == row.len() || (j < v.len() && v[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_v {
            out.push((v[j].0, ring.neg(&ring.mul(f, &v[j].1))));
            j += 1;
        } else {
            let c = ring.sub(&row[i].1, &ring.mul(f, &v[j].1));
            if !ring.is_zero(&c) {
                out.push((row[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row-echelon basis of a row space over a field. Basis rows are
/// kept sparse and monic.
pub(crate) struct FieldEchelon<'a, R: Ring> {
    ring: &'a R,
    width: usize,
    rows: Vec<SparseRow<R::Elem>>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<Option<usize>>,
}

impl<'a, R: Ring> FieldEchelon<'a, R> {
    pub fn new(ring: &'a R, width: usize) -> Self {
        FieldEchelon {
            ring,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: vec![None; width],
        }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a sparse row modulo the current span, returning the dense remainder.
    pub fn reduce(&self, row: &[(usize, R::Elem)]) -> Vec<R::Elem> {
        let ring = self.ring;
        let mut v = vec![ring.zero(); self.width];
        for (j, c) in row {
            v[*j] = ring.add(&v[*j], c);
        }
        let first = row.iter().map(|(j, _)| *j).min().unwrap_or(self.width);
        for j in first..self.width {
            if ring.is_zero(&v[j]) {
                continue;
            }
            if let Some(ri) = self.row_of_pivot[j] {
                let f = v[j].clone();
                for (k, c) in &self.rows[ri] {
                    v[*k] = ring.sub(&v[*k], &ring.mul(&f, c));
                }
            }
        }
        v
    }

    /// Adds a sparse row; returns false when it was already in the span.
    pub fn insert(&mut self, row: &[(usize, R::Elem)]) -> bool {
        let ring = self.ring;
        let v = self.reduce(row);
        let Some(p) = v.iter().position(|c| !ring.is_zero(c)) else {
            return false;
        };
        let inv = ring.inverse(&v[p]).expect("nonzero element of a field is a unit");
        let v: SparseRow<R::Elem> = v
            .into_iter()
            .enumerate()
            .skip(p)
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(k, c)| (k, ring.mul(&inv, &c)))
            .collect();
        for row in &mut self.rows {
            if let Ok(at) = row.binary_search_by_key(&p, |(k, _)| *k) {
                let f = row[at].1.clone();
                *row = sparse_axpy(ring, row, &f, &v);
            }
        }
        self.row_of_pivot[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn snapshot(&self) -> Vec<(usize, SparseRow<R::Elem>)> {
        self.pivots.iter().copied().zip(self.rows.iter().cloned()).collect()
    }

    /// Rows sorted by pivot column, with their pivots.
    pub fn into_sorted(self) -> Vec<(usize, SparseRow<R::Elem>)> {
        let mut out: Vec<_> = self.pivots.into_iter().zip(self.rows).collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }
}

/// Row-echelon basis of an integer lattice (optionally together with all of
/// `m · Z^width`, with entries then kept in `[0, m)`).
pub(crate) struct LatticeEchelon {
    width: usize,
    modulus: Option<BigInt>,
    rows: Vec<Option<Vec<BigInt>>>,
}

impl LatticeEchelon {
    pub fn new(width: usize, modulus: Option<u64>) -> Self {
        let modulus = modulus.map(BigInt::from);
        let rows = (0..width)
            .map(|j| {
                modulus.as_ref().map(|m| {
                    let mut r = vec![BigInt::zero(); width];
                    r[j] = m.clone();
                    r
                })
            })
            .collect();
        LatticeEchelon {
            width,
            modulus,
            rows,
        }
    }

    fn reduce(&self, v: &mut [BigInt]) {
        if let Some(m) = &self.modulus {
            for c in v.iter_mut() {
                if !c.is_zero() {
                    *c = c.mod_floor(m);
                }
            }
        }
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        debug_assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        for j in 0..self.width {
            if v[j].is_zero() {
                continue;
            }
            let Some(basis) = self.rows[j].take() else {
                if v[j].is_negative() {
                    v.iter_mut().for_each(|c| *c = -std::mem::take(c));
                }
                self.rows[j] = Some(v);
                return;
            };
            let a = basis[j].clone();
            let c = v[j].clone();
            if c.is_multiple_of(&a) {
                let q = &c / &a;
                for k in j..self.width {
                    if !basis[k].is_zero() {
                        v[k] -= &q * &basis[k];
                    }
                }
                self.reduce(&mut v);
                self.rows[j] = Some(basis);
            } else {
                let ext = a.extended_gcd(&c);
                let (ag, cg) = (&a / &ext.gcd, &c / &ext.gcd);
                let mut new_basis = vec![BigInt::zero(); self.width];
                for k in j..self.width {
                    new_basis[k] = &ext.x * &basis[k] + &ext.y * &v[k];
                    v[k] = &ag * &v[k] - &cg * &basis[k];
                }
                if new_basis[j].is_negative() {
                    new_basis.iter_mut().for_each(|c| *c = -std::mem::take(c));
                }
                self.reduce(&mut new_basis);
                self.reduce(&mut v);
                self.rows[j] = Some(new_basis);
            }
        }
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows.into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rationals, ZMod};

    #[test]
    fn field_echelon_rank() {
        let r = ZMod::new(5).unwrap();
        let dense = |v: [u64; 3]| v.into_iter().enumerate().collect::<Vec<_>>();
        let mut e = FieldEchelon::new(&r, 3);
        assert!(e.insert(&dense([1, 2, 3])));
        assert!(e.insert(&dense([0, 1, 1])));
        assert!(!e.insert(&dense([2, 0, 2])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn field_echelon_over_rationals() {
        let q = Rationals::new();
        let v = |xs: &[i64]| {
            xs.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, q.from_i64(x)))
                .collect::<Vec<_>>()
        };
        let mut e = FieldEchelon::new(&q, 3);
        assert!(e.insert(&v(&[2, 4, 6])));
        assert!(!e.insert(&v(&[1, 2, 3])));
        assert!(e.insert(&v(&[0, 3, 1])));
        let rows = e.into_sorted();
        assert_eq!(rows[0].0, 0);
        assert_eq!(rows[1].0, 1);
        // fully reduced: the first row has no entry in the second pivot column
        assert!(rows[0].1.iter().all(|(k, _)| *k != 1));
    }

    #[test]
    fn lattice_echelon_gcd() {
        let mut e = LatticeEchelon::new(2, None);
        e.insert(vec![BigInt::from(4), BigInt::from(1)]);
        e.insert(vec![BigInt::from(6), BigInt::from(0)]);
        let rows = e.into_rows();
        // lattice determinant is |4*0 - 1*6| = 6
        let det = &rows[0][0] * &rows[1][1];
        assert_eq!(det, BigInt::from(6));
    }

    #[test]
    fn lattice_echelon_mod_m() {
        let mut e = LatticeEchelon::new(2, Some(4));
        e.insert(vec![BigInt::from(2), BigInt::from(1)]);
        let rows = e.into_rows();
        assert_eq!(rows.len(), 2);
        // lattice (2,1), 4Z^2 has index 4 in Z^2
        let det = &rows[0][0] * &rows[1][1];
        assert_eq!(det, BigInt::from(4));
    }
}
