//! Iterated commutators and exact checks of the derivation and Lie
//! n-derivation identities.
//!
//! Both identities are multilinear in their arguments, so they hold for all
//! elements as soon as they hold on every tuple of basis elements. All
//! checks here therefore run over basis tuples in lexicographic order, and a
//! failing check reports the first failing tuple.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::FiElement;
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::linsolve::LinSystem;
use crate::poset::Poset;
use crate::ring::Ring;

/// Default cap on the number of basis tuples a single check may visit.
pub const DEFAULT_TUPLE_GUARD: u64 = 200_000;

/// `p_1 = x_1`, `p_k = [p_{k-1}(x_1, …, x_{k-1}), x_k]`.
pub fn p_n<R: Ring>(args: &[FiElement<R>]) -> Result<FiElement<R>> {
    let (first, rest) = args
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("p_n needs at least one argument".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, x| acc.commutator(x))
}

/// Both sides of the Lie n-derivation identity on concrete arguments:
/// `L(p_n(x))` and `Σ_k p_n(x_1, …, L(x_k), …, x_n)`.
pub fn lie_identity_sides<R: Ring>(
    map: &LinMap<R>,
    args: &[FiElement<R>],
) -> Result<(FiElement<R>, FiElement<R>)> {
    let lhs = map.apply(&p_n(args)?)?;
    let mut rhs = FiElement::zero(map.poset(), map.ring());
    for k in 0..args.len() {
        let mut replaced = args.to_vec();
        replaced[k] = map.apply(&args[k])?;
        rhs = rhs.try_add(&p_n(&replaced)?)?;
    }
    Ok((lhs, rhs))
}

pub(crate) fn tuple_count(basis_len: usize, n: usize) -> u128 {
    (basis_len as u128).saturating_pow(n as u32)
}

pub(crate) fn check_guard(what: &'static str, needed: u128, guard: u64) -> Result<()> {
    if needed > guard as u128 {
        return Err(Error::GuardExceeded {
            what,
            needed,
            limit: guard as u128,
        });
    }
    Ok(())
}

/// Sparse integer combination of basis elements, sorted by pair index.
pub type IntSparse = Vec<(usize, i64)>;

fn normalize(mut v: IntSparse) -> IntSparse {
    v.sort_unstable_by_key(|(p, _)| *p);
    let mut out: IntSparse = Vec::with_capacity(v.len());
    for (p, c) in v {
        match out.last_mut() {
            Some((q, acc)) if *q == p => *acc += c,
            _ => out.push((p, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// `[x, e_q]` for an integer combination `x` of basis elements.
fn bracket_sparse(poset: &Poset, x: &IntSparse, q: usize) -> IntSparse {
    let (c, d) = poset.pair(q);
    let mut out = IntSparse::new();
    for &(p, coef) in x {
        let (a, b) = poset.pair(p);
        if b == c {
            out.push((poset.pair_index(a, d).expect("transitivity"), coef));
        }
        if a == d {
            out.push((poset.pair_index(c, b).expect("transitivity"), -coef));
        }
    }
    normalize(out)
}

/// `p_n` evaluated on every `n`-tuple of basis elements.
///
/// Values are integer combinations of basis elements (the image of the
/// integers in any ring). Tuple `(t_1, …, t_n)` has index
/// `Σ t_k B^{n-k}`, so indices follow lexicographic order.
#[derive(Debug, Clone)]
pub struct BasisCommutators {
    n: usize,
    basis_len: usize,
    values: Vec<IntSparse>,
}

impl BasisCommutators {
    pub fn new(poset: &Poset, n: usize, guard: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("p_n needs n >= 1".into()));
        }
        let b = poset.basis_len();
        check_guard("basis tuple table", tuple_count(b, n), guard)?;
        let mut values: Vec<IntSparse> = (0..b).map(|q| vec![(q, 1)]).collect();
        for _ in 1..n {
            let mut next = Vec::with_capacity(values.len() * b);
            for v in &values {
                for q in 0..b {
                    next.push(if v.is_empty() { Vec::new() } else { bracket_sparse(poset, v, q) });
                }
            }
            values = next;
        }
        Ok(BasisCommutators {
            n,
            basis_len: b,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, index: usize) -> &IntSparse {
        &self.values[index]
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.n];
        for slot in t.iter_mut().rev() {
            *slot = index % self.basis_len;
            index /= self.basis_len;
        }
        t
    }

    /// Index of the tuple obtained by putting `r` into slot `k`.
    pub fn replace(&self, index: usize, k: usize, r: usize) -> usize {
        let weight = self.basis_len.pow((self.n - 1 - k) as u32);
        let old = (index / weight) % self.basis_len;
        index - old * weight + r * weight
    }

    /// The distinct nonzero values of `p_n` on basis tuples.
    pub fn distinct_values(&self) -> Vec<&IntSparse> {
        let mut seen = HashSet::new();
        self.values
            .iter()
            .filter(|v| !v.is_empty() && seen.insert(*v))
            .collect()
    }

    pub fn to_element<R: Ring>(&self, index: usize, poset: &Arc<Poset>, ring: &R) -> FiElement<R> {
        let mut out = FiElement::zero(poset, ring);
        for &(p, c) in &self.values[index] {
            out.set_coeff(p, ring.from_i64(c));
        }
        out
    }
}

/// Counterexample to an identity: the basis tuple and the two unequal sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<R: Ring> {
    pub tuple: Vec<usize>,
    pub lhs: FiElement<R>,
    pub rhs: FiElement<R>,
}

/// Outcome of an identity check over all basis tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<R: Ring> {
    pub verdict: bool,
    pub witness: Option<Witness<R>>,
    /// Tuples visited, in lexicographic order, up to and including the witness.
    pub tuples_checked: u64,
}

impl<R: Ring> fmt::Display for CheckReport<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", if self.verdict { "holds" } else { "fails" })?;
        writeln!(
            f,
            "basis tuples checked: {} (the identity is multilinear, so basis tuples suffice)",
            self.tuples_checked
        )?;
        if let Some(w) = &self.witness {
            let poset = w.lhs.poset();
            let names: Vec<String> = w
                .tuple
                .iter()
                .map(|&p| {
                    let (x, y) = poset.pair(p);
                    format!("e({},{})", poset.name(x), poset.name(y))
                })
                .collect();
            writeln!(f, "first failing tuple: ({})", names.join(", "))?;
            writeln!(f, "  left side:  {}", w.lhs)?;
            writeln!(f, "  right side: {}", w.rhs)?;
        }
        Ok(())
    }
}

fn first_failure<R, F>(count: usize, eval: F) -> (Option<(usize, FiElement<R>, FiElement<R>)>, u64)
where
    R: Ring,
    F: Fn(usize) -> (FiElement<R>, FiElement<R>) + Sync + Send,
{
    let found = (0..count).into_par_iter().find_map_first(|i| {
        let (lhs, rhs) = eval(i);
        (lhs != rhs).then_some((i, lhs, rhs))
    });
    let checked = found.as_ref().map_or(count, |(i, _, _)| i + 1) as u64;
    (found, checked)
}

/// Checks `L(e_a e_b) = L(e_a) e_b + e_a L(e_b)` for all basis pairs.
pub fn is_derivation<R: Ring>(map: &LinMap<R>) -> CheckReport<R> {
    let poset = map.poset();
    let ring = map.ring();
    let b = poset.basis_len();
    let images: Vec<FiElement<R>> = (0..b).map(|q| map.image_of_basis(q)).collect();
    let (found, tuples_checked) = first_failure(b * b, |i| {
        let (a, c) = (i / b, i % b);
        let (x, y) = poset.pair(a);
        let (u, v) = poset.pair(c);
        let lhs = if y == u {
            images[poset.pair_index(x, v).expect("transitivity")].clone()
        } else {
            FiElement::zero(poset, ring)
        };
        let rhs = &images[a].mul_basis_right(c) + &images[c].mul_basis_left(a);
        (lhs, rhs)
    });
    report(found, tuples_checked, |i| vec![i / b, i % b])
}

fn report<R: Ring>(
    found: Option<(usize, FiElement<R>, FiElement<R>)>,
    tuples_checked: u64,
    decode: impl Fn(usize) -> Vec<usize>,
) -> CheckReport<R> {
    CheckReport {
        verdict: found.is_none(),
        witness: found.map(|(i, lhs, rhs)| Witness {
            tuple: decode(i),
            lhs,
            rhs,
        }),
        tuples_checked,
    }
}

fn decode_tuple(mut index: usize, b: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = index % b;
        index /= b;
    }
    t
}

/// Checks the Lie n-derivation identity on every `n`-tuple of basis
/// elements, by direct evaluation in the algebra.
pub fn is_lie_n_derivation<R: Ring>(map: &LinMap<R>, n: usize, guard: u64) -> Result<CheckReport<R>> {
    if n < 2 {
        return Err(Error::InvalidArgument("Lie n-derivations need n >= 2".into()));
    }
    let poset = map.poset();
    let b = poset.basis_len();
    check_guard("Lie n-derivation check", tuple_count(b, n), guard)?;
    let images: Vec<FiElement<R>> = (0..b).map(|q| map.image_of_basis(q)).collect();
    let (found, tuples_checked) = first_failure(b.pow(n as u32), |i| {
        let t = decode_tuple(i, b, n);
        // prefixes[j] = p_{j+1}(e_{t_1}, …, e_{t_{j+1}})
        let mut prefixes = Vec::with_capacity(n);
        prefixes.push(FiElement::basis_pair(poset, map.ring(), t[0]));
        for j in 1..n {
            let next = prefixes[j - 1].bracket_basis(t[j]);
            prefixes.push(next);
        }
        let lhs = map.apply(&prefixes[n - 1]).expect("same poset");
        let mut rhs = FiElement::zero(poset, map.ring());
        for k in 0..n {
            let mut term = if k == 0 {
                images[t[0]].clone()
            } else {
                prefixes[k - 1].commutator(&images[t[k]]).expect("same poset")
            };
            for &q in &t[k + 1..] {
                term = term.bracket_basis(q);
            }
            rhs = &rhs + &term;
        }
        (lhs, rhs)
    });
    Ok(report(found, tuples_checked, |i| decode_tuple(i, b, n)))
}

/// Labels `L(x,y)[u,v]`: the coefficient of `e_uv` in `L(e_xy)`.
pub fn map_unknown_labels(poset: &Poset) -> Vec<String> {
    let mut labels = Vec::with_capacity(poset.basis_len().pow(2));
    for &(x, y) in poset.pairs() {
        for &(u, v) in poset.pairs() {
            labels.push(format!(
                "L({},{})[{},{}]",
                poset.name(x),
                poset.name(y),
                poset.name(u),
                poset.name(v)
            ));
        }
    }
    labels
}

/// Makes the first coefficient positive so that `r` and `-r` coincide.
fn sign_normalize(mut row: IntSparse) -> IntSparse {
    if row.first().is_some_and(|(_, c)| *c < 0) {
        row.iter_mut().for_each(|(_, c)| *c = -*c);
    }
    row
}

/// Integer rows of the Lie n-derivation identity in the unknowns of `L`
/// (unknown `c·B + s` is the coefficient of `e_s` in `L(e_c)`).
pub(crate) fn lie_n_integer_rows(table: &BasisCommutators, basis_len: usize) -> Vec<IntSparse> {
    let b = basis_len;
    let chunks: Vec<HashSet<IntSparse>> = (0..table.len())
        .into_par_iter()
        .fold(HashSet::new, |mut acc, idx| {
            let mut rows: Vec<IntSparse> = vec![Vec::new(); b];
            let value = table.value(idx);
            for &(c, coef) in value {
                for (s, row) in rows.iter_mut().enumerate() {
                    row.push((c * b + s, coef));
                }
            }
            let t = table.decode(idx);
            for (k, &tk) in t.iter().enumerate() {
                for r in 0..b {
                    for &(s, coef) in table.value(table.replace(idx, k, r)) {
                        rows[s].push((tk * b + r, -coef));
                    }
                }
            }
            for row in rows {
                let row = normalize(row);
                if !row.is_empty() {
                    acc.insert(sign_normalize(row));
                }
            }
            acc
        })
        .collect();
    let mut all: HashSet<IntSparse> = HashSet::new();
    for chunk in chunks {
        all.extend(chunk);
    }
    let mut rows: Vec<IntSparse> = all.into_iter().collect();
    rows.sort_unstable();
    rows
}

/// Homogeneous system in the `B²` entries of `L` whose solutions are exactly
/// the Lie n-derivations.
pub fn lie_n_constraint_system<R: Ring>(
    poset: &Arc<Poset>,
    ring: &R,
    n: usize,
    guard: u64,
) -> Result<LinSystem<R>> {
    if n < 2 {
        return Err(Error::InvalidArgument("Lie n-derivations need n >= 2".into()));
    }
    let table = BasisCommutators::new(poset, n, guard)?;
    let mut sys = LinSystem::new(ring, map_unknown_labels(poset));
    for row in lie_n_integer_rows(&table, poset.basis_len()) {
        sys.push_row(row.into_iter().map(|(j, c)| (j, ring.from_i64(c))), ring.zero());
    }
    Ok(sys)
}

/// Integer rows of `d(e_a e_b) - d(e_a) e_b - e_a d(e_b) = 0`.
pub(crate) fn derivation_integer_rows(poset: &Poset) -> Vec<IntSparse> {
    let b = poset.basis_len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 0..b {
        let (xa, ya) = poset.pair(a);
        for c in 0..b {
            let (xc, yc) = poset.pair(c);
            let product = (ya == xc).then(|| poset.pair_index(xa, yc).unwrap());
            for s in 0..b {
                let (u, v) = poset.pair(s);
                let mut row = IntSparse::new();
                if let Some(ab) = product {
                    row.push((ab * b + s, 1));
                }
                // (d(e_a) e_c)(u, v) = d(e_a)(u, xc) when v = yc
                if v == yc {
                    if let Some(src) = poset.pair_index(u, xc) {
                        row.push((a * b + src, -1));
                    }
                }
                // (e_a d(e_c))(u, v) = d(e_c)(ya, v) when u = xa
                if u == xa {
                    if let Some(src) = poset.pair_index(ya, v) {
                        row.push((c * b + src, -1));
                    }
                }
                let row = normalize(row);
                if !row.is_empty() {
                    let row = sign_normalize(row);
                    if seen.insert(row.clone()) {
                        out.push(row);
                    }
                }
            }
        }
    }
    out
}

/// Homogeneous system whose solutions are exactly the derivations.
pub fn derivation_constraint_system<R: Ring>(poset: &Arc<Poset>, ring: &R) -> LinSystem<R> {
    let mut sys = LinSystem::new(ring, map_unknown_labels(poset));
    for row in derivation_integer_rows(poset) {
        sys.push_row(row.into_iter().map(|(j, c)| (j, ring.from_i64(c))), ring.zero());
    }
    sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ZMod;

    fn chain2() -> Arc<Poset> {
        Arc::new(Poset::chain(2))
    }

    #[test]
    fn p2_on_two_chain() {
        let p = chain2();
        let r = ZMod::new(5).unwrap();
        let e12 = FiElement::basis(&p, &r, 0, 1).unwrap();
        let e2 = FiElement::basis(&p, &r, 1, 1).unwrap();
        assert_eq!(p_n(&[e12.clone(), e2]).unwrap(), e12);
        assert!(p_n::<ZMod>(&[]).is_err());
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let p = Arc::new(Poset::diamond());
        let r = ZMod::new(7).unwrap();
        let table = BasisCommutators::new(&p, 3, DEFAULT_TUPLE_GUARD).unwrap();
        assert_eq!(table.len(), 9 * 9 * 9);
        for idx in (0..table.len()).step_by(7) {
            let args: Vec<_> = table
                .decode(idx)
                .into_iter()
                .map(|q| FiElement::basis_pair(&p, &r, q))
                .collect();
            assert_eq!(table.to_element(idx, &p, &r), p_n(&args).unwrap());
        }
        let idx = 5 * 81 + 2 * 9 + 7;
        assert_eq!(table.decode(idx), vec![5, 2, 7]);
        assert_eq!(table.decode(table.replace(idx, 1, 4)), vec![5, 4, 7]);
    }

    #[test]
    fn guard_is_enforced() {
        let p = Poset::chain(4); // B = 10
        assert!(matches!(
            BasisCommutators::new(&p, 4, 9_999),
            Err(Error::GuardExceeded { needed: 10_000, .. })
        ));
        assert!(BasisCommutators::new(&p, 4, 10_000).is_ok());
    }

    #[test]
    fn identity_is_not_a_derivation() {
        let p = chain2();
        let r = ZMod::new(5).unwrap();
        let rep = is_derivation(&LinMap::identity(&p, &r));
        assert!(!rep.verdict);
        let w = rep.witness.unwrap();
        assert_eq!(w.tuple, vec![0, 0]);
        let e1 = FiElement::basis(&p, &r, 0, 0).unwrap();
        assert_eq!(w.lhs, e1);
        assert_eq!(w.rhs, &e1 + &e1);
        assert_eq!(rep.tuples_checked, 1);
    }

    #[test]
    fn zero_and_inner_maps_are_derivations() {
        let p = Arc::new(Poset::n_shape());
        let r = ZMod::new(3).unwrap();
        assert!(is_derivation(&LinMap::zero(&p, &r)).verdict);
        let beta = FiElement::from_fn(&p, &r, |x, y| (x + 2 * y) as u64 % 3);
        let ad = LinMap::inner_derivation(&beta);
        let rep = is_derivation(&ad);
        assert!(rep.verdict);
        assert!(rep.witness.is_none());
        assert_eq!(rep.tuples_checked, (p.basis_len() * p.basis_len()) as u64);
        for n in 2..=4 {
            assert!(is_lie_n_derivation(&ad, n, DEFAULT_TUPLE_GUARD).unwrap().verdict);
        }
    }

    #[test]
    fn identity_lie_3_depends_on_characteristic() {
        let p = chain2();
        let r2 = ZMod::new(2).unwrap();
        assert!(is_lie_n_derivation(&LinMap::identity(&p, &r2), 3, DEFAULT_TUPLE_GUARD)
            .unwrap()
            .verdict);
        let r5 = ZMod::new(5).unwrap();
        let rep = is_lie_n_derivation(&LinMap::identity(&p, &r5), 3, DEFAULT_TUPLE_GUARD).unwrap();
        assert!(!rep.verdict);
        let w = rep.witness.unwrap();
        assert_ne!(w.lhs, w.rhs);
        // witness re-evaluates to an inequality
        let args: Vec<_> = w.tuple.iter().map(|&q| FiElement::basis_pair(&p, &r5, q)).collect();
        let (lhs, rhs) = lie_identity_sides(&LinMap::identity(&p, &r5), &args).unwrap();
        assert_eq!((lhs, rhs), (w.lhs, w.rhs));
    }

    #[test]
    fn lie_check_needs_n_at_least_two() {
        let p = chain2();
        let r = ZMod::new(2).unwrap();
        assert!(is_lie_n_derivation(&LinMap::identity(&p, &r), 1, DEFAULT_TUPLE_GUARD).is_err());
    }

    #[test]
    fn systems_accept_known_solutions() {
        let p = Arc::new(Poset::diamond());
        let r = ZMod::new(5).unwrap();
        let beta = FiElement::from_fn(&p, &r, |x, y| (3 * x + y + 1) as u64 % 5);
        let ad = LinMap::inner_derivation(&beta);
        let der = derivation_constraint_system(&p, &r);
        assert!(der.is_homogeneous_solution(ad.as_slice()));
        let lie = lie_n_constraint_system(&p, &r, 3, DEFAULT_TUPLE_GUARD).unwrap();
        assert!(lie.is_homogeneous_solution(ad.as_slice()));
        assert!(!lie.is_homogeneous_solution(LinMap::identity(&p, &r).as_slice()));
    }
}
