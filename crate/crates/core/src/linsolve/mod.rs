//! Exact linear systems over the supported rings.
//!
//! Fields (the rationals, `Z/p`) are handled by Gaussian elimination with
//! first-nonzero pivoting. The integers and `Z/m` for composite `m` go
//! through the Smith normal form of an integer lift. Large constraint sets
//! are first compressed to an echelon basis of their row module, which
//! leaves the solution set unchanged.

mod echelon;
pub mod smith;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::{Ring, ZMod};

use self::echelon::{FieldEchelon, LatticeEchelon, SparseRow};
pub use self::smith::{determinant, smith_normal_form, IntMatrix, SmithForm};

/// Sparse linear system `A x = b` over a ring.
///
/// Rows are stored sparse and sorted; all-zero homogeneous rows and exact
/// duplicates are dropped on insertion.
#[derive(Debug, Clone)]
pub struct LinSystem<R: Ring> {
    ring: R,
    labels: Vec<String>,
    rows: Vec<SparseRow<R::Elem>>,
    rhs: Vec<R::Elem>,
    seen: HashMap<u64, Vec<usize>>,
}

impl<R: Ring> LinSystem<R> {
    pub fn new(ring: &R, labels: Vec<String>) -> Self {
        LinSystem {
            ring: ring.clone(),
            labels,
            rows: Vec::new(),
            rhs: Vec::new(),
            seen: HashMap::new(),
        }
    }

    /// Unknowns labelled `x0, x1, ...`.
    pub fn with_unknowns(ring: &R, count: usize) -> Self {
        Self::new(ring, (0..count).map(|i| format!("x{i}")).collect())
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn num_unknowns(&self) -> usize {
        self.labels.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> (&[(usize, R::Elem)], &R::Elem) {
        (&self.rows[i], &self.rhs[i])
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.iter().all(|b| self.ring.is_zero(b))
    }

    /// Adds the equation `Σ c_j x_j = rhs`; repeated column indices are
    /// summed. Returns whether a new row was stored.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, R::Elem)>, rhs: R::Elem) -> bool {
        let ring = &self.ring;
        let mut row: Vec<(usize, R::Elem)> = entries.into_iter().collect();
        assert!(
            row.iter().all(|(j, _)| *j < self.labels.len()),
            "column index out of range"
        );
        row.sort_by_key(|(j, _)| *j);
        let mut merged: SparseRow<R::Elem> = Vec::with_capacity(row.len());
        for (j, c) in row {
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc = ring.add(acc, &c),
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !ring.is_zero(c));
        if merged.is_empty() && ring.is_zero(&rhs) {
            return false;
        }
        let mut h = DefaultHasher::new();
        merged.hash(&mut h);
        rhs.hash(&mut h);
        let key = h.finish();
        let bucket = self.seen.entry(key).or_default();
        if bucket
            .iter()
            .any(|&i| self.rows[i] == merged && self.rhs[i] == rhs)
        {
            return false;
        }
        bucket.push(self.rows.len());
        self.rows.push(merged);
        self.rhs.push(rhs);
        true
    }

    pub fn push_dense(&mut self, row: &[R::Elem], rhs: R::Elem) -> bool {
        assert_eq!(row.len(), self.num_unknowns(), "row length");
        self.push_row(row.iter().cloned().enumerate(), rhs)
    }

    /// `A x`.
    pub fn apply(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(x.len(), self.num_unknowns(), "vector length");
        let ring = &self.ring;
        self.rows
            .iter()
            .map(|row| row.iter().fold(ring.zero(), |acc, (j, c)| ring.mul_add(c, &x[*j], &acc)))
            .collect()
    }

    /// `A x = b`.
    pub fn is_solution(&self, x: &[R::Elem]) -> bool {
        self.apply(x) == self.rhs
    }

    /// `A x = 0`.
    pub fn is_homogeneous_solution(&self, x: &[R::Elem]) -> bool {
        self.apply(x).iter().all(|v| self.ring.is_zero(v))
    }

    /// Row `i` with its right-hand side appended as the last column.
    fn augmented_row(&self, i: usize) -> SparseRow<R::Elem> {
        let mut row = self.rows[i].clone();
        if !self.ring.is_zero(&self.rhs[i]) {
            row.push((self.num_unknowns(), self.rhs[i].clone()));
        }
        row
    }
}

/// Solution set of a linear system: `particular + span(generators)`.
///
/// Over a finite ring `orders[i]` is the additive order of generator `i`
/// and every solution is hit by exactly one coefficient vector
/// `c_i ∈ [0, orders[i])`. Over the integers the generators are a basis of
/// the solution lattice, over the rationals of the solution space; their
/// orders are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionModule<R: Ring> {
    pub particular: Option<Vec<R::Elem>>,
    pub generators: Vec<Vec<R::Elem>>,
    pub orders: Vec<Option<u64>>,
}

/// Coefficient bound for sampling combinations over infinite rings.
pub const DEFAULT_SAMPLE_BOUND: u32 = 3;

impl<R: Ring> SolutionModule<R> {
    pub fn solvable(&self) -> bool {
        self.particular.is_some()
    }

    /// Number of solutions, when finite.
    pub fn count(&self) -> Option<BigUint> {
        if !self.solvable() {
            return Some(BigUint::zero());
        }
        self.orders
            .iter()
            .try_fold(BigUint::one(), |acc, o| o.map(|o| acc * BigUint::from(o)))
    }

    /// All solutions of a finite module, refusing when there are more than `limit`.
    pub fn enumerate(&self, ring: &R, limit: u64) -> Result<Vec<Vec<R::Elem>>> {
        let Some(particular) = &self.particular else {
            return Ok(Vec::new());
        };
        let count = self
            .count()
            .ok_or_else(|| Error::InvalidArgument("cannot enumerate an infinite module".into()))?;
        if count > BigUint::from(limit) {
            return Err(Error::GuardExceeded {
                what: "solution enumeration",
                needed: count.to_u128().unwrap_or(u128::MAX),
                limit: limit as u128,
            });
        }
        let orders: Vec<u64> = self.orders.iter().map(|o| o.unwrap()).collect();
        let mut out = Vec::new();
        let mut digits = vec![0u64; orders.len()];
        loop {
            let mut x = particular.clone();
            for (g, &c) in self.generators.iter().zip(&digits) {
                if c == 0 {
                    continue;
                }
                let c = ring.from_i64(c as i64);
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi = ring.mul_add(&c, gi, xi);
                }
            }
            out.push(x);
            // odometer over the coefficient digits, last digit fastest
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < orders[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// `particular + Σ c_i g_i` with uniform `c_i` over finite orders and
    /// `c_i ∈ [-bound, bound]` otherwise.
    pub fn sample_with(&self, ring: &R, rng: &mut dyn RngCore, bound: u32) -> Result<Vec<R::Elem>> {
        let particular = self
            .particular
            .as_ref()
            .ok_or_else(|| Error::Infeasible("cannot sample an empty solution set".into()))?;
        let mut x = particular.clone();
        for (g, order) in self.generators.iter().zip(&self.orders) {
            let c = match order {
                Some(o) => rng.gen_range(0..*o) as i64,
                None => rng.gen_range(-(bound as i64)..=bound as i64),
            };
            if c == 0 {
                continue;
            }
            let c = ring.from_i64(c);
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi = ring.mul_add(&c, gi, xi);
            }
        }
        Ok(x)
    }

    /// Deterministic per seed.
    pub fn sample(&self, ring: &R, seed: u64) -> Result<Vec<R::Elem>> {
        self.sample_with(ring, &mut ChaCha8Rng::seed_from_u64(seed), DEFAULT_SAMPLE_BOUND)
    }

    /// Substitution check of the particular solution and every generator.
    pub fn verify(&self, sys: &LinSystem<R>) -> bool {
        self.particular.as_ref().is_none_or(|p| sys.is_solution(p))
            && self.generators.iter().all(|g| sys.is_homogeneous_solution(g))
    }
}

/// Which elimination route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Field elimination for fields, Smith normal form otherwise.
    #[default]
    Auto,
    Field,
    Smith,
}

pub fn solve<R: Ring>(sys: &LinSystem<R>) -> SolutionModule<R> {
    solve_with(sys, Method::Auto).expect("automatic method fits every supported ring")
}

pub fn solve_with<R: Ring>(sys: &LinSystem<R>, method: Method) -> Result<SolutionModule<R>> {
    let ring = sys.ring();
    match method {
        Method::Auto if ring.is_field() => solve_field(sys),
        Method::Auto | Method::Smith => solve_smith(sys),
        Method::Field => solve_field(sys),
    }
}

fn solve_field<R: Ring>(sys: &LinSystem<R>) -> Result<SolutionModule<R>> {
    let ring = sys.ring();
    if !ring.is_field() {
        return Err(Error::InvalidArgument(format!("{} is not a field", ring.spec())));
    }
    let width = sys.num_unknowns() + 1;
    let mut ech = FieldEchelon::new(ring, width);
    if ring.characteristic() == 0 {
        select_rational_rows(sys, &mut ech);
    } else {
        for i in 0..sys.num_rows() {
            ech.insert(&sys.augmented_row(i));
        }
    }
    Ok(module_from_echelon(ring, sys.num_unknowns(), ech.into_sorted()))
}

/// Kernel description of a reduced echelon basis of the augmented matrix.
fn module_from_echelon<R: Ring>(
    ring: &R,
    cols: usize,
    rows: Vec<(usize, SparseRow<R::Elem>)>,
) -> SolutionModule<R> {
    let order = ring.cardinality();
    let mut is_pivot = vec![false; cols + 1];
    for (p, _) in &rows {
        is_pivot[*p] = true;
    }
    let solvable = !is_pivot[cols];
    let entry = |row: &SparseRow<R::Elem>, k: usize| {
        row.binary_search_by_key(&k, |(j, _)| *j)
            .map_or_else(|_| ring.zero(), |at| row[at].1.clone())
    };
    let particular = solvable.then(|| {
        let mut x = vec![ring.zero(); cols];
        for (p, row) in &rows {
            x[*p] = entry(row, cols);
        }
        x
    });
    let mut generators = Vec::new();
    for f in (0..cols).filter(|&f| !is_pivot[f]) {
        let mut g = vec![ring.zero(); cols];
        g[f] = ring.one();
        for (p, row) in &rows {
            if *p < cols {
                g[*p] = ring.neg(&entry(row, f));
            }
        }
        generators.push(g);
    }
    SolutionModule {
        particular,
        orders: vec![order; generators.len()],
        generators,
    }
}

// Largest prime below 2^32.
const FILTER_PRIME: u64 = 4_294_967_291;

fn integral_row(row: &[(usize, BigRational)]) -> Vec<(usize, BigInt)> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    row.iter()
        .map(|(j, c)| (*j, c.numer() * (&lcm / c.denom())))
        .collect()
}

/// Characteristic-zero elimination: a fast pass modulo a large prime picks
/// the rows that are independent there (hence over the rationals); every
/// other row is then checked exactly against the kernel of the selection and
/// added when it is not already implied.
fn select_rational_rows<R: Ring>(sys: &LinSystem<R>, ech: &mut FieldEchelon<'_, R>) {
    let ring = sys.ring();
    let fp = ZMod::new(FILTER_PRIME).expect("prime fits");
    let width = sys.num_unknowns() + 1;
    let int_rows: Vec<Vec<(usize, BigInt)>> = (0..sys.num_rows())
        .map(|i| {
            let row: Vec<(usize, BigRational)> = sys
                .augmented_row(i)
                .iter()
                .map(|(j, c)| (*j, ring.to_rational(c).expect("characteristic-zero ring")))
                .collect();
            integral_row(&row)
        })
        .collect();
    let mut modp = FieldEchelon::new(&fp, width);
    let mut chosen = vec![false; int_rows.len()];
    for (i, row) in int_rows.iter().enumerate() {
        let reduced: Vec<(usize, u64)> = row.iter().map(|(j, c)| (*j, fp.from_bigint(c))).collect();
        if modp.insert(&reduced) {
            chosen[i] = true;
            ech.insert(&sys.augmented_row(i));
        }
    }
    loop {
        let kernel = integral_kernel(ring, ech, width);
        let missing = int_rows.iter().enumerate().find(|(i, row)| {
            !chosen[*i]
                && kernel
                    .iter()
                    .any(|k| !row.iter().map(|(j, c)| c * &k[*j]).sum::<BigInt>().is_zero())
        });
        match missing {
            Some((i, _)) => {
                chosen[i] = true;
                ech.insert(&sys.augmented_row(i));
            }
            None => return,
        }
    }
}

/// Integer vectors spanning the kernel of the current echelon rows
/// (over the full augmented width).
fn integral_kernel<R: Ring>(ring: &R, ech: &FieldEchelon<'_, R>, width: usize) -> Vec<Vec<BigInt>> {
    let snapshot = ech.snapshot();
    let mut is_pivot = vec![false; width];
    for (p, _) in &snapshot {
        is_pivot[*p] = true;
    }
    let mut out = Vec::new();
    for f in (0..width).filter(|&f| !is_pivot[f]) {
        let mut g: Vec<(usize, BigRational)> = vec![(f, BigRational::one())];
        for (p, row) in &snapshot {
            if let Ok(at) = row.binary_search_by_key(&f, |(j, _)| *j) {
                let c = ring.to_rational(&row[at].1).expect("characteristic-zero ring");
                g.push((*p, -c));
            }
        }
        let mut dense = vec![BigInt::zero(); width];
        for (j, c) in integral_row(&g) {
            dense[j] = c;
        }
        out.push(dense);
    }
    out
}

fn solve_smith<R: Ring>(sys: &LinSystem<R>) -> Result<SolutionModule<R>> {
    let ring = sys.ring();
    let cols = sys.num_unknowns();
    let modulus = match ring.characteristic() {
        0 if ring.is_field() => {
            return Err(Error::InvalidArgument(
                "the Smith route needs the integers or Z/m".into(),
            ))
        }
        0 => None,
        m => Some(m),
    };
    let mut lattice = LatticeEchelon::new(cols + 1, modulus);
    for i in 0..sys.num_rows() {
        let mut dense = vec![BigInt::zero(); cols + 1];
        for (j, c) in sys.augmented_row(i) {
            dense[j] = ring.to_integer(&c).expect("integral ring element");
        }
        lattice.insert(dense);
    }
    let rows = lattice.into_rows();
    let a = IntMatrix::from_rows(rows.iter().map(|r| r[..cols].to_vec()).collect());
    let b: Vec<BigInt> = rows.iter().map(|r| r[cols].clone()).collect();
    let (a, b) = if rows.is_empty() {
        (IntMatrix::zeros(0, cols), Vec::new())
    } else {
        (a, b)
    };
    let snf = smith_normal_form(&a);
    let c = snf.u.mul_vec(&b);
    let r = snf.rank;
    let v = &snf.v;
    let v_col = |j: usize| -> Vec<BigInt> { (0..cols).map(|i| v.get(i, j).clone()).collect() };
    let to_ring = |x: Vec<BigInt>| -> Vec<R::Elem> { x.iter().map(|e| ring.from_bigint(e)).collect() };

    let mut y = vec![BigInt::zero(); cols];
    let mut solvable = true;
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    match modulus {
        None => {
            for i in 0..c.len() {
                if i < r {
                    let d = snf.d.get(i, i);
                    if c[i].is_multiple_of(d) {
                        y[i] = &c[i] / d;
                    } else {
                        solvable = false;
                    }
                } else if !c[i].is_zero() {
                    solvable = false;
                }
            }
            for j in r..cols {
                generators.push(to_ring(v_col(j)));
                orders.push(None);
            }
        }
        Some(m) => {
            let mb = BigInt::from(m);
            for i in 0..c.len() {
                let ci = c[i].mod_floor(&mb);
                if i < r {
                    let d = snf.d.get(i, i).mod_floor(&mb);
                    let g = d.gcd(&mb);
                    if !ci.is_multiple_of(&g) {
                        solvable = false;
                        continue;
                    }
                    let step = &mb / &g;
                    // (d/g) is a unit modulo m/g
                    let inv = (&d / &g).extended_gcd(&step).x.mod_floor(&step);
                    y[i] = ((&ci / &g) * inv).mod_floor(&step);
                    if !g.is_one() {
                        let gen: Vec<BigInt> = v_col(i).into_iter().map(|e| e * &step).collect();
                        generators.push(to_ring(gen));
                        orders.push(Some(g.to_u64().expect("divides the modulus")));
                    }
                } else if !ci.is_zero() {
                    solvable = false;
                }
            }
            for j in r..cols {
                generators.push(to_ring(v_col(j)));
                orders.push(Some(m));
            }
        }
    }
    let particular = solvable.then(|| {
        let x: Vec<BigInt> = (0..cols)
            .map(|i| (0..cols).map(|j| v.get(i, j) * &y[j]).sum())
            .collect();
        to_ring(x)
    });
    Ok(SolutionModule {
        particular,
        generators,
        orders,
    })
}
