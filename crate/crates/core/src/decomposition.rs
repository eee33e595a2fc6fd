//! The canonical splitting `L = d + τ` with `τ(α) = L(α)_D`, the theorem
//! check built on it, Lie n-derivation spaces, and the properness decision.

use std::fmt;
use std::sync::Arc;

use crate::algebra::FiElement;
use crate::error::{Error, Result};
use crate::lie::{self, BasisCommutators, CheckReport, IntSparse};
use crate::linmap::LinMap;
use crate::linsolve::{self, LinSystem, SolutionModule};
use crate::poset::Poset;
use crate::ring::Ring;

/// Outcomes of the four exact checks on a canonical decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionChecks {
    pub sum_ok: bool,
    pub d_is_derivation: bool,
    pub tau_central_valued: bool,
    pub tau_kills_commutators: bool,
}

impl DecompositionChecks {
    pub fn all(&self) -> bool {
        self.sum_ok && self.d_is_derivation && self.tau_central_valued && self.tau_kills_commutators
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<R: Ring> {
    pub d: LinMap<R>,
    pub tau: LinMap<R>,
    pub n: usize,
    pub checks: DecompositionChecks,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("Lie n-derivations need n >= 2".into()));
    }
    Ok(())
}

fn tuple_count_of(basis_len: usize, n: usize) -> usize {
    basis_len.pow(n as u32)
}

fn is_central_valued<R: Ring>(map: &LinMap<R>) -> bool {
    (0..map.dim()).all(|c| map.image_of_basis(c).is_central())
}

/// Whether `map` vanishes on every value of `p_n` at basis tuples.
fn kills_commutators<R: Ring>(map: &LinMap<R>, table: &BasisCommutators) -> bool {
    let ring = map.ring();
    let b = map.dim();
    table.distinct_values().into_iter().all(|v| {
        (0..b).all(|s| {
            let acc = v.iter().fold(ring.zero(), |acc, &(c, coef)| {
                ring.mul_add(&ring.from_i64(coef), map.entry(s, c), &acc)
            });
            ring.is_zero(&acc)
        })
    })
}

/// `τ(α) = L(α)_D`, `d = L - τ`, and the four checks on them.
pub fn canonical_decompose<R: Ring>(map: &LinMap<R>, n: usize, guard: u64) -> Result<Decomposition<R>> {
    check_n(n)?;
    canonical_decompose_with(map, &BasisCommutators::new(map.poset(), n, guard)?)
}

/// As [`canonical_decompose`], reusing a `p_n` table built for the same poset.
pub fn canonical_decompose_with<R: Ring>(map: &LinMap<R>, table: &BasisCommutators) -> Result<Decomposition<R>> {
    let n = table.n();
    check_n(n)?;
    if tuple_count_of(map.poset().basis_len(), n) != table.len() {
        return Err(Error::InvalidArgument("p_n table built for a different poset".into()));
    }
    let tau = map.diagonal_part();
    let d = map.try_sub(&tau)?;
    let checks = DecompositionChecks {
        sum_ok: d.try_add(&tau)? == *map,
        d_is_derivation: lie::is_derivation(&d).verdict,
        tau_central_valued: is_central_valued(&tau),
        tau_kills_commutators: kills_commutators(&tau, table),
    };
    Ok(Decomposition { d, tau, n, checks })
}

impl<R: Ring> fmt::Display for Decomposition<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "decomposition L = d + tau with tau(a) = L(a)_D (n = {})", self.n)?;
        writeln!(f, "  d + tau = L:                {}", yn(self.checks.sum_ok))?;
        writeln!(f, "  d is a derivation:          {}", yn(self.checks.d_is_derivation))?;
        writeln!(f, "  tau is central-valued:      {}", yn(self.checks.tau_central_valued))?;
        writeln!(f, "  tau kills p_n values:       {}", yn(self.checks.tau_kills_commutators))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    LieN,
    TorsionFree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremVerdict {
    /// Hypotheses and conclusion both hold.
    Holds,
    /// Some hypothesis fails; the implication holds vacuously.
    HypothesisFailure(Vec<Hypothesis>),
    /// Hypotheses hold but the conclusion fails.
    Violated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport<R: Ring> {
    pub n: usize,
    pub lie_check: CheckReport<R>,
    pub torsion_free: bool,
    pub decomposition: Decomposition<R>,
}

impl<R: Ring> TheoremReport<R> {
    pub fn hypotheses_hold(&self) -> bool {
        self.lie_check.verdict && self.torsion_free
    }

    pub fn conclusion_holds(&self) -> bool {
        self.decomposition.checks.all()
    }

    pub fn verdict(&self) -> TheoremVerdict {
        let mut failed = Vec::new();
        if !self.lie_check.verdict {
            failed.push(Hypothesis::LieN);
        }
        if !self.torsion_free {
            failed.push(Hypothesis::TorsionFree);
        }
        match (failed.is_empty(), self.conclusion_holds()) {
            (false, _) => TheoremVerdict::HypothesisFailure(failed),
            (true, true) => TheoremVerdict::Holds,
            (true, false) => TheoremVerdict::Violated,
        }
    }
}

impl fmt::Display for TheoremVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremVerdict::Holds => write!(f, "holds"),
            TheoremVerdict::Violated => write!(f, "VIOLATED"),
            TheoremVerdict::HypothesisFailure(h) => {
                let names: Vec<&str> = h
                    .iter()
                    .map(|h| match h {
                        Hypothesis::LieN => "not a Lie n-derivation",
                        Hypothesis::TorsionFree => "torsion",
                    })
                    .collect();
                write!(f, "hypothesis failure: {}", names.join(", "))
            }
        }
    }
}

impl<R: Ring> fmt::Display for TheoremReport<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let n = self.n;
        writeln!(f, "hypothesis: L is a Lie {n}-derivation: {}", yn(self.lie_check.verdict))?;
        writeln!(
            f,
            "hypothesis: {} is {}-torsion free: {}",
            self.decomposition.d.ring().spec(),
            n - 1,
            yn(self.torsion_free)
        )?;
        write!(f, "{}", self.decomposition)?;
        writeln!(f, "conclusion: {}", yn(self.conclusion_holds()))?;
        writeln!(f, "implication: {}", self.verdict())
    }
}

/// Evaluates the hypotheses (Lie n-derivation, `(n-1)`-torsion freeness) and
/// the conclusion (all canonical checks) separately.
pub fn verify_theorem<R: Ring>(map: &LinMap<R>, n: usize, guard: u64) -> Result<TheoremReport<R>> {
    check_n(n)?;
    let lie_check = lie::is_lie_n_derivation(map, n, guard)?;
    let decomposition = canonical_decompose(map, n, guard)?;
    Ok(TheoremReport {
        n,
        lie_check,
        torsion_free: map.ring().is_k_torsion_free(n as u64 - 1),
        decomposition,
    })
}

/// The module of all Lie n-derivations of `FI(P, R)`.
#[derive(Debug, Clone)]
pub struct LieDerivationSpace<R: Ring> {
    poset: Arc<Poset>,
    ring: R,
    n: usize,
    system: LinSystem<R>,
    module: SolutionModule<R>,
}

impl<R: Ring> LieDerivationSpace<R> {
    pub fn new(poset: &Arc<Poset>, ring: &R, n: usize, guard: u64) -> Result<Self> {
        let system = lie::lie_n_constraint_system(poset, ring, n, guard)?;
        let module = linsolve::solve(&system);
        Ok(LieDerivationSpace {
            poset: poset.clone(),
            ring: ring.clone(),
            n,
            system,
            module,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system(&self) -> &LinSystem<R> {
        &self.system
    }

    pub fn module(&self) -> &SolutionModule<R> {
        &self.module
    }

    pub fn generators(&self) -> Vec<LinMap<R>> {
        self.module
            .generators
            .iter()
            .map(|g| LinMap::from_vec(&self.poset, &self.ring, g.clone()).expect("B² entries"))
            .collect()
    }

    pub fn contains(&self, map: &LinMap<R>) -> bool {
        map.poset().as_ref() == self.poset.as_ref()
            && map.ring() == &self.ring
            && self.system.is_homogeneous_solution(map.as_slice())
    }

    pub fn sample(&self, seed: u64) -> LinMap<R> {
        let v = self.module.sample(&self.ring, seed).expect("homogeneous systems are solvable");
        LinMap::from_vec(&self.poset, &self.ring, v).expect("B² entries")
    }
}

pub fn lie_n_derivation_space<R: Ring>(
    poset: &Arc<Poset>,
    ring: &R,
    n: usize,
    guard: u64,
) -> Result<SolutionModule<R>> {
    Ok(LieDerivationSpace::new(poset, ring, n, guard)?.module)
}

pub fn sample_lie_n_derivation<R: Ring>(
    poset: &Arc<Poset>,
    ring: &R,
    n: usize,
    seed: u64,
    guard: u64,
) -> Result<LinMap<R>> {
    Ok(LieDerivationSpace::new(poset, ring, n, guard)?.sample(seed))
}

/// A proper splitting `L = d' + τ'`, re-verified after solving.
#[derive(Debug, Clone, PartialEq)]
pub struct ProperWitness<R: Ring> {
    pub d: LinMap<R>,
    pub tau: LinMap<R>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProperDecision<R: Ring> {
    pub proper: bool,
    pub witness: Option<ProperWitness<R>>,
    pub unknowns: usize,
    pub equations: usize,
}

impl<R: Ring> fmt::Display for ProperDecision<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "proper: {} ({} unknowns, {} equations over basis tuples)",
            if self.proper { "yes" } else { "no" },
            self.unknowns,
            self.equations
        )?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness re-verified: d' is a derivation, tau' is central-valued and kills p_n values")?;
            let nonzero = (0..w.tau.dim()).filter(|&c| !w.tau.image_of_basis(c).is_zero()).count();
            writeln!(f, "tau' is nonzero on {nonzero} basis elements")?;
        }
        Ok(())
    }
}

/// Decides whether `L = d' + τ'` with `d'` a derivation and `τ'` central-valued
/// and vanishing on `p_n` of all basis tuples.
///
/// `τ'(e_c)` is central, so it is fixed by one coefficient per connected
/// component of `P`. Unknowns: the `B²` entries of `d'`, then `κ[c][k]`.
pub fn is_proper<R: Ring>(map: &LinMap<R>, n: usize, guard: u64) -> Result<ProperDecision<R>> {
    check_n(n)?;
    let poset = map.poset();
    let ring = map.ring();
    let b = poset.basis_len();
    let k = poset.component_count();
    let table = BasisCommutators::new(poset, n, guard)?;
    let kappa = |c: usize, comp: usize| b * b + c * k + comp;

    let mut sys = LinSystem::with_unknowns(ring, b * b + b * k);
    let int_row = |row: IntSparse| row.into_iter().map(|(j, c)| (j, ring.from_i64(c)));
    for row in lie::derivation_integer_rows(poset) {
        sys.push_row(int_row(row), ring.zero());
    }
    for v in table.distinct_values() {
        for comp in 0..k {
            let row: IntSparse = v.iter().map(|&(c, coef)| (kappa(c, comp), coef)).collect();
            sys.push_row(int_row(row), ring.zero());
        }
    }
    for c in 0..b {
        for s in 0..b {
            let (x, y) = poset.pair(s);
            let mut row = vec![(c * b + s, ring.one())];
            if x == y {
                row.push((kappa(c, poset.component(x)), ring.one()));
            }
            sys.push_row(row, map.entry(s, c).clone());
        }
    }

    let module = linsolve::solve(&sys);
    let witness = match &module.particular {
        None => None,
        Some(sol) => {
            let d = LinMap::from_vec(poset, ring, sol[..b * b].to_vec())?;
            let tau = LinMap::from_fn(poset, ring, |s, c| {
                let (x, y) = poset.pair(s);
                if x == y {
                    sol[kappa(c, poset.component(x))].clone()
                } else {
                    ring.zero()
                }
            });
            let ok = d.try_add(&tau)? == *map
                && lie::is_derivation(&d).verdict
                && is_central_valued(&tau)
                && kills_commutators(&tau, &table);
            if !ok {
                return Err(Error::Infeasible("properness witness failed re-verification".into()));
            }
            Some(ProperWitness { d, tau })
        }
    };
    Ok(ProperDecision {
        proper: witness.is_some(),
        witness,
        unknowns: sys.num_unknowns(),
        equations: sys.num_rows(),
    })
}

/// `τ(α)` for a concrete element, as used by the canonical decomposition.
pub fn tau_of<R: Ring>(map: &LinMap<R>, alpha: &FiElement<R>) -> Result<FiElement<R>> {
    Ok(map.apply(alpha)?.diagonal())
}
