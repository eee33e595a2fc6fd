//! Brute-force ground truth and seeded random instances.

mod lemma;

pub use lemma::{check_lemma, LemmaConfig, LemmaId, LemmaReport, LemmaStatus, MapSource, PosetSource, TrialRecord};

use std::sync::Arc;

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::FiElement;
use crate::error::{Error, Result};
use crate::lie::check_guard;
use crate::linmap::LinMap;
use crate::poset::{Poset, DEFAULT_MAX_ELEMENTS};
use crate::ring::{Ring, ZMod};

/// Default cap on the number of maps an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 1 << 20;

/// Numerator and denominator bound for random scalars over infinite rings.
pub const RANDOM_BOUND: u32 = 5;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All maps over `Z/m` accepted by `predicate`, in lexicographic order of
/// their column-major entry vectors.
pub fn enumerate_linmaps<F>(poset: &Arc<Poset>, ring: &ZMod, predicate: F, guard: u64) -> Result<Vec<LinMap<ZMod>>>
where
    F: Fn(&LinMap<ZMod>) -> bool + Sync,
{
    let m = ring.modulus();
    let dim = poset.basis_len().pow(2);
    let total = (m as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    check_guard("map enumeration", total, guard)?;
    let maps = (0..total as u64)
        .into_par_iter()
        .filter_map(|mut index| {
            let mut data = vec![0u64; dim];
            for slot in data.iter_mut().rev() {
                *slot = index % m;
                index /= m;
            }
            let map = LinMap::from_vec(poset, ring, data).expect("B² entries");
            predicate(&map).then_some(map)
        })
        .collect();
    Ok(maps)
}

/// Random DAG on `1..=size` (each `i < j` independently with probability
/// 1/2), closed to a partial order.
pub fn random_poset(size: usize, seed: u64) -> Result<Poset> {
    if size == 0 || size > DEFAULT_MAX_ELEMENTS {
        return Err(Error::InvalidArgument(format!(
            "random poset size must be in 1..={DEFAULT_MAX_ELEMENTS}, got {size}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    random_poset_with(size, &mut rng)
}

pub(crate) fn random_poset_with(size: usize, rng: &mut dyn RngCore) -> Result<Poset> {
    let names = (1..=size).map(|i| i.to_string()).collect();
    let mut relations = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if rng.gen_bool(0.5) {
                relations.push((i, j));
            }
        }
    }
    Poset::from_relations(names, &relations)
}

pub fn random_element<R: Ring>(poset: &Arc<Poset>, ring: &R, seed: u64) -> FiElement<R> {
    random_element_with(poset, ring, &mut rng_from_seed(seed))
}

pub(crate) fn random_element_with<R: Ring>(poset: &Arc<Poset>, ring: &R, rng: &mut dyn RngCore) -> FiElement<R> {
    FiElement::from_fn(poset, ring, |_, _| ring.random_elem(rng, RANDOM_BOUND))
}

pub fn random_map<R: Ring>(poset: &Arc<Poset>, ring: &R, seed: u64) -> LinMap<R> {
    let mut rng = rng_from_seed(seed);
    LinMap::from_fn(poset, ring, |_, _| ring.random_elem(&mut rng, RANDOM_BOUND))
}
