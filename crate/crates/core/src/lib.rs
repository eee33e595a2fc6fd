//! Exact computations with Lie-type derivations of incidence algebras of
//! finite posets.
//!
//! The algebra, map and solver types are generic over the coefficient
//! [`Ring`]; the aliases below fix the three supported rings.

pub mod algebra;
pub mod decomposition;
pub mod error;
pub mod format;
pub mod lie;
pub mod linmap;
pub mod linsolve;
pub mod oracle;
pub mod poset;
pub mod ring;

pub use algebra::FiElement;
pub use decomposition::{
    canonical_decompose, is_proper, verify_theorem, Decomposition, LieDerivationSpace, ProperDecision, TheoremReport,
};
pub use error::{Error, Result};
pub use lie::{is_derivation, is_lie_n_derivation, p_n, CheckReport, DEFAULT_TUPLE_GUARD};
pub use linmap::LinMap;
pub use linsolve::{solve, LinSystem, SolutionModule};
pub use poset::Poset;
pub use ring::{ExactNumber, NumRing, Ring, RingSpec, ZMod};

/// The integers, arbitrary precision.
pub type Integers = NumRing<num_bigint::BigInt>;
/// The rationals, kept in lowest terms.
pub type Rationals = NumRing<num_rational::BigRational>;

pub type IntElement = FiElement<Integers>;
pub type RatElement = FiElement<Rationals>;
pub type ModElement = FiElement<ZMod>;

pub type IntMap = LinMap<Integers>;
pub type RatMap = LinMap<Rationals>;
pub type ModMap = LinMap<ZMod>;
