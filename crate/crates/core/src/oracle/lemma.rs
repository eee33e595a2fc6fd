//! Seeded randomized checks of the structural lemmas on Lie n-derivations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;
use rayon::prelude::*;

use super::{random_element_with, random_poset_with, rng_from_seed};
use crate::algebra::FiElement;
use crate::decomposition::{self, Hypothesis, LieDerivationSpace, TheoremVerdict};
use crate::error::{Error, Result};
use crate::format;
use crate::lie::{self, p_n};
use crate::linmap::LinMap;
use crate::linsolve::LinSystem;
use crate::poset::Poset;
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// `p_n` evaluated on sandwiches by idempotents.
    Sandwich,
    /// Restriction is idempotent and local for products.
    Restr,
    /// `L(α)(x,y) = L(α|_x^y)(x,y)`.
    Locality,
    /// Corner values of `L(e_xy)` for `u < x < y < v`.
    Corner,
    /// `L(α)(x,x) = L(α)(y,y)` for `x < y`.
    DiagConst,
    /// `L(α)_D` is central.
    CenterDiag,
    /// `L(e_x)(x,y) + L(e_y)(x,y) = 0`.
    SumZero,
    /// `L(e_xy)(x,y) + L(e_yz)(y,z) = L(e_xz)(x,z)`.
    Cocycle,
    /// `τ` is central-valued and kills values of `p_n`.
    TauCentral,
    /// `d = L - τ` is a derivation.
    DDeriv,
    /// `L = d + τ` with both parts as required.
    Theorem,
    /// A Lie n-derivation is a Lie `(2n-1)`-derivation.
    Promotion,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::Sandwich,
        LemmaId::Restr,
        LemmaId::Locality,
        LemmaId::Corner,
        LemmaId::DiagConst,
        LemmaId::CenterDiag,
        LemmaId::SumZero,
        LemmaId::Cocycle,
        LemmaId::TauCentral,
        LemmaId::DDeriv,
        LemmaId::Theorem,
        LemmaId::Promotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Sandwich => "SANDWICH",
            LemmaId::Restr => "RESTR",
            LemmaId::Locality => "LOCALITY",
            LemmaId::Corner => "CORNER",
            LemmaId::DiagConst => "DIAGCONST",
            LemmaId::CenterDiag => "CENTERDIAG",
            LemmaId::SumZero => "SUMZERO",
            LemmaId::Cocycle => "COCYCLE",
            LemmaId::TauCentral => "TAUCENTRAL",
            LemmaId::DDeriv => "DDERIV",
            LemmaId::Theorem => "THEOREM",
            LemmaId::Promotion => "PROMOTION",
        }
    }

    fn needs_map(self) -> bool {
        !matches!(self, LemmaId::Sandwich | LemmaId::Restr)
    }

    fn needs_torsion_free(self) -> bool {
        matches!(
            self,
            LemmaId::DiagConst
                | LemmaId::CenterDiag
                | LemmaId::SumZero
                | LemmaId::Cocycle
                | LemmaId::TauCentral
                | LemmaId::DDeriv
                | LemmaId::Theorem
        )
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub enum PosetSource {
    Fixed(Arc<Poset>),
    Random { size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSource {
    /// Uniform (or bounded) samples from the exact Lie n-derivation space.
    Sampled,
    /// The identity map, whose hypotheses are checked rather than assumed.
    Identity,
}

#[derive(Debug, Clone)]
pub struct LemmaConfig {
    pub lemma: LemmaId,
    pub trials: u64,
    pub seed: u64,
    pub n: usize,
    pub posets: PosetSource,
    pub maps: MapSource,
    pub tuple_guard: u64,
}

impl LemmaConfig {
    pub fn new(lemma: LemmaId, posets: PosetSource) -> Self {
        LemmaConfig {
            lemma,
            trials: 100,
            seed: 0,
            n: 3,
            posets,
            maps: MapSource::Sampled,
            tuple_guard: lie::DEFAULT_TUPLE_GUARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaStatus {
    Passed,
    Failed,
    /// Every trial violated a hypothesis; nothing was asserted.
    HypothesisViolation,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub vacuous: u64,
    pub violations: u64,
    /// Trials with a violated hypothesis whose conclusion also failed.
    pub violations_with_failure: u64,
    pub first_failure: Option<TrialRecord>,
    pub first_violation: Option<TrialRecord>,
}

impl LemmaReport {
    pub fn status(&self) -> LemmaStatus {
        if self.failed > 0 {
            LemmaStatus::Failed
        } else if self.passed > 0 {
            LemmaStatus::Passed
        } else if self.violations > 0 {
            LemmaStatus::HypothesisViolation
        } else {
            LemmaStatus::Vacuous
        }
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status() {
            LemmaStatus::Passed => "passed",
            LemmaStatus::Failed => "FAILED",
            LemmaStatus::HypothesisViolation => "hypothesis violation",
            LemmaStatus::Vacuous => "vacuous",
        };
        writeln!(f, "{}: {status}", self.lemma)?;
        writeln!(
            f,
            "trials: {}  passed: {}  failed: {}  vacuous: {}  hypothesis violated: {} (conclusion failed in {})",
            self.trials, self.passed, self.failed, self.vacuous, self.violations, self.violations_with_failure
        )?;
        if let Some(t) = &self.first_failure {
            writeln!(f, "first counterexample: trial {} (seed {})", t.trial, t.seed)?;
            writeln!(f, "{}", t.detail.trim_end())?;
        }
        if let Some(t) = &self.first_violation {
            writeln!(f, "first hypothesis violation: trial {} (seed {})", t.trial, t.seed)?;
            writeln!(f, "{}", t.detail.trim_end())?;
        }
        Ok(())
    }
}

enum Conclusion {
    Vacuous,
    Holds,
    Fails(String),
}

enum Outcome {
    Pass,
    Vacuous,
    Fail(String),
    Violation { conclusion_failed: bool, detail: String },
}

/// Random posets drawn per trial before a trial is declared vacuous.
const RANDOM_POSET_ATTEMPTS: usize = 64;

fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer over (seed, trial)
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-poset state that is expensive to rebuild.
struct Context<R: Ring> {
    poset: Arc<Poset>,
    space: Option<LieDerivationSpace<R>>,
    promoted: Option<LinSystem<R>>,
}

impl<R: Ring> Context<R> {
    fn new(poset: Arc<Poset>, ring: &R, cfg: &LemmaConfig) -> Result<Self> {
        let space = if cfg.lemma.needs_map() && cfg.maps == MapSource::Sampled {
            Some(LieDerivationSpace::new(&poset, ring, cfg.n, cfg.tuple_guard)?)
        } else {
            None
        };
        let promoted = if cfg.lemma == LemmaId::Promotion {
            Some(lie::lie_n_constraint_system(&poset, ring, 2 * cfg.n - 1, cfg.tuple_guard)?)
        } else {
            None
        };
        Ok(Context { poset, space, promoted })
    }
}

/// Runs `cfg.trials` independent trials; trial `i` draws everything from
/// its own seed, so results do not depend on scheduling.
pub fn check_lemma<R: Ring>(cfg: &LemmaConfig, ring: &R) -> Result<LemmaReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if cfg.n < 2 {
        return Err(Error::InvalidArgument("Lie n-derivations need n >= 2".into()));
    }
    let fixed = match &cfg.posets {
        PosetSource::Fixed(p) => Some(Context::new(p.clone(), ring, cfg)?),
        PosetSource::Random { size } => {
            super::random_poset(*size, 0)?;
            None
        }
    };
    let outcomes: Vec<(u64, Outcome)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(cfg.seed, trial);
            let mut rng = rng_from_seed(seed);
            let outcome = match (&fixed, &cfg.posets) {
                (Some(ctx), _) => run_trial(cfg, ring, ctx, &mut rng)?,
                (None, PosetSource::Random { size }) => {
                    // redraw posets on which the lemma has nothing to check
                    let mut attempt = 0;
                    loop {
                        let poset = Arc::new(random_poset_with(*size, &mut rng)?);
                        let ctx = Context::new(poset, ring, cfg)?;
                        let outcome = run_trial(cfg, ring, &ctx, &mut rng)?;
                        attempt += 1;
                        if !matches!(outcome, Outcome::Vacuous) || attempt == RANDOM_POSET_ATTEMPTS {
                            break outcome;
                        }
                    }
                }
                (None, PosetSource::Fixed(_)) => unreachable!(),
            };
            Ok((seed, outcome))
        })
        .collect::<Result<_>>()?;

    let mut report = LemmaReport {
        lemma: cfg.lemma,
        trials: cfg.trials,
        passed: 0,
        failed: 0,
        vacuous: 0,
        violations: 0,
        violations_with_failure: 0,
        first_failure: None,
        first_violation: None,
    };
    for (trial, (seed, outcome)) in outcomes.into_iter().enumerate() {
        let record = |detail| TrialRecord {
            trial: trial as u64,
            seed,
            detail,
        };
        match outcome {
            Outcome::Pass => report.passed += 1,
            Outcome::Vacuous => report.vacuous += 1,
            Outcome::Fail(detail) => {
                report.failed += 1;
                report.first_failure.get_or_insert_with(|| record(detail));
            }
            Outcome::Violation { conclusion_failed, detail } => {
                report.violations += 1;
                report.violations_with_failure += conclusion_failed as u64;
                // prefer the first trial whose conclusion actually failed
                let first_with_failure = conclusion_failed && report.violations_with_failure == 1;
                if report.first_violation.is_none() || first_with_failure {
                    report.first_violation = Some(record(detail));
                }
            }
        }
    }
    Ok(report)
}

fn run_trial<R: Ring>(cfg: &LemmaConfig, ring: &R, ctx: &Context<R>, rng: &mut dyn RngCore) -> Result<Outcome> {
    let poset = &ctx.poset;
    let mut failed_hyps = Vec::new();
    let map = if cfg.lemma.needs_map() {
        let map = match cfg.maps {
            MapSource::Sampled => ctx.space.as_ref().expect("built for sampled maps").sample(rng.next_u64()),
            MapSource::Identity => {
                let id = LinMap::identity(poset, ring);
                if !lie::is_lie_n_derivation(&id, cfg.n, cfg.tuple_guard)?.verdict {
                    failed_hyps.push(Hypothesis::LieN);
                }
                id
            }
        };
        if cfg.lemma.needs_torsion_free() && !ring.is_k_torsion_free(cfg.n as u64 - 1) {
            failed_hyps.push(Hypothesis::TorsionFree);
        }
        Some(map)
    } else {
        None
    };
    let conclusion = evaluate(cfg, ring, ctx, map.as_ref(), rng)?;
    let instance = || {
        let mut s = format!("poset:\n{}", poset.to_text());
        if let Some(m) = &map {
            s.push_str(&format!("map:\n{}", format::write_map(m)));
        }
        s
    };
    Ok(match (conclusion, failed_hyps.is_empty()) {
        (Conclusion::Vacuous, _) => Outcome::Vacuous,
        (Conclusion::Holds, true) => Outcome::Pass,
        (Conclusion::Fails(why), true) => Outcome::Fail(format!("{why}\n{}", instance())),
        (c, false) => {
            let verdict = TheoremVerdict::HypothesisFailure(failed_hyps);
            let (conclusion_failed, what) = match c {
                Conclusion::Fails(why) => (true, format!("conclusion fails: {why}")),
                _ => (false, "conclusion holds anyway".to_string()),
            };
            Outcome::Violation {
                conclusion_failed,
                detail: format!("{verdict}; {what}\n{}", instance()),
            }
        }
    })
}

fn show<R: Ring>(alpha: &FiElement<R>) -> String {
    alpha.to_string()
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok && failures.is_empty() {
        failures.push(msg());
    }
}

fn chains<const K: usize>(poset: &Poset) -> Vec<[usize; K]> {
    let n = poset.len();
    let mut out = Vec::new();
    let mut cur = [0usize; K];
    fn go<const K: usize>(poset: &Poset, n: usize, depth: usize, cur: &mut [usize; K], out: &mut Vec<[usize; K]>) {
        if depth == K {
            out.push(*cur);
            return;
        }
        for z in 0..n {
            if depth == 0 || poset.lt(cur[depth - 1], z) {
                cur[depth] = z;
                go(poset, n, depth + 1, cur, out);
            }
        }
    }
    go(poset, n, 0, &mut cur, &mut out);
    out
}

fn evaluate<R: Ring>(
    cfg: &LemmaConfig,
    ring: &R,
    ctx: &Context<R>,
    map: Option<&LinMap<R>>,
    rng: &mut dyn RngCore,
) -> Result<Conclusion> {
    let poset = &ctx.poset;
    let n = cfg.n;
    let alpha = random_element_with(poset, ring, rng);
    let beta = random_element_with(poset, ring, rng);
    let e = |x: usize, y: usize| FiElement::basis(poset, ring, x, y).expect("comparable");
    let name = |x: usize| poset.name(x).to_string();
    let pairs2 = chains::<2>(poset);
    let mut fails = Vec::new();
    let f = &mut fails;

    let needs_pairs = matches!(
        cfg.lemma,
        LemmaId::Sandwich | LemmaId::Restr | LemmaId::Locality | LemmaId::DiagConst | LemmaId::SumZero
    );
    if needs_pairs && pairs2.is_empty() {
        return Ok(Conclusion::Vacuous);
    }

    match cfg.lemma {
        LemmaId::Sandwich => {
            for &[x, y] in &pairs2 {
                let a_xy = alpha.get(x, y);
                let target = e(x, y).scale(&a_xy);
                check(f, &e(x, x) * &alpha * e(y, y) == target, || {
                    format!("e_{} a e_{} != a({0},{1}) e({0},{1}) for a = {}", name(x), name(y), show(&alpha))
                });
                check(f, p_n(&[e(x, x), alpha.clone(), e(y, y)])? == target, || {
                    format!("p_3(e_{}, a, e_{}) != a({0},{1}) e({0},{1}) for a = {}", name(x), name(y), show(&alpha))
                });
                let mut args = vec![alpha.clone()];
                args.extend(std::iter::repeat_n(e(y, y), n - 1));
                check(f, p_n(&args)?.get(x, y) == a_xy, || {
                    format!("p_{n}(a, e_{}, ...)({},{0}) != a({1},{0}) for a = {}", name(y), name(x), show(&alpha))
                });
                if n >= 3 {
                    let mut args = vec![alpha.clone(), e(x, y)];
                    args.extend(std::iter::repeat_n(e(y, y), n - 2));
                    let shifted = &alpha - &FiElement::scalar(poset, ring, alpha.get(y, y));
                    check(f, p_n(&args)? == &shifted * &e(x, y), || {
                        format!("p_{n}(a, e({},{}), e_{1}, ...) != (a - a({1},{1})) e({0},{1}) for a = {}", name(x), name(y), show(&alpha))
                    });
                }
            }
        }
        LemmaId::Restr => {
            let prod = &alpha * &beta;
            for &[x, y] in &pairs2 {
                let ra = alpha.restrict(x, y)?;
                check(f, ra.restrict(x, y)? == ra, || format!("restriction to [{},{}] not idempotent on {}", name(x), name(y), show(&alpha)));
                let via_a = (&ra * &beta).get(x, y);
                let via_b = (&alpha * &beta.restrict(x, y)?).get(x, y);
                check(f, via_a == prod.get(x, y) && via_b == prod.get(x, y), || {
                    format!("restriction to [{},{}] changes (ab)({0},{1}) for a = {}, b = {}", name(x), name(y), show(&alpha), show(&beta))
                });
            }
        }
        LemmaId::Locality => {
            let l = map.expect("map lemma");
            let la = l.apply(&alpha)?;
            for &[x, y] in &pairs2 {
                let lr = l.apply(&alpha.restrict(x, y)?)?;
                check(f, la.get(x, y) == lr.get(x, y), || {
                    format!("L(a)({},{}) != L(a|_{0}^{1})({0},{1}) for a = {}", name(x), name(y), show(&alpha))
                });
            }
        }
        LemmaId::Corner => {
            let l = map.expect("map lemma");
            let quads = chains::<4>(poset);
            if quads.is_empty() {
                return Ok(Conclusion::Vacuous);
            }
            for [u, x, y, v] in quads {
                let lxy = l.apply(&e(x, y))?;
                check(f, lxy.get(x, v) == l.apply(&e(y, y))?.get(y, v), || {
                    format!("L(e({},{}))({0},{}) != L(e_{1})({1},{2})", name(x), name(y), name(v))
                });
                check(f, lxy.get(u, y) == l.apply(&e(x, x))?.get(u, x), || {
                    format!("L(e({},{}))({},{1}) != L(e_{0})({2},{0})", name(x), name(y), name(u))
                });
            }
        }
        LemmaId::DiagConst => {
            let l = map.expect("map lemma");
            let mut inputs: Vec<(String, FiElement<R>)> = poset
                .pairs()
                .iter()
                .map(|&(x, y)| (format!("e({},{})", name(x), name(y)), e(x, y)))
                .collect();
            inputs.push(("a".into(), alpha.clone()));
            for (label, input) in &inputs {
                let image = l.apply(input)?;
                for &[x, y] in &pairs2 {
                    check(f, image.get(x, x) == image.get(y, y), || {
                        let mut msg = format!(
                            "L({label})({},{0}) = {} but L({label})({},{2}) = {}",
                            name(x),
                            ring.format_elem(&image.get(x, x)),
                            name(y),
                            ring.format_elem(&image.get(y, y))
                        );
                        if label == "a" {
                            msg.push_str(&format!(" for a = {}", show(&alpha)));
                        }
                        msg
                    });
                }
            }
        }
        LemmaId::CenterDiag => {
            let l = map.expect("map lemma");
            let mut inputs = vec![alpha.clone()];
            inputs.extend((0..poset.basis_len()).map(|q| FiElement::basis_pair(poset, ring, q)));
            for input in &inputs {
                let d = l.apply(input)?.diagonal();
                check(f, d.is_central(), || format!("L({})_D = {} is not central", show(input), show(&d)));
            }
        }
        LemmaId::SumZero => {
            let l = map.expect("map lemma");
            for &[x, y] in &pairs2 {
                let s = ring.add(&l.apply(&e(x, x))?.get(x, y), &l.apply(&e(y, y))?.get(x, y));
                check(f, ring.is_zero(&s), || format!("L(e_{})({0},{}) + L(e_{1})({0},{1}) = {}", name(x), name(y), ring.format_elem(&s)));
            }
        }
        LemmaId::Cocycle => {
            let l = map.expect("map lemma");
            let triples = chains::<3>(poset);
            if triples.is_empty() {
                return Ok(Conclusion::Vacuous);
            }
            for [x, y, z] in triples {
                let lhs = ring.add(&l.apply(&e(x, y))?.get(x, y), &l.apply(&e(y, z))?.get(y, z));
                let rhs = l.apply(&e(x, z))?.get(x, z);
                check(f, lhs == rhs, || {
                    format!("L(e({},{}))({0},{1}) + L(e({1},{}))({1},{2}) != L(e({0},{2}))({0},{2})", name(x), name(y), name(z))
                });
            }
        }
        LemmaId::TauCentral => {
            let l = map.expect("map lemma");
            let dec = decomposition::canonical_decompose(l, n, cfg.tuple_guard)?;
            check(f, dec.checks.tau_central_valued, || "tau is not central-valued".into());
            check(f, dec.checks.tau_kills_commutators, || format!("tau does not vanish on p_{n} of basis tuples"));
            let args: Vec<_> = (0..n).map(|_| random_element_with(poset, ring, rng)).collect();
            let value = decomposition::tau_of(l, &p_n(&args)?)?;
            check(f, value.is_zero(), || format!("tau(p_{n}(random tuple)) = {}", show(&value)));
        }
        LemmaId::DDeriv => {
            let l = map.expect("map lemma");
            let dec = decomposition::canonical_decompose(l, n, cfg.tuple_guard)?;
            let rep = lie::is_derivation(&dec.d);
            check(f, rep.verdict, || format!("d is not a derivation:\n{rep}"));
            let lhs = dec.d.apply(&(&alpha * &beta))?;
            let rhs = &(&dec.d.apply(&alpha)? * &beta) + &(&alpha * &dec.d.apply(&beta)?);
            check(f, lhs == rhs, || format!("d(ab) != d(a)b + a d(b) for a = {}, b = {}", show(&alpha), show(&beta)));
        }
        LemmaId::Theorem => {
            let l = map.expect("map lemma");
            let dec = decomposition::canonical_decompose(l, n, cfg.tuple_guard)?;
            check(f, dec.checks.all(), || format!("{dec}"));
        }
        LemmaId::Promotion => {
            let l = map.expect("map lemma");
            let m = 2 * n - 1;
            let sys = ctx.promoted.as_ref().expect("built for promotion");
            check(f, sys.is_homogeneous_solution(l.as_slice()), || format!("L is not a Lie {m}-derivation"));
            let args: Vec<_> = (0..m).map(|_| random_element_with(poset, ring, rng)).collect();
            let (lhs, rhs) = lie::lie_identity_sides(l, &args)?;
            check(f, lhs == rhs, || format!("Lie {m}-identity fails on a random tuple"));
        }
    }
    Ok(match fails.pop() {
        None => Conclusion::Holds,
        Some(why) => Conclusion::Fails(why),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ZMod;

    fn fixed(p: Poset) -> PosetSource {
        PosetSource::Fixed(Arc::new(p))
    }

    #[test]
    fn lemma_names_parse() {
        for id in LemmaId::ALL {
            assert_eq!(id.name().parse::<LemmaId>().unwrap(), id);
        }
        assert_eq!("diagconst".parse::<LemmaId>().unwrap(), LemmaId::DiagConst);
        assert!("nope".parse::<LemmaId>().is_err());
    }

    #[test]
    fn corner_is_vacuous_on_three_chain() {
        let r = ZMod::new(5).unwrap();
        let mut cfg = LemmaConfig::new(LemmaId::Corner, fixed(Poset::chain(3)));
        cfg.trials = 5;
        let rep = check_lemma(&cfg, &r).unwrap();
        assert_eq!(rep.status(), LemmaStatus::Vacuous);
        assert_eq!(rep.vacuous, 5);
    }

    #[test]
    fn diagconst_identity_mod_two_is_a_hypothesis_violation() {
        let r = ZMod::new(2).unwrap();
        let mut cfg = LemmaConfig::new(LemmaId::DiagConst, fixed(Poset::chain(2)));
        cfg.trials = 3;
        cfg.maps = MapSource::Identity;
        let rep = check_lemma(&cfg, &r).unwrap();
        assert_eq!(rep.status(), LemmaStatus::HypothesisViolation);
        assert_eq!(rep.violations_with_failure, 3);
        let detail = &rep.first_violation.unwrap().detail;
        assert!(detail.starts_with("hypothesis failure: torsion; conclusion fails: L(e(1,1))(1,1) = 1"), "{detail}");
    }

    #[test]
    fn reports_are_deterministic() {
        let r = ZMod::new(5).unwrap();
        let mut cfg = LemmaConfig::new(LemmaId::Locality, PosetSource::Random { size: 4 });
        cfg.trials = 20;
        cfg.seed = 42;
        let a = check_lemma(&cfg, &r).unwrap();
        assert_eq!(a, check_lemma(&cfg, &r).unwrap());
        assert_eq!(a.passed, 20);
    }

    #[test]
    fn corner_is_vacuous_on_small_random_posets() {
        let r = ZMod::new(5).unwrap();
        let mut cfg = LemmaConfig::new(LemmaId::Corner, PosetSource::Random { size: 3 });
        cfg.trials = 2;
        assert_eq!(check_lemma(&cfg, &r).unwrap().status(), LemmaStatus::Vacuous);
    }

    #[test]
    fn every_lemma_passes_on_the_four_chain() {
        let r = ZMod::new(5).unwrap();
        for id in LemmaId::ALL {
            let mut cfg = LemmaConfig::new(id, fixed(Poset::chain(4)));
            cfg.trials = 10;
            let rep = check_lemma(&cfg, &r).unwrap();
            assert_eq!(rep.status(), LemmaStatus::Passed, "{rep}");
            assert_eq!(rep.passed, 10);
        }
    }
}
