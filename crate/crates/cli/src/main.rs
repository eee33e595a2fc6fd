//! Command-line front end for `fi-lie`.
//!
//! Exit codes: 0 success or a positive verdict, 1 a negative verdict,
//! 2 usage error, 3 input or parse error, 4 resource guard exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fi_lie::decomposition::{self, LieDerivationSpace};
use fi_lie::oracle::{self, LemmaConfig, LemmaId, LemmaStatus, MapSource, PosetSource};
use fi_lie::{format, lie, linsolve, Error, FiElement, Integers, LinMap, Poset, Rationals, Ring, RingSpec, ZMod};

#[derive(Parser)]
#[command(name = "fi-lie", version, about = "Exact Lie n-derivations of incidence algebras of finite posets")]
struct Cli {
    /// Maximum number of basis tuples a single check may visit.
    #[arg(long, global = true, default_value_t = lie::DEFAULT_TUPLE_GUARD)]
    tuple_guard: u64,
    /// Maximum number of maps an exhaustive enumeration may visit.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_ENUMERATION_GUARD)]
    enum_guard: u64,
    /// Maximum poset size accepted from files.
    #[arg(long, global = true, default_value_t = fi_lie::poset::DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    /// Worker threads for tuple checks and lemma trials (output is unaffected).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a poset file.
    Poset {
        #[command(subcommand)]
        what: PosetCmd,
    },
    /// Product of element files, left to right.
    Mul {
        #[arg(long)]
        ring: RingSpec,
        poset: PathBuf,
        #[arg(required = true)]
        elements: Vec<PathBuf>,
    },
    /// Iterated commutator p_n of n element files.
    Pn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ring: RingSpec,
        poset: PathBuf,
        #[arg(required = true)]
        elements: Vec<PathBuf>,
    },
    /// Check the derivation or Lie n-derivation identity on all basis tuples.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Canonical decomposition L = d + tau, with hypotheses and conclusion.
    Decompose {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: MapInput,
        #[arg(long)]
        out_d: Option<PathBuf>,
        #[arg(long)]
        out_tau: Option<PathBuf>,
    },
    /// Decide whether L is proper (derivation plus central part killing p_n).
    Proper {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: MapInput,
        #[arg(long)]
        out_d: Option<PathBuf>,
        #[arg(long)]
        out_tau: Option<PathBuf>,
    },
    /// Generators of the module of all Lie n-derivations.
    Space {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ring: RingSpec,
        #[arg(long)]
        poset: PathBuf,
        /// Write the generators as a sequence of map blocks.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded randomized check of one structural lemma.
    Lemma {
        id: LemmaId,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        ring: RingSpec,
        #[arg(long, conflicts_with = "random_size", required_unless_present = "random_size")]
        poset: Option<PathBuf>,
        #[arg(long)]
        random_size: Option<usize>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Use the identity map instead of sampled Lie n-derivations.
        #[arg(long)]
        identity: bool,
    },
    /// The identity on the 2-chain over Z/(n-1): a Lie n-derivation that is not proper.
    Counterexample {
        #[arg(long)]
        n: usize,
    },
    /// Brute-force ground truth.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    Info { file: PathBuf },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Derivation {
        #[command(flatten)]
        input: MapInput,
    },
    Lie {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: MapInput,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Enumerate every map over Z/m and compare with the constraint-system solutions.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ring: RingSpec,
        #[arg(long)]
        poset: PathBuf,
        /// Enumerate derivations instead of Lie n-derivations.
        #[arg(long)]
        derivations: bool,
    },
}

#[derive(Args)]
struct MapInput {
    #[arg(long)]
    ring: RingSpec,
    #[arg(long)]
    poset: PathBuf,
    #[arg(long)]
    map: PathBuf,
}

struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn new(text: String, ok: bool) -> Self {
        Outcome { text, ok }
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run<T = Outcome> = std::result::Result<T, Failure>;

struct Limits {
    tuple_guard: u64,
    enum_guard: u64,
    max_elements: usize,
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_poset(path: &Path, limits: &Limits) -> Run<Arc<Poset>> {
    Ok(Arc::new(Poset::parse_capped(&read(path)?, limits.max_elements)?))
}

fn load_map<R: Ring>(ring: &R, input: &MapInput, limits: &Limits) -> Run<LinMap<R>> {
    let poset = load_poset(&input.poset, limits)?;
    Ok(format::parse_map(&read(&input.map)?, &poset, ring)?)
}

macro_rules! with_ring {
    ($spec:expr, $f:ident($($arg:expr),*)) => {
        match $spec {
            RingSpec::Integers => $f(&Integers::default(), $($arg),*),
            RingSpec::Rationals => $f(&Rationals::default(), $($arg),*),
            RingSpec::ZMod(m) => $f(&ZMod::new(m)?, $($arg),*),
        }
    };
}

fn poset_info(file: &Path, limits: &Limits) -> Run {
    let p = load_poset(file, limits)?;
    let mut out = format!("elements: {} ({})\n", p.len(), p.names().join(" "));
    let covers: Vec<String> = p.covers().iter().map(|&(x, y)| format!("{} < {}", p.name(x), p.name(y))).collect();
    out.push_str(&format!("covers: {}\n", if covers.is_empty() { "none".into() } else { covers.join(", ") }));
    out.push_str(&format!("connected components: {}\n", p.component_count()));
    out.push_str(&format!("basis dimension: {}\n", p.basis_len()));
    for (i, &(x, y)) in p.pairs().iter().enumerate() {
        out.push_str(&format!("  {i:>3}  e({},{})\n", p.name(x), p.name(y)));
    }
    Ok(Outcome::new(out, true))
}

fn load_elements<R: Ring>(ring: &R, poset: &Path, files: &[PathBuf], limits: &Limits) -> Run<Vec<FiElement<R>>> {
    let p = load_poset(poset, limits)?;
    files
        .iter()
        .map(|f| Ok(format::parse_element(&read(f)?, &p, ring)?))
        .collect()
}

fn mul<R: Ring>(ring: &R, poset: &Path, files: &[PathBuf], limits: &Limits) -> Run {
    let elems = load_elements(ring, poset, files, limits)?;
    let mut acc = elems[0].clone();
    for e in &elems[1..] {
        acc = acc.try_mul(e)?;
    }
    Ok(Outcome::new(format::write_element(&acc), true))
}

fn pn<R: Ring>(ring: &R, n: usize, poset: &Path, files: &[PathBuf], limits: &Limits) -> Run {
    if files.len() != n {
        return Err(Error::InvalidArgument(format!("p_{n} takes {n} elements, got {}", files.len())).into());
    }
    let elems = load_elements(ring, poset, files, limits)?;
    Ok(Outcome::new(format::write_element(&lie::p_n(&elems)?), true))
}

fn verify_derivation<R: Ring>(ring: &R, input: &MapInput, limits: &Limits) -> Run {
    let rep = lie::is_derivation(&load_map(ring, input, limits)?);
    Ok(Outcome::new(format!("derivation check\n{rep}"), rep.verdict))
}

fn verify_lie<R: Ring>(ring: &R, n: usize, input: &MapInput, limits: &Limits) -> Run {
    let rep = lie::is_lie_n_derivation(&load_map(ring, input, limits)?, n, limits.tuple_guard)?;
    Ok(Outcome::new(format!("Lie {n}-derivation check\n{rep}"), rep.verdict))
}

fn decompose<R: Ring>(
    ring: &R,
    n: usize,
    input: &MapInput,
    out_d: Option<&Path>,
    out_tau: Option<&Path>,
    limits: &Limits,
) -> Run {
    let rep = decomposition::verify_theorem(&load_map(ring, input, limits)?, n, limits.tuple_guard)?;
    if let Some(path) = out_d {
        write(path, &format::write_map(&rep.decomposition.d))?;
    }
    if let Some(path) = out_tau {
        write(path, &format::write_map(&rep.decomposition.tau))?;
    }
    let mut text = rep.to_string();
    if let Some(w) = &rep.lie_check.witness {
        text.push_str(&format!("Lie {n}-identity witness: basis tuple {:?}\n", w.tuple));
    }
    Ok(Outcome::new(text, rep.conclusion_holds()))
}

fn proper<R: Ring>(
    ring: &R,
    n: usize,
    input: &MapInput,
    out_d: Option<&Path>,
    out_tau: Option<&Path>,
    limits: &Limits,
) -> Run {
    let dec = decomposition::is_proper(&load_map(ring, input, limits)?, n, limits.tuple_guard)?;
    if let Some(w) = &dec.witness {
        if let Some(path) = out_d {
            write(path, &format::write_map(&w.d))?;
        }
        if let Some(path) = out_tau {
            write(path, &format::write_map(&w.tau))?;
        }
    }
    Ok(Outcome::new(dec.to_string(), dec.proper))
}

fn space<R: Ring>(ring: &R, n: usize, poset: &Path, out: Option<&Path>, limits: &Limits) -> Run {
    let p = load_poset(poset, limits)?;
    let space = LieDerivationSpace::new(&p, ring, n, limits.tuple_guard)?;
    let module = space.module();
    let mut text = format!(
        "Lie {n}-derivations over {}: {} unknowns, {} distinct equations\n",
        ring.spec(),
        p.basis_len().pow(2),
        space.system().num_rows()
    );
    text.push_str(&format!("generators: {}\n", module.generators.len()));
    if let Some(count) = module.count() {
        text.push_str(&format!("cardinality: {count}\n"));
    }
    let id = LinMap::identity(&p, ring);
    text.push_str(&format!("contains identity: {}\n", if space.contains(&id) { "yes" } else { "no" }));
    if let Some(path) = out {
        let mut listing = String::new();
        for (i, (g, order)) in space.generators().iter().zip(&module.orders).enumerate() {
            match order {
                Some(o) => listing.push_str(&format!("# generator {i} (additive order {o})\n")),
                None => listing.push_str(&format!("# generator {i}\n")),
            }
            listing.push_str(&format::write_map(g));
        }
        write(path, &listing)?;
    }
    Ok(Outcome::new(text, true))
}

fn lemma<R: Ring>(ring: &R, cfg: &LemmaConfig) -> Run {
    let rep = oracle::check_lemma(cfg, ring)?;
    Ok(Outcome::new(rep.to_string(), rep.status() != LemmaStatus::Failed))
}

fn counterexample(n: usize, limits: &Limits) -> Run {
    if n < 3 {
        return Err(Error::InvalidArgument("the counterexample needs n >= 3".into()).into());
    }
    let ring = ZMod::new(n as u64 - 1)?;
    let p = Arc::new(Poset::chain(2));
    let id = LinMap::identity(&p, &ring);
    let lie_rep = lie::is_lie_n_derivation(&id, n, limits.tuple_guard)?;
    let dec = decomposition::is_proper(&id, n, limits.tuple_guard)?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("poset: 2-chain 1 < 2\nring: {} (characteristic {})\nmap: identity\n", ring.spec(), n - 1);
    text.push_str(&format!(
        "basis tuples checked: {} of {}\n",
        lie_rep.tuples_checked,
        p.basis_len().pow(n as u32)
    ));
    text.push_str(&format!(
        "Lie {n}-derivation: {}; proper: {}\n",
        yn(lie_rep.verdict),
        yn(dec.proper)
    ));
    Ok(Outcome::new(text, lie_rep.verdict && !dec.proper))
}

fn oracle_enumerate(spec: RingSpec, n: usize, poset: &Path, derivations: bool, limits: &Limits) -> Run {
    let RingSpec::ZMod(m) = spec else {
        return Err(Error::InvalidArgument("enumeration needs a ring zmod:m".into()).into());
    };
    let ring = ZMod::new(m)?;
    let p = load_poset(poset, limits)?;
    let (label, found, sys) = if derivations {
        let found = oracle::enumerate_linmaps(&p, &ring, |l| lie::is_derivation(l).verdict, limits.enum_guard)?;
        ("derivations".to_string(), found, lie::derivation_constraint_system(&p, &ring))
    } else {
        if n < 2 {
            return Err(Error::InvalidArgument("Lie n-derivations need n >= 2".into()).into());
        }
        // builds the tuple table first, so the guard fails before enumeration
        let sys = lie::lie_n_constraint_system(&p, &ring, n, limits.tuple_guard)?;
        let guard = limits.tuple_guard;
        let found = oracle::enumerate_linmaps(
            &p,
            &ring,
            |l| lie::is_lie_n_derivation(l, n, guard).is_ok_and(|r| r.verdict),
            limits.enum_guard,
        )?;
        (format!("Lie {n}-derivations"), found, sys)
    };
    let module = linsolve::solve(&sys);
    let mut solved = module.enumerate(&ring, limits.enum_guard)?;
    solved.sort();
    let brute: Vec<Vec<u64>> = found.iter().map(|l| l.as_slice().to_vec()).collect();
    let agree = brute == solved;
    let total = (m as u128).pow(p.basis_len().pow(2) as u32);
    let text = format!(
        "maps enumerated: {total}\n{label} by enumeration: {}\n{label} from constraint system: {}\nsets agree: {}\n",
        brute.len(),
        solved.len(),
        if agree { "yes" } else { "no" }
    );
    Ok(Outcome::new(text, agree))
}

fn run(cli: Cli) -> Run {
    let limits = Limits {
        tuple_guard: cli.tuple_guard,
        enum_guard: cli.enum_guard,
        max_elements: cli.max_elements,
    };
    let l = &limits;
    match cli.command {
        Command::Poset { what: PosetCmd::Info { file } } => poset_info(&file, l),
        Command::Mul { ring, poset, elements } => with_ring!(ring, mul(&poset, &elements, l)),
        Command::Pn { n, ring, poset, elements } => with_ring!(ring, pn(n, &poset, &elements, l)),
        Command::Verify { what: VerifyCmd::Derivation { input } } => with_ring!(input.ring, verify_derivation(&input, l)),
        Command::Verify { what: VerifyCmd::Lie { n, input } } => with_ring!(input.ring, verify_lie(n, &input, l)),
        Command::Decompose { n, input, out_d, out_tau } => {
            with_ring!(input.ring, decompose(n, &input, out_d.as_deref(), out_tau.as_deref(), l))
        }
        Command::Proper { n, input, out_d, out_tau } => {
            with_ring!(input.ring, proper(n, &input, out_d.as_deref(), out_tau.as_deref(), l))
        }
        Command::Space { n, ring, poset, out } => with_ring!(ring, space(n, &poset, out.as_deref(), l)),
        Command::Lemma { id, trials, seed, ring, poset, random_size, n, identity } => {
            let posets = match (poset, random_size) {
                (Some(path), _) => PosetSource::Fixed(load_poset(&path, l)?),
                (None, Some(size)) => PosetSource::Random { size },
                (None, None) => unreachable!("clap requires one poset source"),
            };
            let cfg = LemmaConfig {
                lemma: id,
                trials,
                seed,
                n,
                posets,
                maps: if identity { MapSource::Identity } else { MapSource::Sampled },
                tuple_guard: l.tuple_guard,
            };
            with_ring!(ring, lemma(&cfg))
        }
        Command::Counterexample { n } => counterexample(n, l),
        Command::Oracle { what: OracleCmd::Enumerate { n, ring, poset, derivations } } => {
            oracle_enumerate(ring, n, &poset, derivations, l)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GuardExceeded { .. } => 4,
        Error::InvalidArgument(_) => 2,
        Error::Infeasible(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(3)
        }
    }
}
