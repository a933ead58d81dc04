//! Randomized verification campaigns.
//!
//! Trial `i` of seed `s` draws from `ChaCha8Rng` seeded with `s` on stream
//! `i`, so each trial is reproducible on its own and the report does not
//! depend on how trials are scheduled across threads. Lattices come from
//! three families, picked uniformly:
//!
//! * the divisors of a random `N <= 360` with at most 8 divisors;
//! * a sublattice of the boolean lattice on 3 points, generated under union
//!   and intersection by 1 to 3 random masks;
//! * a union-closed family of subsets of a 4-point set containing the empty
//!   set, generated by 1 to 3 random masks, kept to at most 8 members.
//!
//! `f` takes values `p/q` with `-9 <= p <= 9`, `1 <= q <= 4`. The meet-side
//! checks use a nonzero semimultiplicative `g`: completely multiplicative on
//! divisors, `c Π w_a` on boolean sublattices, constant on union families.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::ValueEnum;
use latmat_core::divisor::{divisors, factorize, multiple_closure};
use latmat_core::par::map_range;
use latmat_core::{
    build_matrix, det_closed_form, factorize_join, factorize_meet, inverse_closed_form,
    join_closure, oracle_det, oracle_inverse, psi_dirichlet, psi_join_closed, psi_mobius,
    psi_recursive, psi_upper_closed, upper_part, DetMethod, DivisorPoset, ElementId, EngineConfig,
    Error, Execution, FinitePoset, InverseMethod, MatrixKind, MatrixSpec, OrderedSubset,
    PosetFunction, PsiVector, RatMatrix, Rational,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, VerifyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// Möbius-route Ψ computed with `-μ`.
    NegatedMobius,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub poset: String,
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub lattice: String,
    pub failure: Option<Failure>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Lattice {
    poset: Arc<FinitePoset>,
    label: String,
    family: Family,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Divisors(u64),
    Boolean,
    Union,
}

fn masks_poset(set: BTreeSet<u8>) -> Arc<FinitePoset> {
    let masks: Vec<u8> = set.into_iter().collect();
    let ids = masks
        .iter()
        .map(|&m| ElementId::from(u32::from(m)))
        .collect();
    Arc::new(
        FinitePoset::from_order_fn(ids, |i, j| masks[i] & !masks[j] == 0).expect("subset order"),
    )
}

fn random_lattice(rng: &mut ChaCha8Rng) -> Lattice {
    match rng.gen_range(0..3) {
        0 => {
            let n = loop {
                let n = rng.gen_range(1..=360u64);
                if divisors(n).len() <= 8 {
                    break n;
                }
            };
            Lattice {
                poset: Arc::clone(DivisorPoset::divisors_of(n).expect("n > 0").poset()),
                label: format!("divisors of {n}"),
                family: Family::Divisors(n),
            }
        }
        1 => {
            let gens: Vec<u8> = (0..rng.gen_range(1..=3))
                .map(|_| rng.gen_range(0..8))
                .collect();
            let mut set: BTreeSet<u8> = gens.iter().copied().collect();
            loop {
                let before = set.len();
                let snapshot: Vec<u8> = set.iter().copied().collect();
                for &a in &snapshot {
                    for &b in &snapshot {
                        set.insert(a | b);
                        set.insert(a & b);
                    }
                }
                if set.len() == before {
                    break;
                }
            }
            Lattice {
                label: format!("boolean sublattice generated by {gens:?}"),
                poset: masks_poset(set),
                family: Family::Boolean,
            }
        }
        _ => {
            let mut set: BTreeSet<u8> = BTreeSet::from([0]);
            let mut gens = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let g = rng.gen_range(1..16u8);
                let grown: BTreeSet<u8> = set.iter().flat_map(|&s| [s, s | g]).collect();
                if grown.len() > 8 {
                    break;
                }
                gens.push(g);
                set = grown;
            }
            Lattice {
                label: format!("union family generated by {gens:?}"),
                poset: masks_poset(set),
                family: Family::Union,
            }
        }
    }
}

fn rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-9..=9i64).into(),
        rng.gen_range(1..=4i64).into(),
    )
}

fn nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn semimultiplicative(rng: &mut ChaCha8Rng, lat: &Lattice) -> PosetFunction {
    match lat.family {
        Family::Divisors(n) => {
            let weights: Vec<(u64, Rational)> = factorize(n)
                .into_iter()
                .map(|(p, _)| (p, nonzero(rng)))
                .collect();
            PosetFunction::from_fn(&lat.poset, |id| {
                let m: u64 = id.as_str().parse().expect("integer label");
                factorize(m)
                    .into_iter()
                    .fold(Rational::one(), |acc, (p, e)| {
                        let w = &weights.iter().find(|(q, _)| *q == p).expect("prime of n").1;
                        acc * num_traits::pow(w.clone(), e as usize)
                    })
            })
        }
        Family::Boolean => {
            let c = nonzero(rng);
            let w: Vec<Rational> = (0..3).map(|_| nonzero(rng)).collect();
            PosetFunction::from_fn(&lat.poset, |id| {
                let m: u8 = id.as_str().parse().expect("mask label");
                (0..3)
                    .filter(|b| m & (1 << b) != 0)
                    .fold(c.clone(), |acc, b| acc * &w[b])
            })
        }
        Family::Union => PosetFunction::constant(&lat.poset, nonzero(rng)),
    }
}

/// A random nonempty subset of at most `max` elements, in carrier order.
fn random_subset(rng: &mut ChaCha8Rng, p: &Arc<FinitePoset>, max: usize) -> OrderedSubset {
    let n = p.len();
    let k = rng.gen_range(1..=max.min(n));
    let members = rand::seq::index::sample(rng, n, k).into_vec();
    let mut members = members;
    members.sort_unstable();
    OrderedSubset::from_indices(p, members).expect("indices in range")
}

fn truncated(s: &OrderedSubset, n: usize) -> OrderedSubset {
    OrderedSubset::from_indices(s.poset(), s.indices()[..n].to_vec()).expect("prefix")
}

/// Ψ through the Möbius function of `D`; the mutated route flips its sign.
fn psi_mobius_route(
    d: &OrderedSubset,
    f: &PosetFunction,
    negate: bool,
) -> Result<Vec<Rational>, Error> {
    if !negate {
        return psi_mobius(d, f).map(PsiVector::into_values);
    }
    let sub = d.induced_poset();
    let members = d.indices();
    (0..members.len())
        .map(|k| {
            let mut acc = Rational::zero();
            for v in k..members.len() {
                let mu = Rational::from_integer(sub.mobius(k, v).clone());
                acc -= f.at(members[v])? * mu;
            }
            Ok(acc)
        })
        .collect()
}

type Check = Result<(), String>;

fn ensure(ok: bool, what: &str) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn core<T>(r: Result<T, Error>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn same_psi(a: &PsiVector, b: &[Rational]) -> bool {
    a.values() == b
}

fn check_psi(
    lat: &Lattice,
    d: &OrderedSubset,
    f: &PosetFunction,
    mutation: Option<Mutation>,
) -> Check {
    let negate = mutation == Some(Mutation::NegatedMobius);
    let rec = core(psi_recursive(d, f), "psi recursive")?;
    let mob = core(psi_mobius_route(d, f, negate), "psi mobius")?;
    ensure(
        same_psi(&rec, &mob),
        "psi: recursive and Möbius forms differ",
    )?;

    let j = core(join_closure(d), "join closure")?;
    let rec_j = core(psi_recursive(&j, f), "psi recursive")?;
    let jc = core(psi_join_closed(&j, f), "psi join-closed")?;
    ensure(
        same_psi(&jc, rec_j.values()),
        "psi: join-closed form differs",
    )?;

    let u = core(upper_part(d), "upper part")?;
    let rec_u = core(psi_recursive(&u, f), "psi recursive")?;
    let uc = core(psi_upper_closed(&u, f), "psi upper-closed")?;
    ensure(
        same_psi(&uc, rec_u.values()),
        "psi: upper-closed form differs",
    )?;

    if let Family::Divisors(_) = lat.family {
        let labels: Vec<u64> = d
            .ids()
            .iter()
            .map(|id| id.as_str().parse().expect("integer label"))
            .collect();
        let closed = core(multiple_closure(&labels), "multiple closure")?;
        let m = core(
            OrderedSubset::sorted(&lat.poset, closed.iter().map(ToString::to_string)),
            "multiple closure",
        )?;
        let rec_m = core(psi_recursive(&m, f), "psi recursive")?;
        let dir = core(psi_dirichlet(&m, f), "psi dirichlet")?;
        ensure(
            same_psi(&dir, rec_m.values()),
            "psi: Dirichlet form differs",
        )?;
    }
    Ok(())
}

fn check_factorizations(
    x: &OrderedSubset,
    y: &OrderedSubset,
    f: &PosetFunction,
    g: &PosetFunction,
) -> Check {
    let spec = core(
        MatrixSpec::join(x.clone(), y.clone(), f.clone()),
        "join spec",
    )?;
    let product = core(
        factorize_join(&spec).and_then(|fac| fac.product()),
        "join factors",
    )?;
    ensure(
        product == core(build_matrix(&spec), "join matrix")?,
        "join factorization",
    )?;

    let spec = core(
        MatrixSpec::meet(x.clone(), y.clone(), g.clone()),
        "meet spec",
    )?;
    let product = core(
        factorize_meet(&spec).and_then(|fac| fac.product()),
        "meet factors",
    )?;
    ensure(
        product == core(build_matrix(&spec), "meet matrix")?,
        "meet factorization",
    )
}

fn det_matches(spec: &MatrixSpec, method: DetMethod, cfg: &EngineConfig, what: &str) -> Check {
    let m = core(build_matrix(spec), what)?;
    let oracle = core(oracle_det(&m), what)?;
    let value = core(det_closed_form(spec, method, cfg), what)?.value;
    ensure(value == oracle, what)
}

/// The closed-form inverse equals the oracle inverse, or both report a
/// singular matrix in the designated way.
fn inverse_matches(
    spec: &MatrixSpec,
    method: InverseMethod,
    cfg: &EngineConfig,
    what: &str,
) -> Check {
    let m = core(build_matrix(spec), what)?;
    match (oracle_inverse(&m), inverse_closed_form(spec, method, cfg)) {
        (Ok(inv), Ok(b)) => {
            ensure(b.matrix == inv, what)?;
            ensure(core(b.matrix.mul(&m), what)?.is_identity(), what)
        }
        (Err(Error::SingularMatrix), Err(Error::SingularMatrix | Error::ZeroPsi(_))) => Ok(()),
        (Ok(_), Err(e)) => Err(format!("{what}: {e} on an invertible matrix")),
        (Err(_), Ok(_)) => Err(format!("{what}: inverse of a singular matrix")),
        (Err(e), Err(_)) => Err(format!("{what}: {e}")),
    }
}

fn check_closed_forms(
    x: &OrderedSubset,
    y: &OrderedSubset,
    f: &PosetFunction,
    g: &PosetFunction,
    cfg: &EngineConfig,
) -> Check {
    let spec = core(
        MatrixSpec::join(x.clone(), y.clone(), f.clone()),
        "join spec",
    )?;
    det_matches(&spec, DetMethod::CauchyBinet, cfg, "join det: Cauchy-Binet")?;
    inverse_matches(
        &spec,
        InverseMethod::CofactorCauchyBinet,
        cfg,
        "join inverse: cofactors",
    )?;

    let spec = core(
        MatrixSpec::meet(x.clone(), y.clone(), g.clone()),
        "meet spec",
    )?;
    det_matches(&spec, DetMethod::CauchyBinet, cfg, "meet det: Cauchy-Binet")?;
    inverse_matches(
        &spec,
        InverseMethod::CofactorCauchyBinet,
        cfg,
        "meet inverse: cofactors",
    )?;

    let j = core(join_closure(x), "join closure")?;
    for (kind, h) in [(MatrixKind::Join, f), (MatrixKind::Meet, g)] {
        let spec = core(
            MatrixSpec::square(kind, j.clone(), h.clone()),
            "join-closed spec",
        )?;
        det_matches(&spec, DetMethod::JoinClosed, cfg, "det: join-closed form")?;
        inverse_matches(
            &spec,
            InverseMethod::JoinClosed,
            cfg,
            "inverse: join-closed form",
        )?;
    }
    let u = core(upper_part(x), "upper part")?;
    for (kind, h) in [(MatrixKind::Join, f), (MatrixKind::Meet, g)] {
        let spec = core(
            MatrixSpec::square(kind, u.clone(), h.clone()),
            "upper-closed spec",
        )?;
        det_matches(&spec, DetMethod::UpperClosed, cfg, "det: upper-closed form")?;
        inverse_matches(
            &spec,
            InverseMethod::UpperClosed,
            cfg,
            "inverse: upper-closed form",
        )?;
    }
    Ok(())
}

/// `det (X,Y)_g = Π g(x_v) g(y_v) · det [X,Y]_{1/g}`, and the matching
/// relation between the inverses.
fn check_transfer(x: &OrderedSubset, y: &OrderedSubset, g: &PosetFunction) -> Check {
    let all: Vec<usize> = (0..x.poset().len()).collect();
    let recip = core(g.reciprocal(&all), "reciprocal")?;
    let meet = core(
        build_matrix(&core(
            MatrixSpec::meet(x.clone(), y.clone(), g.clone()),
            "meet spec",
        )?),
        "meet",
    )?;
    let join = core(
        build_matrix(&core(
            MatrixSpec::join(x.clone(), y.clone(), recip),
            "join spec",
        )?),
        "join",
    )?;
    let value = |s: &OrderedSubset, k: usize| g.at(s.indices()[k]).cloned();
    let mut scale = Rational::one();
    for v in 0..x.len() {
        scale *= core(value(x, v), "g")? * core(value(y, v), "g")?;
    }
    ensure(
        core(oracle_det(&meet), "meet det")? == scale * core(oracle_det(&join), "join det")?,
        "transfer: determinants",
    )?;
    if let Ok(join_inv) = oracle_inverse(&join) {
        let diag = |s: &OrderedSubset| -> Result<RatMatrix, String> {
            let d = (0..s.len())
                .map(|k| value(s, k).map(|v| v.recip()))
                .collect::<Result<Vec<_>, _>>();
            Ok(RatMatrix::diagonal(&core(d, "g")?))
        };
        let (dy, dx) = (diag(y)?, diag(x)?);
        let expected = core(dy.mul(&join_inv).and_then(|m| m.mul(&dx)), "transfer")?;
        ensure(
            core(oracle_inverse(&meet), "meet inverse")? == expected,
            "transfer: inverses",
        )?;
    }
    Ok(())
}

fn run_trial(
    seed: u64,
    trial: u64,
    cfg: &EngineConfig,
    mutation: Option<Mutation>,
) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let lat = random_lattice(&mut rng);
    let p = &lat.poset;
    let f = PosetFunction::from_fn(p, |_| rational(&mut rng));
    let g = semimultiplicative(&mut rng, &lat);
    let d = random_subset(&mut rng, p, 8);
    let x = random_subset(&mut rng, p, 5);
    let y = random_subset(&mut rng, p, 5);
    let n = x.len().min(y.len());
    let (xs, ys) = (truncated(&x, n), truncated(&y, n));

    let result = check_psi(&lat, &d, &f, mutation)
        .and_then(|()| check_factorizations(&x, &y, &f, &g))
        .and_then(|()| check_closed_forms(&xs, &ys, &f, &g, cfg))
        .and_then(|()| check_transfer(&xs, &ys, &g));
    TrialOutcome {
        trial,
        lattice: lat.label.clone(),
        failure: result.err().map(|check| Failure {
            check,
            poset: p.to_text(),
            function: f.to_text(),
        }),
    }
}

/// Runs `trials` independent trials; results are in trial order.
pub fn run_campaign(
    trials: u64,
    seed: u64,
    cap: u64,
    inject: Option<Mutation>,
) -> Vec<TrialOutcome> {
    let cfg = EngineConfig {
        cap,
        force: false,
        // Trials already run in parallel.
        execution: Execution::Sequential,
    };
    map_range(Execution::default(), trials as usize, |i| {
        Ok(run_trial(seed, i as u64, &cfg, inject))
    })
    .expect("trials do not fail")
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut String) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let outcomes = run_campaign(args.trials, args.seed, args.cap, args.inject);
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let _ = writeln!(out, "verify: {} trials, seed {}", args.trials, args.seed);
    if let Some(m) = args.inject {
        let _ = writeln!(
            out,
            "injected mutation: {}",
            m.to_possible_value().expect("not skipped").get_name()
        );
    }
    let first = outcomes
        .iter()
        .find_map(|o| o.failure.as_ref().map(|f| (o, f)));
    if let Some((o, fail)) = first {
        let _ = writeln!(
            out,
            "FAIL trial {} ({}): {}",
            o.trial, o.lattice, fail.check
        );
        let _ = writeln!(out, "counterexample poset:");
        out.push_str(&fail.poset);
        let _ = writeln!(out, "counterexample f:");
        out.push_str(&fail.function);
    }
    let _ = writeln!(out, "{passed}/{} pass", args.trials);
    if passed as u64 == args.trials {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} of {} trials failed",
            args.trials - passed as u64,
            args.trials
        )))
    }
}
