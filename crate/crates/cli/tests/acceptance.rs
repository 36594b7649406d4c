//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//! Time limits are wall-clock bounds on the measured part of each criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use idpath_cli::derive::{derive, Bundle, Kind, Target};
use idpath_cli::run::{check_source, load_signature};
use idpath_core::cat::{sigma_collapse, Fibration, Morphism};
use idpath_core::checker;
use idpath_core::defeq::defeq_terms;
use idpath_core::gen::{self, Shape};
use idpath_core::pathtools::contract::{compose, source_map};
use idpath_core::pathtools::{build_py, check_pullback_stable, h_of_j, EquivRelWitness, Env};
use idpath_core::surface::{parse_telescope, parse_tm, parse_ty};
use idpath_core::{Signature, Telescope, Ty};
use rand::rngs::StdRng;
use rand::SeedableRng;

const CORPUS_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(30);
const PY4_LIMIT: Duration = Duration::from_secs(5);
const FUZZ_LIMIT: Duration = Duration::from_secs(30);

const SWEEP_SIGNATURES: usize = 200;
const GROUPOID_TYPES: usize = 50;
const PY_SIGNATURES: usize = 5;
const SUMS_SIGNATURES: usize = 5;
const PULLBACKS: usize = 20;
const JUDGMENTS: usize = 500;

type Outcome = Result<String, String>;

fn corpus(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect()
}

fn names(sig: &Signature) -> std::collections::HashSet<String> {
    sig.decls().iter().map(|d| d.name().to_string()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("{what} took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

/// Re-checks a bundle from its printed form against a fresh signature.
fn recheck(b: &Bundle) -> Result<(), String> {
    let text = b.to_text();
    let recs = check_source(&text, false).map_err(|e| format!("{}: reparse: {e}", b.kind.name()))?;
    match recs.iter().find(|r| !r.accepted) {
        None => Ok(()),
        Some(r) => Err(format!("{}: {}", b.kind.name(), r.to_text(false))),
    }
}

fn run(sig: &Signature, kind: Kind, tel: &Telescope) -> Result<Bundle, String> {
    let b = derive(sig, kind, &Target { tel: tel.clone(), split: None }).map_err(|e| format!("{}: {e}", kind.name()))?;
    recheck(&b)?;
    Ok(b)
}

/// A closed type from a random signature, as the one-entry telescope `(x : T)`.
fn random_type(rng: &mut StdRng, sig: &Signature) -> Option<Telescope> {
    let ty = gen::ty(rng, sig, &Telescope::new(), 1)?;
    Some(Telescope::new().with("x", ty))
}

fn c1_corpus() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_idpath");
    let t = Instant::now();
    let code = |p: &PathBuf| Command::new(bin).arg("check").arg(p).output().map(|o| o.status.code());
    let ok = code(&corpus("table1.idp")).map_err(|e| e.to_string())?;
    ensure(ok == Some(0), || format!("table1.idp exited {ok:?}"))?;
    let mut mutants: Vec<PathBuf> = std::fs::read_dir(corpus("mutants"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    mutants.sort();
    ensure(mutants.len() == 10, || format!("{} mutants", mutants.len()))?;
    for m in &mutants {
        let c = code(m).map_err(|e| e.to_string())?;
        ensure(c == Some(1), || format!("{} exited {c:?}", m.display()))?;
    }
    let e = within(t, CORPUS_LIMIT, "corpus")?;
    Ok(format!("table1 accepted, 10/10 mutants rejected in {e:.2?}"))
}

fn c2_probe() -> Outcome {
    let sig = load_signature(
        "postulate A : Type\npostulate a : A\npostulate C (x : A)(y : A)(u : Id A x y) : Type\npostulate d (x : A) : C x x (refl A x)",
        false,
    )?;
    let g = names(&sig);
    let empty = Telescope::new();
    let j = parse_tm("J (x y u : A) (C x y u) (x . d x) a a (refl A a) []", g.clone(), &[]).map_err(|e| e.to_string())?;
    let c = parse_ty("C a a (refl A a)", g.clone(), &[]).map_err(|e| e.to_string())?;
    let da = parse_tm("d a", g, &[]).map_err(|e| e.to_string())?;
    let accepted = checker::check_against(&sig, &empty, &j, &c).is_ok();
    let computes = defeq_terms(&sig, &empty, &c, &j, &da);
    let h = h_of_j(&j).ok_or("no H for the J term")?;
    let witness = checker::check_against(&sig, &empty, &h, &Ty::Id(Box::new(c), Box::new(j), Box::new(da))).is_ok();
    ensure(accepted && !computes && witness, || {
        format!("J accepted {accepted}, J defeq d(a) {computes}, H checks {witness}")
    })?;
    Ok("J accepted = true, J defeq d(a) = false, H checks = true".into())
}

fn c3_sweep() -> Outcome {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut outputs = 0;
    let mut done = 0;
    while done < SWEEP_SIGNATURES {
        let sig = gen::signature(&mut rng, Shape::default());
        let Some(one) = random_type(&mut rng, &sig) else { continue };
        let Some(two) = gen::telescope(&mut rng, &sig, &Telescope::new(), 2) else { continue };
        for kind in [Kind::Sym, Kind::Trans, Kind::Groupoid, Kind::Fill, Kind::Contract] {
            run(&sig, kind, &one).map_err(|e| format!("signature {done}: {e}"))?;
            outputs += 1;
        }
        run(&sig, Kind::Transport, &two).map_err(|e| format!("signature {done}: {e}"))?;
        outputs += 1;
        done += 1;
    }
    let e = within(t, SWEEP_LIMIT, "sweep")?;
    Ok(format!("{done} signatures, {outputs}/{outputs} bundles re-checked in {e:.2?}"))
}

fn c4_groupoid() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut done = 0;
    while done < GROUPOID_TYPES {
        let sig = gen::signature(&mut rng, Shape::default());
        let Some(gamma) = gen::telescope(&mut rng, &sig, &Telescope::new(), done % 2) else { continue };
        let Some(ty) = gen::ty(&mut rng, &sig, &gamma, 1) else { continue };
        let tel = gamma.with("x", ty);
        let b = run(&sig, Kind::Groupoid, &tel).map_err(|e| format!("type {done}: {e}"))?;
        ensure(b.confirmations.len() == 5, || format!("type {done}: {} laws", b.confirmations.len()))?;
        done += 1;
    }
    Ok(format!("{done} base types, 5/5 laws each, endpoints by defeq"))
}

fn c5_py() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for n in 0..=4usize {
        let mut done = 0;
        while done < PY_SIGNATURES {
            let sig = gen::signature(&mut rng, Shape::default());
            let Some(tel) = gen::telescope(&mut rng, &sig, &Telescope::new(), n) else { continue };
            let t = Instant::now();
            let mut env = Env::new(&sig);
            let ps = build_py(&mut env, &Fibration::over_empty(tel)).map_err(|e| format!("n={n}: {e}"))?;
            let diag = ps.st().after(&ps.r()).equal(&env.sig, &ps.diagonal());
            let rank = ps.path_fibration().rank();
            EquivRelWitness::of(&ps).check(&mut env).map_err(|e| format!("n={n}: {e}"))?;
            ensure(diag, || format!("n={n}: (s, t) r is not the diagonal"))?;
            ensure(rank == n, || format!("n={n}: rank {rank}"))?;
            if n == 4 {
                slowest = slowest.max(within(t, PY4_LIMIT, "n=4 build")?);
            }
            done += 1;
            count += 1;
        }
    }
    Ok(format!("{count} telescopes, n = 0..4, slowest n=4 build {slowest:.2?}"))
}

fn c6_sums() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let shape = Shape { strong_sums: true, ..Shape::default() };
    let mut count = 0;
    for n in 0..=3usize {
        let mut done = 0;
        while done < SUMS_SIGNATURES {
            let sig = gen::signature(&mut rng, shape);
            let Some(tel) = gen::telescope(&mut rng, &sig, &Telescope::new(), n) else { continue };
            let sc = sigma_collapse(&sig, &Fibration::over_empty(tel.clone())).map_err(|e| e.to_string())?;
            ensure(sc.roundtrips(&sig), || format!("n={n}: collapse does not roundtrip"))?;
            if n == 0 {
                ensure(sc.ty == Ty::Unit, || "empty telescope does not collapse to Unit".into())?;
            }
            let b = run(&sig, Kind::Similar, &tel).map_err(|e| format!("n={n}: {e}"))?;
            ensure(b.confirmations.len() == 2, || format!("n={n}: {:?}", b.confirmations))?;
            done += 1;
            count += 1;
        }
    }
    Ok(format!("{count} telescopes, n = 0..3, roundtrips and q H = p, p K = q"))
}

fn c7_contract() -> Outcome {
    let sig = load_signature(
        "postulate A : Type\npostulate B (x : A) : Type\npostulate C (x : A)(b : B x) : Type",
        false,
    )?;
    let tel = |s: &str| parse_telescope(s, names(&sig)).map_err(|e| e.to_string());
    for ctx in ["(x : A)", "(x : A)(b : B x)", "(x : A)(b : B x)(c : C x b)"] {
        let mut env = Env::new(&sig);
        let ps = env.path_structure(&Fibration::over_empty(tel(ctx)?)).map_err(|e| e.to_string())?;
        let w = source_map(&mut env, &ps).map_err(|e| format!("{ctx}: {e}"))?;
        w.check(&mut env).map_err(|e| format!("{ctx}: {e}"))?;
    }
    let mut env = Env::new(&sig);
    let pa = env.path_structure(&Fibration::over_empty(tel("(x : A)")?)).map_err(|e| e.to_string())?;
    let lower = source_map(&mut env, &pa).map_err(|e| e.to_string())?;
    let base = lower.fib.total();
    let upper = lower.pullback(&mut env, &Morphism::projection(&base, 1)).map_err(|e| e.to_string())?;
    let comp = compose(&mut env, &lower, &upper).map_err(|e| e.to_string())?;
    comp.check(&mut env).map_err(|e| e.to_string())?;
    Ok(format!("source maps at ranks 1, 2, 3; composite of rank {} re-witnessed", comp.fib.rank()))
}

fn c8_stability() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut done = 0;
    let mut tries = 0;
    while done < PULLBACKS {
        tries += 1;
        ensure(tries < 5000, || "could not generate morphisms".into())?;
        let sig = gen::signature(&mut rng, Shape::default());
        let Some(base) = gen::telescope(&mut rng, &sig, &Telescope::new(), 1 + tries % 2) else { continue };
        let Some(ext) = gen::telescope(&mut rng, &sig, &base, 1 + (tries / 2) % 2) else { continue };
        let Some(delta) = gen::telescope(&mut rng, &sig, &Telescope::new(), tries % 3) else { continue };
        let Some(f) = gen::morphism(&mut rng, &sig, &delta, &base) else { continue };
        let mut env = Env::new(&sig);
        check_pullback_stable(&mut env, &Fibration::new(base, ext), &f).map_err(|e| format!("morphism {done}: {e}"))?;
        done += 1;
    }
    Ok(format!("{done}/{PULLBACKS} pullbacks commute with construction"))
}

fn accepted(sig: &Signature, j: &gen::Judgment) -> bool {
    checker::context_wf(sig, &j.ctx).is_ok() && checker::check(sig, &j.ctx, &j.tm, &j.ty).failure.is_none()
}

fn c9_fuzz() -> Outcome {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(9);
    let (mut done, mut substituted) = (0, 0);
    while done < JUDGMENTS {
        let sig = gen::signature(&mut rng, Shape::default());
        let Some(j) = gen::judgment(&mut rng, &sig) else { continue };
        ensure(accepted(&sig, &j), || format!("judgment {done} not accepted"))?;
        let w = gen::weaken(&mut rng, &sig, &j).ok_or_else(|| format!("judgment {done}: no weakening"))?;
        ensure(accepted(&sig, &w), || format!("judgment {done}: weakening rejected"))?;
        if let Some(s) = (0..8).find_map(|_| gen::substitute(&mut rng, &sig, &j)) {
            ensure(accepted(&sig, &s), || format!("judgment {done}: substitution rejected"))?;
            substituted += 1;
        }
        done += 1;
    }
    let e = within(t, FUZZ_LIMIT, "fuzz")?;
    Ok(format!("{done} judgments weakened, {substituted} substituted, all accepted in {e:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("conformance corpus", c1_corpus),
        ("no definitional computation", c2_probe),
        ("witness soundness sweep", c3_sweep),
        ("groupoid laws", c4_groupoid),
        ("rank induction", c5_py),
        ("strong sums agreement", c6_sums),
        ("contractibility closure", c7_contract),
        ("pullback stability", c8_stability),
        ("weakening and substitution", c9_fuzz),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("PASS {n} {name}: {detail} [{:.2?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {n} {name}: {why} [{:.2?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
