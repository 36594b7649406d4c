use idpath_core::cat::{Fibration, Morphism};
use idpath_core::checker::add_decl;
use idpath_core::pathtools::contract::{compose, source_map, ContractibleWitness};
use idpath_core::pathtools::Env;
use idpath_core::surface::{parse, parse_telescope, Directive};
use idpath_core::{Signature, Telescope};

const SIG: &str = "postulate A : Type\npostulate B (x : A) : Type\npostulate C (x : A)(b : B x) : Type\npostulate a0 : A";

fn sig() -> Signature {
    let mut sig = Signature::new();
    for (_, d) in parse(SIG).unwrap().directives {
        if let Directive::Decl(d) = d {
            add_decl(&mut sig, d).unwrap();
        }
    }
    sig
}

fn tel(sig: &Signature, s: &str) -> Telescope {
    parse_telescope(s, sig.decls().iter().map(|d| d.name().to_string()).collect()).unwrap()
}

#[test]
fn source_maps_ranks_one_to_three() {
    let sig = sig();
    for ctx in ["(x : A)", "(x : A)(b : B x)", "(x : A)(b : B x)(c : C x b)"] {
        let mut env = Env::new(&sig);
        let t = std::time::Instant::now();
        let ps = env.path_structure(&Fibration::over_empty(tel(&sig, ctx))).unwrap();
        let w = source_map(&mut env, &ps).unwrap();
        w.check(&mut env).unwrap();
        eprintln!("{ctx}: {:?}, {} defs", t.elapsed(), env.emitted().len());
    }
}

#[test]
fn composite_of_source_maps() {
    let sig = sig();
    let mut env = Env::new(&sig);
    // [x0, x1, α] -> [x0] and then [x0, x1, α, y1 : A, β : Id A x0 y1] -> [x0, x1, α]
    let a = Fibration::over_empty(tel(&sig, "(x : A)"));
    let pa = env.path_structure(&a).unwrap();
    let lower = source_map(&mut env, &pa).unwrap();
    let base = lower.fib.total();
    let proj = Morphism::projection(&base, 1);
    let upper = lower.pullback(&mut env, &proj).unwrap();
    assert_eq!(upper.fib.base, base);
    let comp = compose(&mut env, &lower, &upper).unwrap();
    comp.check(&mut env).unwrap();
    assert_eq!(comp.fib.rank(), 4);
}

#[test]
fn sections_roundtrip() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let ps = env.path_structure(&Fibration::over_empty(tel(&sig, "(x : A)(b : B x)"))).unwrap();
    let w = source_map(&mut env, &ps).unwrap();
    let nb = w.fib.base.len();
    let again = ContractibleWitness::from_sections(&mut env, &w.fib, w.section.terms[nb..].to_vec(), &w.path_section).unwrap();
    again.check(&mut env).unwrap();
}

#[test]
#[ignore]
fn source_map_profile() {
    let sig = sig();
    let ctx = std::env::var("CTX").unwrap_or("(x : A)(b : B x)".into());
    let mut env = Env::new(&sig);
    let t = std::time::Instant::now();
    let ps = env.path_structure(&Fibration::over_empty(tel(&sig, &ctx))).unwrap();
    eprintln!("py {:?}", t.elapsed());
    let w = source_map(&mut env, &ps).unwrap();
    eprintln!("source map {:?}, {} defs", t.elapsed(), env.emitted().len());
    let nodes: usize = env.emitted().iter().map(|d| match d {
        idpath_core::Decl::Def { ty, body, params, .. } => ty.size() + body.size() + params.types().map(|t| t.size()).sum::<usize>(),
        _ => 0,
    }).sum();
    eprintln!("emitted nodes {nodes}, Tm {} Ty {}", std::mem::size_of::<idpath_core::Tm>(), std::mem::size_of::<idpath_core::Ty>());
    w.check(&mut env).unwrap();
    eprintln!("checked {:?}", t.elapsed());
}
