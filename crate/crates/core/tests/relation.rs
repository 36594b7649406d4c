use idpath_core::cat::{sigma_collapse, Fibration, Morphism};
use idpath_core::checker::add_decl;
use idpath_core::pathtools::{build_py, path_object, similar_maps, EquivRelWitness, Env};
use idpath_core::surface::{parse, parse_telescope, Directive};
use idpath_core::{Signature, Telescope, Tm};

const SIG: &str = "postulate A : Type\npostulate B (x : A) : Type\npostulate C (x : A)(b : B x) : Type\npostulate a0 : A";

fn sig(sums: bool) -> Signature {
    let mut sig = Signature::new();
    sig.strong_sums = sums;
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
fn a_relation_is_similar_to_itself_by_identities() {
    let sig = sig(false);
    let mut env = Env::new(&sig);
    let ps = build_py(&mut env, &Fibration::over_empty(tel(&sig, "(x : A)(b : B x)"))).unwrap();
    let r = EquivRelWitness::of(&ps);
    r.check(&mut env).unwrap();
    let sim = similar_maps(&mut env, &r, &r).unwrap();
    assert_eq!(sim.forward, Morphism::identity(&r.total()));
    assert_eq!(sim.backward, Morphism::identity(&r.total()));
}

#[test]
fn rank_one_path_object_agrees_with_py() {
    let sig = sig(false);
    let mut env = Env::new(&sig);
    let fib = Fibration::over_empty(tel(&sig, "(x : A)"));
    let po = path_object(&mut env, &fib).unwrap();
    let py = build_py(&mut env, &fib).unwrap();
    assert_eq!(po, py);
    let sim = similar_maps(&mut env, &EquivRelWitness::of(&po), &EquivRelWitness::of(&py)).unwrap();
    assert_eq!(sim.forward.source, po.total());
}

#[test]
fn py_is_similar_to_the_path_object_of_the_collapsed_type() {
    let sig = sig(true);
    for ctx in ["", "(x : A)", "(x : A)(b : B x)", "(x : A)(b : B x)(c : C x b)"] {
        let mut env = Env::new(&sig);
        let fib = Fibration::over_empty(tel(&sig, ctx));
        let py = build_py(&mut env, &fib).unwrap();
        let sc = sigma_collapse(&env.sig, &fib).unwrap();
        assert!(sc.roundtrips(&env.sig), "{ctx}");
        let collapsed = Fibration::new(fib.base.clone(), Telescope::new().with("z", sc.ty.clone()));
        let po = path_object(&mut env, &collapsed).unwrap();
        let s = EquivRelWitness::along(&mut env, &fib, &po, &sc.fwd, &sc.bwd).unwrap();
        let r = EquivRelWitness::of(&py);
        let sim = similar_maps(&mut env, &r, &s).unwrap();
        // q H = p and p K = q
        assert!(s.projection().after(&sim.forward).equal(&env.sig, &r.projection()), "{ctx}");
        assert!(r.projection().after(&sim.backward).equal(&env.sig, &s.projection()), "{ctx}");
    }
}

#[test]
fn along_rejects_maps_that_are_not_inverse() {
    let sig = sig(true);
    let mut env = Env::new(&sig);
    let fib = Fibration::over_empty(tel(&sig, "(x : A)"));
    let sc = sigma_collapse(&env.sig, &fib).unwrap();
    let collapsed = Fibration::new(Telescope::new(), Telescope::new().with("z", sc.ty.clone()));
    let po = path_object(&mut env, &collapsed).unwrap();
    let constant = Morphism::new(fib.total(), collapsed.total(), vec![Tm::pair(Tm::Star, Tm::Const("a0".into(), vec![]))]);
    assert!(EquivRelWitness::along(&mut env, &fib, &po, &constant, &sc.bwd).is_err());
    assert!(EquivRelWitness::along(&mut env, &fib, &po, &sc.fwd, &sc.bwd).is_ok());
}
