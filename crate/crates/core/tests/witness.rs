use idpath_core::cat::Fibration;
use idpath_core::checker::add_decl;
use idpath_core::pathtools::witness::{groupoid_laws, path_fib, sym_witness, trans_witness, transport};
use idpath_core::pathtools::Env;
use idpath_core::surface::{parse, parse_telescope, parse_ty};
use idpath_core::{Signature, Telescope, Ty};

const SIG: &str = "postulate A : Type\npostulate B (x : A) : Type\npostulate C (x : A)(b : B x) : Type\npostulate a0 : A";

fn sig() -> Signature {
    let mut sig = Signature::new();
    for (_, d) in parse(SIG).unwrap().directives {
        if let idpath_core::surface::Directive::Decl(d) = d {
            add_decl(&mut sig, d).unwrap();
        }
    }
    sig
}

fn globals(sig: &Signature) -> std::collections::HashSet<String> {
    sig.decls().iter().map(|d| d.name().to_string()).collect()
}

fn ty(sig: &Signature, ctx: &[&str], s: &str) -> Ty {
    let names: Vec<String> = ctx.iter().map(|s| s.to_string()).collect();
    parse_ty(s, globals(sig), &names).unwrap()
}

fn tel(sig: &Signature, s: &str) -> Telescope {
    parse_telescope(s, globals(sig)).unwrap()
}

#[test]
fn sym_and_trans_over_empty_and_nonempty_contexts() {
    let sig = sig();
    for (g, names, a) in [("", vec![], "A"), ("(x : A)", vec!["x"], "B x"), ("(x : A)(b : B x)", vec!["x", "b"], "C x b")] {
        let mut env = Env::new(&sig);
        let gamma = tel(&sig, g);
        let a = ty(&sig, &names, a);
        let s = sym_witness(&mut env, &gamma, &a).unwrap();
        s.unit.check(&env.sig).unwrap();
        let t = trans_witness(&mut env, &gamma, &a).unwrap();
        t.unit.check(&env.sig).unwrap();
        assert!(env.emitted().len() >= 2);
    }
}

#[test]
fn transport_rank_one_and_two() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let base = tel(&sig, "(x : A)");
    let fib = Fibration::new(base.clone(), tel(&sig, "(x : A)(b : B x)").split_at(1).1);
    let tw = transport(&mut env, &fib).unwrap();
    tw.coherence.check(&env.sig).unwrap();
    let fib2 = Fibration::new(base, tel(&sig, "(x : A)(b : B x)(c : C x b)").split_at(1).1);
    let tw2 = transport(&mut env, &fib2).unwrap();
    tw2.coherence.check(&env.sig).unwrap();
}

#[test]
fn groupoid_laws_check() {
    let sig = sig();
    for (g, names, a) in [("", vec![], "A"), ("(x : A)", vec!["x"], "B x")] {
        let mut env = Env::new(&sig);
        let gamma = tel(&sig, g);
        let a = ty(&sig, &names, a);
        let t = std::time::Instant::now();
        let laws = groupoid_laws(&mut env, &gamma, &a).unwrap();
        for h in laws.all() {
            h.check(&env.sig).unwrap();
            assert_eq!(h.path.fib, path_fib(&gamma, &a));
        }
        eprintln!("groupoid {g}: {:?}, {} defs", t.elapsed(), env.emitted().len());
    }
}

mod homotopies {
    use super::*;
    use idpath_core::cat::Morphism;
    use idpath_core::pathtools::homotopy::{pair_homotopy, whisker_post};
    use idpath_core::surface::parse_tm;

    fn tm(sig: &Signature, ctx: &[&str], s: &str) -> idpath_core::Tm {
        let names: Vec<String> = ctx.iter().map(|s| s.to_string()).collect();
        parse_tm(s, globals(sig), &names).unwrap()
    }

    fn sig2() -> Signature {
        let mut sig = super::sig();
        let src = "postulate bb (x : A) : B x\npostulate cc (x : A)(b : B x) : C x b";
        for (_, d) in parse_with(&sig, src) {
            add_decl(&mut sig, d).unwrap();
        }
        sig
    }

    fn parse_with(sig: &Signature, src: &str) -> Vec<(idpath_core::surface::Pos, idpath_core::Decl)> {
        idpath_core::surface::parse_with_globals(src, globals(sig))
            .unwrap()
            .directives
            .into_iter()
            .filter_map(|(p, d)| match d {
                idpath_core::surface::Directive::Decl(d) => Some((p, d)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn whisker_identity_and_a_rank_one_map() {
        let sig = sig2();
        let mut env = Env::new(&sig);
        let a = ty(&sig, &[], "A");
        let laws = groupoid_laws(&mut env, &Telescope::new(), &a).unwrap();
        let p = idpath_core::pathtools::witness::path_ctx(&Telescope::new(), &a);
        for h0 in laws.all() {
            let id = Morphism::identity(&p);
            let w = whisker_post(&mut env, &id, h0).unwrap();
            assert!(w.f.equal(&env.sig, &h0.f) && w.g.equal(&env.sig, &h0.g));
            // u |-> μ(u, refl y)
            let mu = laws.trans.at(&[], [&idpath_core::Tm::Var(2), &idpath_core::Tm::Var(1), &idpath_core::Tm::Var(0), &idpath_core::Tm::Var(1), &tm(&env.sig, &["x", "y", "u"], "refl A y")]);
            let h = Morphism::new(p.clone(), p.clone(), vec![idpath_core::Tm::Var(2), idpath_core::Tm::Var(1), mu]);
            whisker_post(&mut env, &h, h0).unwrap().check(&env.sig).unwrap();
        }
    }

    #[test]
    fn whisker_rank_two_into_rank_one() {
        let sig = sig2();
        let mut env = Env::new(&sig);
        let base = tel(&sig, "(x : A)");
        let fib = Fibration::new(base.clone(), tel(&sig, "(x : A)(b : B x)(c : C x b)").split_at(1).1);
        let tw = transport(&mut env, &fib).unwrap();
        let y = fib.total();
        let proj = Morphism::projection(&y, 2);
        let w = whisker_post(&mut env, &proj, &tw.coherence).unwrap();
        w.check(&env.sig).unwrap();
        let id = Morphism::identity(&y);
        whisker_post(&mut env, &id, &tw.coherence).unwrap();
        // composite whisker agrees with whiskering twice on endpoints
        let h2 = Morphism::new(tel(&sig, "(x : A)(b : B x)"), tel(&sig, "(x : A)(b : B x)"), vec![idpath_core::Tm::Var(1), tm(&sig, &["x", "b"], "bb x")]);
        let once = whisker_post(&mut env, &h2.after(&proj), &tw.coherence).unwrap();
        let twice = whisker_post(&mut env, &h2, &w).unwrap();
        assert!(once.f.equal(&env.sig, &twice.f) && once.g.equal(&env.sig, &twice.g));
    }

    #[test]
    fn pair_with_a_constant_map() {
        let sig = sig2();
        let mut env = Env::new(&sig);
        let a = ty(&sig, &[], "A");
        let s = sym_witness(&mut env, &Telescope::new(), &a).unwrap();
        let w = s.unit.f.source.clone();
        let target = tel(&sig, "(x : A)(y : A)(b : B y)");
        let h = Morphism::new(w, target, vec![idpath_core::Tm::Var(0), idpath_core::Tm::Var(0), tm(&sig, &["x"], "bb x")]);
        let p = pair_homotopy(&mut env, &s.unit, &h).unwrap();
        p.check(&env.sig).unwrap();
        assert_eq!(p.path.rank(), 2);
    }
}
