use idpath_core::cat::{Fibration, Morphism};
use idpath_core::checker::add_decl;
use idpath_core::pathtools::equiv::{
    compose_equiv, hom_refl, lower_fill_leftmap, two_out_of_six, HomotopyEquivalence,
};
use idpath_core::pathtools::homotopy::transport_paths;
use idpath_core::pathtools::{Env, HomotopyWitness};
use idpath_core::surface::{parse, parse_telescope, parse_tm, Directive};
use idpath_core::{Signature, Telescope, Tm};

const SIG: &str = "\
postulate A : Type
postulate B (x : A) : Type
postulate C (x : A)(b : B x) : Type
postulate bsec (x : A) : B x
postulate csec (x : A)(b : B x) : C x b
postulate Q : Type
postulate R : Type
postulate S : Type
postulate f (x : A) : Q
postulate g (y : Q) : R
postulate h (z : R) : S
postulate a (z : R) : A
postulate b (w : S) : Q
postulate ua (x : A) : Id A (a (g (f x))) x
postulate ca (z : R) : Id R (g (f (a z))) z
postulate ub (y : Q) : Id Q (b (h (g y))) y
postulate cb (w : S) : Id S (h (g (b w))) w";

fn sig() -> Signature {
    let mut sig = Signature::new();
    for (_, d) in parse(SIG).unwrap().directives {
        if let Directive::Decl(d) = d {
            add_decl(&mut sig, d).unwrap();
        }
    }
    sig
}

fn names(sig: &Signature) -> std::collections::HashSet<String> {
    sig.decls().iter().map(|d| d.name().to_string()).collect()
}

fn tel(sig: &Signature, s: &str) -> Telescope {
    parse_telescope(s, names(sig)).unwrap()
}

/// A map out of `src` given by surface terms over it.
fn map(sig: &Signature, src: &str, tgt: &str, terms: &[&str]) -> Morphism {
    let source = tel(sig, src);
    let ctx = source.names();
    let terms = terms.iter().map(|t| parse_tm(t, names(sig), &ctx).unwrap()).collect();
    Morphism::new(source, tel(sig, tgt), terms)
}

fn var(len: usize, level: usize) -> Tm {
    Tm::Var(len - 1 - level)
}

#[test]
fn transport_along_paths_of_ranks_one_and_two() {
    let sig = sig();
    for (ctx, fam) in [("(x : A)", "(b : B x)"), ("(x : A)(b : B x)", "(c : C x b)")] {
        let mut env = Env::new(&sig);
        let y = tel(&sig, ctx);
        let n = y.len();
        let ps = env.path_structure(&Fibration::over_empty(y.clone())).unwrap();
        let fam = parse_telescope(&format!("{ctx}{fam}"), names(&sig)).unwrap().split_at(n).1;
        let tr = transport_paths(&mut env, &ps, &fam).unwrap();
        let total = ps.total();
        let l = total.len();
        let at0: Vec<Tm> = (0..n).map(|i| var(l, i)).collect();
        let src = total.concat(&fam.subst(&at0, 0));
        let len = src.len();
        let mut terms: Vec<Tm> = (0..n).map(|i| var(len, n + i)).collect();
        terms.extend(tr);
        Morphism::new(src, y.concat(&fam), terms).check(&env.sig).unwrap();
    }
}

#[test]
fn lower_filler_for_an_isomorphism_with_reflexivity() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let t = tel(&sig, "(x : A)");
    let id = Morphism::identity(&t);
    let hw = hom_refl(&mut env, &id).unwrap();
    let p = Fibration::new(t.clone(), tel(&sig, "(x : A)(b : B x)").split_at(1).1);
    let u = map(&sig, "(x : A)", "(x : A)(b : B x)", &["x", "bsec x"]);
    let d = lower_fill_leftmap(&mut env, &id, &id, &hw, &p, &u, &id).unwrap();
    assert!(p.projection().after(&d).equal(&env.sig, &id));
}

#[test]
fn lower_filler_for_the_source_map_with_section_r() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let a = tel(&sig, "(x : A)");
    let ps = env.path_structure(&Fibration::over_empty(a.clone())).unwrap();
    let (s, r) = (ps.s(), ps.r());
    let sr = s.after(&r);
    let hw = hom_refl(&mut env, &Morphism::identity(&a)).unwrap();
    let hw = HomotopyWitness::new(&env.sig, &hw.path, sr, hw.g.clone(), hw.e_terms().to_vec()).unwrap();
    let p = Fibration::new(a.clone(), tel(&sig, "(x : A)(b : B x)").split_at(1).1);
    let pa = ps.total();
    let u = Morphism::new(pa.clone(), p.total(), vec![var(pa.len(), 0), Tm::Const("bsec".into(), vec![var(pa.len(), 0)])]);
    let n = Morphism::identity(&a);
    let d = lower_fill_leftmap(&mut env, &s, &r, &hw, &p, &u, &n).unwrap();
    assert_eq!(d.source, a);
}

#[test]
fn lower_filler_over_a_rank_two_base() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let t = tel(&sig, "(x : A)(b : B x)");
    let id = Morphism::identity(&t);
    let hw = hom_refl(&mut env, &id).unwrap();
    let p = Fibration::new(t.clone(), tel(&sig, "(x : A)(b : B x)(c : C x b)").split_at(2).1);
    let full = tel(&sig, "(x : A)(b : B x)(c : C x b)");
    let u = map(&sig, "(x : A)(b : B x)", "(x : A)(b : B x)(c : C x b)", &["x", "b", "csec x b"]);
    let d = lower_fill_leftmap(&mut env, &id, &id, &hw, &p, &u, &id).unwrap();
    assert!(p.projection().after(&d).equal(&env.sig, &id));
    assert_eq!(d.target, full);
}

#[test]
fn square_that_does_not_commute_is_rejected() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let t = tel(&sig, "(x : A)");
    let id = Morphism::identity(&t);
    let hw = hom_refl(&mut env, &id).unwrap();
    let p = Fibration::new(t.clone(), tel(&sig, "(x : A)(b : B x)").split_at(1).1);
    let u = map(&sig, "(x : A)", "(x : A)(b : B x)", &["a (g (f x))", "bsec (a (g (f x)))"]);
    assert!(lower_fill_leftmap(&mut env, &id, &id, &hw, &p, &u, &id).is_err());
}

fn postulated(env: &mut Env, fwd: Morphism, inv: Morphism, unit: &str, counit: &str) -> HomotopyEquivalence {
    let hom = |env: &mut Env, m: Morphism, c: &str| {
        let id = Morphism::identity(&m.target);
        let ps = env.path_structure(&Fibration::over_empty(m.target.clone())).unwrap();
        let e = vec![Tm::Const(c.into(), vec![Tm::Var(0)])];
        HomotopyWitness::new(&env.sig, &ps, m, id, e).unwrap()
    };
    let u = hom(env, inv.after(&fwd), unit);
    let c = hom(env, fwd.after(&inv), counit);
    HomotopyEquivalence::new(env, fwd, inv, u, c).unwrap()
}

#[test]
fn composite_of_isomorphisms() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let t = tel(&sig, "(x : A)(b : B x)");
    let id = Morphism::identity(&t);
    let e = HomotopyEquivalence::from_inverse(&mut env, &id, &id).unwrap();
    let c = compose_equiv(&mut env, &e, &e.flip()).unwrap();
    assert!(c.map.equal(&env.sig, &id));
}

#[test]
fn two_out_of_six_with_postulated_homotopies() {
    let sig = sig();
    let mut env = Env::new(&sig);
    let f = map(&sig, "(x : A)", "(y : Q)", &["f x"]);
    let g = map(&sig, "(y : Q)", "(z : R)", &["g y"]);
    let h = map(&sig, "(z : R)", "(w : S)", &["h z"]);
    let a = map(&sig, "(z : R)", "(x : A)", &["a z"]);
    let b = map(&sig, "(w : S)", "(y : Q)", &["b w"]);
    let gf = postulated(&mut env, g.after(&f), a, "ua", "ca");
    let hg = postulated(&mut env, h.after(&g), b, "ub", "cb");
    let out = two_out_of_six(&mut env, &f, &g, &h, &gf, &hg).unwrap();
    for e in [&out.f, &out.g, &out.h, &out.hgf] {
        e.check(&mut env).unwrap();
    }
    assert!(out.hgf.map.equal(&env.sig, &h.after(&g).after(&f)));
}
