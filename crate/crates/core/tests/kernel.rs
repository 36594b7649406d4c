use idpath_core::checker::{add_decl, check, check_type};
use idpath_core::surface::{parse, Directive};
use idpath_core::Signature;

/// Runs every directive of a source text; returns the verdict of each check.
fn run(src: &str) -> Vec<bool> {
    let file = parse(src).expect("parse");
    let mut sig = Signature::new();
    let mut out = Vec::new();
    for (_, d) in file.directives {
        match d {
            Directive::Flag(_) => sig.strong_sums = true,
            Directive::Decl(d) => add_decl(&mut sig, d).expect("decl"),
            Directive::CheckTerm { ctx, tm, ty } => out.push(check(&sig, &ctx, &tm, &ty).accepted()),
            Directive::CheckType { ctx, ty } => out.push(check_type(&sig, &ctx, &ty).accepted()),
            Directive::Derive { .. } => {}
        }
    }
    out
}

const PRELUDE: &str = "postulate A : Type\npostulate B (x : A) : Type\n";

#[test]
fn symmetry_by_j() {
    let src = format!(
        "{PRELUDE}check (x : A)(y : A)(u : Id A x y) |- J (x y u : A) (Id A y x) (x . refl A x) x y u [] : Id A y x"
    );
    assert_eq!(run(&src), vec![true]);
}

#[test]
fn symmetry_wrong_type_rejected() {
    let src = format!(
        "{PRELUDE}check (x : A)(y : A)(u : Id A x y) |- J (x y u : A) (Id A y x) (x . refl A x) x y u [] : Id A x y"
    );
    assert_eq!(run(&src), vec![false]);
}

#[test]
fn transitivity_with_parameter() {
    let src = format!(
        "{PRELUDE}check (x : A)(y : A)(u : Id A x y)(z : A)(v : Id A y z) |- \
         J (y z v : A | (x0 : A)(u0 : Id A x0 y)) (Id A x0 z) (y x0 u0 . u0) y z v [x u] : Id A x z"
    );
    assert_eq!(run(&src), vec![true]);
}

#[test]
fn h_unit_law() {
    let src = format!(
        "{PRELUDE}check (x : A)(y : A)(u : Id A x y) |- \
         H (y z v : A | (x0 : A)(u0 : Id A x0 y)) (Id A x0 z) (y x0 u0 . u0) y [x u] : \
         Id (Id A x y) (J (y z v : A | (x0 : A)(u0 : Id A x0 y)) (Id A x0 z) (y x0 u0 . u0) y y (refl A y) [x u]) u"
    );
    assert_eq!(run(&src), vec![true]);
}

#[test]
fn transport_by_j() {
    let src = format!(
        "{PRELUDE}check (x : A)(y : A)(u : Id A x y)(b : B x) |- \
         J (x y u : A | (b0 : B x)) (B y) (x b0 . b0) x y u [b] : B y"
    );
    assert_eq!(run(&src), vec![true]);
}

#[test]
fn sums_need_flag() {
    assert_eq!(run(&format!("{PRELUDE}check (x : A) |- pair x x : Sig (y : A) A")), vec![false]);
    assert_eq!(
        run(&format!("flag strong_sums\n{PRELUDE}check (x : A) |- pair x x : Sig (y : A) A")),
        vec![true]
    );
}

#[test]
fn id_type_formation() {
    assert_eq!(run(&format!("{PRELUDE}check (x : A)(b : B x) |- Id (B x) b b type")), vec![true]);
    assert_eq!(run(&format!("{PRELUDE}check (x : A)(b : B x) |- Id (B x) b x type")), vec![false]);
}

#[test]
fn cached_judgments_track_the_context() {
    let src = format!(
        "{PRELUDE}postulate f (x : A) : B x\n\
         check (x : A) |- f x : B x\n\
         check (y : A)(x : B y) |- f x : B x\n\
         check (x : A) |- f x : B x\n\
         check (y : A)(x : B y) |- f x : B x"
    );
    assert_eq!(run(&src), vec![true, false, true, false]);
}

#[test]
fn cached_judgments_track_strong_sums() {
    let src = format!("{PRELUDE}check (x : A) |- pair x x : Sig (_ : A) A\nflag strong_sums\ncheck (x : A) |- pair x x : Sig (_ : A) A");
    assert_eq!(run(&src), vec![false, true]);
}
