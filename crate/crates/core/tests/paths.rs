use idpath_core::cat::Fibration;
use idpath_core::checker::add_decl;
use idpath_core::pathtools::{build_py, Env};
use idpath_core::surface::{parse, Directive};
use idpath_core::{Signature, Telescope};

fn sig_and_ctx(src: &str, ctx: &str) -> (Signature, Telescope) {
    let file = parse(&format!("{src}\nderive py {ctx}")).unwrap();
    let mut sig = Signature::new();
    let mut tel = Telescope::new();
    for (_, d) in file.directives {
        match d {
            Directive::Decl(d) => add_decl(&mut sig, d).unwrap(),
            Directive::Derive { tel: t, .. } => tel = t,
            _ => {}
        }
    }
    (sig, tel)
}

const SIG: &str = "postulate A : Type\npostulate B (x : A) : Type\npostulate C (x : A)(b : B x) : Type\npostulate D (x : A)(b : B x)(c : C x b) : Type";

#[test]
fn py_ranks() {
    for ctx in ["", "(x : A)", "(x : A)(b : B x)", "(x : A)(b : B x)(c : C x b)"] {
        let (sig, tel) = sig_and_ctx(SIG, ctx);
        let t = std::time::Instant::now();
        let mut env = Env::new(&sig);
        let ps = build_py(&mut env, &Fibration::over_empty(tel.clone()));
        eprintln!("{ctx}: {:?} in {:?}", ps.as_ref().err(), t.elapsed());
        let ps = ps.unwrap();
        assert_eq!(ps.ext.len(), tel.len());
    }
}

#[test]
#[ignore]
fn py_profile() {
    use idpath_core::pathtools::PathStructure;
    let ctx = std::env::var("CTX").unwrap_or("(x : A)(b : B x)(c : C x b)".into());
    let (sig, tel) = sig_and_ctx(SIG, &ctx);
    let t = std::time::Instant::now();
    let mut env = Env::new(&sig);
    let ps = PathStructure::construct(&mut env, &Telescope::new(), &tel).unwrap();
    let sig = env.sig.clone();
    eprintln!("emitted {} defs", env.emitted().len());
    let sz = |v: &[idpath_core::Tm]| v.iter().map(|t| t.size()).sum::<usize>();
    eprintln!("construct {:?}: ext {} refl {} sym {} trans {}", t.elapsed(),
        ps.ext.types().map(|t| t.size()).sum::<usize>(), sz(&ps.refl), sz(&ps.sym), sz(&ps.trans));
    let t = std::time::Instant::now();
    idpath_core::checker::context_wf(&sig, &ps.total()).unwrap();
    eprintln!("ctx {:?}", t.elapsed());
    let t = std::time::Instant::now();
    ps.r().check(&sig).unwrap();
    eprintln!("r {:?}", t.elapsed());
    let t = std::time::Instant::now();
    ps.sym_map().check(&sig).unwrap();
    eprintln!("sym {:?}", t.elapsed());
    let t = std::time::Instant::now();
    ps.trans_map().check(&sig).unwrap();
    eprintln!("trans {:?}", t.elapsed());
}
