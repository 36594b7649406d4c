//! Seeded generators of well-typed syntax for property tests and the
//! randomized acceptance sweeps.
//!
//! Generated objects are built to check, but callers that need certainty
//! re-check them with the kernel. A generator returns `None` when it cannot
//! find an inhabitant of a requested type.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat::Morphism;
use crate::checker::add_decl;
use crate::defeq::{defeq_terms, defeq_types};
use crate::syntax::{Decl, Signature, Telescope, Tm, Ty};

const TYPE_NAMES: [&str; 3] = ["A", "B", "C"];
const ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_types: usize,
    pub max_terms: usize,
    pub strong_sums: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_types: 3, max_terms: 4, strong_sums: false }
    }
}

/// A random signature. The first type constant takes no parameters, so
/// [`ty`] always has something to return.
pub fn signature<R: Rng>(rng: &mut R, shape: Shape) -> Signature {
    let mut sig = Signature::new();
    sig.strong_sums = shape.strong_sums;
    let types = rng.gen_range(1..=shape.max_types.clamp(1, TYPE_NAMES.len()));
    for (i, name) in TYPE_NAMES.iter().enumerate().take(types) {
        let mut params = Telescope::new();
        if i > 0 && rng.gen_bool(0.5) {
            let j = rng.gen_range(0..i);
            if sig.decls()[j].params().is_empty() {
                params.push("x", Ty::Const(TYPE_NAMES[j].into(), vec![]));
            }
        }
        add_decl(&mut sig, Decl::TypeConst { name: (*name).into(), params }).expect("fresh type constant");
    }
    let terms = rng.gen_range(0..=shape.max_terms);
    for k in 0..terms {
        let mut params = Telescope::new();
        for i in 0..rng.gen_range(0..=2) {
            if let Some(t) = ty(rng, &sig, &params, 1) {
                params.push(format!("p{i}").as_str(), t);
            }
        }
        if let Some(t) = ty(rng, &sig, &params, 1) {
            // a failed check only drops the constant
            let _ = add_decl(&mut sig, Decl::TermConst { name: format!("c{k}"), params, ty: t });
        }
    }
    sig
}

/// Instantiates the parameters of a declaration with random terms over `ctx`.
fn spine<R: Rng>(rng: &mut R, sig: &Signature, ctx: &Telescope, params: &Telescope, depth: usize) -> Option<Vec<Tm>> {
    let mut out = Vec::with_capacity(params.len());
    for (_, p) in &params.0 {
        let want = p.subst(&out, 0);
        out.push(term(rng, sig, ctx, &want, depth)?);
    }
    Some(out)
}

/// A random type over `ctx`; `depth` bounds the nesting of `Id` and `Sig`.
pub fn ty<R: Rng>(rng: &mut R, sig: &Signature, ctx: &Telescope, depth: usize) -> Option<Ty> {
    for _ in 0..ATTEMPTS {
        let mut kinds = vec![0u8, 0];
        if depth > 0 {
            kinds.push(1);
        }
        if sig.strong_sums {
            kinds.push(2);
            if depth > 0 {
                kinds.push(3);
            }
        }
        let got = match kinds.choose(rng).copied().unwrap_or(0) {
            0 => {
                let consts: Vec<&Decl> =
                    sig.decls().iter().filter(|d| matches!(d, Decl::TypeConst { .. })).collect();
                let d = *consts.choose(rng)?;
                spine(rng, sig, ctx, d.params(), depth).map(|sp| Ty::Const(d.name().into(), sp))
            }
            1 => ty(rng, sig, ctx, depth - 1).and_then(|a| {
                let x = term(rng, sig, ctx, &a, depth)?;
                let y = if rng.gen_bool(0.5) { x.clone() } else { term(rng, sig, ctx, &a, depth)? };
                Some(Ty::id(a, x, y))
            }),
            2 => Some(Ty::Unit),
            _ => ty(rng, sig, ctx, depth - 1).and_then(|a| {
                let inner = ctx.clone().with("z", a.clone());
                let b = ty(rng, sig, &inner, depth - 1)?;
                Some(Ty::sigma("z", a, b))
            }),
        };
        if got.is_some() {
            return got;
        }
    }
    None
}

/// A random term of type `want` over `ctx`, or `None` if none was found.
pub fn term<R: Rng>(rng: &mut R, sig: &Signature, ctx: &Telescope, want: &Ty, depth: usize) -> Option<Tm> {
    let mut cands = Vec::new();
    for i in 0..ctx.len() {
        let t = ctx.var_type(i).expect("index in range");
        if defeq_types(sig, ctx, &t, want) {
            cands.push(Tm::Var(i));
        }
    }
    match want {
        Ty::Id(a, x, y) if defeq_terms(sig, ctx, a, x, y) => cands.push(Tm::refl((**a).clone(), (**x).clone())),
        Ty::Unit => cands.push(Tm::Star),
        Ty::Sigma(_, a, b) if depth > 0 => {
            if let Some(fst) = term(rng, sig, ctx, a, depth - 1) {
                let b = b.subst(std::slice::from_ref(&fst), 0);
                if let Some(snd) = term(rng, sig, ctx, &b, depth - 1) {
                    cands.push(Tm::pair(fst, snd));
                }
            }
        }
        _ => {}
    }
    if depth > 0 {
        let mut consts: Vec<&Decl> = sig.decls().iter().filter(|d| matches!(d, Decl::TermConst { .. })).collect();
        consts.shuffle(rng);
        for d in consts.into_iter().take(3) {
            let Decl::TermConst { name, params, ty } = d else { unreachable!() };
            if let Some(sp) = spine(rng, sig, ctx, params, depth - 1) {
                if defeq_types(sig, ctx, &ty.subst(&sp, 0), want) {
                    cands.push(Tm::Const(name.clone(), sp));
                }
            }
        }
    }
    cands.choose(rng).cloned()
}

/// A random telescope of exactly `len` entries over `base`.
pub fn telescope<R: Rng>(rng: &mut R, sig: &Signature, base: &Telescope, len: usize) -> Option<Telescope> {
    let mut ext = Telescope::new();
    for i in 0..len {
        let t = ty(rng, sig, &base.concat(&ext), 1)?;
        ext.push(format!("v{}", base.len() + i).as_str(), t);
    }
    Some(ext)
}

/// A random morphism `src -> tgt`; `tgt` must be a closed context.
pub fn morphism<R: Rng>(rng: &mut R, sig: &Signature, src: &Telescope, tgt: &Telescope) -> Option<Morphism> {
    let mut terms: Vec<Tm> = Vec::with_capacity(tgt.len());
    for (_, t) in &tgt.0 {
        let want = t.subst(&terms, 0);
        terms.push(term(rng, sig, src, &want, 2)?);
    }
    Some(Morphism::new(src.clone(), tgt.clone(), terms))
}

/// A typing judgment `ctx |- tm : ty`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    pub ctx: Telescope,
    pub tm: Tm,
    pub ty: Ty,
}

/// A random judgment with a context of length `1..=3`.
pub fn judgment<R: Rng>(rng: &mut R, sig: &Signature) -> Option<Judgment> {
    for _ in 0..ATTEMPTS {
        let len = rng.gen_range(1..=3);
        let Some(ctx) = telescope(rng, sig, &Telescope::new(), len) else { continue };
        let Some(ty) = ty(rng, sig, &ctx, 2) else { continue };
        if let Some(tm) = term(rng, sig, &ctx, &ty, 2) {
            return Some(Judgment { ctx, tm, ty });
        }
    }
    None
}

/// Inserts a fresh variable of a random type at a random position.
pub fn weaken<R: Rng>(rng: &mut R, sig: &Signature, j: &Judgment) -> Option<Judgment> {
    let k = rng.gen_range(0..=j.ctx.len());
    let (pre, post) = j.ctx.split_at(k);
    let w = ty(rng, sig, &pre, 1)?;
    let ctx = pre.with("w", w).concat(&post.shift(0, 1));
    let m = post.len();
    Some(Judgment { ctx, tm: j.tm.shift(m, 1), ty: j.ty.shift(m, 1) })
}

/// Replaces a random context variable by a random term of its type.
pub fn substitute<R: Rng>(rng: &mut R, sig: &Signature, j: &Judgment) -> Option<Judgment> {
    let k = rng.gen_range(0..j.ctx.len());
    let (pre, rest) = j.ctx.split_at(k);
    let (x, post) = rest.split_at(1);
    let a = term(rng, sig, &pre, &x.0[0].1, 2)?;
    let arg = std::slice::from_ref(&a);
    let m = post.len();
    Some(Judgment { ctx: pre.concat(&post.subst(arg, 0)), tm: j.tm.subst(arg, m), ty: j.ty.subst(arg, m) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check, check_type, context_wf};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_syntax_checks() {
        let mut rng = StdRng::seed_from_u64(7);
        for sums in [false, true] {
            for _ in 0..40 {
                let sig = signature(&mut rng, Shape { strong_sums: sums, ..Shape::default() });
                let ctx = telescope(&mut rng, &sig, &Telescope::new(), 3).unwrap();
                context_wf(&sig, &ctx).unwrap();
                let t = ty(&mut rng, &sig, &ctx, 2).unwrap();
                assert!(check_type(&sig, &ctx, &t).accepted());
                if let Some(x) = term(&mut rng, &sig, &ctx, &t, 2) {
                    assert!(check(&sig, &ctx, &x, &t).accepted());
                }
                if let Some(m) = morphism(&mut rng, &sig, &ctx, &ctx) {
                    m.check(&sig).unwrap();
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = signature(&mut StdRng::seed_from_u64(3), Shape::default());
        let b = signature(&mut StdRng::seed_from_u64(3), Shape::default());
        assert_eq!(a.decls(), b.decls());
    }
}
