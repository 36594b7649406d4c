//! Contractibility witnesses.
//!
//! A fibration `p : [B, Θ] -> B` is witnessed contractible by a section `c`
//! and a fibrewise homotopy from the identity to `c p`. The section of the
//! fibrewise path object is derived from these as `μ(H p1, σ(H p2))`, and
//! conversely.

use crate::cat::{Fibration, Morphism};
use crate::syntax::{Telescope, Tm};

use super::fill::PathInduction;
use super::homotopy::map_paths;
use super::{lvl, Env, HomotopyWitness, PathError, PathStructure, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractibleWitness {
    pub fib: Fibration,
    /// the path structure of `fib`
    pub path: PathStructure,
    /// `c : B -> [B, Θ]` with `p c = 1`
    pub section: Morphism,
    /// `1 ≃ c p`, fibrewise over `B`
    pub retraction: HomotopyWitness,
    /// `L : [B, Θ0, Θ1] -> P` with `(s, t) L = 1`
    pub path_section: Morphism,
}

impl ContractibleWitness {
    /// From a section (terms for `Θ` over `B`) and the path components of a
    /// homotopy `1 ≃ c p` over `[B, Θ]`.
    pub fn from_retraction(env: &mut Env, fib: &Fibration, c: Vec<Tm>, e: Vec<Tm>) -> Result<Self> {
        let ps = env.path_structure(fib)?;
        let b = fib.base.len();
        let n = fib.rank();
        let mut sterms = fib.base.vars(0);
        sterms.extend(c.iter().cloned());
        let section = Morphism::new(fib.base.clone(), fib.total(), sterms);
        let total = fib.total();
        let cp = section.after(&fib.projection());
        let retraction = HomotopyWitness::new(&env.sig, &ps, Morphism::identity(&total), cp, e)?;

        // L = μ(H θ0, σ (H θ1)) over [B, Θ0, Θ1]
        let q = ps.pair_ctx();
        let len = q.len();
        let bv: Vec<Tm> = (0..b).map(|i| lvl(len, i)).collect();
        let th0: Vec<Tm> = (0..n).map(|i| lvl(len, b + i)).collect();
        let th1: Vec<Tm> = (0..n).map(|i| lvl(len, b + n + i)).collect();
        let cb: Vec<Tm> = c.iter().map(|t| sub(t, &bv)).collect();
        let h_at = |th: &[Tm]| -> Vec<Tm> {
            let mut args = bv.clone();
            args.extend(th.iter().cloned());
            retraction.e_terms().iter().map(|t| sub(t, &args)).collect()
        };
        let h0 = h_at(&th0);
        let h1 = ps.sym_at(&bv, &th1, &cb, &h_at(&th1));
        let l = ps.trans_at(&bv, &th0, &cb, &h0, &th1, &h1);
        let mut lterms = q.vars(0);
        lterms.extend(l);
        let path_section = Morphism::new(q, ps.total(), lterms);
        let w = ContractibleWitness { fib: fib.clone(), path: ps, section, retraction, path_section };
        w.check(env)?;
        Ok(w)
    }

    /// From the two sections: `H θ = L(θ, c p θ)`.
    pub fn from_sections(env: &mut Env, fib: &Fibration, c: Vec<Tm>, l: &Morphism) -> Result<Self> {
        let ps = env.path_structure(fib)?;
        let b = fib.base.len();
        let total = fib.total();
        let len = total.len();
        let mut args = total.vars(0);
        let bv: Vec<Tm> = (0..b).map(|i| lvl(len, i)).collect();
        args.extend(c.iter().map(|t| sub(t, &bv)));
        let e: Vec<Tm> = l.terms[ps.pair_ctx().len()..].iter().map(|t| sub(t, &args)).collect();
        Self::from_retraction(env, fib, c, e)
    }

    /// Kernel check of both sections and their equations.
    pub fn check(&self, env: &mut Env) -> Result<()> {
        let sig = &env.sig;
        self.section.check(sig)?;
        if !self.fib.projection().after(&self.section).equal(sig, &Morphism::identity(&self.fib.base)) {
            return Err(PathError::Equation("p c = 1".into()));
        }
        self.retraction.check(sig)?;
        self.path_section.check(sig)?;
        let q = self.path.pair_ctx();
        if !self.path.st().after(&self.path_section).equal(sig, &Morphism::identity(&q)) {
            return Err(PathError::Equation("(s, t) L = 1".into()));
        }
        Ok(())
    }

    /// Path components of the retraction at `θ` (over `b`), all over one context.
    pub fn retract_at(&self, b: &[Tm], theta: &[Tm]) -> Vec<Tm> {
        let mut args = b.to_vec();
        args.extend(theta.iter().cloned());
        self.retraction.e_terms().iter().map(|t| sub(t, &args)).collect()
    }

    /// Section components at `b`.
    pub fn section_at(&self, b: &[Tm]) -> Vec<Tm> {
        let nb = self.fib.base.len();
        self.section.terms[nb..].iter().map(|t| sub(t, b)).collect()
    }

    /// The pullback along `f : B' -> B`, re-witnessed over the path structure
    /// of the pulled-back fibration.
    pub fn pullback(&self, env: &mut Env, f: &Morphism) -> Result<Self> {
        if f.target != self.fib.base {
            return Err(PathError::Cat(crate::cat::CatError::ContextMismatch(
                "the morphism does not end at the base".into(),
            )));
        }
        let (pb, _) = self.fib.pullback(&env.sig, f)?;
        let c: Vec<Tm> = self.section_at(&f.terms);
        let nb2 = pb.base.len();
        let total = pb.total();
        let len = total.len();
        let fb: Vec<Tm> = f.terms.iter().map(|t| t.shift(0, len - nb2)).collect();
        let theta: Vec<Tm> = (0..pb.rank()).map(|i| lvl(len, nb2 + i)).collect();
        let e = self.retract_at(&fb, &theta);
        Self::from_retraction(env, &pb, c, e)
    }
}

/// Case (i) of the characterization: `f` a section of `fib` and a homotopy `1 ≃ f p`.
pub fn from_homotopy(env: &mut Env, fib: &Fibration, f: &Morphism, hw: &HomotopyWitness) -> Result<ContractibleWitness> {
    let nb = fib.base.len();
    let c = f.terms[nb..].to_vec();
    ContractibleWitness::from_retraction(env, fib, c, hw.e_terms().to_vec())
}

/// The source map `s : PY -> Y` of a path structure is contractible.
pub fn source_map(env: &mut Env, ps: &PathStructure) -> Result<ContractibleWitness> {
    let g = ps.fib.base.len();
    let n = ps.rank();
    let t = ps.total();
    let len = t.len();
    let (sbase, sext) = t.split_at(g + n);
    let fib = Fibration::new(sbase.clone(), sext);
    let pss = env.path_structure(&fib)?;
    let v = |i: usize| lvl(len, i);
    let iv: Vec<Tm> = (0..g).map(v).collect();
    let th0: Vec<Tm> = (0..n).map(|i| v(g + i)).collect();

    // section r over [I, Θ0]
    let sl = g + n;
    let sv: Vec<Tm> = (0..sl).map(|i| lvl(sl, i)).collect();
    let mut c: Vec<Tm> = sv[g..].to_vec();
    c.extend(ps.refl_at(&sv[..g], &sv[g..]));
    if n == 0 {
        return ContractibleWitness::from_retraction(env, &fib, c, Vec::new());
    }

    // the retraction, by path induction on the first path
    let mut second: Vec<Tm> = th0.clone();
    second.extend(ps.refl_at(&iv, &th0));
    let mut args = t.vars(0);
    args.extend(second);
    let psi = pss.ext.subst(&args, 0);
    let x0 = v(g);
    let m = n - 1;
    let k = if m == 0 {
        let a = ps.fib.ext.0[0].1.subst(&iv, 0);
        let mut base = iv.clone();
        base.push(x0.clone());
        pss.refl_at(&base, &[x0.clone(), Tm::refl(a, x0.clone())])
    } else {
        let lower = ps.lower.as_deref().expect("rank > 0");
        let lw = source_map(env, lower)?;
        let ea = ps.ext.len();
        let th0l: Vec<Tm> = (0..m).map(|i| v(g + 1 + i)).collect();
        let th1l: Vec<Tm> = (0..m).map(|i| v(g + n + 1 + i)).collect();
        let beta: Vec<Tm> = (0..ea - 1).map(|i| v(g + 2 * n + 1 + i)).collect();
        let a = ps.fib.ext.0[0].1.subst(&iv, 0);
        let r = Tm::refl(a.clone(), x0.clone());
        let g0 = ps.gamma_at(&iv, &x0, &x0, &r, &th0l);
        let mut xb = iv.clone();
        xb.push(x0.clone());
        let coh = ps.coh_at(&xb, &th0l);
        // L'(g0; θ1, β; θ0, coh) in the lower source structure over (I, x0, g0)
        let mut largs = xb.clone();
        for part in [&g0, &th1l, &beta, &th0l, &coh] {
            largs.extend(part.iter().cloned());
        }
        let lpair = lw.path.pair_ctx().len();
        let lpath: Vec<Tm> = lw.path_section.terms[lpair..].iter().map(|t| sub(t, &largs)).collect();

        // embed the s'-fibre over (x0, g0) into the s-fibre over (x0, θ0)
        let prefix = sbase.clone();
        let pl = prefix.len();
        let pv: Vec<Tm> = (0..pl).map(|i| lvl(pl, i)).collect();
        let mut bargs: Vec<Tm> = pv[..=g].to_vec();
        let rp = Tm::refl(ps.fib.ext.0[0].1.subst(&pv[..g], 0), pv[g].clone());
        bargs.extend(ps.gamma_at(&pv[..g], &pv[g], &pv[g], &rp, &pv[g + 1..]));
        let fl = lw.fib.rank();
        let hl = pl + fl;
        let hv: Vec<Tm> = (0..hl).map(|i| lvl(hl, i)).collect();
        let mut h: Vec<Tm> = hv[..pl].to_vec();
        h.push(hv[g].clone());
        h.extend(hv[pl..pl + m].iter().cloned());
        h.push(Tm::refl(ps.fib.ext.0[0].1.subst(&hv[..g], 0), hv[g].clone()));
        h.extend(hv[pl + m..].iter().cloned());
        let kmap = map_paths(env, &lw.path, &prefix, &bargs, &h, &pss)?;
        let mut kargs: Vec<Tm> = (0..pl).map(v).collect();
        for part in [&th1l, &beta, &th0l, &coh, &lpath] {
            kargs.extend(part.iter().cloned());
        }
        kmap.iter().map(|t| sub(t, &kargs)).collect()
    };
    let ind = PathInduction::new_unchecked(&t, g, g + n, g + 2 * n);
    let kv: Vec<Tm> = k.iter().map(|t| ind.at_v(t)).collect();
    let e = ind.fill(env, &psi, &kv)?.d;
    ContractibleWitness::from_retraction(env, &fib, c, e)
}

/// Contractible fibrations compose: `lower : Y -> X` and `upper : Z -> Y`
/// give `Z -> X`.
pub fn compose(env: &mut Env, lower: &ContractibleWitness, upper: &ContractibleWitness) -> Result<ContractibleWitness> {
    if upper.fib.base != lower.fib.total() {
        return Err(PathError::Cat(crate::cat::CatError::ContextMismatch(
            "the upper fibration is not over the lower total context".into(),
        )));
    }
    let xb = lower.fib.base.clone();
    let x = xb.len();
    let ny = lower.fib.rank();
    let nz = upper.fib.rank();
    let fib = Fibration::new(xb.clone(), lower.fib.ext.concat(&upper.fib.ext));
    let psz = env.path_structure(&fib)?;

    // section (c1, c2 c1) over X
    let xv = xb.vars(0);
    let c1 = lower.section_at(&xv);
    let mut yb = xv.clone();
    yb.extend(c1.iter().cloned());
    let c2 = upper.section_at(&yb);
    let mut c = c1.clone();
    c.extend(c2);

    // over Z = [X, θy, θz]: (θy, θz) -> (θy, c2 θy) -> (c1, c2 c1)
    let z = fib.total();
    let len = z.len();
    let v = |i: usize| lvl(len, i);
    let xz: Vec<Tm> = (0..x).map(v).collect();
    let ty: Vec<Tm> = (0..ny).map(|i| v(x + i)).collect();
    let tz: Vec<Tm> = (0..nz).map(|i| v(x + ny + i)).collect();
    let mut yz = xz.clone();
    yz.extend(ty.iter().cloned());
    let c2y = upper.section_at(&yz);
    let c1x = lower.section_at(&xz);
    let mut yc = xz.clone();
    yc.extend(c1x.iter().cloned());
    let c2c1 = upper.section_at(&yc);

    // the upper retraction, as a path over X
    let up = &upper.path;
    let emb = map_paths(env, up, &up.fib.base, &up.fib.base.vars(0), &Morphism::identity(&up.fib.total()).terms, &psz)?;
    let mut a1 = yz.clone();
    a1.extend(tz.iter().cloned());
    a1.extend(c2y.iter().cloned());
    a1.extend(upper.retract_at(&yz, &tz));
    let p1: Vec<Tm> = emb.iter().map(|t| sub(t, &a1)).collect();

    // the lower retraction, pushed along θy |-> (θy, c2 θy)
    let lp = &lower.path;
    let yl = lower.fib.total().len();
    let yv: Vec<Tm> = (0..yl).map(|i| lvl(yl, i)).collect();
    let mut h = yv.clone();
    h.extend(upper.section_at(&yv));
    let push = map_paths(env, lp, &xb, &xb.vars(0), &h, &psz)?;
    let mut a2 = xz.clone();
    a2.extend(ty.iter().cloned());
    a2.extend(c1x.iter().cloned());
    a2.extend(lower.retract_at(&xz, &ty));
    let p2: Vec<Tm> = push.iter().map(|t| sub(t, &a2)).collect();

    let cat = |a: &[Tm], b: &[Tm]| -> Vec<Tm> { a.iter().chain(b.iter()).cloned().collect() };
    let e = psz.trans_at(&xz, &cat(&ty, &tz), &cat(&ty, &c2y), &p1, &cat(&c1x, &c2c1), &p2);
    ContractibleWitness::from_retraction(env, &fib, c, e)
}

/// Case (iv): a contractible fibration over a contractible base has a
/// contractible total space.
pub fn over_contractible_base(env: &mut Env, base: &ContractibleWitness, fib: &ContractibleWitness) -> Result<ContractibleWitness> {
    compose(env, base, fib)
}

/// The empty telescope over `ctx` is contractible.
pub fn identity(env: &mut Env, ctx: &Telescope) -> Result<ContractibleWitness> {
    ContractibleWitness::from_retraction(env, &Fibration::identity(ctx.clone()), Vec::new(), Vec::new())
}

fn sub(t: &Tm, args: &[Tm]) -> Tm {
    t.subst(args, 0)
}
