//! Rank-1 witnesses for a type `A` over a context `Γ`: symmetry, transitivity,
//! transport, the five groupoid laws, and cancellation of recognized
//! equivalences from homotopies.
//!
//! Homotopies between maps into `P_A = [Γ, x, y, u : Id A x y]` are taken
//! fibrewise over `[Γ, x, y]`, so their path components live in `Id (Id A x y)`.

use crate::cat::{Fibration, Morphism};
use crate::syntax::{rebase_tm, xyu_telescope, JElim, Motive, Telescope, Tm, Ty};

use super::fill::{is_structural_weq, lift, transport_terms, PathInduction};
use super::{h_of_j, hints3, lvl, sym_term, trans_term, Env, HomotopyWitness, PathError, PathStructure, Result};

/// `[Γ, x : A, y : A, u : Id A x y]`
pub fn path_ctx(gamma: &Telescope, a: &Ty) -> Telescope {
    gamma.concat(&xyu_telescope(&hints3("x", "y", "u"), a))
}

/// `P_A -> [Γ, x, y]`
pub fn path_fib(gamma: &Telescope, a: &Ty) -> Fibration {
    let (base, ext) = path_ctx(gamma, a).split_at(gamma.len() + 2);
    Fibration::new(base, ext)
}

/// `ap (w. body) p : Id T body[a] body[b]`, where `body` lives over `[C, w : W]`
/// and `T` over `C` does not mention `w`.
pub fn ap_term(w: &Ty, t: &Ty, body: &Tm, a: &Tm, b: &Tm, p: &Tm) -> Tm {
    let m = Motive {
        names: hints3("x", "y", "u"),
        ty: w.clone(),
        delta: Telescope::new(),
        motive: Ty::id(t.shift(0, 3), rebase_tm(body, 0, 1, 3, &[Tm::Var(2)]), rebase_tm(body, 0, 1, 3, &[Tm::Var(1)])),
        branch: Tm::refl(t.shift(0, 1), body.clone()),
    };
    Tm::J(Box::new(JElim { m, a: a.clone(), b: b.clone(), p: p.clone(), spine: Vec::new() }))
}

fn inst(t: &Tm, args: &[Tm]) -> Tm {
    t.subst(args, 0)
}

fn cat(parts: &[&[Tm]]) -> Vec<Tm> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `σ : Id A y x` over `P_A`, with `σ r ≃ r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymWitness {
    pub gamma: Telescope,
    pub ty: Ty,
    /// the emitted constant applied to the variables of `P_A`
    pub sigma: Tm,
    /// the eliminator it names
    pub body: Tm,
    /// `P_A -> P_A` over the swap
    pub sigma_map: Morphism,
    pub unit: HomotopyWitness,
}

impl SymWitness {
    /// `σ(x, y, u)` with `gamma_args` for `Γ`, all over one context.
    pub fn at(&self, gamma_args: &[Tm], x: &Tm, y: &Tm, u: &Tm) -> Tm {
        inst(&self.sigma, &cat(&[gamma_args, &[x.clone(), y.clone(), u.clone()]]))
    }

    /// `H : Id (Id A x x) σ(refl x) (refl x)`
    pub fn h_at(&self, gamma_args: &[Tm], x: &Tm) -> Tm {
        let r = Tm::refl(self.ty.subst(gamma_args, 0), x.clone());
        h_of_j(&inst(&self.body, &cat(&[gamma_args, &[x.clone(), x.clone(), r]]))).expect("eliminator")
    }
}

pub fn sym_witness(env: &mut Env, gamma: &Telescope, a: &Ty) -> Result<SymWitness> {
    let g = gamma.len();
    let p = path_ctx(gamma, a);
    env.context_wf(&p)?;
    let body = sym_term(&a.shift(0, 3), &Tm::Var(2), &Tm::Var(1), &Tm::Var(0));
    let sigma = env.define("sym", &p, body.clone())?;
    let gv: Vec<Tm> = (0..g).map(|i| lvl(g + 3, i)).collect();
    let mut swap = gv.clone();
    swap.extend([Tm::Var(1), Tm::Var(2), sigma.clone()]);
    let sigma_map = Morphism::new(p.clone(), p.clone(), swap);
    sigma_map.check(&env.sig)?;

    let gr: Vec<Tm> = (0..g).map(|i| lvl(g + 1, i)).collect();
    let x = Tm::Var(0);
    let r = Tm::refl(a.shift(0, 1), x.clone());
    let rctx = gamma.clone().with("x", a.clone());
    let args = cat(&[&gr, &[x.clone(), x.clone(), r.clone()]]);
    let f = Morphism::new(rctx.clone(), p.clone(), cat(&[&gr, &[x.clone(), x.clone(), inst(&sigma, &args)]]));
    let gm = Morphism::new(rctx, p, cat(&[&gr, &[x.clone(), x, r]]));
    let ps = env.path_structure(&path_fib(gamma, a))?;
    let h = h_of_j(&inst(&body, &args)).expect("eliminator");
    let unit = HomotopyWitness::new(&env.sig, &ps, f, gm, vec![h])?;
    Ok(SymWitness { gamma: gamma.clone(), ty: a.clone(), sigma, body, sigma_map, unit })
}

/// `μ : Id A x z` over `[Γ, x, y, u : Id A x y, z, v : Id A y z]`, by `J` on
/// `v` with the parameters `(x, u)`, and the unit law `μ(u, refl) ≃ u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransWitness {
    pub gamma: Telescope,
    pub ty: Ty,
    /// `[Γ, x, y, u, z, v]`
    pub ctx: Telescope,
    pub mu: Tm,
    pub body: Tm,
    /// `τ : [Γ, x, y, u, z, v] -> P_A`
    pub tau_map: Morphism,
    pub unit: HomotopyWitness,
}

impl TransWitness {
    pub fn at(&self, gamma_args: &[Tm], pts: [&Tm; 5]) -> Tm {
        inst(&self.mu, &cat(&[gamma_args, &pts.map(Tm::clone)]))
    }

    /// `H : Id (Id A x y) μ(u, refl y) u`
    pub fn h_at(&self, gamma_args: &[Tm], x: &Tm, y: &Tm, u: &Tm) -> Tm {
        let r = Tm::refl(self.ty.subst(gamma_args, 0), y.clone());
        let args = cat(&[gamma_args, &[x.clone(), y.clone(), u.clone(), y.clone(), r]]);
        h_of_j(&inst(&self.body, &args)).expect("eliminator")
    }
}

/// `[Γ, x, y, u : Id A x y, z, v : Id A y z]`
pub fn comp_ctx(gamma: &Telescope, a: &Ty) -> Telescope {
    path_ctx(gamma, a).with("z", a.shift(0, 3)).with("v", Ty::id(a.shift(0, 4), Tm::Var(2), Tm::Var(0)))
}

pub fn trans_witness(env: &mut Env, gamma: &Telescope, a: &Ty) -> Result<TransWitness> {
    let g = gamma.len();
    let c = comp_ctx(gamma, a);
    env.context_wf(&c)?;
    let n = g + 5;
    let v = |i| lvl(n, i);
    let body = trans_term(&a.shift(0, 5), &v(g), &v(g + 1), &v(g + 3), &v(g + 2), &v(g + 4));
    let mu = env.define("trans", &c, body.clone())?;
    let p = path_ctx(gamma, a);
    let gv: Vec<Tm> = (0..g).map(v).collect();
    let tau_map = Morphism::new(c.clone(), p.clone(), cat(&[&gv, &[v(g), v(g + 3), mu.clone()]]));
    tau_map.check(&env.sig)?;
    let st = Morphism::new(c.clone(), p.split_at(g + 2).0, cat(&[&gv, &[v(g), v(g + 3)]]));
    if !tau_map.truncate(g + 2).equal(&env.sig, &st) {
        return Err(PathError::Equation("(s,t) τ is not (s π1, t π2)".into()));
    }

    let gr: Vec<Tm> = (0..g).map(|i| lvl(g + 3, i)).collect();
    let (x, y, u) = (Tm::Var(2), Tm::Var(1), Tm::Var(0));
    let r = Tm::refl(a.shift(0, 3), y.clone());
    let args = cat(&[&gr, &[x.clone(), y.clone(), u, y.clone(), r]]);
    let f = Morphism::new(p.clone(), p.clone(), cat(&[&gr, &[x, y, inst(&mu, &args)]]));
    let id = Morphism::identity(&p);
    let ps = env.path_structure(&path_fib(gamma, a))?;
    let h = h_of_j(&inst(&body, &args)).expect("eliminator");
    let unit = HomotopyWitness::new(&env.sig, &ps, f, id, vec![h])?;
    Ok(TransWitness { gamma: gamma.clone(), ty: a.clone(), ctx: c, mu, body, tau_map, unit })
}

/// Transport for `Y = [X, Θ] -> X` with `X = [Γ, x : A]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportWitness {
    pub fib: Fibration,
    /// `Y ×_X PX = [Γ, x, y, u : Id A x y, Θ(x)]`
    pub pulled: Telescope,
    /// `Γ : Y ×_X PX -> Y`
    pub gamma: Morphism,
    /// `Γ (1, r f) ≃_X 1`
    pub coherence: HomotopyWitness,
}

pub fn transport(env: &mut Env, fib: &Fibration) -> Result<TransportWitness> {
    let Some((_, a)) = fib.base.0.last() else {
        return Err(PathError::Rank("transport needs a base of rank at least 1".into()));
    };
    if fib.rank() == 0 {
        return Err(PathError::Rank("transport needs a fibration of rank at least 1".into()));
    }
    env.context_wf(&fib.total())?;
    let gl = fib.base.len() - 1;
    let (gamma, _) = fib.base.split_at(gl);
    let m = fib.rank();
    let tr = transport_terms(env, &gamma, a, &fib.ext)?;
    let pulled = path_ctx(&gamma, a).concat(&fib.ext.shift(0, 2));
    let n = pulled.len();
    let mut terms: Vec<Tm> = (0..gl).map(|i| lvl(n, i)).collect();
    terms.push(lvl(n, gl + 1));
    terms.extend(tr.gamma.iter().cloned());
    let gmap = Morphism::new(pulled.clone(), fib.total(), terms);
    gmap.check(&env.sig)?;
    let tp: Vec<Tm> = (0..=gl).map(|i| if i < gl { lvl(n, i) } else { lvl(n, gl + 1) }).collect();
    if !gmap.truncate(gl + 1).equal(&env.sig, &Morphism::new(pulled.clone(), fib.base.clone(), tp)) {
        return Err(PathError::Equation("f Γ = t p2".into()));
    }

    // Γ (1, r f) over Y = [Γ, x, θ]
    let y = fib.total();
    let ny = y.len();
    let xbase: Vec<Tm> = (0..=gl).map(|i| lvl(ny, i)).collect();
    let x = xbase[gl].clone();
    let theta: Vec<Tm> = (0..m).map(|i| lvl(ny, gl + 1 + i)).collect();
    let r = Tm::refl(a.shift(0, m + 1), x.clone());
    let args = cat(&[&xbase[..gl], &[x.clone(), x.clone(), r], &theta]);
    let moved: Vec<Tm> = tr.gamma.iter().map(|t| inst(t, &args)).collect();
    let f = Morphism::new(y.clone(), y.clone(), cat(&[&xbase, &moved]));
    let ps = env.path_structure(fib)?;
    let raw: Vec<Tm> = tr.coh.iter().map(|t| inst(t, &cat(&[&xbase, &theta]))).collect();
    let e = ps.sym_at(&xbase, &theta, &moved, &raw);
    let coherence = HomotopyWitness::new(&env.sig, &ps, f, Morphism::identity(&y), e)?;
    Ok(TransportWitness { fib: fib.clone(), pulled, gamma: gmap, coherence })
}

/// `f ≃ g` from `f h ≃ g h`, for `h` a recognized equivalence.
pub fn cancel_weq(env: &mut Env, h: &Morphism, hw: &HomotopyWitness, f: &Morphism, g: &Morphism) -> Result<HomotopyWitness> {
    let ind = is_structural_weq(&env.sig, h)
        .ok_or_else(|| PathError::NotRecognized("the map is not a path induction leg".into()))?;
    cancel_weq_at(env, &ind, hw, f, g)
}

/// [`cancel_weq`] for a known path induction `ind` with `h = ind.j`.
pub fn cancel_weq_at(env: &mut Env, ind: &PathInduction, hw: &HomotopyWitness, f: &Morphism, g: &Morphism) -> Result<HomotopyWitness> {
    let ps = hw.path.clone();
    let nb = ps.fib.base.len();
    let l = Morphism::new(ind.ctx.clone(), ps.pair_ctx(), cat(&[&f.terms, &g.terms[nb..]]));
    let (d, _) = lift(env, ind, &ps.path_fibration(), &hw.h, &l)?;
    let e = d.terms[ps.pair_ctx().len()..].to_vec();
    HomotopyWitness::new(&env.sig, &ps, f.clone(), g.clone(), e)
}

/// The five groupoid laws for `A`, fibrewise over `[Γ, x, y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidLaws {
    pub sym: SymWitness,
    pub trans: TransWitness,
    /// `μ(u, μ(v, w)) ≃ μ(μ(u, v), w)`
    pub assoc: HomotopyWitness,
    /// `μ(u, refl) ≃ u`
    pub right_unit: HomotopyWitness,
    /// `μ(refl, u) ≃ u`
    pub left_unit: HomotopyWitness,
    /// `μ(u, σ u) ≃ refl x`
    pub right_inverse: HomotopyWitness,
    /// `μ(σ u, u) ≃ refl y`
    pub left_inverse: HomotopyWitness,
}

impl GroupoidLaws {
    pub fn all(&self) -> [&HomotopyWitness; 5] {
        [&self.assoc, &self.right_unit, &self.left_unit, &self.right_inverse, &self.left_inverse]
    }
}

pub fn groupoid_laws(env: &mut Env, gamma: &Telescope, a: &Ty) -> Result<GroupoidLaws> {
    let sw = sym_witness(env, gamma, a)?;
    let tw = trans_witness(env, gamma, a)?;
    let g = gamma.len();
    let p = path_ctx(gamma, a);
    let ps = env.path_structure(&path_fib(gamma, a))?;

    // maps out of P_A, reduced to [Γ, x] along the path induction on (x, y, u)
    let n = g + 3;
    let gv: Vec<Tm> = (0..g).map(|i| lvl(n, i)).collect();
    let (x, y, u) = (lvl(n, g), lvl(n, g + 1), lvl(n, g + 2));
    let ind = PathInduction::new(&env.sig, &p, g, g + 1, g + 2)?;
    let rg: Vec<Tm> = (0..g).map(|i| lvl(g + 1, i)).collect();
    let rx = Tm::Var(0);
    let ax = a.shift(0, 1);
    let rr = Tm::refl(ax.clone(), rx.clone());
    let idx = Ty::id(ax.clone(), rx.clone(), rx.clone());
    let mu_rr = tw.at(&rg, [&rx, &rx, &rr, &rx, &rr]);
    let mk = |base: [Tm; 2], last: Tm| Morphism::new(p.clone(), p.clone(), cat(&[&gv, &base, &[last]]));
    let reduce = |env: &mut Env, f: Morphism, gm: Morphism, e: Tm| -> Result<HomotopyWitness> {
        let hv = HomotopyWitness::new(&env.sig, &ps, f.after(&ind.j), gm.after(&ind.j), vec![e])?;
        cancel_weq_at(env, &ind, &hv, &f, &gm)
    };

    let ar = Tm::refl(a.shift(0, 3), x.clone());
    let f3 = mk([x.clone(), y.clone()], tw.at(&gv, [&x, &x, &ar, &y, &u]));
    let left_unit = reduce(env, f3, Morphism::identity(&p), tw.h_at(&rg, &rx, &rx, &rr))?;

    let sig_xu = sw.at(&gv, &x, &y, &u);
    let f4 = mk([x.clone(), x.clone()], tw.at(&gv, [&x, &y, &u, &x, &sig_xu]));
    let g4 = mk([x.clone(), x.clone()], ar.clone());
    let sig_r = sw.at(&rg, &rx, &rx, &rr);
    let wbody = tw.at(&shifted(&rg, 1), [&Tm::Var(1), &Tm::Var(1), &rr.shift(0, 1), &Tm::Var(1), &Tm::Var(0)]);
    let e1 = ap_term(&idx, &idx, &wbody, &sig_r, &rr, &sw.h_at(&rg, &rx));
    let lhs4 = tw.at(&rg, [&rx, &rx, &rr, &rx, &sig_r]);
    let e4 = trans_term(&idx, &lhs4, &mu_rr, &rr, &e1, &tw.h_at(&rg, &rx, &rx, &rr));
    let right_inverse = reduce(env, f4, g4, e4)?;

    let ay = Tm::refl(a.shift(0, 3), y.clone());
    let f5 = mk([y.clone(), y.clone()], tw.at(&gv, [&y, &x, &sig_xu, &y, &u]));
    let g5 = mk([y.clone(), y.clone()], ay);
    let lhs5 = tw.at(&rg, [&rx, &rx, &sig_r, &rx, &rr]);
    let e5 = trans_term(&idx, &lhs5, &sig_r, &rr, &tw.h_at(&rg, &rx, &rx, &sig_r), &sw.h_at(&rg, &rx));
    let left_inverse = reduce(env, f5, g5, e5)?;

    let assoc = assoc_law(env, gamma, a, &tw, &ps)?;
    Ok(GroupoidLaws { right_unit: tw.unit.clone(), sym: sw, trans: tw, assoc, left_unit, right_inverse, left_inverse })
}

fn shifted(ts: &[Tm], by: usize) -> Vec<Tm> {
    ts.iter().map(|t| t.shift(0, by)).collect()
}

fn assoc_law(env: &mut Env, gamma: &Telescope, a: &Ty, tw: &TransWitness, ps: &PathStructure) -> Result<HomotopyWitness> {
    let g = gamma.len();
    let w = tw.ctx.clone().with("w", a.shift(0, 5)).with("q", Ty::id(a.shift(0, 6), Tm::Var(2), Tm::Var(0)));
    let n = g + 7;
    let v = |i| lvl(n, i);
    let gv: Vec<Tm> = (0..g).map(v).collect();
    let (x, y, u, z, vv, ww, q) = (v(g), v(g + 1), v(g + 2), v(g + 3), v(g + 4), v(g + 5), v(g + 6));
    let p = path_ctx(gamma, a);
    let inner = tw.at(&gv, [&y, &z, &vv, &ww, &q]);
    let lhs = tw.at(&gv, [&x, &y, &u, &ww, &inner]);
    let uv = tw.at(&gv, [&x, &y, &u, &z, &vv]);
    let rhs = tw.at(&gv, [&x, &z, &uv, &ww, &q]);
    let f = Morphism::new(w.clone(), p.clone(), cat(&[&gv, &[x.clone(), ww.clone(), lhs]]));
    let gm = Morphism::new(w.clone(), p, cat(&[&gv, &[x, ww, rhs]]));
    let ind = PathInduction::new(&env.sig, &w, g + 3, g + 5, g + 6)?;

    // over V = [Γ, x, y, u, z, v]
    let m = g + 5;
    let c = |i| lvl(m, i);
    let cg: Vec<Tm> = (0..g).map(c).collect();
    let (x, y, u, z, vv) = (c(g), c(g + 1), c(g + 2), c(g + 3), c(g + 4));
    let am = a.shift(0, 5);
    let rz = Tm::refl(am.clone(), z.clone());
    let mv = tw.at(&cg, [&y, &z, &vv, &z, &rz]);
    let muv = tw.at(&cg, [&x, &y, &u, &z, &vv]);
    let lhs = tw.at(&cg, [&x, &y, &u, &z, &mv]);
    let rhs = tw.at(&cg, [&x, &z, &muv, &z, &rz]);
    let t_yz = Ty::id(am.clone(), y.clone(), z.clone());
    let t_xz = Ty::id(am, x.clone(), z.clone());
    let cg1 = shifted(&cg, 1);
    let body = tw.at(&cg1, [&x.shift(0, 1), &y.shift(0, 1), &u.shift(0, 1), &z.shift(0, 1), &Tm::Var(0)]);
    let e1 = ap_term(&t_yz, &t_xz, &body, &mv, &vv, &tw.h_at(&cg, &y, &z, &vv));
    let e2 = sym_term(&t_xz, &rhs, &muv, &tw.h_at(&cg, &x, &z, &muv));
    let e = trans_term(&t_xz, &lhs, &muv, &rhs, &e1, &e2);
    let hv = HomotopyWitness::new(&env.sig, ps, f.after(&ind.j), gm.after(&ind.j), vec![e])?;
    cancel_weq_at(env, &ind, &hv, &f, &gm)
}
