//! Lifting problems against path inductions, compiled to `J`/`H`.
//!
//! A path induction on a context `U` picks a variable `y : A` and a path
//! `u : Id A x y` from an earlier variable `x`; the left leg is the map
//! `j : V -> U` that sends `y` to `x` and `u` to `refl A x`, where `V` is `U`
//! with `y, u` removed. Up to reordering, `U = [I, x, y, u, Φ]` with
//! `V = [I, x, Φ(x, x, refl x)]`.
//!
//! Fills of a right leg of rank `n` proceed one type at a time: the first
//! component is a single `J`, the rest is transported along the resulting
//! homotopy and filled recursively. The homotopy produced runs from the top
//! map `k` to `d ∘ j` and is laid out exactly as the path structure of
//! [`super::build_py`].

use std::collections::BTreeSet;

use crate::cat::{permute_context, Fibration, Morphism, Permutation};
use crate::defeq::defeq_types;
use crate::syntax::{JElim, Motive, Signature, Telescope, Tm, Ty};

use super::{h_of_j, hints3, lvl, sym_term, Env, HomotopyWitness, PathError, Result};

/// The canonical shape `[I, x : A, y : A, u : Id A x y, Φ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canon {
    pub base: Telescope,
    pub ty: Ty,
    /// over `[I, x, y, u]`
    pub phi: Telescope,
}

impl Canon {
    fn inner(&self) -> usize {
        3 + self.phi.len()
    }

    pub fn u_ctx(&self) -> Telescope {
        self.base.concat(&crate::syntax::xyu_telescope(&hints3("x", "y", "u"), &self.ty)).concat(&self.phi)
    }

    /// `Φ(x, x, refl x)` over `[I, x]`.
    pub fn phi_at_refl(&self) -> Telescope {
        let args = [Tm::Var(0), Tm::Var(0), Tm::refl(self.ty.shift(0, 1), Tm::Var(0))];
        self.phi.rebase(3, 1, &args)
    }

    pub fn v_ctx(&self) -> Telescope {
        self.base.clone().with("x", self.ty.clone()).concat(&self.phi_at_refl())
    }

    /// `j : V -> U` as terms over `V`.
    pub fn j_terms(&self) -> Vec<Tm> {
        let f = self.phi.len();
        let mut t = self.base.vars(1 + f);
        let x = Tm::Var(f);
        t.push(x.clone());
        t.push(x.clone());
        t.push(Tm::refl(self.ty.shift(0, 1 + f), x));
        t.extend((0..f).map(|i| Tm::Var(f - 1 - i)));
        t
    }
}

/// Result of a fill: `d` over `U` and the homotopy part over `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filled {
    pub d: Vec<Tm>,
    pub h: Vec<Tm>,
}

/// Fills `psi` (a telescope over `U`) given `k` (terms over `V` at `psi[j]`).
pub fn fill_canon(env: &mut Env, c: &Canon, psi: &Telescope, k: &[Tm]) -> Result<Filled> {
    if psi.is_empty() {
        return Ok(Filled { d: Vec::new(), h: Vec::new() });
    }
    let v = c.v_ctx();
    let jt = c.j_terms();
    let pj = psi.subst(&jt, 0);
    let mut shared: Vec<Tm> = Vec::with_capacity(k.len());
    for (i, t) in k.iter().enumerate() {
        let ty = pj.0[i].1.subst(&shared, 0);
        shared.push(env.share_at("top", &v, t.clone(), &ty)?);
    }
    let k = shared;
    let kk = c.inner();
    let f = c.phi.len();
    let t0 = &psi.0[0].1;
    let m = Motive {
        names: hints3("x", "y", "u"),
        ty: c.ty.shift(0, kk),
        delta: c.phi.shift(3, kk),
        motive: t0.shift(kk, kk),
        branch: k[0].shift(1 + f, kk),
    };
    let spine: Vec<Tm> = (0..f).map(|i| Tm::Var(f - 1 - i)).collect();
    let body = Tm::J(Box::new(JElim { m, a: Tm::Var(kk - 1), b: Tm::Var(kk - 2), p: Tm::Var(kk - 3), spine }));
    let hraw = h_of_j(&body.subst(&jt, 0)).expect("eliminator");
    let u = c.u_ctx();
    let d1 = env.share("fill", &u, body)?;
    let d1j = d1.subst(&jt, 0);
    let t0j = t0.subst(&jt, 0);
    let alpha = env.share("path", &v, sym_term(&t0j, &d1j, &k[0], &hraw))?;
    if psi.len() == 1 {
        return Ok(Filled { d: vec![d1], h: vec![alpha] });
    }

    let rest = Telescope(psi.0[1..].to_vec());
    // rest pulled back to [V, b : T[j]]
    let mut jb: Vec<Tm> = jt.iter().map(|t| t.shift(0, 1)).collect();
    jb.push(Tm::Var(0));
    let fam = rest.subst(&jb, 0);
    let tr = transport_terms(env, &v, &t0j, &fam)?;
    let mut args = v.vars(0);
    args.extend([k[0].clone(), d1j.clone(), alpha.clone()]);
    args.extend(k[1..].iter().cloned());
    let k2: Vec<Tm> = tr.gamma.iter().map(|g| g.subst(&args, 0)).collect();
    let psi2 = rest.subst(std::slice::from_ref(&d1), 0);
    let sub = fill_canon(env, c, &psi2, &k2)?;
    let mut d = vec![d1];
    d.extend(sub.d);
    let mut h = vec![alpha];
    h.extend(sub.h);
    Ok(Filled { d, h })
}

/// Transport of a family along paths in its base type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportTerms {
    /// over `[Z, x, y, u : Id A x y, θ : fam(x)]`, at `fam(y)`
    pub gamma: Vec<Tm>,
    /// over `[Z, x, θ]`: homotopy from `θ` to `gamma(x, x, refl x, θ)`
    pub coh: Vec<Tm>,
}

/// Transport for `fam` over `[Z, x : A]`.
pub fn transport_terms(env: &mut Env, z: &Telescope, a: &Ty, fam: &Telescope) -> Result<TransportTerms> {
    let m = fam.len();
    let c = Canon { base: z.clone(), ty: a.clone(), phi: fam.shift(0, 2) };
    let psi = fam.rebase(1, 3 + m, &[Tm::Var(m + 1)]);
    let k = fam.vars(0);
    let out = fill_canon(env, &c, &psi, &k)?;
    Ok(TransportTerms { gamma: out.d, coh: out.h })
}

/// A path induction on `ctx` at the levels `x`, `y`, `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathInduction {
    pub ctx: Telescope,
    pub x: usize,
    pub y: usize,
    pub u: usize,
    pub canon: Canon,
    /// `ctx` reordered to the canonical shape
    pub perm: Permutation,
    /// `V_c` reordered to the order of `ctx` with `y, u` removed
    pub vperm: Permutation,
    /// the left leg `V -> ctx`
    pub j: Morphism,
}

fn depends_on(ctx: &Telescope, roots: &[usize]) -> Vec<bool> {
    let n = ctx.len();
    let mut dep = vec![false; n];
    for &r in roots {
        dep[r] = true;
    }
    for l in 0..n {
        if dep[l] {
            continue;
        }
        let mut fv = BTreeSet::new();
        ctx.0[l].1.free_vars(0, &mut fv);
        if fv.iter().any(|&i| i < l && dep[l - 1 - i]) {
            dep[l] = true;
        }
    }
    dep
}

impl PathInduction {
    /// Checked construction: the endpoint and path types must have the right shape.
    pub fn new(sig: &Signature, ctx: &Telescope, x: usize, y: usize, u: usize) -> Result<PathInduction> {
        let ind = Self::try_new(ctx, x, y, u)?;
        let c = &ind.canon;
        let ibase = c.base.len();
        let ty_y = &ind.perm.ctx.0[ibase + 1].1;
        let ty_u = &ind.perm.ctx.0[ibase + 2].1;
        let at = c.base.clone().with("x", c.ty.clone());
        if !defeq_types(sig, &at, ty_y, &c.ty.shift(0, 1)) {
            return Err(PathError::NotRecognized("the endpoints have different types".into()));
        }
        let expect_u = Ty::id(c.ty.shift(0, 2), Tm::Var(1), Tm::Var(0));
        let at2 = at.clone().with("y", c.ty.shift(0, 1));
        if !defeq_types(sig, &at2, ty_u, &expect_u) {
            return Err(PathError::NotRecognized("the path variable is not a path between the endpoints".into()));
        }
        Ok(ind)
    }

    /// Construction for contexts built by this module, whose shape is known.
    pub(crate) fn new_unchecked(ctx: &Telescope, x: usize, y: usize, u: usize) -> PathInduction {
        Self::try_new(ctx, x, y, u).expect("path induction on a constructed context")
    }

    fn try_new(ctx: &Telescope, x: usize, y: usize, u: usize) -> Result<PathInduction> {
        let n = ctx.len();
        if !(x < y && y < u && u < n) {
            return Err(PathError::NotRecognized(format!("positions {x}, {y}, {u} are not increasing")));
        }
        let dep = depends_on(ctx, &[x, y, u]);
        let mut order: Vec<usize> = (0..n).filter(|&l| !dep[l]).collect();
        let ibase = order.len();
        order.extend([x, y, u]);
        order.extend((0..n).filter(|&l| dep[l] && l != x && l != y && l != u));
        let perm = permute_context(ctx, &order)
            .ok_or_else(|| PathError::NotRecognized("the path variables cannot be brought to the front".into()))?;
        let base = Telescope(perm.ctx.0[..ibase].to_vec());
        let ty = perm.ctx.0[ibase].1.clone();
        let canon = Canon { base, ty, phi: Telescope(perm.ctx.0[ibase + 3..].to_vec()) };

        // V_c = [I, x, Φ(x,x,rx)]; its entries in the order of `ctx` minus y, u.
        let vc_old: Vec<usize> = order.iter().copied().filter(|&l| l != y && l != u).collect();
        let mut natural: Vec<usize> = (0..vc_old.len()).collect();
        natural.sort_by_key(|&i| vc_old[i]);
        let vperm = permute_context(&canon.v_ctx(), &natural)
            .ok_or_else(|| PathError::NotRecognized("the contracted context cannot be reordered".into()))?;
        let jc = Morphism::new(canon.v_ctx(), perm.ctx.clone(), canon.j_terms());
        let j = perm.to_old.after(&jc).after(&vperm.to_old);
        Ok(PathInduction { ctx: ctx.clone(), x, y, u, canon, perm, vperm, j })
    }

    /// The contracted context `V`.
    pub fn v_ctx(&self) -> &Telescope {
        &self.vperm.ctx
    }

    /// The variable at level `l` of `ctx`, as a term over `ctx`.
    pub fn var(&self, l: usize) -> Tm {
        lvl(self.ctx.len(), l)
    }

    /// Moves a term written over `ctx` to `V` along `j`.
    pub fn at_v(&self, t: &Tm) -> Tm {
        t.subst(&self.j.terms, 0)
    }

    /// Fills `psi` over `ctx` with top `k` over `V`.
    pub fn fill(&self, env: &mut Env, psi: &Telescope, k: &[Tm]) -> Result<Filled> {
        let psi_c = psi.subst(&self.perm.to_old.terms, 0);
        let k_c: Vec<Tm> = k.iter().map(|t| t.subst(&self.vperm.to_new.terms, 0)).collect();
        let out = fill_canon(env, &self.canon, &psi_c, &k_c)?;
        let d = out.d.iter().map(|t| t.subst(&self.perm.to_new.terms, 0)).collect();
        let h = out.h.iter().map(|t| t.subst(&self.vperm.to_old.terms, 0)).collect();
        Ok(Filled { d, h })
    }
}

/// Recognizes `m : V -> U` as the left leg of a path induction on `U`.
pub fn is_structural_weq(sig: &Signature, m: &Morphism) -> Option<PathInduction> {
    let n = m.target.len();
    if m.terms.len() != n {
        return None;
    }
    for u in 0..n {
        let ty = &m.target.0[u].1;
        let (x, y) = match ty {
            Ty::Id(_, a, b) => match (a.as_ref(), b.as_ref()) {
                (Tm::Var(i), Tm::Var(j)) if *i < u && *j < u => (u - 1 - i, u - 1 - j),
                _ => continue,
            },
            _ => continue,
        };
        if !(x < y && y < u) {
            continue;
        }
        let Ok(ind) = PathInduction::new(sig, &m.target, x, y, u) else { continue };
        if ind.v_ctx().len() != m.source.len()
            || !crate::defeq::defeq_telescopes(sig, &Telescope::new(), ind.v_ctx(), &m.source)
        {
            continue;
        }
        let candidate = Morphism::new(m.source.clone(), m.target.clone(), ind.j.terms.clone());
        if candidate.equal(sig, m) {
            return Some(ind);
        }
    }
    None
}

/// The lower filler alone: `d : U -> B` with `p d = l`, kernel-checked,
/// and the homotopy part over `V` (from `k` to `d j`).
pub fn lift(env: &mut Env, ind: &PathInduction, fib: &Fibration, k: &Morphism, l: &Morphism) -> Result<(Morphism, Vec<Tm>)> {
    let nx = fib.base.len();
    let pk = fib.projection().after(k);
    if !pk.equal(&env.sig, &l.after(&ind.j)) {
        return Err(PathError::Equation("the square does not commute".into()));
    }
    let psi = l.pull_telescope(&fib.ext);
    let out = ind.fill(env, &psi, &k.terms[nx..])?;
    let mut dterms = l.terms.clone();
    dterms.extend(out.d);
    let d = Morphism::new(ind.ctx.clone(), fib.total(), dterms);
    d.check(&env.sig)?;
    if !fib.projection().after(&d).equal(&env.sig, l) {
        return Err(PathError::Equation("p d = l".into()));
    }
    Ok((d, out.h))
}

/// Solves the lifting problem with left leg `ind.j : V -> U`, right leg the
/// fibration `fib : B -> X`, top `k : V -> B` and bottom `l : U -> X`.
/// Returns `d : U -> B` with `p d = l` and a homotopy from `k` to `d j`
/// in the fibrewise path object of `fib`, both kernel-checked.
pub fn jfill(
    env: &mut Env,
    ind: &PathInduction,
    fib: &Fibration,
    k: &Morphism,
    l: &Morphism,
) -> Result<(Morphism, HomotopyWitness)> {
    let (d, h) = lift(env, ind, fib, k, l)?;
    let ps = env.path_structure(fib)?;
    let dj = d.after(&ind.j);
    let hw = HomotopyWitness::new(&env.sig, &ps, k.clone(), dj, h)?;
    Ok((d, hw))
}
