//! Path structures of dependent projections `[I, Θ] -> I` of any rank,
//! built by induction on `Θ`:
//!
//! ```text
//! P[I, x : A, Θ'] = [I, x0, θ0, x1, θ1, α : Id A x0 x1, E'(x1, Γ(x0, x1, α, θ0), θ1)]
//! ```
//!
//! where `E'` is the path structure of `Θ'` over `[I, x]` and `Γ` transports
//! `Θ'` along paths in `A`. Reflexivity, symmetry and transitivity are
//! produced alongside; the latter two by one path induction each.

use crate::cat::{Fibration, Morphism};
use crate::checker;
use crate::syntax::{Signature, Telescope, Tm, Ty};

use super::fill::{transport_terms, PathInduction, TransportTerms};
use super::{inst, lvl, Env, PathError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStructure {
    pub fib: Fibration,
    /// `E` over `[I, Θ0, Θ1]`
    pub ext: Telescope,
    /// `E`-terms over `[I, Θ]` at the diagonal
    pub refl: Vec<Tm>,
    /// `E`-terms over `[I, Θ0, Θ1, E]` at `(Θ1, Θ0)`
    pub sym: Vec<Tm>,
    /// `E`-terms over `[I, Θ0, Θ1, E, Θ2, E(Θ1, Θ2)]` at `(Θ0, Θ2)`
    pub trans: Vec<Tm>,
    /// transport of `Θ'` over `[I, x : A]` along paths in `A`
    pub transport: Option<TransportTerms>,
    /// the path structure of `Θ'` over `[I, x : A]`
    pub lower: Option<Box<PathStructure>>,
}

/// The rank-1 path object `[Γ, x : A, y : A, u : Id A x y]` of `[Γ, x : A] -> Γ`.
pub fn path_object(env: &mut Env, fib: &Fibration) -> Result<PathStructure> {
    if fib.rank() != 1 {
        return Err(PathError::Rank(format!("a path object needs a rank 1 projection, got rank {}", fib.rank())));
    }
    PathStructure::build(env, fib)
}

/// The path structure of `[I, Θ] -> I`, kernel-checked.
pub fn build_py(env: &mut Env, fib: &Fibration) -> Result<PathStructure> {
    PathStructure::build(env, fib)
}

impl PathStructure {
    pub fn build(env: &mut Env, fib: &Fibration) -> Result<PathStructure> {
        env.context_wf(&fib.total())?;
        let ps = Self::construct(env, &fib.base, &fib.ext)?;
        ps.check(&env.sig)?;
        Ok(ps)
    }

    /// The construction; emitted definitions are checked as they are added.
    pub fn construct(env: &mut Env, base: &Telescope, theta: &Telescope) -> Result<PathStructure> {
        let fib = Fibration::new(base.clone(), theta.clone());
        if theta.is_empty() {
            return Ok(PathStructure {
                fib,
                ext: Telescope::new(),
                refl: Vec::new(),
                sym: Vec::new(),
                trans: Vec::new(),
                transport: None,
                lower: None,
            });
        }
        let g = base.len();
        let n = theta.len();
        let m = n - 1;
        let a = theta.0[0].1.clone();
        let rest = Telescope(theta.0[1..].to_vec());
        let xbase = base.clone().with(theta.0[0].0.as_str(), a.clone());
        let lower = Self::construct(env, &xbase, &rest)?;
        let tr = transport_terms(env, base, &a, &rest)?;

        let mut ps = PathStructure {
            fib,
            ext: Telescope::new(),
            refl: Vec::new(),
            sym: Vec::new(),
            trans: Vec::new(),
            transport: Some(tr),
            lower: Some(Box::new(lower)),
        };

        // E over Q = [I, x0, θ0, x1, θ1]
        let q = g + 2 * n;
        let l = q + 1;
        let alpha_ty = Ty::id(a.shift(0, 2 * n), lvl(q, g), lvl(q, g + n));
        let v = |i: usize| lvl(l, i);
        let ibase: Vec<Tm> = (0..g).map(v).collect();
        let theta0: Vec<Tm> = (0..m).map(|i| v(g + 1 + i)).collect();
        let theta1: Vec<Tm> = (0..m).map(|i| v(g + n + 1 + i)).collect();
        let moved = ps.gamma_at(&ibase, &v(g), &v(g + n), &Tm::Var(0), &theta0);
        let mut args = ibase.clone();
        args.push(v(g + n));
        args.extend(moved);
        args.extend(theta1);
        let lower = ps.lower.as_deref().unwrap();
        let mut ext = Telescope::new().with("α", alpha_ty);
        ext.0.extend(lower.ext.subst(&args, 0).0);
        ps.ext = ext;

        // reflexivity over Y = [I, x, θ]
        let ylen = g + n;
        let yb: Vec<Tm> = (0..=g).map(|i| lvl(ylen, i)).collect();
        let yth: Vec<Tm> = (0..m).map(|i| lvl(ylen, g + 1 + i)).collect();
        let mut refl = vec![Tm::refl(a.shift(0, n), lvl(ylen, g))];
        refl.extend(ps.coh_at(&yb, &yth));
        ps.refl = refl;

        ps.sym = ps.construct_sym(env)?;
        ps.trans = ps.construct_trans(env)?;
        Ok(ps)
    }

    pub fn rank(&self) -> usize {
        self.fib.rank()
    }

    fn g(&self) -> usize {
        self.fib.base.len()
    }

    /// `[I, Θ0, Θ1]`
    pub fn pair_ctx(&self) -> Telescope {
        let n = self.rank();
        self.fib.total().concat(&self.fib.ext.shift(0, n))
    }

    /// `[I, Θ0, Θ1, E]`
    pub fn total(&self) -> Telescope {
        self.pair_ctx().concat(&self.ext)
    }

    /// `[I, Θ0, Θ1, E, Θ2, E(Θ1, Θ2)]`
    pub fn comp_ctx(&self) -> Telescope {
        let (g, n, e) = (self.g(), self.rank(), self.ext.len());
        let p = self.total();
        let plen = p.len();
        let ctx = p.concat(&self.fib.ext.shift(0, 2 * n + e));
        let len = plen + n;
        let mut args: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
        args.extend((0..n).map(|i| lvl(len, g + n + i)));
        args.extend((0..n).map(|i| lvl(len, plen + i)));
        ctx.concat(&self.ext.subst(&args, 0))
    }

    /// `Γ(x, y, u, θ)` for the transport of the upper part.
    pub fn gamma_at(&self, base: &[Tm], x: &Tm, y: &Tm, u: &Tm, theta: &[Tm]) -> Vec<Tm> {
        let tr = self.transport.as_ref().expect("rank > 0");
        let mut args = base.to_vec();
        args.extend([x.clone(), y.clone(), u.clone()]);
        args.extend(theta.iter().cloned());
        inst(&tr.gamma, &args)
    }

    /// The base type `A` of the first entry at the given base arguments.
    fn head_ty(&self, base: &[Tm]) -> Ty {
        self.fib.ext.0[0].1.subst(base, 0)
    }

    /// Path in the lower structure from `Γ(x, x, refl x, θ)` to `θ`.
    pub fn coh_at(&self, xbase: &[Tm], theta: &[Tm]) -> Vec<Tm> {
        let lower = self.lower.as_deref().expect("rank > 0");
        let g = self.g();
        let x = &xbase[g];
        let a = self.head_ty(&xbase[..g]);
        let moved = self.gamma_at(&xbase[..g], x, x, &Tm::refl(a, x.clone()), theta);
        let tr = self.transport.as_ref().unwrap();
        let mut cargs = xbase.to_vec();
        cargs.extend(theta.iter().cloned());
        let raw = inst(&tr.coh, &cargs);
        lower.sym_at(xbase, theta, &moved, &raw)
    }

    pub fn refl_at(&self, base: &[Tm], a: &[Tm]) -> Vec<Tm> {
        let mut args = base.to_vec();
        args.extend(a.iter().cloned());
        inst(&self.refl, &args)
    }

    pub fn sym_at(&self, base: &[Tm], a: &[Tm], b: &[Tm], e: &[Tm]) -> Vec<Tm> {
        let mut args = base.to_vec();
        args.extend(a.iter().cloned());
        args.extend(b.iter().cloned());
        args.extend(e.iter().cloned());
        inst(&self.sym, &args)
    }

    pub fn trans_at(&self, base: &[Tm], a: &[Tm], b: &[Tm], e1: &[Tm], c: &[Tm], e2: &[Tm]) -> Vec<Tm> {
        let mut args = base.to_vec();
        for part in [a, b, e1, c, e2] {
            args.extend(part.iter().cloned());
        }
        inst(&self.trans, &args)
    }

    fn construct_sym(&self, env: &mut Env) -> Result<Vec<Tm>> {
        let (g, n) = (self.g(), self.rank());
        let m = n - 1;
        let p = self.total();
        let len = p.len();
        let v = |i: usize| lvl(len, i);
        let ind = PathInduction::new_unchecked(&p, g, g + n, g + 2 * n);
        let ib: Vec<Tm> = (0..g).map(v).collect();
        let (x0, x1) = (v(g), v(g + n));
        let th0: Vec<Tm> = (0..m).map(|i| v(g + 1 + i)).collect();
        let th1: Vec<Tm> = (0..m).map(|i| v(g + n + 1 + i)).collect();
        let beta: Vec<Tm> = (0..m).map(|i| v(g + 2 * n + 1 + i)).collect();

        let mut swap = ib.clone();
        swap.push(x1);
        swap.extend(th1.iter().cloned());
        swap.push(x0.clone());
        swap.extend(th0.iter().cloned());
        let psi = self.ext.subst(&swap, 0);

        // Written over the full context and moved along j (x1 := x0, α := refl).
        let a = self.head_ty(&ib);
        let mut k = vec![Tm::refl(a.clone(), x0.clone())];
        if m > 0 {
            let lower = self.lower.as_deref().unwrap();
            let mut xb = ib.clone();
            xb.push(x0.clone());
            let r = Tm::refl(a, x0.clone());
            let g0 = self.gamma_at(&ib, &x0, &x0, &r, &th0);
            let g1 = self.gamma_at(&ib, &x0, &x0, &r, &th1);
            let c1 = self.coh_at(&xb, &th1);
            let c0 = self.coh_at(&xb, &th0);
            let sb = lower.sym_at(&xb, &g0, &th1, &beta);
            let t1 = lower.trans_at(&xb, &g1, &th1, &c1, &g0, &sb);
            k.extend(lower.trans_at(&xb, &g1, &g0, &t1, &th0, &c0));
        }
        let k: Vec<Tm> = k.iter().map(|t| ind.at_v(t)).collect();
        Ok(ind.fill(env, &psi, &k)?.d)
    }

    fn construct_trans(&self, env: &mut Env) -> Result<Vec<Tm>> {
        let (g, n, e) = (self.g(), self.rank(), self.ext.len());
        let m = n - 1;
        let c = self.comp_ctx();
        let len = c.len();
        let v = |i: usize| lvl(len, i);
        let p2 = g + 2 * n + e;
        let ind = PathInduction::new_unchecked(&c, g + n, p2, p2 + n);
        let ib: Vec<Tm> = (0..g).map(v).collect();
        let (x0, x1, x2) = (v(g), v(g + n), v(p2));
        let th0: Vec<Tm> = (0..m).map(|i| v(g + 1 + i)).collect();
        let th1: Vec<Tm> = (0..m).map(|i| v(g + n + 1 + i)).collect();
        let th2: Vec<Tm> = (0..m).map(|i| v(p2 + 1 + i)).collect();
        let alpha = v(g + 2 * n);
        let beta: Vec<Tm> = (0..m).map(|i| v(g + 2 * n + 1 + i)).collect();
        let beta2: Vec<Tm> = (0..m).map(|i| v(p2 + n + 1 + i)).collect();

        let mut ends = ib.clone();
        ends.push(x0.clone());
        ends.extend(th0.iter().cloned());
        ends.push(x2);
        ends.extend(th2.iter().cloned());
        let psi = self.ext.subst(&ends, 0);

        let mut k = vec![alpha.clone()];
        if m > 0 {
            let lower = self.lower.as_deref().unwrap();
            let a = self.head_ty(&ib);
            let mut xb = ib.clone();
            xb.push(x1.clone());
            let r = Tm::refl(a, x1.clone());
            let ga = self.gamma_at(&ib, &x0, &x1, &alpha, &th0);
            let g1 = self.gamma_at(&ib, &x1, &x1, &r, &th1);
            let c1 = self.coh_at(&xb, &th1);
            let back = lower.sym_at(&xb, &g1, &th1, &c1);
            let inner = lower.trans_at(&xb, &th1, &g1, &back, &th2, &beta2);
            k.extend(lower.trans_at(&xb, &ga, &th1, &beta, &th2, &inner));
        }
        let k: Vec<Tm> = k.iter().map(|t| ind.at_v(t)).collect();
        Ok(ind.fill(env, &psi, &k)?.d)
    }

    // -- morphisms -------------------------------------------------------

    /// `r : [I, Θ] -> P`
    pub fn r(&self) -> Morphism {
        let y = self.fib.total();
        let mut terms = y.vars(0);
        terms.extend(self.fib.ext.vars(0));
        terms.extend(self.refl.iter().cloned());
        Morphism::new(y, self.total(), terms)
    }

    fn endpoint(&self, second: bool) -> Morphism {
        let (g, n) = (self.g(), self.rank());
        let p = self.total();
        let len = p.len();
        let mut terms: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
        let off = if second { g + n } else { g };
        terms.extend((0..n).map(|i| lvl(len, off + i)));
        Morphism::new(p, self.fib.total(), terms)
    }

    /// `s : P -> [I, Θ]`
    pub fn s(&self) -> Morphism {
        self.endpoint(false)
    }

    /// `t : P -> [I, Θ]`
    pub fn t(&self) -> Morphism {
        self.endpoint(true)
    }

    /// `(s, t) : P -> [I, Θ0, Θ1]`
    pub fn st(&self) -> Morphism {
        Morphism::projection(&self.total(), self.pair_ctx().len())
    }

    /// The fibration `P -> [I, Θ0, Θ1]`.
    pub fn path_fibration(&self) -> Fibration {
        Fibration::new(self.pair_ctx(), self.ext.clone())
    }

    /// The fibrewise diagonal `[I, Θ] -> [I, Θ0, Θ1]`.
    pub fn diagonal(&self) -> Morphism {
        let y = self.fib.total();
        let mut terms = y.vars(0);
        terms.extend(self.fib.ext.vars(0));
        Morphism::new(y, self.pair_ctx(), terms)
    }

    /// The swap `[I, Θ0, Θ1] -> [I, Θ0, Θ1]`.
    pub fn swap(&self) -> Morphism {
        let (g, n) = (self.g(), self.rank());
        let q = self.pair_ctx();
        let len = q.len();
        let mut terms: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
        terms.extend((0..n).map(|i| lvl(len, g + n + i)));
        terms.extend((0..n).map(|i| lvl(len, g + i)));
        Morphism::new(q.clone(), q, terms)
    }

    /// `σ : P -> P` over the swap.
    pub fn sym_map(&self) -> Morphism {
        let p = self.total();
        let e = self.ext.len();
        let mut terms: Vec<Tm> = self.swap().terms.iter().map(|t| t.shift(0, e)).collect();
        terms.extend(self.sym.iter().cloned());
        Morphism::new(p.clone(), p, terms)
    }

    /// `τ : P ×_Y P -> P`
    pub fn trans_map(&self) -> Morphism {
        let (g, n, e) = (self.g(), self.rank(), self.ext.len());
        let c = self.comp_ctx();
        let len = c.len();
        let mut terms: Vec<Tm> = (0..g + n).map(|i| lvl(len, i)).collect();
        let p2 = g + 2 * n + e;
        terms.extend((0..n).map(|i| lvl(len, p2 + i)));
        terms.extend(self.trans.iter().cloned());
        Morphism::new(c, self.total(), terms)
    }

    /// The two projections `P ×_Y P -> P`.
    pub fn comp_projections(&self) -> (Morphism, Morphism) {
        let (g, n, e) = (self.g(), self.rank(), self.ext.len());
        let c = self.comp_ctx();
        let len = c.len();
        let p = self.total();
        let first: Vec<Tm> = (0..p.len()).map(|i| lvl(len, i)).collect();
        let mut second: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
        second.extend((0..n).map(|i| lvl(len, g + n + i)));
        second.extend((0..n + e).map(|i| lvl(len, g + 2 * n + e + i)));
        (Morphism::new(c.clone(), p.clone(), first), Morphism::new(c, p, second))
    }

    /// Kernel check of `P`, `r`, `σ`, `τ` and the equivalence relation equations.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        checker::context_wf(sig, &self.total())?;
        self.r().check(sig)?;
        self.sym_map().check(sig)?;
        self.trans_map().check(sig)?;
        self.check_equations(sig)
    }

    /// `(s,t) r = Δ`, `(s,t) σ = (t,s)`, `(s,t) τ = (s π1, t π2)`.
    pub fn check_equations(&self, sig: &Signature) -> Result<()> {
        let st = self.st();
        if !st.after(&self.r()).equal(sig, &self.diagonal()) {
            return Err(PathError::Equation("(s,t) r is not the diagonal".into()));
        }
        if !st.after(&self.sym_map()).equal(sig, &self.swap().after(&st)) {
            return Err(PathError::Equation("(s,t) σ is not the swap of (s,t)".into()));
        }
        let (p1, p2) = self.comp_projections();
        let lhs = st.after(&self.trans_map());
        let s1 = self.s().after(&p1);
        let t2 = self.t().after(&p2);
        let mut terms = s1.terms.clone();
        terms.extend(t2.terms[self.g()..].iter().cloned());
        let rhs = Morphism::new(self.comp_ctx(), self.pair_ctx(), terms);
        if !lhs.equal(sig, &rhs) {
            return Err(PathError::Equation("(s,t) τ is not (s π1, t π2)".into()));
        }
        Ok(())
    }
}

/// Builds the path structure of `fib` and of its pullback along `f : Δ -> I`,
/// and checks that the second is the first pulled back: equal telescopes
/// over `[Δ, Θ0, Θ1]` and equal reflexivity, symmetry and transitivity maps.
pub fn check_pullback_stable(env: &mut Env, fib: &Fibration, f: &Morphism) -> Result<()> {
    let ps = PathStructure::build(env, fib)?;
    let (pulled, _) = fib.pullback(&env.sig, f)?;
    let qs = PathStructure::build(env, &pulled)?;
    let n = fib.rank();
    let src = qs.pair_ctx();
    let len = src.len();
    let d = f.source.len();
    let mut terms: Vec<Tm> = f.terms.iter().map(|t| t.shift(0, 2 * n)).collect();
    terms.extend((d..d + 2 * n).map(|i| lvl(len, i)));
    let pair = Morphism::new(src.clone(), ps.pair_ctx(), terms);
    if !crate::defeq::defeq_telescopes(&env.sig, &src, &pair.pull_telescope(&ps.ext), &qs.ext) {
        return Err(PathError::Equation("the pulled back path telescope differs from the rebuilt one".into()));
    }
    let over = pair.extend(&ps.ext).with_source(qs.total());
    let base = f.extend(&fib.ext);
    let stable = over.after(&qs.r()).equal(&env.sig, &ps.r().after(&base))
        && over.after(&qs.sym_map()).equal(&env.sig, &ps.sym_map().after(&over))
        && ps.st().after(&over).equal(&env.sig, &pair.after(&qs.st()));
    if !stable {
        return Err(PathError::Equation("the structure maps do not commute with pullback".into()));
    }
    let tq = qs.trans_map();
    let tp = ps.trans_map();
    let comp = comp_map(&ps, &qs, &over);
    if !over.after(&tq).equal(&env.sig, &tp.after(&comp)) {
        return Err(PathError::Equation("transitivity does not commute with pullback".into()));
    }
    Ok(())
}

/// `[Δ, Θ0, Θ1, E, Θ2, E] -> [I, Θ0, Θ1, E, Θ2, E]` induced by `f`.
fn comp_map(ps: &PathStructure, qs: &PathStructure, over: &Morphism) -> Morphism {
    let src = qs.comp_ctx();
    let len = src.len();
    let (n, e) = (qs.rank(), qs.ext.len());
    let first = qs.total().len();
    let extra = len - first;
    let mut terms: Vec<Tm> = over.terms.iter().map(|t| t.shift(0, extra)).collect();
    terms.extend((first..len).map(|i| lvl(len, i)));
    debug_assert_eq!(extra, n + e);
    debug_assert_eq!(terms.len(), ps.comp_ctx().len());
    Morphism::new(src, ps.comp_ctx(), terms)
}

/// A homotopy `H : W -> P` with `s H = f` and `t H = g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyWitness {
    pub path: PathStructure,
    pub f: Morphism,
    pub g: Morphism,
    pub h: Morphism,
}

impl HomotopyWitness {
    /// Assembles `H = (f, g, e)` and kernel-checks it.
    pub fn new(sig: &Signature, path: &PathStructure, f: Morphism, g: Morphism, e: Vec<Tm>) -> Result<Self> {
        let w = Self::assemble(path, f, g, e);
        w.check(sig)?;
        Ok(w)
    }

    pub fn assemble(path: &PathStructure, f: Morphism, g: Morphism, e: Vec<Tm>) -> Self {
        let nb = path.fib.base.len();
        let mut terms = f.terms.clone();
        terms.extend(g.terms[nb..].iter().cloned());
        terms.extend(e);
        let h = Morphism::new(f.source.clone(), path.total(), terms);
        HomotopyWitness { path: path.clone(), f, g, h }
    }

    /// The path components of `H`.
    pub fn e_terms(&self) -> &[Tm] {
        &self.h.terms[self.path.pair_ctx().len()..]
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        let nb = self.path.fib.base.len();
        if !self.f.truncate(nb).equal(sig, &self.g.truncate(nb)) {
            return Err(PathError::Equation("the maps lie over different base points".into()));
        }
        self.h.check(sig)?;
        if !self.path.s().after(&self.h).equal(sig, &self.f) {
            return Err(PathError::Equation("s H = f".into()));
        }
        if !self.path.t().after(&self.h).equal(sig, &self.g) {
            return Err(PathError::Equation("t H = g".into()));
        }
        Ok(())
    }
}
