//! The category of contexts: closed telescopes as objects, term tuples as
//! morphisms (composition is substitution), dependent projections as
//! fibrations, pullback by substitution, Σ-collapse and slice views.

use thiserror::Error;

use crate::checker::{self, KernelError};
use crate::defeq::{defeq_spines, defeq_telescopes};
use crate::syntax::{rebase_ty, Signature, Telescope, Tm, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("ill-typed morphism: {0}")]
    IllTyped(#[from] KernelError),
    #[error("strong sums are disabled")]
    SumsDisabled,
    #[error("square does not commute")]
    NotCommuting,
    #[error("rank error: {0}")]
    Rank(String),
}

pub type Result<T> = std::result::Result<T, CatError>;

/// A morphism `source -> target`: one term over `source` per entry of `target`,
/// each at the target type substituted by the earlier terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: Telescope,
    pub target: Telescope,
    pub terms: Vec<Tm>,
}

impl Morphism {
    pub fn new(source: Telescope, target: Telescope, terms: Vec<Tm>) -> Self {
        Morphism { source, target, terms }
    }

    pub fn identity(ctx: &Telescope) -> Morphism {
        Morphism { source: ctx.clone(), target: ctx.clone(), terms: ctx.vars(0) }
    }

    /// The projection `[keep, rest] -> keep` dropping the last entries.
    pub fn projection(ctx: &Telescope, keep: usize) -> Morphism {
        let (base, _) = ctx.split_at(keep);
        let drop = ctx.len() - keep;
        Morphism { source: ctx.clone(), target: base.clone(), terms: base.vars(drop) }
    }

    /// Kernel check: both contexts well-formed and every term at its type.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        checker::context_wf(sig, &self.source)?;
        checker::context_wf(sig, &self.target)?;
        if self.terms.len() != self.target.len() {
            return Err(CatError::ContextMismatch(format!(
                "{} terms for a target of length {}",
                self.terms.len(),
                self.target.len()
            )));
        }
        checker::check_spine(sig, &self.source, &self.target, &self.terms)?;
        Ok(())
    }

    /// `self ∘ f`, substituting `f` into the terms of `self`.
    pub fn compose(&self, sig: &Signature, f: &Morphism) -> Result<Morphism> {
        if !defeq_telescopes(sig, &Telescope::new(), &f.target, &self.source) {
            return Err(CatError::ContextMismatch("target of the first map is not the source of the second".into()));
        }
        Ok(self.after(f))
    }

    /// `self ∘ f` without comparing the middle contexts.
    pub fn after(&self, f: &Morphism) -> Morphism {
        Morphism {
            source: f.source.clone(),
            target: self.target.clone(),
            terms: self.terms.iter().map(|t| t.subst(&f.terms, 0)).collect(),
        }
    }

    /// Componentwise definitional equality of parallel morphisms.
    pub fn equal(&self, sig: &Signature, other: &Morphism) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.len() == self.target.len()
            && defeq_spines(sig, &self.source, &self.target, &self.terms, &other.terms)
    }

    /// Pulls a telescope over the target back to one over the source.
    pub fn pull_telescope(&self, ext: &Telescope) -> Telescope {
        ext.subst(&self.terms, 0)
    }

    pub fn pull_ty(&self, ty: &Ty) -> Ty {
        ty.subst(&self.terms, 0)
    }

    pub fn pull_tm(&self, t: &Tm) -> Tm {
        t.subst(&self.terms, 0)
    }

    /// For `ext` over the target, the map `[source, ext[self]] -> [target, ext]`.
    pub fn extend(&self, ext: &Telescope) -> Morphism {
        let k = ext.len();
        let mut terms: Vec<Tm> = self.terms.iter().map(|t| t.shift(0, k)).collect();
        terms.extend(Telescope::vars(ext, 0));
        Morphism { source: self.source.concat(&self.pull_telescope(ext)), target: self.target.concat(ext), terms }
    }

    /// Appends terms (over the source) for a telescope extending the target.
    pub fn push(mut self, ext: &Telescope, terms: Vec<Tm>) -> Morphism {
        debug_assert_eq!(ext.len(), terms.len());
        self.target = self.target.concat(ext);
        self.terms.extend(terms);
        self
    }

    /// The first `k` components, as a map into the first `k` target entries.
    pub fn truncate(&self, k: usize) -> Morphism {
        Morphism { source: self.source.clone(), target: self.target.split_at(k).0, terms: self.terms[..k].to_vec() }
    }

    /// Re-types the source (for a definitionally equal or renamed context).
    pub fn with_source(mut self, source: Telescope) -> Morphism {
        self.source = source;
        self
    }
}

/// A dependent projection `[base, ext] -> base` of rank `ext.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fibration {
    pub base: Telescope,
    pub ext: Telescope,
}

impl Fibration {
    pub fn new(base: Telescope, ext: Telescope) -> Self {
        Fibration { base, ext }
    }

    /// The fibration `ctx -> []`.
    pub fn over_empty(ctx: Telescope) -> Self {
        Fibration { base: Telescope::new(), ext: ctx }
    }

    pub fn identity(ctx: Telescope) -> Self {
        Fibration { base: ctx, ext: Telescope::new() }
    }

    pub fn rank(&self) -> usize {
        self.ext.len()
    }

    pub fn total(&self) -> Telescope {
        self.base.concat(&self.ext)
    }

    pub fn projection(&self) -> Morphism {
        Morphism::projection(&self.total(), self.base.len())
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        checker::context_wf(sig, &self.total())?;
        Ok(())
    }

    /// `self ∘ upper` where `upper` is a fibration over the total context of `self`.
    pub fn compose(&self, sig: &Signature, upper: &Fibration) -> Result<Fibration> {
        if !defeq_telescopes(sig, &Telescope::new(), &upper.base, &self.total()) {
            return Err(CatError::ContextMismatch("the upper fibration is not over the total context".into()));
        }
        Ok(Fibration { base: self.base.clone(), ext: self.ext.concat(&upper.ext) })
    }

    /// The unique factorisation into a rank `k` projection followed by the rest.
    pub fn factor(&self, k: usize) -> Result<(Fibration, Fibration)> {
        if k > self.rank() {
            return Err(CatError::Rank(format!("cannot split rank {} at {k}", self.rank())));
        }
        let (lo, hi) = self.ext.split_at(k);
        let lower = Fibration { base: self.base.clone(), ext: lo };
        let upper = Fibration { base: lower.total(), ext: hi };
        Ok((lower, upper))
    }

    /// Pullback along `f : Δ -> base`: the fibration `[Δ, ext[f]] -> Δ` and its square.
    pub fn pullback(&self, sig: &Signature, f: &Morphism) -> Result<(Fibration, Square)> {
        if !defeq_telescopes(sig, &Telescope::new(), &f.target, &self.base) {
            return Err(CatError::ContextMismatch("the map does not land in the base".into()));
        }
        Ok(self.pullback_unchecked(f))
    }

    pub fn pullback_unchecked(&self, f: &Morphism) -> (Fibration, Square) {
        let pulled = Fibration { base: f.source.clone(), ext: f.pull_telescope(&self.ext) };
        let square = Square {
            top: f.extend(&self.ext),
            left: pulled.projection(),
            right: self.projection(),
            bottom: f.clone(),
            pullback: true,
        };
        (pulled, square)
    }
}

/// `top : W -> Y`, `left : W -> Z`, `right : Y -> X`, `bottom : Z -> X`,
/// commuting when `right ∘ top = bottom ∘ left`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub top: Morphism,
    pub left: Morphism,
    pub right: Morphism,
    pub bottom: Morphism,
    pub pullback: bool,
}

impl Square {
    pub fn commutes(&self, sig: &Signature) -> bool {
        self.right.after(&self.top).equal(sig, &self.bottom.after(&self.left))
    }

    /// For a pullback square of a projection, the mediating map of a cone
    /// `a : V -> Y`, `b : V -> Z` with `right ∘ a = bottom ∘ b`.
    pub fn mediate(&self, sig: &Signature, a: &Morphism, b: &Morphism) -> Result<Morphism> {
        if !self.pullback {
            return Err(CatError::Rank("not a pullback square".into()));
        }
        if !self.right.after(a).equal(sig, &self.bottom.after(b)) {
            return Err(CatError::NotCommuting);
        }
        let base = self.right.target.len();
        let mut terms = b.terms.clone();
        terms.extend(a.terms[base..].iter().cloned());
        let m = Morphism { source: a.source.clone(), target: self.top.source.clone(), terms };
        m.check(sig)?;
        Ok(m)
    }
}

/// A reordering of a closed context with the comparison isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    pub ctx: Telescope,
    /// `order[i]` is the old position of the new entry `i`.
    pub order: Vec<usize>,
    /// old -> new
    pub to_new: Morphism,
    /// new -> old
    pub to_old: Morphism,
}

/// Reorders `ctx` so that the new entry `i` is the old entry `order[i]`.
/// Fails if some entry would come before an entry its type mentions.
pub fn permute_context(ctx: &Telescope, order: &[usize]) -> Option<Permutation> {
    let n = ctx.len();
    if order.len() != n {
        return None;
    }
    let mut new_pos = vec![usize::MAX; n];
    for (i, &o) in order.iter().enumerate() {
        if o >= n || new_pos[o] != usize::MAX {
            return None;
        }
        new_pos[o] = i;
    }
    let mut out = Telescope::new();
    for (i, &o) in order.iter().enumerate() {
        let (h, ty) = &ctx.0[o];
        let mut fv = std::collections::BTreeSet::new();
        ty.free_vars(0, &mut fv);
        if fv.iter().any(|&idx| idx >= o || new_pos[o - 1 - idx] >= i) {
            return None;
        }
        let args: Vec<Tm> = (0..o)
            .map(|l| if new_pos[l] < i { Tm::Var(i - 1 - new_pos[l]) } else { Tm::Star })
            .collect();
        out.push(h.clone(), ty.subst(&args, 0));
    }
    let to_new = Morphism::new(ctx.clone(), out.clone(), order.iter().map(|&o| Tm::Var(n - 1 - o)).collect());
    let to_old = Morphism::new(out.clone(), ctx.clone(), (0..n).map(|l| Tm::Var(n - 1 - new_pos[l])).collect());
    Some(Permutation { ctx: out, order: order.to_vec(), to_new, to_old })
}

/// The Σ-type of a telescope together with the comparison isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaCollapse {
    /// `ΣΘ` as a type over the base.
    pub ty: Ty,
    /// `[Γ, Θ] -> [Γ, z : ΣΘ]`
    pub fwd: Morphism,
    /// `[Γ, z : ΣΘ] -> [Γ, Θ]`
    pub bwd: Morphism,
}

/// `q_i z = snd (fst^(n-1-i) z)`, the i-th component of a nested pair.
pub fn sigma_component(z: &Tm, n: usize, i: usize) -> Tm {
    let mut t = z.clone();
    for _ in 0..(n - 1 - i) {
        t = Tm::fst(t);
    }
    Tm::snd(t)
}

/// `Σ[] = Unit` and `Σ[Θ, x : A] = Sig (y : ΣΘ) A[q_0 y, .., q_(n-1) y]`.
pub fn sigma_type(ext: &Telescope) -> Ty {
    let mut ty = Ty::Unit;
    for (n, (h, a)) in ext.0.iter().enumerate() {
        let qs: Vec<Tm> = (0..n).map(|i| sigma_component(&Tm::Var(0), n, i)).collect();
        let cod = rebase_ty(a, 0, n, 1, &qs);
        ty = Ty::Sigma(h.clone(), Box::new(ty), Box::new(cod));
    }
    ty
}

pub fn sigma_collapse(sig: &Signature, fib: &Fibration) -> Result<SigmaCollapse> {
    if !sig.strong_sums {
        return Err(CatError::SumsDisabled);
    }
    let n = fib.rank();
    let g = fib.base.len();
    let ty = sigma_type(&fib.ext);
    let collapsed = fib.base.clone().with("z", ty.clone());

    let mut packed = Tm::Star;
    for v in fib.ext.vars(0) {
        packed = Tm::pair(packed, v);
    }
    let mut fwd_terms = fib.base.vars(n);
    fwd_terms.push(packed);
    let fwd = Morphism::new(fib.total(), collapsed.clone(), fwd_terms);

    let mut bwd_terms = fib.base.vars(1);
    bwd_terms.extend((0..n).map(|i| sigma_component(&Tm::Var(0), n, i)));
    let bwd = Morphism::new(collapsed, fib.total(), bwd_terms);
    debug_assert_eq!(fwd.terms.len(), g + 1);
    Ok(SigmaCollapse { ty, fwd, bwd })
}

impl SigmaCollapse {
    /// Both composites are identities up to definitional equality.
    pub fn roundtrips(&self, sig: &Signature) -> bool {
        let a = self.bwd.after(&self.fwd);
        let b = self.fwd.after(&self.bwd);
        a.equal(sig, &Morphism::identity(&self.fwd.source)) && b.equal(sig, &Morphism::identity(&self.bwd.source))
    }
}

/// The slice over a context: objects are fibrations over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub base: Telescope,
}

impl Slice {
    pub fn new(base: Telescope) -> Self {
        Slice { base }
    }

    pub fn object(&self, ext: Telescope) -> Fibration {
        Fibration { base: self.base.clone(), ext }
    }

    /// Change of base along `f : Δ -> base`.
    pub fn change_of_base(&self, fib: &Fibration, f: &Morphism) -> Fibration {
        fib.pullback_unchecked(f).0
    }

    /// Σ along a display: an object over `[base, ext]` viewed over `base`.
    pub fn sigma(&self, lower: &Telescope, upper: &Fibration) -> Fibration {
        Fibration { base: self.base.clone(), ext: lower.concat(&upper.ext) }
    }

    /// The slice of this slice at `ext` is the slice over the concatenation.
    pub fn slice(&self, ext: &Telescope) -> Slice {
        Slice { base: self.base.concat(ext) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::add_decl;
    use crate::syntax::Decl;

    fn sig() -> Signature {
        let mut s = Signature::new().with_strong_sums();
        add_decl(&mut s, Decl::TypeConst { name: "A".into(), params: Telescope::new() }).unwrap();
        add_decl(
            &mut s,
            Decl::TypeConst { name: "B".into(), params: Telescope::new().with("x", Ty::konst("A", vec![])) },
        )
        .unwrap();
        add_decl(&mut s, Decl::TermConst { name: "a".into(), params: Telescope::new(), ty: Ty::konst("A", vec![]) })
            .unwrap();
        s
    }

    fn a() -> Ty {
        Ty::konst("A", vec![])
    }

    fn xb() -> Telescope {
        Telescope::new().with("x", a()).with("b", Ty::konst("B", vec![Tm::Var(0)]))
    }

    #[test]
    fn identity_of_empty_is_empty() {
        assert!(Morphism::identity(&Telescope::new()).terms.is_empty());
        assert_eq!(Morphism::identity(&Telescope::new().with("x", a())).terms, vec![Tm::Var(0)]);
    }

    #[test]
    fn projections_compose() {
        let s = sig();
        let ctx = xb();
        let p1 = Morphism::projection(&ctx, 1);
        let p0 = Morphism::projection(&ctx.split_at(1).0, 0);
        let c = p0.compose(&s, &p1).unwrap();
        assert!(c.equal(&s, &Morphism::projection(&ctx, 0)));
    }

    #[test]
    fn pullback_along_point() {
        let s = sig();
        let fib = Fibration::new(Telescope::new().with("x", a()), Telescope::new().with("b", Ty::konst("B", vec![Tm::Var(0)])));
        let pt = Morphism::new(Telescope::new(), Telescope::new().with("x", a()), vec![Tm::konst("a", vec![])]);
        let (pulled, sq) = fib.pullback(&s, &pt).unwrap();
        assert_eq!(pulled.ext.0[0].1, Ty::konst("B", vec![Tm::konst("a", vec![])]));
        assert_eq!(pulled.rank(), 1);
        assert!(sq.commutes(&s));
        sq.top.check(&s).unwrap();
    }

    #[test]
    fn collapse_two_entries() {
        let s = sig();
        let c = sigma_collapse(&s, &Fibration::over_empty(xb())).unwrap();
        assert!(matches!(&c.ty, Ty::Sigma(_, d, _) if matches!(**d, Ty::Sigma(..))));
        c.fwd.check(&s).unwrap();
        c.bwd.check(&s).unwrap();
        assert!(c.roundtrips(&s));
    }

    #[test]
    fn collapse_empty_is_unit() {
        let s = sig();
        let c = sigma_collapse(&s, &Fibration::over_empty(Telescope::new())).unwrap();
        assert_eq!(c.ty, Ty::Unit);
        assert!(c.roundtrips(&s));
    }

    #[test]
    fn collapse_needs_flag() {
        let mut s = sig();
        s.strong_sums = false;
        assert_eq!(sigma_collapse(&s, &Fibration::over_empty(xb())), Err(CatError::SumsDisabled));
    }

    #[test]
    fn permutation_roundtrip() {
        let s = sig();
        // [x : A, y : A, b : B x] reordered to [x, b, y]
        let ctx = Telescope::new().with("x", a()).with("y", a()).with("b", Ty::konst("B", vec![Tm::Var(1)]));
        let p = permute_context(&ctx, &[0, 2, 1]).unwrap();
        assert_eq!(p.ctx.0[1].1, Ty::konst("B", vec![Tm::Var(0)]));
        p.to_new.check(&s).unwrap();
        p.to_old.check(&s).unwrap();
        assert!(p.to_old.after(&p.to_new).equal(&s, &Morphism::identity(&ctx)));
        assert!(permute_context(&ctx, &[2, 0, 1]).is_none());
    }

    #[test]
    fn factor_is_inverse_to_compose() {
        let s = sig();
        let fib = Fibration::over_empty(xb());
        let (lo, hi) = fib.factor(1).unwrap();
        assert_eq!(lo.compose(&s, &hi).unwrap(), fib);
    }
}
