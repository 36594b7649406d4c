//! Definitional equality.
//!
//! Type-directed: at `Unit` everything is equal, at `Sig` terms are compared
//! through their projections, elsewhere weak-head normal forms are compared
//! structurally. `Id`, `refl`, `J` and `H` never compute.

use crate::memo::Memo;
use crate::syntax::{Decl, Hint, Motive, Signature, Telescope, Tm, Ty};

/// A typing context with cheap scoped extension.
///
/// Context ids are interned in the signature memo on demand.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    entries: Vec<(Hint, Ty)>,
    ids: Vec<u64>,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx::default()
    }

    pub fn from_telescope(t: &Telescope) -> Self {
        let mut c = Ctx::new();
        c.extend(t);
        c
    }

    /// Interned id of the current context; `0` for the empty one.
    /// A stale id only misses in the memo, so one retry after the memo was
    /// cleared suffices.
    pub(crate) fn id(&mut self, memo: &Memo) -> u64 {
        let mut retried = false;
        while self.ids.len() < self.entries.len() {
            let parent = self.ids.last().copied().unwrap_or(0);
            match memo.extend(parent, &self.entries[self.ids.len()].1) {
                Some(id) => self.ids.push(id),
                None if !retried => {
                    retried = true;
                    self.ids.clear();
                }
                None => return parent,
            }
        }
        self.ids.last().copied().unwrap_or(0)
    }

    pub fn to_telescope(&self) -> Telescope {
        Telescope(self.entries.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: Hint, ty: Ty) {
        self.entries.push((name, ty));
    }

    pub fn extend(&mut self, t: &Telescope) {
        for (n, ty) in &t.0 {
            self.push(n.clone(), ty.clone());
        }
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
        self.ids.truncate(len.min(self.ids.len()));
    }

    pub fn var_type(&self, idx: usize) -> Option<Ty> {
        let n = self.entries.len();
        if idx >= n {
            return None;
        }
        Some(self.entries[n - 1 - idx].1.shift(0, idx + 1))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.0.clone()).collect()
    }
}

/// Weak-head normal form: projections of pairs reduce and definitions unfold.
pub fn whnf(sig: &Signature, t: &Tm) -> Tm {
    match t {
        Tm::Fst(c) => match whnf(sig, c) {
            Tm::Pair(a, _) => whnf(sig, &a),
            c2 => Tm::Fst(Box::new(c2)),
        },
        Tm::Snd(c) => match whnf(sig, c) {
            Tm::Pair(_, b) => whnf(sig, &b),
            c2 => Tm::Snd(Box::new(c2)),
        },
        Tm::Const(n, sp) => match sig.lookup(n) {
            Some(Decl::Def { params, body, .. }) if params.len() == sp.len() => whnf(sig, &body.subst(sp, 0)),
            _ => t.clone(),
        },
        _ => t.clone(),
    }
}

pub fn defeq_terms(sig: &Signature, ctx: &Telescope, ty: &Ty, t1: &Tm, t2: &Tm) -> bool {
    Eq::new(sig).terms(&mut Ctx::from_telescope(ctx), ty, t1, t2)
}

pub fn defeq_types(sig: &Signature, ctx: &Telescope, a: &Ty, b: &Ty) -> bool {
    Eq::new(sig).types(&mut Ctx::from_telescope(ctx), a, b)
}

/// Componentwise equality of two instantiations of `tel` (over `ctx`).
pub fn defeq_spines(sig: &Signature, ctx: &Telescope, tel: &Telescope, s1: &[Tm], s2: &[Tm]) -> bool {
    Eq::new(sig).spines(&mut Ctx::from_telescope(ctx), tel, s1, s2)
}

/// Entrywise equality of two telescopes over `ctx`.
pub fn defeq_telescopes(sig: &Signature, ctx: &Telescope, a: &Telescope, b: &Telescope) -> bool {
    Eq::new(sig).telescopes(&mut Ctx::from_telescope(ctx), a, b)
}

pub(crate) struct Eq<'s> {
    sig: &'s Signature,
}

impl<'s> Eq<'s> {
    pub(crate) fn new(sig: &'s Signature) -> Self {
        Eq { sig }
    }

    pub(crate) fn terms(&self, ctx: &mut Ctx, ty: &Ty, t1: &Tm, t2: &Tm) -> bool {
        if t1 == t2 {
            return true;
        }
        match ty {
            Ty::Unit => true,
            Ty::Sigma(_, a, b) => {
                let f1 = Tm::fst(t1.clone());
                let f2 = Tm::fst(t2.clone());
                if !self.terms(ctx, a, &f1, &f2) {
                    return false;
                }
                let b_inst = b.subst(&[f1], 0);
                self.terms(ctx, &b_inst, &Tm::snd(t1.clone()), &Tm::snd(t2.clone()))
            }
            _ => {
                if matches!((t1, t2), (Tm::Var(_), Tm::Var(_))) {
                    return false;
                }
                let memo = self.sig.memo();
                let id = ctx.id(memo);
                if let Some(r) = memo.equal(id, t1, t2) {
                    return r;
                }
                let r = self.neutral(ctx, t1, t2);
                memo.set_equal(id, t1, t2, r);
                r
            }
        }
    }

    fn neutral(&self, ctx: &mut Ctx, t1: &Tm, t2: &Tm) -> bool {
        if let (Tm::Const(n1, s1), Tm::Const(n2, s2)) = (t1, t2) {
            if n1 == n2 {
                if let Some(Decl::Def { params, .. }) = self.sig.lookup(n1) {
                    if self.spines(ctx, &params.clone(), s1, s2) {
                        return true;
                    }
                }
            }
        }
        let w1 = whnf(self.sig, t1);
        let w2 = whnf(self.sig, t2);
        w1 == w2 || self.heads(ctx, &w1, &w2).is_some()
    }

    pub(crate) fn types(&self, ctx: &mut Ctx, a: &Ty, b: &Ty) -> bool {
        if a == b {
            return true;
        }
        match (a, b) {
            (Ty::Const(n1, s1), Ty::Const(n2, s2)) => {
                if n1 != n2 || s1.len() != s2.len() {
                    return false;
                }
                match self.sig.lookup(n1) {
                    Some(Decl::TypeConst { params, .. }) if params.len() == s1.len() => {
                        let params = params.clone();
                        self.spines(ctx, &params, s1, s2)
                    }
                    _ => false,
                }
            }
            (Ty::Id(t1, x1, y1), Ty::Id(t2, x2, y2)) => {
                self.types(ctx, t1, t2) && self.terms(ctx, t1, x1, x2) && self.terms(ctx, t1, y1, y2)
            }
            (Ty::Unit, Ty::Unit) => true,
            (Ty::Sigma(n, d1, c1), Ty::Sigma(_, d2, c2)) => {
                if !self.types(ctx, d1, d2) {
                    return false;
                }
                let len = ctx.len();
                ctx.push(n.clone(), (**d1).clone());
                let r = self.types(ctx, c1, c2);
                ctx.truncate(len);
                r
            }
            _ => false,
        }
    }

    /// Compares two spines instantiating the closed-over-ctx telescope `tel`
    /// (whose entries are scoped over `ctx` followed by earlier entries).
    pub(crate) fn spines(&self, ctx: &mut Ctx, tel: &Telescope, s1: &[Tm], s2: &[Tm]) -> bool {
        if s1.len() != tel.len() || s2.len() != tel.len() {
            return false;
        }
        for i in 0..tel.len() {
            if s1[i] == s2[i] {
                continue;
            }
            let ty_i = tel.0[i].1.subst(&s1[..i], 0);
            if !self.terms(ctx, &ty_i, &s1[i], &s2[i]) {
                return false;
            }
        }
        true
    }

    pub(crate) fn telescopes(&self, ctx: &mut Ctx, a: &Telescope, b: &Telescope) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let len = ctx.len();
        let mut ok = true;
        for ((n, t1), (_, t2)) in a.0.iter().zip(b.0.iter()) {
            if !self.types(ctx, t1, t2) {
                ok = false;
                break;
            }
            ctx.push(n.clone(), t1.clone());
        }
        ctx.truncate(len);
        ok
    }

    fn motives(&self, ctx: &mut Ctx, m1: &Motive, m2: &Motive) -> bool {
        if !self.types(ctx, &m1.ty, &m2.ty) {
            return false;
        }
        let len = ctx.len();
        ctx.extend(&m1.xyu());
        let mut ok = self.telescopes(ctx, &m1.delta, &m2.delta);
        if ok {
            ctx.extend(&m1.delta);
            ok = self.types(ctx, &m1.motive, &m2.motive);
        }
        ctx.truncate(len);
        if !ok {
            return false;
        }
        ctx.push(m1.names[0].clone(), m1.ty.clone());
        ctx.extend(&m1.delta_at_refl());
        let bt = m1.branch_type();
        let ok = self.terms(ctx, &bt, &m1.branch, &m2.branch);
        ctx.truncate(len);
        ok
    }

    fn delta_spine(&self, ctx: &mut Ctx, m: &Motive, a: &Tm, b: &Tm, p: &Tm, s1: &[Tm], s2: &[Tm]) -> bool {
        if s1.len() != m.delta.len() || s2.len() != m.delta.len() {
            return false;
        }
        (0..s1.len()).all(|i| {
            let ty = m.delta_entry_at(i, a, b, p, s1);
            self.terms(ctx, &ty, &s1[i], &s2[i])
        })
    }

    /// Structural comparison of weak-head normal forms; returns the type of
    /// the first argument when they are equal.
    pub(crate) fn heads(&self, ctx: &mut Ctx, a: &Tm, b: &Tm) -> Option<Ty> {
        match (a, b) {
            (Tm::Var(i), Tm::Var(j)) if i == j => ctx.var_type(*i),
            (Tm::Const(n1, s1), Tm::Const(n2, s2)) if n1 == n2 => match self.sig.lookup(n1) {
                Some(Decl::TermConst { params, ty, .. }) | Some(Decl::Def { params, ty, .. }) => {
                    let (params, ty) = (params.clone(), ty.clone());
                    if self.spines(ctx, &params, s1, s2) {
                        Some(ty.subst(s1, 0))
                    } else {
                        None
                    }
                }
                _ => None,
            },
            (Tm::Refl(t1, x1), Tm::Refl(t2, x2)) => {
                if self.types(ctx, t1, t2) && self.terms(ctx, t1, x1, x2) {
                    Some(Ty::id((**t1).clone(), (**x1).clone(), (**x1).clone()))
                } else {
                    None
                }
            }
            (Tm::Fst(c1), Tm::Fst(c2)) => match self.heads(ctx, c1, c2)? {
                Ty::Sigma(_, d, _) => Some(*d),
                _ => None,
            },
            (Tm::Snd(c1), Tm::Snd(c2)) => match self.heads(ctx, c1, c2)? {
                Ty::Sigma(_, _, cod) => Some(cod.subst(&[Tm::Fst(c1.clone())], 0)),
                _ => None,
            },
            (Tm::J(j1), Tm::J(j2)) => {
                let m = &j1.m;
                let ok = self.motives(ctx, m, &j2.m)
                    && self.terms(ctx, &m.ty, &j1.a, &j2.a)
                    && self.terms(ctx, &m.ty, &j1.b, &j2.b)
                    && self.terms(ctx, &Ty::id(m.ty.clone(), j1.a.clone(), j1.b.clone()), &j1.p, &j2.p)
                    && self.delta_spine(ctx, m, &j1.a, &j1.b, &j1.p, &j1.spine, &j2.spine);
                ok.then(|| m.instantiate(&j1.a, &j1.b, &j1.p, &j1.spine))
            }
            (Tm::H(h1), Tm::H(h2)) => {
                let m = &h1.m;
                let r = Tm::refl(m.ty.clone(), h1.a.clone());
                let ok = self.motives(ctx, m, &h2.m)
                    && self.terms(ctx, &m.ty, &h1.a, &h2.a)
                    && self.delta_spine(ctx, m, &h1.a, &h1.a, &r, &h1.spine, &h2.spine);
                ok.then(|| h_result_type(m, &h1.a, &h1.spine))
            }
            (Tm::Star, Tm::Star) => Some(Ty::Unit),
            _ => None,
        }
    }
}

/// `Id_{C(a,a,refl a,e)}(J(a, a, refl a, d, e), d(a, e))`.
pub fn h_result_type(m: &Motive, a: &Tm, spine: &[Tm]) -> Ty {
    let r = Tm::refl(m.ty.clone(), a.clone());
    let c = m.instantiate(a, a, &r, spine);
    let j = Tm::J(Box::new(crate::syntax::JElim {
        m: m.clone(),
        a: a.clone(),
        b: a.clone(),
        p: r,
        spine: spine.to_vec(),
    }));
    let mut args = vec![a.clone()];
    args.extend(spine.iter().cloned());
    let d = m.branch.subst(&args, 0);
    Ty::id(c, j, d)
}
