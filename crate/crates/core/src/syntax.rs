//! Core syntax: de Bruijn terms and types, telescopes and signatures.
//!
//! Variables are de Bruijn indices (`Var(0)` is the innermost binder).
//! Binder names are kept only as printing hints and never take part in
//! equality, so alpha-equivalent syntax compares equal.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

/// A binder name used only for printing. Compares equal to every other hint.
#[derive(Clone, Default)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(s: impl Into<String>) -> Self {
        Hint(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Hint {
    fn from(s: &str) -> Self {
        Hint(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    /// A postulated type constant applied to its full parameter spine.
    Const(String, Vec<Tm>),
    /// `Id A a b`.
    Id(Box<Ty>, Box<Tm>, Box<Tm>),
    Unit,
    /// `Sig (x : A) B`, with `B` under one binder.
    Sigma(Hint, Box<Ty>, Box<Ty>),
}

/// The annotations shared by `J` and `H`.
///
/// Scoping, relative to the ambient context `G` of the eliminator:
/// `ty` over `G`; `delta[i]` over `G, x, y, u, delta[..i]`;
/// `motive` over `G, x, y, u, delta`; `branch` over `G, x, delta(x, x, refl x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Motive {
    pub names: [Hint; 3],
    pub ty: Ty,
    pub delta: Telescope,
    pub motive: Ty,
    pub branch: Tm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JElim {
    pub m: Motive,
    pub a: Tm,
    pub b: Tm,
    pub p: Tm,
    pub spine: Vec<Tm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HWit {
    pub m: Motive,
    pub a: Tm,
    pub spine: Vec<Tm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tm {
    Var(usize),
    /// A term constant or definition applied to its full parameter spine.
    Const(String, Vec<Tm>),
    Refl(Box<Ty>, Box<Tm>),
    J(Box<JElim>),
    H(Box<HWit>),
    Star,
    Pair(Box<Tm>, Box<Tm>),
    Fst(Box<Tm>),
    Snd(Box<Tm>),
}

/// Dependency-ordered list of binders; entry `i` is scoped over entries `..i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Telescope(pub Vec<(Hint, Ty)>);

/// A closed telescope, i.e. an object of the classifying category.
pub type Context = Telescope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    TypeConst { name: String, params: Telescope },
    TermConst { name: String, params: Telescope, ty: Ty },
    Def { name: String, params: Telescope, ty: Ty, body: Tm },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::TypeConst { name, .. } | Decl::TermConst { name, .. } | Decl::Def { name, .. } => {
                name
            }
        }
    }

    pub fn params(&self) -> &Telescope {
        match self {
            Decl::TypeConst { params, .. }
            | Decl::TermConst { params, .. }
            | Decl::Def { params, .. } => params,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    decls: Vec<Decl>,
    index: HashMap<String, usize>,
    pub strong_sums: bool,
    memo: crate::memo::Memo,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_strong_sums(mut self) -> Self {
        self.strong_sums = true;
        self
    }

    pub fn lookup(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub(crate) fn memo(&self) -> &crate::memo::Memo {
        &self.memo
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    /// Appends without checking; use `checker::add_decl` for checked extension.
    pub fn push_unchecked(&mut self, decl: Decl) {
        self.index.insert(decl.name().to_string(), self.decls.len());
        self.decls.push(decl);
    }
}

// ---------------------------------------------------------------------------
// Variable traversal
// ---------------------------------------------------------------------------

/// Action on a free variable: `depth` binders have been crossed and `idx`
/// is the index relative to the outside of the traversal.
trait VarMap {
    fn var(&self, depth: usize, idx: usize) -> Tm;
}

struct Shift {
    cutoff: usize,
    by: usize,
}

impl VarMap for Shift {
    fn var(&self, depth: usize, idx: usize) -> Tm {
        if idx >= self.cutoff {
            Tm::Var(depth + idx + self.by)
        } else {
            Tm::Var(depth + idx)
        }
    }
}

struct Subst<'a> {
    args: &'a [Tm],
    at: usize,
}

impl VarMap for Subst<'_> {
    fn var(&self, depth: usize, idx: usize) -> Tm {
        let k = self.args.len();
        if idx < self.at {
            Tm::Var(depth + idx)
        } else if idx < self.at + k {
            self.args[k - 1 - (idx - self.at)].shift(0, depth + self.at)
        } else {
            Tm::Var(depth + idx - k)
        }
    }
}

impl Tm {
    fn map_vars(&self, depth: usize, f: &dyn VarMap) -> Tm {
        match self {
            Tm::Var(i) => {
                if *i < depth {
                    Tm::Var(*i)
                } else {
                    f.var(depth, *i - depth)
                }
            }
            Tm::Const(n, sp) => Tm::Const(n.clone(), sp.iter().map(|t| t.map_vars(depth, f)).collect()),
            Tm::Refl(a, t) => Tm::Refl(Box::new(a.map_vars(depth, f)), Box::new(t.map_vars(depth, f))),
            Tm::J(j) => Tm::J(Box::new(JElim {
                m: j.m.map_vars(depth, f),
                a: j.a.map_vars(depth, f),
                b: j.b.map_vars(depth, f),
                p: j.p.map_vars(depth, f),
                spine: j.spine.iter().map(|t| t.map_vars(depth, f)).collect(),
            })),
            Tm::H(h) => Tm::H(Box::new(HWit {
                m: h.m.map_vars(depth, f),
                a: h.a.map_vars(depth, f),
                spine: h.spine.iter().map(|t| t.map_vars(depth, f)).collect(),
            })),
            Tm::Star => Tm::Star,
            Tm::Pair(a, b) => Tm::Pair(Box::new(a.map_vars(depth, f)), Box::new(b.map_vars(depth, f))),
            Tm::Fst(c) => Tm::Fst(Box::new(c.map_vars(depth, f))),
            Tm::Snd(c) => Tm::Snd(Box::new(c.map_vars(depth, f))),
        }
    }

    /// Shifts every free index `>= cutoff` up by `by`.
    pub fn shift(&self, cutoff: usize, by: usize) -> Tm {
        if by == 0 {
            return self.clone();
        }
        self.map_vars(0, &Shift { cutoff, by })
    }

    /// Replaces the `args.len()` binders sitting just outside the first `at`
    /// binders. `args[0]` is the outermost replaced binder. The args live in
    /// the context outside the replaced binders; indices beyond them shift down.
    pub fn subst(&self, args: &[Tm], at: usize) -> Tm {
        if args.is_empty() {
            return self.clone();
        }
        self.map_vars(0, &Subst { args, at })
    }

    pub fn free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        match self {
            Tm::Var(i) => {
                if *i >= depth {
                    out.insert(*i - depth);
                }
            }
            Tm::Const(_, sp) => sp.iter().for_each(|t| t.free_vars(depth, out)),
            Tm::Refl(a, t) => {
                a.free_vars(depth, out);
                t.free_vars(depth, out);
            }
            Tm::J(j) => {
                j.m.free_vars(depth, out);
                for t in [&j.a, &j.b, &j.p].into_iter().chain(j.spine.iter()) {
                    t.free_vars(depth, out);
                }
            }
            Tm::H(h) => {
                h.m.free_vars(depth, out);
                h.a.free_vars(depth, out);
                h.spine.iter().for_each(|t| t.free_vars(depth, out));
            }
            Tm::Star => {}
            Tm::Pair(a, b) => {
                a.free_vars(depth, out);
                b.free_vars(depth, out);
            }
            Tm::Fst(c) | Tm::Snd(c) => c.free_vars(depth, out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Tm::Var(_) | Tm::Star => 1,
            Tm::Const(_, sp) => 1 + sp.iter().map(Tm::size).sum::<usize>(),
            Tm::Refl(a, t) => 1 + a.size() + t.size(),
            Tm::J(j) => {
                1 + j.m.size() + j.a.size() + j.b.size() + j.p.size() + j.spine.iter().map(Tm::size).sum::<usize>()
            }
            Tm::H(h) => 1 + h.m.size() + h.a.size() + h.spine.iter().map(Tm::size).sum::<usize>(),
            Tm::Pair(a, b) => 1 + a.size() + b.size(),
            Tm::Fst(c) | Tm::Snd(c) => 1 + c.size(),
        }
    }

    pub fn var(i: usize) -> Tm {
        Tm::Var(i)
    }

    pub fn refl(ty: Ty, t: Tm) -> Tm {
        Tm::Refl(Box::new(ty), Box::new(t))
    }

    pub fn pair(a: Tm, b: Tm) -> Tm {
        Tm::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(c: Tm) -> Tm {
        Tm::Fst(Box::new(c))
    }

    pub fn snd(c: Tm) -> Tm {
        Tm::Snd(Box::new(c))
    }

    pub fn konst(name: &str, spine: Vec<Tm>) -> Tm {
        Tm::Const(name.to_string(), spine)
    }
}

impl Ty {
    fn map_vars(&self, depth: usize, f: &dyn VarMap) -> Ty {
        match self {
            Ty::Const(n, sp) => Ty::Const(n.clone(), sp.iter().map(|t| t.map_vars(depth, f)).collect()),
            Ty::Id(a, x, y) => Ty::Id(
                Box::new(a.map_vars(depth, f)),
                Box::new(x.map_vars(depth, f)),
                Box::new(y.map_vars(depth, f)),
            ),
            Ty::Unit => Ty::Unit,
            Ty::Sigma(n, a, b) => Ty::Sigma(
                n.clone(),
                Box::new(a.map_vars(depth, f)),
                Box::new(b.map_vars(depth + 1, f)),
            ),
        }
    }

    pub fn shift(&self, cutoff: usize, by: usize) -> Ty {
        if by == 0 {
            return self.clone();
        }
        self.map_vars(0, &Shift { cutoff, by })
    }

    pub fn subst(&self, args: &[Tm], at: usize) -> Ty {
        if args.is_empty() {
            return self.clone();
        }
        self.map_vars(0, &Subst { args, at })
    }

    pub fn free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        match self {
            Ty::Const(_, sp) => sp.iter().for_each(|t| t.free_vars(depth, out)),
            Ty::Id(a, x, y) => {
                a.free_vars(depth, out);
                x.free_vars(depth, out);
                y.free_vars(depth, out);
            }
            Ty::Unit => {}
            Ty::Sigma(_, a, b) => {
                a.free_vars(depth, out);
                b.free_vars(depth + 1, out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Ty::Const(_, sp) => 1 + sp.iter().map(Tm::size).sum::<usize>(),
            Ty::Id(a, x, y) => 1 + a.size() + x.size() + y.size(),
            Ty::Unit => 1,
            Ty::Sigma(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn id(ty: Ty, a: Tm, b: Tm) -> Ty {
        Ty::Id(Box::new(ty), Box::new(a), Box::new(b))
    }

    pub fn konst(name: &str, spine: Vec<Tm>) -> Ty {
        Ty::Const(name.to_string(), spine)
    }

    pub fn sigma(name: &str, dom: Ty, cod: Ty) -> Ty {
        Ty::Sigma(Hint::new(name), Box::new(dom), Box::new(cod))
    }

    /// True if Unit or Sigma occurs anywhere, including inside terms.
    pub fn uses_sums(&self) -> bool {
        match self {
            Ty::Unit | Ty::Sigma(..) => true,
            Ty::Const(_, sp) => sp.iter().any(Tm::uses_sums),
            Ty::Id(a, x, y) => a.uses_sums() || x.uses_sums() || y.uses_sums(),
        }
    }
}

impl Tm {
    pub fn uses_sums(&self) -> bool {
        match self {
            Tm::Star | Tm::Pair(..) | Tm::Fst(_) | Tm::Snd(_) => true,
            Tm::Var(_) => false,
            Tm::Const(_, sp) => sp.iter().any(Tm::uses_sums),
            Tm::Refl(a, t) => a.uses_sums() || t.uses_sums(),
            Tm::J(j) => {
                j.m.uses_sums()
                    || [&j.a, &j.b, &j.p].into_iter().chain(j.spine.iter()).any(Tm::uses_sums)
            }
            Tm::H(h) => h.m.uses_sums() || h.a.uses_sums() || h.spine.iter().any(Tm::uses_sums),
        }
    }
}

impl Motive {
    fn map_vars(&self, depth: usize, f: &dyn VarMap) -> Motive {
        let d = self.delta.len();
        Motive {
            names: self.names.clone(),
            ty: self.ty.map_vars(depth, f),
            delta: self.delta.map_vars(depth + 3, f),
            motive: self.motive.map_vars(depth + 3 + d, f),
            branch: self.branch.map_vars(depth + 1 + d, f),
        }
    }

    fn free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        let d = self.delta.len();
        self.ty.free_vars(depth, out);
        self.delta.free_vars(depth + 3, out);
        self.motive.free_vars(depth + 3 + d, out);
        self.branch.free_vars(depth + 1 + d, out);
    }

    fn size(&self) -> usize {
        self.ty.size() + self.delta.0.iter().map(|(_, t)| t.size()).sum::<usize>() + self.motive.size() + self.branch.size()
    }

    fn uses_sums(&self) -> bool {
        self.ty.uses_sums()
            || self.delta.0.iter().any(|(_, t)| t.uses_sums())
            || self.motive.uses_sums()
            || self.branch.uses_sums()
    }

    /// The context extension `x : A, y : A, u : Id A x y` over the ambient context.
    pub fn xyu(&self) -> Telescope {
        xyu_telescope(&self.names, &self.ty)
    }

    /// `delta(x, x, refl x)` as a telescope over `G, x`.
    pub fn delta_at_refl(&self) -> Telescope {
        let refl_args = [Tm::Var(0), Tm::Var(0), Tm::refl(self.ty.shift(0, 1), Tm::Var(0))];
        Telescope(
            self.delta
                .0
                .iter()
                .enumerate()
                .map(|(i, (n, t))| (n.clone(), rebase_ty(t, i, 3, 1, &refl_args)))
                .collect(),
        )
    }

    /// Type of the branch: `motive(x, x, refl x, delta)` over `G, x, delta(x,x,refl x)`.
    pub fn branch_type(&self) -> Ty {
        let refl_args = [Tm::Var(0), Tm::Var(0), Tm::refl(self.ty.shift(0, 1), Tm::Var(0))];
        rebase_ty(&self.motive, self.delta.len(), 3, 1, &refl_args)
    }

    /// `motive` instantiated at `a, b, p, spine` (all over the ambient context).
    pub fn instantiate(&self, a: &Tm, b: &Tm, p: &Tm, spine: &[Tm]) -> Ty {
        let mut args = vec![a.clone(), b.clone(), p.clone()];
        args.extend(spine.iter().cloned());
        self.motive.subst(&args, 0)
    }

    /// Entry `i` of `delta(a, b, p)` instantiated at the earlier spine entries.
    pub fn delta_entry_at(&self, i: usize, a: &Tm, b: &Tm, p: &Tm, spine: &[Tm]) -> Ty {
        let mut args = vec![a.clone(), b.clone(), p.clone()];
        args.extend(spine[..i].iter().cloned());
        self.delta.0[i].1.subst(&args, 0)
    }
}

/// `x : A, y : A, u : Id A x y` for `A` over the ambient context.
pub fn xyu_telescope(names: &[Hint; 3], ty: &Ty) -> Telescope {
    Telescope(vec![
        (names[0].clone(), ty.clone()),
        (names[1].clone(), ty.shift(0, 1)),
        (names[2].clone(), Ty::id(ty.shift(0, 2), Tm::Var(1), Tm::Var(0))),
    ])
}

/// Re-roots syntax living over `[G, B(k), inner(depth)]` onto `[G, E(m), inner]`
/// by substituting the `k` binders `B` with `args`, which live over `[G, E]`.
pub fn rebase_tm(t: &Tm, depth: usize, k: usize, m: usize, args: &[Tm]) -> Tm {
    debug_assert_eq!(args.len(), k);
    t.shift(depth + k, m).subst(args, depth)
}

pub fn rebase_ty(t: &Ty, depth: usize, k: usize, m: usize, args: &[Tm]) -> Ty {
    debug_assert_eq!(args.len(), k);
    t.shift(depth + k, m).subst(args, depth)
}

impl Telescope {
    pub fn new() -> Self {
        Telescope(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, name: impl Into<Hint>, ty: Ty) {
        self.0.push((name.into(), ty));
    }

    pub fn with(mut self, name: &str, ty: Ty) -> Self {
        self.0.push((Hint::new(name), ty));
        self
    }

    pub fn types(&self) -> impl Iterator<Item = &Ty> {
        self.0.iter().map(|(_, t)| t)
    }

    fn map_vars(&self, depth: usize, f: &dyn VarMap) -> Telescope {
        Telescope(
            self.0
                .iter()
                .enumerate()
                .map(|(i, (n, t))| (n.clone(), t.map_vars(depth + i, f)))
                .collect(),
        )
    }

    /// Shifts free indices of a telescope that sits over some context.
    pub fn shift(&self, cutoff: usize, by: usize) -> Telescope {
        if by == 0 {
            return self.clone();
        }
        self.map_vars(0, &Shift { cutoff, by })
    }

    /// Substitutes the binders just outside the telescope.
    pub fn subst(&self, args: &[Tm], at: usize) -> Telescope {
        if args.is_empty() {
            return self.clone();
        }
        self.map_vars(0, &Subst { args, at })
    }

    pub fn free_vars(&self, depth: usize, out: &mut BTreeSet<usize>) {
        for (i, (_, t)) in self.0.iter().enumerate() {
            t.free_vars(depth + i, out);
        }
    }

    /// Concatenation `[self, ext]`, where `ext` is over `self`.
    pub fn concat(&self, ext: &Telescope) -> Telescope {
        let mut v = self.0.clone();
        v.extend(ext.0.iter().cloned());
        Telescope(v)
    }

    /// The telescope with each entry re-rooted from the binders `[B(k)]`
    /// directly outside it onto `[E(m)]` (see [`rebase_tm`]).
    pub fn rebase(&self, k: usize, m: usize, args: &[Tm]) -> Telescope {
        Telescope(
            self.0
                .iter()
                .enumerate()
                .map(|(i, (n, t))| (n.clone(), rebase_ty(t, i, k, m, args)))
                .collect(),
        )
    }

    /// The variables of this telescope as terms in the context `[.., self, extra]`.
    pub fn vars(&self, extra: usize) -> Vec<Tm> {
        let n = self.len();
        (0..n).map(|i| Tm::Var(n - 1 - i + extra)).collect()
    }

    /// Type of `Var(idx)` in this context (as a closed context).
    pub fn var_type(&self, idx: usize) -> Option<Ty> {
        let n = self.len();
        if idx >= n {
            return None;
        }
        Some(self.0[n - 1 - idx].1.shift(0, idx + 1))
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|(n, _)| n.0.clone()).collect()
    }

    /// Splits at `k`: the first `k` entries and the rest (still scoped over the prefix).
    pub fn split_at(&self, k: usize) -> (Telescope, Telescope) {
        (Telescope(self.0[..k].to_vec()), Telescope(self.0[k..].to_vec()))
    }
}
