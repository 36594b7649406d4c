//! Witness compiler: path objects, J-powered fillers, transport, groupoid
//! laws, rank-n path structures, contractibility and similarity witnesses.
//! Every emitted morphism is re-checked by the kernel before it is returned.

use thiserror::Error;

use std::collections::{HashMap, HashSet};

use crate::cat::{CatError, Fibration};
use crate::checker::{self, KernelError};
use crate::syntax::{Decl, HWit, Hint, Motive, Signature, Telescope, Tm, Ty};

pub mod contract;
pub mod equiv;
pub mod fill;
pub mod homotopy;
pub mod relation;
pub mod structure;
pub mod witness;

pub use fill::{is_structural_weq, jfill, Canon, PathInduction, TransportTerms};
pub use relation::{similar_maps, EquivRelWitness, Similarity};
pub use structure::{build_py, check_pullback_stable, path_object, HomotopyWitness, PathStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("kernel rejected an emitted witness: {0}")]
    Kernel(#[from] KernelError),
    #[error("left leg is not a recognized weak equivalence: {0}")]
    NotRecognized(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("equation fails: {0}")]
    Equation(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, PathError>;

/// Terms larger than this are named by a definition when emitted.
const SHARE_ABOVE: usize = 16;

/// The signature under construction: the input signature extended by the
/// definitions emitted so far. Every definition is kernel-checked when added.
#[derive(Debug, Clone)]
pub struct Env {
    pub sig: Signature,
    base_len: usize,
    counter: usize,
    checked_ctx: HashSet<Telescope>,
    paths: HashMap<Fibration, PathStructure>,
}

impl Env {
    pub fn new(sig: &Signature) -> Env {
        Env { sig: sig.clone(), base_len: sig.len(), counter: 0, checked_ctx: HashSet::new(), paths: HashMap::new() }
    }

    /// The definitions added on top of the input signature, in order.
    pub fn emitted(&self) -> &[Decl] {
        &self.sig.decls()[self.base_len..]
    }

    fn fresh_name(&mut self, stem: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("_{stem}{}", self.counter);
            if !self.sig.contains(&name) {
                return name;
            }
        }
    }

    /// Checks a closed context once.
    pub fn context_wf(&mut self, ctx: &Telescope) -> Result<()> {
        if !self.checked_ctx.contains(ctx) {
            checker::context_wf(&self.sig, ctx)?;
            self.checked_ctx.insert(ctx.clone());
        }
        Ok(())
    }

    /// Names `body` (over the closed context `ctx`) by a checked definition
    /// when it is large; returns the term to use in its place.
    pub fn share(&mut self, stem: &str, ctx: &Telescope, body: Tm) -> Result<Tm> {
        if body.size() <= SHARE_ABOVE {
            return Ok(body);
        }
        self.define(stem, ctx, body)
    }

    /// The kernel-checked path structure of `fib`, built once per fibration.
    pub fn path_structure(&mut self, fib: &Fibration) -> Result<PathStructure> {
        if let Some(ps) = self.paths.get(fib) {
            return Ok(ps.clone());
        }
        let ps = PathStructure::build(self, fib)?;
        self.paths.insert(fib.clone(), ps.clone());
        Ok(ps)
    }

    /// [`Env::share`] for a term checked against a known type.
    pub fn share_at(&mut self, stem: &str, ctx: &Telescope, body: Tm, ty: &Ty) -> Result<Tm> {
        if body.size() <= SHARE_ABOVE {
            return Ok(body);
        }
        self.context_wf(ctx)?;
        checker::check_against(&self.sig, ctx, &body, ty)?;
        Ok(self.push_def(stem, ctx, body, ty.clone()))
    }

    fn push_def(&mut self, stem: &str, ctx: &Telescope, body: Tm, ty: Ty) -> Tm {
        let name = self.fresh_name(stem);
        let decl = Decl::Def { name: name.clone(), params: ctx.clone(), ty, body };
        self.sig.push_unchecked(decl);
        Tm::Const(name, ctx.vars(0))
    }

    /// Adds `name params := body` with its inferred type; returns the applied constant.
    pub fn define(&mut self, stem: &str, ctx: &Telescope, body: Tm) -> Result<Tm> {
        self.context_wf(ctx)?;
        let ty = checker::infer(&self.sig, ctx, &body)?;
        Ok(self.push_def(stem, ctx, body, ty))
    }
}

pub(crate) fn hints3(x: &str, y: &str, u: &str) -> [Hint; 3] {
    [Hint::new(x), Hint::new(y), Hint::new(u)]
}

/// `sym p : Id ty b a` for `p : Id ty a b`, all over the same context.
pub fn sym_term(ty: &Ty, a: &Tm, b: &Tm, p: &Tm) -> Tm {
    let m = Motive {
        names: hints3("x", "y", "u"),
        ty: ty.clone(),
        delta: Telescope::new(),
        motive: Ty::id(ty.shift(0, 3), Tm::Var(1), Tm::Var(2)),
        branch: Tm::refl(ty.shift(0, 1), Tm::Var(0)),
    };
    Tm::J(Box::new(crate::syntax::JElim { m, a: a.clone(), b: b.clone(), p: p.clone(), spine: Vec::new() }))
}

/// `trans p q : Id ty a c` for `p : Id ty a b`, `q : Id ty b c`.
pub fn trans_term(ty: &Ty, a: &Tm, b: &Tm, c: &Tm, p: &Tm, q: &Tm) -> Tm {
    // J over (y z v) with parameters (x0 : ty)(u0 : Id ty x0 y), motive Id ty x0 z.
    let delta = Telescope::new()
        .with("x0", ty.shift(0, 3))
        .with("u0", Ty::id(ty.shift(0, 4), Tm::Var(0), Tm::Var(3)));
    let m = Motive {
        names: hints3("y", "z", "v"),
        ty: ty.clone(),
        delta,
        motive: Ty::id(ty.shift(0, 5), Tm::Var(1), Tm::Var(3)),
        branch: Tm::Var(0),
    };
    Tm::J(Box::new(crate::syntax::JElim { m, a: b.clone(), b: c.clone(), p: q.clone(), spine: vec![a.clone(), p.clone()] }))
}

/// The computation witness `H` matching an eliminator `J(a, a, refl a, e)`.
pub fn h_of_j(t: &Tm) -> Option<Tm> {
    match t {
        Tm::J(j) => Some(Tm::H(Box::new(HWit { m: j.m.clone(), a: j.a.clone(), spine: j.spine.clone() }))),
        _ => None,
    }
}

/// The variable at de Bruijn level `level` in a context of length `len`.
pub(crate) fn lvl(len: usize, level: usize) -> Tm {
    Tm::Var(len - 1 - level)
}

/// Substitutes a closed-context term list by `args` (one per context entry).
pub(crate) fn inst(terms: &[Tm], args: &[Tm]) -> Vec<Tm> {
    terms.iter().map(|t| t.subst(args, 0)).collect()
}
