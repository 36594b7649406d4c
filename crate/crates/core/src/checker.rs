//! Bidirectional checking of the four judgment forms.
//!
//! Every eliminator is fully annotated, so inference never needs
//! unification: `J` and `H` carry their type, parameter telescope, motive,
//! branch and the instantiation of the parameter telescope.

use std::fmt;

use thiserror::Error;

use crate::defeq::{h_result_type, Ctx, Eq};
use crate::surface::{print_tm, print_ty};
use crate::syntax::{Decl, Motive, Signature, Telescope, Tm, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("variable index {index} is out of scope in a context of length {len}")]
    Scope { index: usize, len: usize },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("`{0}` is a type constant, not a term")]
    NotATerm(String),
    #[error("`{0}` is not a type constant")]
    NotAType(String),
    #[error("expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("expected a {what}, found {found}")]
    Shape { what: &'static str, found: String },
    #[error("strong sums are disabled for this signature")]
    SumsDisabled,
    #[error("name `{0}` is already declared")]
    Duplicate(String),
    #[error("spine of length {found} for a telescope of length {expected}")]
    SpineLength { expected: usize, found: usize },
}

/// A rejected judgment: the rule being applied, the path to the failing
/// subterm, and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at {position}: {kind}")]
pub struct KernelError {
    pub rule: &'static str,
    pub position: String,
    pub kind: ErrorKind,
}

pub type Result<T> = std::result::Result<T, KernelError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    pub judgment: String,
    pub failure: Option<KernelError>,
}

impl Report {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    fn from_result(judgment: String, r: Result<()>) -> Report {
        match r {
            Ok(()) => Report { verdict: Verdict::Accept, judgment, failure: None },
            Err(e) => Report { verdict: Verdict::Reject, judgment, failure: Some(e) },
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "accept: {}", self.judgment),
            Some(e) => write!(f, "reject: {}\n  {}", self.judgment, e),
        }
    }
}

/// Successful judgments are memoized in the signature, since emitted terms
/// repeat large subterms inside the types they carry.
pub struct Checker<'s> {
    sig: &'s Signature,
    path: Vec<&'static str>,
}

impl<'s> Checker<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Checker { sig, path: Vec::new() }
    }

    fn err<T>(&self, rule: &'static str, kind: ErrorKind) -> Result<T> {
        let position = if self.path.is_empty() { "root".to_string() } else { self.path.join(".") };
        Err(KernelError { rule, position, kind })
    }

    fn at<T>(&mut self, seg: &'static str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.path.push(seg);
        let r = f(self);
        if r.is_ok() {
            self.path.pop();
        }
        r
    }

    fn sums(&self, rule: &'static str) -> Result<()> {
        if self.sig.strong_sums {
            Ok(())
        } else {
            self.err(rule, ErrorKind::SumsDisabled)
        }
    }

    fn mismatch<T>(&self, rule: &'static str, ctx: &Ctx, expected: &Ty, found: &Ty) -> Result<T> {
        let names = ctx.names();
        self.err(
            rule,
            ErrorKind::Mismatch { expected: print_ty(expected, &names), found: print_ty(found, &names) },
        )
    }

    pub fn infer(&mut self, ctx: &mut Ctx, t: &Tm) -> Result<Ty> {
        if matches!(t, Tm::Var(_) | Tm::Star) {
            return self.infer_node(ctx, t);
        }
        let (memo, sums) = (self.sig.memo(), self.sig.strong_sums);
        let id = ctx.id(memo);
        if let Some(ty) = memo.inferred(sums, id, t) {
            return Ok(ty);
        }
        let ty = self.infer_node(ctx, t)?;
        memo.set_inferred(sums, id, t, &ty);
        Ok(ty)
    }

    fn infer_node(&mut self, ctx: &mut Ctx, t: &Tm) -> Result<Ty> {
        match t {
            Tm::Var(i) => match ctx.var_type(*i) {
                Some(ty) => Ok(ty),
                None => self.err("axiom", ErrorKind::Scope { index: *i, len: ctx.len() }),
            },
            Tm::Const(n, sp) => match self.sig.lookup(n) {
                Some(Decl::TermConst { params, ty, .. }) | Some(Decl::Def { params, ty, .. }) => {
                    if params.len() != sp.len() {
                        return self.err(
                            "constant",
                            ErrorKind::Arity { name: n.clone(), expected: params.len(), found: sp.len() },
                        );
                    }
                    let (params, ty) = (params.clone(), ty.clone());
                    self.at("args", |c| c.check_spine(ctx, &params, sp))?;
                    Ok(ty.subst(sp, 0))
                }
                Some(Decl::TypeConst { .. }) => self.err("constant", ErrorKind::NotATerm(n.clone())),
                None => self.err("constant", ErrorKind::Unknown(n.clone())),
            },
            Tm::Refl(a, x) => {
                self.at("type", |c| c.check_type(ctx, a))?;
                self.at("arg", |c| c.check(ctx, x, a))?;
                Ok(Ty::id((**a).clone(), (**x).clone(), (**x).clone()))
            }
            Tm::J(j) => {
                self.check_motive(ctx, &j.m)?;
                let m = &j.m;
                self.at("a", |c| c.check(ctx, &j.a, &m.ty))?;
                self.at("b", |c| c.check(ctx, &j.b, &m.ty))?;
                let id = Ty::id(m.ty.clone(), j.a.clone(), j.b.clone());
                self.at("p", |c| c.check(ctx, &j.p, &id))?;
                self.at("spine", |c| c.check_delta_spine(ctx, m, &j.a, &j.b, &j.p, &j.spine))?;
                Ok(m.instantiate(&j.a, &j.b, &j.p, &j.spine))
            }
            Tm::H(h) => {
                self.check_motive(ctx, &h.m)?;
                let m = &h.m;
                self.at("a", |c| c.check(ctx, &h.a, &m.ty))?;
                let r = Tm::refl(m.ty.clone(), h.a.clone());
                self.at("spine", |c| c.check_delta_spine(ctx, m, &h.a, &h.a, &r, &h.spine))?;
                Ok(h_result_type(m, &h.a, &h.spine))
            }
            Tm::Star => {
                self.sums("unit intro")?;
                Ok(Ty::Unit)
            }
            Tm::Pair(a, b) => {
                self.sums("pair")?;
                let ta = self.at("fst", |c| c.infer(ctx, a))?;
                let tb = self.at("snd", |c| c.infer(ctx, b))?;
                Ok(Ty::Sigma("_".into(), Box::new(ta), Box::new(tb.shift(0, 1))))
            }
            Tm::Fst(p) => {
                self.sums("fst")?;
                match self.at("arg", |c| c.infer(ctx, p))? {
                    Ty::Sigma(_, d, _) => Ok(*d),
                    other => self.err("fst", ErrorKind::Shape { what: "Sig type", found: print_ty(&other, &ctx.names()) }),
                }
            }
            Tm::Snd(p) => {
                self.sums("snd")?;
                match self.at("arg", |c| c.infer(ctx, p))? {
                    Ty::Sigma(_, _, cod) => Ok(cod.subst(&[Tm::Fst(p.clone())], 0)),
                    other => self.err("snd", ErrorKind::Shape { what: "Sig type", found: print_ty(&other, &ctx.names()) }),
                }
            }
        }
    }

    pub fn check(&mut self, ctx: &mut Ctx, t: &Tm, ty: &Ty) -> Result<()> {
        if let (Tm::Pair(a, b), Ty::Sigma(_, d, cod)) = (t, ty) {
            self.sums("pair")?;
            self.at("fst", |c| c.check(ctx, a, d))?;
            let cb = cod.subst(&[(**a).clone()], 0);
            return self.at("snd", |c| c.check(ctx, b, &cb));
        }
        let found = self.infer(ctx, t)?;
        if Eq::new(self.sig).types(ctx, &found, ty) {
            Ok(())
        } else {
            self.mismatch("conversion", ctx, ty, &found)
        }
    }

    pub fn check_type(&mut self, ctx: &mut Ctx, ty: &Ty) -> Result<()> {
        if matches!(ty, Ty::Unit) {
            return self.check_type_node(ctx, ty);
        }
        let (memo, sums) = (self.sig.memo(), self.sig.strong_sums);
        let id = ctx.id(memo);
        if memo.is_type(sums, id, ty) {
            return Ok(());
        }
        self.check_type_node(ctx, ty)?;
        memo.set_type(sums, id, ty);
        Ok(())
    }

    fn check_type_node(&mut self, ctx: &mut Ctx, ty: &Ty) -> Result<()> {
        match ty {
            Ty::Const(n, sp) => match self.sig.lookup(n) {
                Some(Decl::TypeConst { params, .. }) => {
                    if params.len() != sp.len() {
                        return self.err(
                            "type constant",
                            ErrorKind::Arity { name: n.clone(), expected: params.len(), found: sp.len() },
                        );
                    }
                    let params = params.clone();
                    self.at("args", |c| c.check_spine(ctx, &params, sp))
                }
                Some(_) => self.err("type constant", ErrorKind::NotAType(n.clone())),
                None => self.err("type constant", ErrorKind::Unknown(n.clone())),
            },
            Ty::Id(a, x, y) => {
                self.at("type", |c| c.check_type(ctx, a))?;
                self.at("lhs", |c| c.check(ctx, x, a))?;
                self.at("rhs", |c| c.check(ctx, y, a))
            }
            Ty::Unit => self.sums("unit formation"),
            Ty::Sigma(n, d, cod) => {
                self.sums("sigma formation")?;
                self.at("dom", |c| c.check_type(ctx, d))?;
                let len = ctx.len();
                ctx.push(n.clone(), (**d).clone());
                let r = self.at("cod", |c| c.check_type(ctx, cod));
                ctx.truncate(len);
                r
            }
        }
    }

    /// Checks each entry over its prefix; `ctx` is restored afterwards.
    pub fn check_telescope(&mut self, ctx: &mut Ctx, tel: &Telescope) -> Result<()> {
        let len = ctx.len();
        let mut r = Ok(());
        for (i, (n, t)) in tel.0.iter().enumerate() {
            self.path.push(ENTRY_LABELS[i.min(ENTRY_LABELS.len() - 1)]);
            r = self.check_type(ctx, t);
            if r.is_err() {
                break;
            }
            self.path.pop();
            ctx.push(n.clone(), t.clone());
        }
        ctx.truncate(len);
        r
    }

    pub fn check_spine(&mut self, ctx: &mut Ctx, tel: &Telescope, spine: &[Tm]) -> Result<()> {
        if tel.len() != spine.len() {
            return self.err("spine", ErrorKind::SpineLength { expected: tel.len(), found: spine.len() });
        }
        for i in 0..spine.len() {
            let ty = tel.0[i].1.subst(&spine[..i], 0);
            self.path.push(ENTRY_LABELS[i.min(ENTRY_LABELS.len() - 1)]);
            self.check(ctx, &spine[i], &ty)?;
            self.path.pop();
        }
        Ok(())
    }

    fn check_delta_spine(&mut self, ctx: &mut Ctx, m: &Motive, a: &Tm, b: &Tm, p: &Tm, spine: &[Tm]) -> Result<()> {
        if spine.len() != m.delta.len() {
            return self.err("J parameters", ErrorKind::SpineLength { expected: m.delta.len(), found: spine.len() });
        }
        for i in 0..spine.len() {
            let ty = m.delta_entry_at(i, a, b, p, spine);
            self.path.push(ENTRY_LABELS[i.min(ENTRY_LABELS.len() - 1)]);
            self.check(ctx, &spine[i], &ty)?;
            self.path.pop();
        }
        Ok(())
    }

    fn check_motive(&mut self, ctx: &mut Ctx, m: &Motive) -> Result<()> {
        self.at("A", |c| c.check_type(ctx, &m.ty))?;
        let len = ctx.len();
        ctx.extend(&m.xyu());
        let r = self
            .at("delta", |c| c.check_telescope(ctx, &m.delta))
            .and_then(|_| {
                ctx.extend(&m.delta);
                self.at("motive", |c| c.check_type(ctx, &m.motive))
            });
        ctx.truncate(len);
        r?;
        ctx.push(m.names[0].clone(), m.ty.clone());
        ctx.extend(&m.delta_at_refl());
        let bt = m.branch_type();
        let r = self.at("branch", |c| c.check(ctx, &m.branch, &bt));
        ctx.truncate(len);
        r
    }
}

const ENTRY_LABELS: [&str; 16] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "15+"];

pub fn infer(sig: &Signature, ctx: &Telescope, t: &Tm) -> Result<Ty> {
    Checker::new(sig).infer(&mut Ctx::from_telescope(ctx), t)
}

pub fn check(sig: &Signature, ctx: &Telescope, t: &Tm, ty: &Ty) -> Report {
    let names = ctx.names();
    let judgment = format!("{} : {}", print_tm(t, &names), print_ty(ty, &names));
    Report::from_result(judgment, Checker::new(sig).check(&mut Ctx::from_telescope(ctx), t, ty))
}

/// [`check`] without the printed judgment.
pub fn check_against(sig: &Signature, ctx: &Telescope, t: &Tm, ty: &Ty) -> Result<()> {
    Checker::new(sig).check(&mut Ctx::from_telescope(ctx), t, ty)
}

pub fn check_type(sig: &Signature, ctx: &Telescope, ty: &Ty) -> Report {
    let judgment = format!("{} type", print_ty(ty, &ctx.names()));
    Report::from_result(judgment, Checker::new(sig).check_type(&mut Ctx::from_telescope(ctx), ty))
}

/// Well-formedness of `tel` as an extension of the context `over`.
pub fn telescope_wf(sig: &Signature, tel: &Telescope, over: &Telescope) -> Report {
    let judgment = format!("{} telescope", crate::surface::print_telescope(tel, &over.names()));
    Report::from_result(judgment, Checker::new(sig).check_telescope(&mut Ctx::from_telescope(over), tel))
}

pub fn context_wf(sig: &Signature, ctx: &Telescope) -> Result<()> {
    Checker::new(sig).check_telescope(&mut Ctx::new(), ctx)
}

pub fn check_spine(sig: &Signature, ctx: &Telescope, tel: &Telescope, spine: &[Tm]) -> Result<()> {
    Checker::new(sig).check_spine(&mut Ctx::from_telescope(ctx), tel, spine)
}

/// Checks `decl` against `sig` and appends it.
pub fn add_decl(sig: &mut Signature, decl: Decl) -> Result<()> {
    if sig.contains(decl.name()) {
        return Err(KernelError {
            rule: "declaration",
            position: decl.name().to_string(),
            kind: ErrorKind::Duplicate(decl.name().to_string()),
        });
    }
    {
        let mut c = Checker::new(sig);
        c.path.push("params");
        let mut ctx = Ctx::new();
        c.check_telescope(&mut ctx, decl.params())?;
        c.path.pop();
        ctx.extend(decl.params());
        match &decl {
            Decl::TypeConst { .. } => {}
            Decl::TermConst { ty, .. } => c.at("type", |c| c.check_type(&mut ctx, ty))?,
            Decl::Def { ty, body, .. } => {
                c.at("type", |c| c.check_type(&mut ctx, ty))?;
                c.at("body", |c| c.check(&mut ctx, body, ty))?;
            }
        }
    }
    sig.push_unchecked(decl);
    Ok(())
}

/// Checks every declaration of `decls` in order, atomically.
pub fn load_signature(decls: Vec<Decl>, strong_sums: bool) -> std::result::Result<Signature, (usize, KernelError)> {
    let mut sig = Signature::new();
    sig.strong_sums = strong_sums;
    for (i, d) in decls.into_iter().enumerate() {
        add_decl(&mut sig, d).map_err(|e| (i, e))?;
    }
    Ok(sig)
}
