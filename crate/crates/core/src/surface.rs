//! Text format: lexer, parser (names resolved to de Bruijn indices) and printer.
//!
//! ```text
//! directive := flag strong_sums
//!            | postulate NAME params? : (Type | type)
//!            | def NAME params? : type := term
//!            | check params? |- term : type
//!            | check params? |- type type
//!            | derive KIND params
//! params    := ( NAME+ : type )+
//! type      := NAME tmatom* | Id tyatom tmatom tmatom | Unit | Sig ( NAME : type ) type
//! tyatom    := NAME | Unit | ( type )
//! term      := NAME tmatom* | refl tyatom tmatom | pair tmatom tmatom | fst tmatom | snd tmatom
//!            | J binders tyatom branch tmatom tmatom tmatom spine
//!            | H binders tyatom branch tmatom spine
//!            | tmatom
//! tmatom    := NAME | * | ( term )
//! binders   := ( NAME NAME NAME : type (| params)? )
//! branch    := ( NAME NAME* . term )          -- binds x, then the parameter names
//! spine     := [ tmatom* ]
//! ```
//! `--` starts a comment running to the end of the line.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::{Decl, HWit, Hint, JElim, Motive, Telescope, Tm, Ty};

const KEYWORDS: &[&str] = &[
    "flag", "postulate", "def", "check", "derive", "Type", "type", "Id", "Unit", "Sig", "refl", "pair", "fst",
    "snd", "J", "H",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Flag(String),
    Decl(Decl),
    CheckTerm { ctx: Telescope, tm: Tm, ty: Ty },
    CheckType { ctx: Telescope, ty: Ty },
    Derive { kind: String, tel: Telescope },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceFile {
    pub directives: Vec<(Pos, Directive)>,
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const SYMBOLS: &[&str] = &["|-", ":=", "(", ")", "[", "]", ":", "|", ".", ",", "*"];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let pos = Pos { line, col };
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Token { tok: Tok::Sym(s), pos });
            }
            None => return Err(ParseError { line, col, msg: format!("unexpected character `{c}`") }),
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
    globals: HashSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(text: &str, globals: HashSet<String>) -> PResult<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0, scope: Vec::new(), globals })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].pos
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let p = self.here();
        Err(ParseError { line: p.line, col: p.col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a name, found {}", describe(&other))),
        }
    }

    fn any_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected an identifier, found {}", describe(&other))),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn lookup_var(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().position(|n| n == name)
    }

    fn with_binders<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let len = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(len);
        r
    }

    /// `( NAME+ : type )*`; the binders stay in scope afterwards.
    pub fn params(&mut self) -> PResult<Telescope> {
        let mut tel = Telescope::new();
        while self.is_sym("(") {
            self.bump();
            let mut names = vec![self.name()?];
            while !self.is_sym(":") {
                names.push(self.name()?);
            }
            self.expect_sym(":")?;
            let ty = self.ty()?;
            self.expect_sym(")")?;
            for (k, n) in names.into_iter().enumerate() {
                tel.push(Hint::new(n.clone()), ty.shift(0, k));
                self.scope.push(n);
            }
        }
        Ok(tel)
    }

    pub fn ty(&mut self) -> PResult<Ty> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Id" => {
                self.bump();
                let a = self.ty_atom()?;
                let x = self.tm_atom()?;
                let y = self.tm_atom()?;
                Ok(Ty::id(a, x, y))
            }
            Tok::Ident(s) if s == "Unit" => {
                self.bump();
                Ok(Ty::Unit)
            }
            Tok::Ident(s) if s == "Sig" => {
                self.bump();
                self.expect_sym("(")?;
                let n = self.name()?;
                self.expect_sym(":")?;
                let d = self.ty()?;
                self.expect_sym(")")?;
                let c = self.with_binders(std::slice::from_ref(&n), |p| p.ty())?;
                Ok(Ty::Sigma(Hint::new(n), Box::new(d), Box::new(c)))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                self.type_head(&s)?;
                let mut args = Vec::new();
                while self.starts_tm_atom() {
                    args.push(self.tm_atom()?);
                }
                Ok(Ty::Const(s, args))
            }
            Tok::Sym("(") => self.ty_atom(),
            other => self.error(format!("expected a type, found {}", describe(&other))),
        }
    }

    fn type_head(&self, s: &str) -> PResult<()> {
        if self.lookup_var(s).is_some() {
            return self.error(format!("`{s}` is a variable, not a type"));
        }
        if !self.globals.contains(s) {
            return self.error(format!("unbound name `{s}`"));
        }
        Ok(())
    }

    fn ty_atom(&mut self) -> PResult<Ty> {
        match self.peek().clone() {
            Tok::Sym("(") => {
                self.bump();
                let t = self.ty()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Ident(s) if s == "Unit" => {
                self.bump();
                Ok(Ty::Unit)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                self.type_head(&s)?;
                Ok(Ty::Const(s, Vec::new()))
            }
            other => self.error(format!("expected a type, found {}", describe(&other))),
        }
    }

    fn starts_tm_atom(&self) -> bool {
        match self.peek() {
            Tok::Sym("(") | Tok::Sym("*") => true,
            Tok::Ident(s) => !is_keyword(s),
            _ => false,
        }
    }

    fn tm_atom(&mut self) -> PResult<Tm> {
        match self.peek().clone() {
            Tok::Sym("(") => {
                self.bump();
                let t = self.tm()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Sym("*") => {
                self.bump();
                Ok(Tm::Star)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                self.resolve(&s, Vec::new())
            }
            other => self.error(format!("expected a term, found {}", describe(&other))),
        }
    }

    fn resolve(&self, s: &str, args: Vec<Tm>) -> PResult<Tm> {
        if let Some(i) = self.lookup_var(s) {
            if !args.is_empty() {
                return self.error(format!("variable `{s}` cannot be applied"));
            }
            return Ok(Tm::Var(i));
        }
        if self.globals.contains(s) {
            return Ok(Tm::Const(s.to_string(), args));
        }
        self.error(format!("unbound name `{s}`"))
    }

    pub fn tm(&mut self) -> PResult<Tm> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "refl" => {
                self.bump();
                let a = self.ty_atom()?;
                let x = self.tm_atom()?;
                Ok(Tm::refl(a, x))
            }
            Tok::Ident(s) if s == "pair" => {
                self.bump();
                let a = self.tm_atom()?;
                let b = self.tm_atom()?;
                Ok(Tm::pair(a, b))
            }
            Tok::Ident(s) if s == "fst" => {
                self.bump();
                Ok(Tm::fst(self.tm_atom()?))
            }
            Tok::Ident(s) if s == "snd" => {
                self.bump();
                Ok(Tm::snd(self.tm_atom()?))
            }
            Tok::Ident(s) if s == "J" || s == "H" => {
                self.bump();
                self.eliminator(s == "J")
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                let mut args = Vec::new();
                while self.starts_tm_atom() {
                    args.push(self.tm_atom()?);
                }
                self.resolve(&s, args)
            }
            _ => self.tm_atom(),
        }
    }

    fn eliminator(&mut self, is_j: bool) -> PResult<Tm> {
        self.expect_sym("(")?;
        let x = self.name()?;
        let y = self.name()?;
        let u = self.name()?;
        self.expect_sym(":")?;
        let ty = self.ty()?;
        let xyu = [x.clone(), y, u];
        let delta = self.with_binders(&xyu, |p| {
            if p.is_sym("|") {
                p.bump();
                let len = p.scope.len();
                let d = p.params();
                p.scope.truncate(len);
                d
            } else {
                Ok(Telescope::new())
            }
        })?;
        self.expect_sym(")")?;
        let dnames = delta.names();
        let mut motive_scope = xyu.to_vec();
        motive_scope.extend(dnames.iter().cloned());
        let motive = self.with_binders(&motive_scope, |p| p.ty_atom())?;
        self.expect_sym("(")?;
        let mut bnames = vec![self.name()?];
        while !self.is_sym(".") {
            bnames.push(self.name()?);
        }
        if bnames.len() != 1 + delta.len() {
            return self.error(format!(
                "branch binds {} name(s) but the eliminator needs {} (x and the parameters)",
                bnames.len(),
                1 + delta.len()
            ));
        }
        self.expect_sym(".")?;
        let branch = self.with_binders(&bnames, |p| p.tm())?;
        self.expect_sym(")")?;
        let m = Motive {
            names: [Hint::new(x), Hint::new(xyu[1].clone()), Hint::new(xyu[2].clone())],
            ty,
            delta,
            motive,
            branch,
        };
        let a = self.tm_atom()?;
        if is_j {
            let b = self.tm_atom()?;
            let p = self.tm_atom()?;
            let spine = self.spine()?;
            Ok(Tm::J(Box::new(JElim { m, a, b, p, spine })))
        } else {
            let spine = self.spine()?;
            Ok(Tm::H(Box::new(HWit { m, a, spine })))
        }
    }

    fn spine(&mut self) -> PResult<Vec<Tm>> {
        self.expect_sym("[")?;
        let mut v = Vec::new();
        while !self.is_sym("]") {
            v.push(self.tm_atom()?);
            if self.is_sym(",") {
                self.bump();
            }
        }
        self.bump();
        Ok(v)
    }

    pub fn directive(&mut self) -> PResult<(Pos, Directive)> {
        let pos = self.here();
        let kw = self.any_ident()?;
        let d = match kw.as_str() {
            "flag" => Directive::Flag(self.any_ident()?),
            "postulate" => {
                let name = self.name()?;
                let len = self.scope.len();
                let params = self.params()?;
                self.expect_sym(":")?;
                let d = if self.is_kw("Type") {
                    self.bump();
                    Decl::TypeConst { name: name.clone(), params }
                } else {
                    let ty = self.ty()?;
                    Decl::TermConst { name: name.clone(), params, ty }
                };
                self.scope.truncate(len);
                self.globals.insert(name);
                Directive::Decl(d)
            }
            "def" => {
                let name = self.name()?;
                let len = self.scope.len();
                let params = self.params()?;
                self.expect_sym(":")?;
                let ty = self.ty()?;
                self.expect_sym(":=")?;
                let body = self.tm()?;
                self.scope.truncate(len);
                self.globals.insert(name.clone());
                Directive::Decl(Decl::Def { name, params, ty, body })
            }
            "check" => {
                let len = self.scope.len();
                let ctx = self.params()?;
                self.expect_sym("|-")?;
                let save = self.pos;
                let as_term = self.tm().and_then(|tm| {
                    self.expect_sym(":")?;
                    Ok((tm, self.ty()?))
                });
                let d = match as_term {
                    Ok((tm, ty)) => Directive::CheckTerm { ctx, tm, ty },
                    Err(term_err) => {
                        let term_pos = self.pos;
                        self.pos = save;
                        match self.ty().and_then(|ty| self.expect_kw("type").map(|_| ty)) {
                            Ok(ty) => Directive::CheckType { ctx, ty },
                            Err(type_err) => {
                                self.scope.truncate(len);
                                return Err(if term_pos >= self.pos { term_err } else { type_err });
                            }
                        }
                    }
                };
                self.scope.truncate(len);
                d
            }
            "derive" => {
                let kind = self.any_ident()?;
                let len = self.scope.len();
                let tel = self.params()?;
                self.scope.truncate(len);
                Directive::Derive { kind, tel }
            }
            other => {
                self.pos -= 1;
                return self.error(format!("unknown directive `{other}`"));
            }
        };
        Ok((pos, d))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

pub fn parse(text: &str) -> Result<SourceFile, ParseError> {
    parse_with_globals(text, HashSet::new())
}

/// Parses a file whose directives may also refer to the given global names.
pub fn parse_with_globals(text: &str, globals: HashSet<String>) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text, globals)?;
    let mut file = SourceFile::default();
    while !p.at_eof() {
        file.directives.push(p.directive()?);
    }
    Ok(file)
}

fn single<T>(text: &str, globals: HashSet<String>, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(text, globals)?;
    let v = f(&mut p)?;
    if !p.at_eof() {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(v)
}

pub fn parse_ty(text: &str, globals: HashSet<String>, ctx: &[String]) -> PResult<Ty> {
    single(text, globals, |p| {
        p.scope = ctx.to_vec();
        p.ty()
    })
}

pub fn parse_tm(text: &str, globals: HashSet<String>, ctx: &[String]) -> PResult<Tm> {
    single(text, globals, |p| {
        p.scope = ctx.to_vec();
        p.tm()
    })
}

pub fn parse_telescope(text: &str, globals: HashSet<String>) -> PResult<Telescope> {
    single(text, globals, |p| p.params())
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

/// Printer state: names of the binders in scope (innermost last) and the
/// names that fresh binders must avoid.
struct Printer {
    scope: Vec<String>,
    reserved: HashSet<String>,
}

impl Printer {
    fn new(ctx: &[String], reserved: HashSet<String>) -> Self {
        Printer { scope: ctx.to_vec(), reserved }
    }

    /// A deterministic fresh name for a binder with the given hint: `x`, `x1`, `x2`, ...
    fn fresh(&self, hint: &str) -> String {
        let valid = |s: &str| {
            s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        };
        let taken = |s: &str| is_keyword(s) || self.reserved.contains(s) || self.scope.iter().any(|n| n == s);
        let hint = if valid(hint) { hint } else { "x" };
        if !taken(hint) {
            return hint.to_string();
        }
        let base = hint.trim_end_matches(|c: char| c.is_ascii_digit());
        let base = if base.is_empty() { "x" } else { base };
        (1..).map(|i| format!("{base}{i}")).find(|s| !taken(s)).unwrap()
    }

    fn bind(&mut self, hint: &str) -> String {
        let n = self.fresh(hint);
        self.scope.push(n.clone());
        n
    }

    fn var(&self, i: usize) -> String {
        if i < self.scope.len() {
            self.scope[self.scope.len() - 1 - i].clone()
        } else {
            format!("#{i}")
        }
    }

    fn ty(&mut self, t: &Ty, out: &mut String) {
        match t {
            Ty::Const(n, sp) => {
                out.push_str(n);
                for a in sp {
                    out.push(' ');
                    self.tm_atom(a, out);
                }
            }
            Ty::Id(a, x, y) => {
                out.push_str("Id ");
                self.ty_atom(a, out);
                out.push(' ');
                self.tm_atom(x, out);
                out.push(' ');
                self.tm_atom(y, out);
            }
            Ty::Unit => out.push_str("Unit"),
            Ty::Sigma(h, d, c) => {
                let len = self.scope.len();
                out.push_str("Sig (");
                let n = self.fresh(h.as_str());
                out.push_str(&n);
                out.push_str(" : ");
                self.ty(d, out);
                out.push_str(") ");
                self.scope.push(n);
                self.ty(c, out);
                self.scope.truncate(len);
            }
        }
    }

    fn ty_atom(&mut self, t: &Ty, out: &mut String) {
        match t {
            Ty::Unit => out.push_str("Unit"),
            Ty::Const(n, sp) if sp.is_empty() => out.push_str(n),
            _ => {
                out.push('(');
                self.ty(t, out);
                out.push(')');
            }
        }
    }

    fn tm_atom(&mut self, t: &Tm, out: &mut String) {
        match t {
            Tm::Var(_) | Tm::Star => self.tm(t, out),
            Tm::Const(_, sp) if sp.is_empty() => self.tm(t, out),
            _ => {
                out.push('(');
                self.tm(t, out);
                out.push(')');
            }
        }
    }

    fn tm(&mut self, t: &Tm, out: &mut String) {
        match t {
            Tm::Var(i) => out.push_str(&self.var(*i)),
            Tm::Const(n, sp) => {
                out.push_str(n);
                for a in sp {
                    out.push(' ');
                    self.tm_atom(a, out);
                }
            }
            Tm::Refl(a, x) => {
                out.push_str("refl ");
                self.ty_atom(a, out);
                out.push(' ');
                self.tm_atom(x, out);
            }
            Tm::Star => out.push('*'),
            Tm::Pair(a, b) => {
                out.push_str("pair ");
                self.tm_atom(a, out);
                out.push(' ');
                self.tm_atom(b, out);
            }
            Tm::Fst(c) => {
                out.push_str("fst ");
                self.tm_atom(c, out);
            }
            Tm::Snd(c) => {
                out.push_str("snd ");
                self.tm_atom(c, out);
            }
            Tm::J(j) => {
                out.push_str("J ");
                self.motive(&j.m, out);
                for a in [&j.a, &j.b, &j.p] {
                    out.push(' ');
                    self.tm_atom(a, out);
                }
                out.push(' ');
                self.spine(&j.spine, out);
            }
            Tm::H(h) => {
                out.push_str("H ");
                self.motive(&h.m, out);
                out.push(' ');
                self.tm_atom(&h.a, out);
                out.push(' ');
                self.spine(&h.spine, out);
            }
        }
    }

    fn spine(&mut self, sp: &[Tm], out: &mut String) {
        out.push('[');
        for (i, a) in sp.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            self.tm_atom(a, out);
        }
        out.push(']');
    }

    fn motive(&mut self, m: &Motive, out: &mut String) {
        let len = self.scope.len();
        out.push('(');
        let mut names = Vec::new();
        for h in &m.names {
            names.push(self.bind(h.as_str()));
        }
        self.scope.truncate(len);
        out.push_str(&names.join(" "));
        out.push_str(" : ");
        self.ty(&m.ty, out);
        self.scope.extend(names.iter().cloned());
        if !m.delta.is_empty() {
            out.push_str(" | ");
            self.params(&m.delta, out);
        }
        out.push_str(") ");
        self.ty_atom(&m.motive, out);
        self.scope.truncate(len);
        out.push_str(" (");
        let mut bnames = vec![self.bind(m.names[0].as_str())];
        for (h, _) in &m.delta.0 {
            bnames.push(self.bind(h.as_str()));
        }
        out.push_str(&bnames.join(" "));
        out.push_str(" . ");
        self.tm(&m.branch, out);
        out.push(')');
        self.scope.truncate(len);
    }

    /// Prints `(x : A)(y : B x)` and leaves the binders in scope.
    fn params(&mut self, tel: &Telescope, out: &mut String) {
        for (h, t) in &tel.0 {
            out.push('(');
            let n = self.fresh(h.as_str());
            out.push_str(&n);
            out.push_str(" : ");
            self.ty(t, out);
            out.push(')');
            self.scope.push(n);
        }
    }
}

fn consts_tm(t: &Tm, out: &mut HashSet<String>) {
    match t {
        Tm::Var(_) | Tm::Star => {}
        Tm::Const(n, sp) => {
            out.insert(n.clone());
            sp.iter().for_each(|a| consts_tm(a, out));
        }
        Tm::Refl(a, x) => {
            consts_ty(a, out);
            consts_tm(x, out);
        }
        Tm::J(j) => {
            consts_motive(&j.m, out);
            [&j.a, &j.b, &j.p].into_iter().chain(j.spine.iter()).for_each(|a| consts_tm(a, out));
        }
        Tm::H(h) => {
            consts_motive(&h.m, out);
            std::iter::once(&h.a).chain(h.spine.iter()).for_each(|a| consts_tm(a, out));
        }
        Tm::Pair(a, b) => {
            consts_tm(a, out);
            consts_tm(b, out);
        }
        Tm::Fst(c) | Tm::Snd(c) => consts_tm(c, out),
    }
}

fn consts_motive(m: &Motive, out: &mut HashSet<String>) {
    consts_ty(&m.ty, out);
    consts_tel(&m.delta, out);
    consts_ty(&m.motive, out);
    consts_tm(&m.branch, out);
}

fn consts_ty(t: &Ty, out: &mut HashSet<String>) {
    match t {
        Ty::Const(n, sp) => {
            out.insert(n.clone());
            sp.iter().for_each(|a| consts_tm(a, out));
        }
        Ty::Id(a, x, y) => {
            consts_ty(a, out);
            consts_tm(x, out);
            consts_tm(y, out);
        }
        Ty::Unit => {}
        Ty::Sigma(_, a, b) => {
            consts_ty(a, out);
            consts_ty(b, out);
        }
    }
}

fn consts_tel(t: &Telescope, out: &mut HashSet<String>) {
    t.types().for_each(|ty| consts_ty(ty, out));
}

/// Prints a term whose free variables are named by `ctx` (outermost first).
pub fn print_tm(t: &Tm, ctx: &[String]) -> String {
    let mut reserved = HashSet::new();
    consts_tm(t, &mut reserved);
    let mut out = String::new();
    Printer::new(ctx, reserved).tm(t, &mut out);
    out
}

pub fn print_ty(t: &Ty, ctx: &[String]) -> String {
    let mut reserved = HashSet::new();
    consts_ty(t, &mut reserved);
    let mut out = String::new();
    Printer::new(ctx, reserved).ty(t, &mut out);
    out
}

pub fn print_telescope(t: &Telescope, ctx: &[String]) -> String {
    let mut reserved = HashSet::new();
    consts_tel(t, &mut reserved);
    let mut out = String::new();
    Printer::new(ctx, reserved).params(t, &mut out);
    out
}

/// Fresh, pairwise distinct printing names for a closed context, avoiding
/// the given reserved names.
pub fn context_names(ctx: &Telescope, reserved: &HashSet<String>) -> Vec<String> {
    let mut p = Printer::new(&[], reserved.clone());
    for (h, _) in &ctx.0 {
        p.bind(h.as_str());
    }
    p.scope
}

pub fn print_decl(d: &Decl) -> String {
    let mut reserved = HashSet::new();
    consts_tel(d.params(), &mut reserved);
    match d {
        Decl::TermConst { ty, .. } => consts_ty(ty, &mut reserved),
        Decl::Def { ty, body, .. } => {
            consts_ty(ty, &mut reserved);
            consts_tm(body, &mut reserved);
        }
        Decl::TypeConst { .. } => {}
    }
    reserved.insert(d.name().to_string());
    let mut p = Printer::new(&[], reserved);
    let mut out = String::new();
    let kw = if matches!(d, Decl::Def { .. }) { "def" } else { "postulate" };
    let _ = write!(out, "{kw} {}", d.name());
    if !d.params().is_empty() {
        out.push(' ');
        p.params(d.params(), &mut out);
    }
    out.push_str(" : ");
    match d {
        Decl::TypeConst { .. } => out.push_str("Type"),
        Decl::TermConst { ty, .. } => p.ty(ty, &mut out),
        Decl::Def { ty, body, .. } => {
            p.ty(ty, &mut out);
            out.push_str(" := ");
            p.tm(body, &mut out);
        }
    }
    out
}

pub fn print_directive(d: &Directive) -> String {
    match d {
        Directive::Flag(f) => format!("flag {f}"),
        Directive::Decl(d) => print_decl(d),
        Directive::CheckTerm { ctx, tm, ty } => {
            let mut reserved = HashSet::new();
            consts_tel(ctx, &mut reserved);
            consts_tm(tm, &mut reserved);
            consts_ty(ty, &mut reserved);
            let mut p = Printer::new(&[], reserved);
            let mut out = String::from("check ");
            p.params(ctx, &mut out);
            if !ctx.is_empty() {
                out.push(' ');
            }
            out.push_str("|- ");
            p.tm(tm, &mut out);
            out.push_str(" : ");
            p.ty(ty, &mut out);
            out
        }
        Directive::CheckType { ctx, ty } => {
            let mut reserved = HashSet::new();
            consts_tel(ctx, &mut reserved);
            consts_ty(ty, &mut reserved);
            let mut p = Printer::new(&[], reserved);
            let mut out = String::from("check ");
            p.params(ctx, &mut out);
            if !ctx.is_empty() {
                out.push(' ');
            }
            out.push_str("|- ");
            p.ty(ty, &mut out);
            out.push_str(" type");
            out
        }
        Directive::Derive { kind, tel } => {
            let mut reserved = HashSet::new();
            consts_tel(tel, &mut reserved);
            let mut p = Printer::new(&[], reserved);
            let mut out = format!("derive {kind} ");
            p.params(tel, &mut out);
            out
        }
    }
}

pub fn print_file(f: &SourceFile) -> String {
    let mut out = String::new();
    for (_, d) in &f.directives {
        out.push_str(&print_directive(d));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn postulates() {
        let f = parse("postulate A : Type\npostulate B (x : A) : Type").unwrap();
        assert_eq!(f.directives.len(), 2);
        match &f.directives[1].1 {
            Directive::Decl(Decl::TypeConst { params, .. }) => assert_eq!(params.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn check_refl() {
        let f = parse("postulate A : Type\ncheck (x : A) |- refl A x : Id A x x").unwrap();
        match &f.directives[1].1 {
            Directive::CheckTerm { tm: Tm::Refl(..), ty: Ty::Id(..), ctx } => assert_eq!(ctx.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn var_prints_as_binder_name() {
        assert_eq!(print_tm(&Tm::Var(0), &["x".into()]), "x");
    }

    #[test]
    fn unbound_name_is_positioned() {
        let e = parse("postulate A : Type\ncheck (u : Id A x x) |- u : Id A x x").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unbound"), "{e}");
    }

    #[test]
    fn j_roundtrip_shows_annotations() {
        let src = "postulate A : Type\n\
                   check (x : A)(y : A)(u : Id A x y) |- J (x1 y1 u1 : A) (Id A y1 x1) (x2 . refl A x2) x y u [] : Id A y x";
        let f = parse(src).unwrap();
        let printed = print_file(&f);
        assert!(printed.contains("J (x1 y1 u1 : A) (Id A y1 x1) (x1 . refl A x1) x y u []"), "{printed}");
        assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn check_type_directive() {
        let f = parse("postulate A : Type\npostulate a : A\ncheck |- Id A a a type").unwrap();
        assert!(matches!(f.directives[2].1, Directive::CheckType { .. }));
    }

    #[test]
    fn shadowing_binders_get_fresh_names() {
        let ctx: Vec<String> = vec!["x".into()];
        let ty = Ty::sigma("x", Ty::konst("A", vec![]), Ty::konst("B", vec![Tm::Var(1), Tm::Var(0)]));
        assert_eq!(print_ty(&ty, &ctx), "Sig (x1 : A) B x x1");
    }
}
