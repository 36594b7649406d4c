//! Processing a source file directive by directive.

use idpath_core::checker::{self, add_decl};
use idpath_core::surface::{parse, print_directive, Directive, ParseError, Pos};
use idpath_core::{Decl, Signature};

use crate::derive::{derive, Kind, Target};
use crate::report::Record;

/// Longest judgment summary kept in a record.
const SUMMARY: usize = 160;

fn summary(s: String) -> String {
    if s.chars().count() <= SUMMARY {
        return s;
    }
    let cut: String = s.chars().take(SUMMARY).collect();
    format!("{cut} ...")
}

fn record(pos: Pos, directive: &'static str, judgment: String) -> Record {
    Record {
        line: pos.line,
        col: pos.col,
        directive,
        accepted: true,
        judgment: summary(judgment),
        rule: String::new(),
        position: String::new(),
        message: String::new(),
    }
}

fn reject(mut r: Record, rule: &str, position: &str, message: String) -> Record {
    r.accepted = false;
    r.rule = rule.to_string();
    r.position = position.to_string();
    r.message = message;
    r
}

fn kernel(r: Record, e: checker::KernelError) -> Record {
    let msg = e.kind.to_string();
    reject(r, e.rule, &e.position, msg)
}

/// Checks every directive of `text` in order. Parse errors abort the file.
pub fn check_source(text: &str, strong_sums: bool) -> Result<Vec<Record>, ParseError> {
    let file = parse(text)?;
    let mut sig = Signature::new();
    sig.strong_sums = strong_sums;
    let mut out = Vec::with_capacity(file.directives.len());
    for (pos, d) in file.directives {
        out.push(directive(&mut sig, pos, d));
    }
    Ok(out)
}

fn directive(sig: &mut Signature, pos: Pos, d: Directive) -> Record {
    match d {
        Directive::Flag(name) => {
            let r = record(pos, "flag", format!("flag {name}"));
            if name == "strong_sums" {
                sig.strong_sums = true;
                r
            } else {
                reject(r, "flag", "", format!("unknown flag `{name}`"))
            }
        }
        Directive::Decl(decl) => {
            let kw = match decl {
                Decl::Def { .. } => "def",
                _ => "postulate",
            };
            let r = record(pos, kw, format!("{kw} {}", decl.name()));
            match add_decl(sig, decl) {
                Ok(()) => r,
                Err(e) => kernel(r, e),
            }
        }
        Directive::CheckTerm { ctx, tm, ty } => {
            let text = print_directive(&Directive::CheckTerm { ctx: ctx.clone(), tm: tm.clone(), ty: ty.clone() });
            let r = record(pos, "check", text);
            if let Err(e) = checker::context_wf(sig, &ctx) {
                return kernel(r, e);
            }
            match checker::check(sig, &ctx, &tm, &ty).failure {
                None => r,
                Some(e) => kernel(r, e),
            }
        }
        Directive::CheckType { ctx, ty } => {
            let text = print_directive(&Directive::CheckType { ctx: ctx.clone(), ty: ty.clone() });
            let r = record(pos, "check", text);
            if let Err(e) = checker::context_wf(sig, &ctx) {
                return kernel(r, e);
            }
            match checker::check_type(sig, &ctx, &ty).failure {
                None => r,
                Some(e) => kernel(r, e),
            }
        }
        Directive::Derive { kind, tel } => {
            let text = print_directive(&Directive::Derive { kind: kind.clone(), tel: tel.clone() });
            let r = record(pos, "derive", text);
            let kind: Kind = match kind.parse() {
                Ok(k) => k,
                Err(e) => return reject(r, "derive", "", e.to_string()),
            };
            match derive(sig, kind, &Target { tel, split: None }) {
                Ok(b) => {
                    let mut r = r;
                    r.message = format!("{} equation(s) confirmed", b.confirmations.len());
                    r
                }
                Err(e) => reject(r, "derive", kind.name(), e.to_string()),
            }
        }
    }
}

/// The declarations and flags of a signature file; any rejected directive
/// is returned as its record.
pub fn load_signature(text: &str, strong_sums: bool) -> Result<Signature, String> {
    let file = parse(text).map_err(|e| e.to_string())?;
    let mut sig = Signature::new();
    sig.strong_sums = strong_sums;
    for (pos, d) in file.directives {
        match d {
            Directive::Flag(_) | Directive::Decl(_) => {
                let r = directive(&mut sig, pos, d);
                if !r.accepted {
                    return Err(r.to_text(false));
                }
            }
            _ => {}
        }
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn postulates_only_are_accepted() {
        let rs = check_source("postulate A : Type\npostulate a : A", false).unwrap();
        assert!(rs.iter().all(|r| r.accepted));
    }

    #[test]
    fn refl_between_distinct_points_is_a_mismatch() {
        let src = "postulate A : Type\npostulate a : A\npostulate b : A\ncheck |- refl A a : Id A a b";
        let rs = check_source(src, false).unwrap();
        let last = rs.last().unwrap();
        assert!(!last.accepted);
        assert_eq!((last.line, last.col), (4, 1));
        assert!(last.message.contains("expected"), "{}", last.message);
    }

    #[test]
    fn sums_need_the_flag() {
        let src = "postulate A : Type\ncheck (x : A) |- pair x x : Sig (y : A) A";
        assert!(!check_source(src, false).unwrap()[1].accepted);
        assert!(check_source(src, true).unwrap()[1].accepted);
        let flagged = format!("flag strong_sums\n{src}");
        assert!(check_source(&flagged, false).unwrap().iter().all(|r| r.accepted));
    }

    #[test]
    fn derive_directives_run_in_files() {
        let src = "postulate A : Type\npostulate B (x : A) : Type\nderive py (x : A)(b : B x)\nderive bogus (x : A)";
        let rs = check_source(src, false).unwrap();
        assert!(rs[2].accepted, "{:?}", rs[2]);
        assert!(!rs[3].accepted);
    }
}
