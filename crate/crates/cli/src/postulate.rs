//! Telescopes given on the command line may mention type constants that no
//! signature declares. Each such name is postulated with one parameter per
//! argument, typed like the argument variable: in `(x : A)(b : B x)` the
//! names become `A : Type` and `B (x : A) : Type`.

use std::collections::{BTreeSet, HashSet};

use idpath_core::checker::add_decl;
use idpath_core::surface::parse_telescope;
use idpath_core::{Decl, Signature, Telescope, Tm, Ty};

/// Parses `text` against `sig`, first declaring the type constants it lacks.
pub fn telescope_with_postulates(sig: &mut Signature, text: &str) -> Result<Telescope, String> {
    let mut extra: Vec<String> = Vec::new();
    let tel = loop {
        let mut names: HashSet<String> = sig.decls().iter().map(|d| d.name().to_string()).collect();
        names.extend(extra.iter().cloned());
        match parse_telescope(text, names) {
            Ok(t) => break t,
            Err(e) => match unbound(&e.msg) {
                Some(n) if !extra.contains(&n) => extra.push(n),
                _ => return Err(format!("{}:{}: {}", e.line, e.col, e.msg)),
            },
        }
    };
    let mut pending: Vec<&String> = extra.iter().collect();
    for (p, (_, ty)) in tel.0.iter().enumerate() {
        let mut found = Vec::new();
        scan_ty(ty, 0, &mut found);
        for (name, args, depth) in found {
            let Some(i) = pending.iter().position(|n| **n == name) else { continue };
            pending.remove(i);
            let params = infer_params(&tel, p, &args, depth)
                .ok_or_else(|| format!("cannot infer the parameters of `{name}`; declare it in a signature file"))?;
            add_decl(sig, Decl::TypeConst { name: name.clone(), params })
                .map_err(|e| format!("postulating `{name}`: {e}"))?;
        }
    }
    if let Some(n) = pending.first() {
        return Err(format!("`{n}` is used as a term but is not declared"));
    }
    Ok(tel)
}

fn unbound(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unbound name `")?;
    Some(rest.strip_suffix('`')?.to_string())
}

/// Type constant occurrences `(name, args, binders crossed)` in order.
fn scan_ty(ty: &Ty, depth: usize, out: &mut Vec<(String, Vec<Tm>, usize)>) {
    match ty {
        Ty::Const(n, args) => out.push((n.clone(), args.clone(), depth)),
        Ty::Id(a, _, _) => scan_ty(a, depth, out),
        Ty::Unit => {}
        Ty::Sigma(_, a, b) => {
            scan_ty(a, depth, out);
            scan_ty(b, depth + 1, out);
        }
    }
}

/// Parameters for a constant applied to `args` in the type of entry `p`.
/// Each argument must be a distinct telescope variable whose type depends
/// only on the earlier arguments.
fn infer_params(tel: &Telescope, p: usize, args: &[Tm], depth: usize) -> Option<Telescope> {
    let mut levels = Vec::with_capacity(args.len());
    for a in args {
        let Tm::Var(i) = a else { return None };
        let i = i.checked_sub(depth)?;
        let level = p.checked_sub(1 + i)?;
        if levels.contains(&level) {
            return None;
        }
        levels.push(level);
    }
    let mut params = Telescope::new();
    for (k, &l) in levels.iter().enumerate() {
        let (hint, ty) = &tel.0[l];
        let mut free = BTreeSet::new();
        ty.free_vars(0, &mut free);
        if free.iter().any(|j| !levels[..k].contains(&(l - 1 - j))) {
            return None;
        }
        let subst: Vec<Tm> = (0..l)
            .map(|m| match levels[..k].iter().position(|&x| x == m) {
                Some(j) => Tm::Var(k - 1 - j),
                None => Tm::Star,
            })
            .collect();
        params.push(hint.clone(), ty.subst(&subst, 0));
    }
    Some(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use idpath_core::surface::print_decl;

    #[test]
    fn dependent_families_get_parameters() {
        let mut sig = Signature::new();
        let tel = telescope_with_postulates(&mut sig, "(x : A)(b : B x)(c : C x b)").unwrap();
        assert_eq!(tel.len(), 3);
        let decls: Vec<String> = sig.decls().iter().map(print_decl).collect();
        assert_eq!(
            decls,
            ["postulate A : Type", "postulate B (x : A) : Type", "postulate C (x : A)(b : B x) : Type"]
        );
    }

    #[test]
    fn declared_names_are_reused() {
        let mut sig = Signature::new();
        telescope_with_postulates(&mut sig, "(x : A)").unwrap();
        telescope_with_postulates(&mut sig, "(y : A)(z : A)").unwrap();
        assert_eq!(sig.len(), 1);
    }

    #[test]
    fn unknown_terms_are_reported() {
        let mut sig = Signature::new();
        assert!(telescope_with_postulates(&mut sig, "(x : A)(u : Id A x a)").is_err());
        let mut sig = Signature::new();
        assert!(telescope_with_postulates(&mut sig, "(x : A)(b : B x x)").is_err());
    }
}
