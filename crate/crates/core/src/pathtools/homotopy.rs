//! Operations on homotopies: postcomposition, pairing, the map of path
//! structures induced by a map of fibrations, and transport along paths of
//! any rank.

use crate::cat::{Fibration, Morphism};
use crate::syntax::{Telescope, Tm};

use super::fill::PathInduction;
use super::{inst, lvl, Env, HomotopyWitness, PathError, PathStructure, Result};

/// Path components in `psz` from `h(θ0)` to `h(θ1)`, over
/// `[prefix, Θ0, Θ1, E](bargs)`, where `ps` is the path structure of `Θ` over
/// `B` and `bargs` instantiate `B` over `prefix`.
///
/// `h` maps `[prefix, Θ(bargs)]` into the total context of `psz`, with the
/// base part depending on `prefix` only. By path induction on the first
/// path of `ps`, recursively on the rank.
pub fn map_paths(
    env: &mut Env,
    ps: &PathStructure,
    prefix: &Telescope,
    bargs: &[Tm],
    h: &[Tm],
    psz: &PathStructure,
) -> Result<Vec<Tm>> {
    let b = ps.fib.base.len();
    let p = prefix.len();
    let zi = psz.fib.base.len();
    let tail = Telescope(ps.total().0[b..].to_vec());
    let t = prefix.concat(&tail.subst(bargs, 0));
    let len = t.len();
    let pv: Vec<Tm> = (0..p).map(|i| lvl(len, i)).collect();
    let bt: Vec<Tm> = bargs.iter().map(|a| a.shift(0, len - p)).collect();
    let at = |ys: &[Tm]| -> Vec<Tm> {
        let mut args = pv.clone();
        args.extend(ys.iter().cloned());
        inst(h, &args)
    };
    let n = ps.rank();
    if n == 0 {
        let hz = at(&[]);
        return Ok(psz.refl_at(&hz[..zi], &hz[zi..]));
    }
    let m = n - 1;
    let v = |i: usize| lvl(len, i);
    let x0 = v(p);
    let th0: Vec<Tm> = (0..m).map(|i| v(p + 1 + i)).collect();
    let y0: Vec<Tm> = (0..n).map(|i| v(p + i)).collect();
    let y1: Vec<Tm> = (0..n).map(|i| v(p + n + i)).collect();
    let h0 = at(&y0);
    let h1 = at(&y1);
    let mut args = h0.clone();
    args.extend(h1[zi..].iter().cloned());
    let psi = psz.ext.subst(&args, 0);

    let hx = |th: &[Tm]| -> Vec<Tm> {
        let mut ys = vec![x0.clone()];
        ys.extend(th.iter().cloned());
        at(&ys)[zi..].to_vec()
    };
    let hi = &h0[..zi];
    let k = if m == 0 {
        psz.refl_at(hi, &hx(&[]))
    } else {
        let lower = ps.lower.as_deref().expect("rank > 0");
        let a = ps.fib.ext.0[0].1.subst(bargs, 0);
        let prefix1 = prefix.clone().with(ps.fib.ext.0[0].0.as_str(), a.clone());
        let mut bargs1: Vec<Tm> = bargs.iter().map(|t| t.shift(0, 1)).collect();
        bargs1.push(Tm::Var(0));
        let h1s: Vec<Tm> = h.to_vec();
        let kl = map_paths(env, lower, &prefix1, &bargs1, &h1s, psz)?;
        let th1: Vec<Tm> = (0..m).map(|i| v(p + n + 1 + i)).collect();
        let beta: Vec<Tm> = (0..m).map(|i| v(p + 2 * n + 1 + i)).collect();
        let r = Tm::refl(a.shift(0, len - p), x0.clone());
        let g0 = ps.gamma_at(&bt, &x0, &x0, &r, &th0);
        let tr = ps.transport.as_ref().expect("rank > 0");
        let mut cargs = bt.clone();
        cargs.push(x0.clone());
        cargs.extend(th0.iter().cloned());
        let raw = inst(&tr.coh, &cargs);
        let kat = |a: &[Tm], c: &[Tm], e: &[Tm]| -> Vec<Tm> {
            let mut args = pv.clone();
            args.push(x0.clone());
            for part in [a, c, e] {
                args.extend(part.iter().cloned());
            }
            inst(&kl, &args)
        };
        let k1 = kat(&th0, &g0, &raw);
        let k2 = kat(&g0, &th1, &beta);
        psz.trans_at(hi, &hx(&th0), &hx(&g0), &k1, &hx(&th1), &k2)
    };
    let ind = PathInduction::new_unchecked(&t, p, p + n, p + 2 * n);
    let kv: Vec<Tm> = k.iter().map(|t| ind.at_v(t)).collect();
    Ok(ind.fill(env, &psi, &kv)?.d)
}

/// Transport of `fam`, a telescope over `[I, Θ]`, along the paths of `ps`:
/// terms over `[I, Θ0, Θ1, E, fam(Θ0)]` at `fam(Θ1)`. By path induction on
/// the first path, moving the rest along the coherence of the lower transport.
pub fn transport_paths(env: &mut Env, ps: &PathStructure, fam: &Telescope) -> Result<Vec<Tm>> {
    let g = ps.fib.base.len();
    let n = ps.rank();
    let total = ps.total();
    let l = total.len();
    let f = fam.len();
    let at0: Vec<Tm> = (0..g + n).map(|i| lvl(l, i)).collect();
    let t = total.concat(&fam.subst(&at0, 0));
    let len = t.len();
    let v = |i: usize| lvl(len, i);
    let phi0: Vec<Tm> = (0..f).map(|i| v(l + i)).collect();
    if n == 0 {
        return Ok(phi0);
    }
    let ivars: Vec<Tm> = (0..g).map(v).collect();
    let mut at1 = ivars.clone();
    at1.extend((0..n).map(|i| v(g + n + i)));
    let psi = fam.subst(&at1, 0);

    let m = n - 1;
    let x0 = v(g);
    let k = if m == 0 {
        phi0
    } else {
        let lower = ps.lower.as_deref().expect("rank > 0");
        let th0: Vec<Tm> = (0..m).map(|i| v(g + 1 + i)).collect();
        let th1: Vec<Tm> = (0..m).map(|i| v(g + n + 1 + i)).collect();
        let beta: Vec<Tm> = (0..lower.ext.len()).map(|i| v(g + 2 * n + 1 + i)).collect();
        let a = ps.fib.ext.0[0].1.subst(&ivars, 0);
        let moved = ps.gamma_at(&ivars, &x0, &x0, &Tm::refl(a, x0.clone()), &th0);
        let mut xbase = ivars.clone();
        xbase.push(x0.clone());
        let coh = ps.coh_at(&xbase, &th0);
        let back = lower.sym_at(&xbase, &moved, &th0, &coh);
        let path = lower.trans_at(&xbase, &th0, &moved, &back, &th1, &beta);
        let rec = transport_paths(env, lower, fam)?;
        let mut args = xbase;
        for part in [&th0, &th1, &path, &phi0] {
            args.extend(part.iter().cloned());
        }
        inst(&rec, &args)
    };
    let ind = PathInduction::new_unchecked(&t, g, g + n, g + 2 * n);
    let kv: Vec<Tm> = k.iter().map(|t| ind.at_v(t)).collect();
    Ok(ind.fill(env, &psi, &kv)?.d)
}

/// `h f ≃ h g` from `H : f ≃ g`, for `h : [I, Θ] -> [I, Ξ]` over `I`.
pub fn whisker_post(env: &mut Env, h: &Morphism, hw: &HomotopyWitness) -> Result<HomotopyWitness> {
    let ps = &hw.path;
    let base = &ps.fib.base;
    let nb = base.len();
    if h.source != ps.fib.total() || h.target.len() < nb || h.target.split_at(nb).0 != *base {
        return Err(PathError::Equation("the map does not start at the type of the homotopy".into()));
    }
    h.check(&env.sig)?;
    let total = ps.fib.total();
    if !h.truncate(nb).equal(&env.sig, &Morphism::projection(&total, nb)) {
        return Err(PathError::Equation("the map does not lie over the base".into()));
    }
    let zfib = Fibration::new(base.clone(), h.target.split_at(nb).1);
    let psz = env.path_structure(&zfib)?;
    let k = map_paths(env, ps, base, &base.vars(0), &h.terms, &psz)?;
    let e: Vec<Tm> = k.iter().map(|t| t.subst(&hw.h.terms, 0)).collect();
    HomotopyWitness::new(&env.sig, &psz, h.after(&hw.f), h.after(&hw.g), e)
}

/// `(f, h) ≃_I (g, h)` into `X ×_I Z` from `H : f ≃_I g` into `X` and `h` into `Z`.
pub fn pair_homotopy(env: &mut Env, hw: &HomotopyWitness, h: &Morphism) -> Result<HomotopyWitness> {
    let ps = &hw.path;
    let base = &ps.fib.base;
    let nb = base.len();
    let w = &hw.f.source;
    if h.source != *w || h.target.len() < nb || h.target.split_at(nb).0 != *base {
        return Err(PathError::Equation("the second map does not start at the source of the homotopy".into()));
    }
    h.check(&env.sig)?;
    if !h.truncate(nb).equal(&env.sig, &hw.f.truncate(nb)) {
        return Err(PathError::Equation("the maps lie over different base points".into()));
    }
    let n = ps.rank();
    let xi = h.target.split_at(nb).1;
    let zl = xi.len();
    // X ×_I Z = [I, Θ, Ξ]
    let xz = Fibration::new(base.clone(), ps.fib.ext.concat(&xi.shift(0, n)));
    let psxz = env.path_structure(&xz)?;
    // the map [I, Ξ, Θ] -> [I, Θ, Ξ]
    let prefix = base.concat(&xi);
    let src = prefix.concat(&ps.fib.ext.shift(0, zl));
    let len = src.len();
    let mut pm: Vec<Tm> = (0..nb).map(|i| lvl(len, i)).collect();
    pm.extend((0..n).map(|i| lvl(len, nb + zl + i)));
    pm.extend((0..zl).map(|i| lvl(len, nb + i)));
    let bargs: Vec<Tm> = (0..nb).map(|i| lvl(prefix.len(), i)).collect();
    let k = map_paths(env, ps, &prefix, &bargs, &pm, &psxz)?;
    let pair_len = ps.pair_ctx().len();
    let mut args = hw.h.terms[..nb].to_vec();
    args.extend(h.terms[nb..].iter().cloned());
    args.extend(hw.h.terms[nb..].iter().cloned());
    debug_assert_eq!(args.len(), pair_len + ps.ext.len() + zl);
    let e: Vec<Tm> = k.iter().map(|t| t.subst(&args, 0)).collect();
    let pair = |f: &Morphism| {
        let mut terms = f.terms.clone();
        terms.extend(h.terms[nb..].iter().cloned());
        Morphism::new(w.clone(), xz.total(), terms)
    };
    HomotopyWitness::new(&env.sig, &psxz, pair(&hw.f), pair(&hw.g), e)
}
