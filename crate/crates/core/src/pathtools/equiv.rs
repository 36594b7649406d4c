//! Homotopy equivalences between contexts and lower fillers for maps with a
//! homotopy section.
//!
//! Maps here are closed morphisms between contexts; a homotopy between maps
//! into `X` is taken in the path structure of `X -> []`.

use crate::cat::{Fibration, Morphism};

use super::homotopy::{transport_paths, whisker_post};
use super::{inst, Env, HomotopyWitness, PathError, Result};

/// `r f : f ≃ f`
pub fn hom_refl(env: &mut Env, f: &Morphism) -> Result<HomotopyWitness> {
    let ps = env.path_structure(&Fibration::over_empty(f.target.clone()))?;
    let e = ps.refl_at(&[], &f.terms);
    HomotopyWitness::new(&env.sig, &ps, f.clone(), f.clone(), e)
}

/// `g ≃ f` from `f ≃ g`.
pub fn hom_sym(env: &mut Env, hw: &HomotopyWitness) -> Result<HomotopyWitness> {
    let ps = &hw.path;
    let nb = ps.fib.base.len();
    let base = &hw.f.terms[..nb];
    let e = ps.sym_at(base, &hw.f.terms[nb..], &hw.g.terms[nb..], hw.e_terms());
    HomotopyWitness::new(&env.sig, ps, hw.g.clone(), hw.f.clone(), e)
}

/// `f ≃ h` from `f ≃ g` and `g ≃ h`.
pub fn hom_trans(env: &mut Env, a: &HomotopyWitness, b: &HomotopyWitness) -> Result<HomotopyWitness> {
    if a.path != b.path {
        return Err(PathError::Equation("the homotopies live in different path objects".into()));
    }
    if !a.g.equal(&env.sig, &b.f) {
        return Err(PathError::Equation("the homotopies do not meet".into()));
    }
    let ps = &a.path;
    let nb = ps.fib.base.len();
    let base = &a.f.terms[..nb];
    let e = ps.trans_at(base, &a.f.terms[nb..], &a.g.terms[nb..], a.e_terms(), &b.g.terms[nb..], b.e_terms());
    HomotopyWitness::new(&env.sig, ps, a.f.clone(), b.g.clone(), e)
}

/// `f k ≃ g k` from `f ≃ g`.
pub fn hom_pre(env: &mut Env, hw: &HomotopyWitness, k: &Morphism) -> Result<HomotopyWitness> {
    if k.target != hw.f.source {
        return Err(PathError::Equation("the map does not end at the source of the homotopy".into()));
    }
    let e = inst(hw.e_terms(), &k.terms);
    HomotopyWitness::new(&env.sig, &hw.path, hw.f.after(k), hw.g.after(k), e)
}

/// `h f ≃ h g` from `f ≃ g`, for maps into contexts.
pub fn hom_post(env: &mut Env, h: &Morphism, hw: &HomotopyWitness) -> Result<HomotopyWitness> {
    whisker_post(env, h, hw)
}

/// `f : X -> Y` with a homotopy inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyEquivalence {
    pub map: Morphism,
    pub inverse: Morphism,
    /// `inverse ∘ map ≃ 1`
    pub unit: HomotopyWitness,
    /// `map ∘ inverse ≃ 1`
    pub counit: HomotopyWitness,
}

impl HomotopyEquivalence {
    pub fn new(
        env: &mut Env,
        map: Morphism,
        inverse: Morphism,
        unit: HomotopyWitness,
        counit: HomotopyWitness,
    ) -> Result<Self> {
        let e = HomotopyEquivalence { map, inverse, unit, counit };
        e.check(env)?;
        Ok(e)
    }

    /// An isomorphism, with reflexivity homotopies.
    pub fn from_inverse(env: &mut Env, map: &Morphism, inverse: &Morphism) -> Result<Self> {
        let unit = hom_refl(env, &inverse.after(map))?;
        let counit = hom_refl(env, &map.after(inverse))?;
        let unit = retarget(env, unit, &Morphism::identity(&map.source))?;
        let counit = retarget(env, counit, &Morphism::identity(&map.target))?;
        Self::new(env, map.clone(), inverse.clone(), unit, counit)
    }

    pub fn check(&self, env: &mut Env) -> Result<()> {
        let (f, g) = (&self.map, &self.inverse);
        f.check(&env.sig)?;
        g.check(&env.sig)?;
        if g.target != f.source || g.source != f.target {
            return Err(PathError::Equation("the inverse does not go the other way".into()));
        }
        for (hw, a, id) in [(&self.unit, g.after(f), &f.source), (&self.counit, f.after(g), &f.target)] {
            hw.check(&env.sig)?;
            if hw.path.fib != Fibration::over_empty(id.clone()) {
                return Err(PathError::Equation("a homotopy is not taken in the path object of its target".into()));
            }
            if !hw.f.equal(&env.sig, &a) || !hw.g.equal(&env.sig, &Morphism::identity(id)) {
                return Err(PathError::Equation("a homotopy has the wrong endpoints".into()));
            }
        }
        Ok(())
    }

    /// The inverse equivalence.
    pub fn flip(&self) -> Self {
        HomotopyEquivalence {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
            unit: self.counit.clone(),
            counit: self.unit.clone(),
        }
    }
}

/// The same homotopy between definitionally equal restatements of its endpoints.
fn restate(env: &mut Env, hw: &HomotopyWitness, f: Morphism, g: Morphism) -> Result<HomotopyWitness> {
    HomotopyWitness::new(&env.sig, &hw.path, f, g, hw.e_terms().to_vec())
}

fn retarget(env: &mut Env, hw: HomotopyWitness, g: &Morphism) -> Result<HomotopyWitness> {
    let f = hw.f.clone();
    restate(env, &hw, f, g.clone())
}

/// `g f` with inverse `f⁻¹ g⁻¹`.
pub fn compose_equiv(env: &mut Env, f: &HomotopyEquivalence, g: &HomotopyEquivalence) -> Result<HomotopyEquivalence> {
    if g.map.source != f.map.target {
        return Err(PathError::Equation("the equivalences do not compose".into()));
    }
    let unit = sandwich(env, &f.inverse, &g.unit, &f.map, &f.unit)?;
    let counit = sandwich(env, &g.map, &f.counit, &g.inverse, &g.counit)?;
    HomotopyEquivalence::new(env, g.map.after(&f.map), f.inverse.after(&g.inverse), unit, counit)
}

/// `a (b c) ≃ a c ≃ 1` from `b ≃ 1` and `a c ≃ 1`.
fn sandwich(env: &mut Env, a: &Morphism, b1: &HomotopyWitness, c: &Morphism, ac: &HomotopyWitness) -> Result<HomotopyWitness> {
    let pre = hom_pre(env, b1, c)?;
    let post = hom_post(env, a, &pre)?;
    let post = retarget(env, post, &a.after(c))?;
    hom_trans(env, &post, ac)
}

/// The four equivalences of 2-out-of-6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoOutOfSix {
    pub f: HomotopyEquivalence,
    pub g: HomotopyEquivalence,
    pub h: HomotopyEquivalence,
    pub hgf: HomotopyEquivalence,
}

/// `f : X -> Y`, `g : Y -> Z`, `h : Z -> W` with `g f` and `h g` equivalences.
pub fn two_out_of_six(
    env: &mut Env,
    f: &Morphism,
    g: &Morphism,
    h: &Morphism,
    gf: &HomotopyEquivalence,
    hg: &HomotopyEquivalence,
) -> Result<TwoOutOfSix> {
    if !gf.map.equal(&env.sig, &g.after(f)) || !hg.map.equal(&env.sig, &h.after(g)) {
        return Err(PathError::Equation("the given equivalences are not g f and h g".into()));
    }
    let (y, z) = (&g.source, &g.target);
    let a = &gf.inverse; // Z -> X
    let b = &hg.inverse; // W -> Y
    let bh = b.after(h);
    let fa = f.after(a);

    // g f a ≃ 1 and b h g ≃ 1, restated
    let gfa = restate(env, &gf.counit, g.after(&fa), Morphism::identity(z))?;
    let bhg = restate(env, &hg.unit, bh.after(g), Morphism::identity(y))?;

    // f a g ≃ b h g f a g ≃ b h g ≃ 1
    let fag = fa.after(g);
    let s1 = hom_pre(env, &bhg, &fag)?;
    let s1 = hom_sym(env, &s1)?;
    let s2 = hom_pre(env, &gfa, g)?;
    let s2 = hom_post(env, &bh, &s2)?;
    let s2 = retarget(env, s2, &bh.after(g))?;
    let s12 = hom_trans(env, &s1, &s2)?;
    let fag_id = hom_trans(env, &s12, &bhg)?;

    // g with inverse f a
    let g_eq = HomotopyEquivalence::new(env, g.clone(), fa.clone(), fag_id.clone(), gfa.clone())?;

    // f with inverse a g: (a g) f = a (g f) ≃ 1 and f (a g) ≃ 1
    let ag = a.after(g);
    let unit_f = restate(env, &gf.unit, ag.after(f), gf.unit.g.clone())?;
    let f_eq = HomotopyEquivalence::new(env, f.clone(), ag, unit_f, fag_id)?;

    // h with inverse g b: h g b ≃ 1 and g b h ≃ g b h g f a ≃ g f a ≃ 1
    let gb = g.after(b);
    let counit_h = restate(env, &hg.counit, h.after(&gb), hg.counit.g.clone())?;
    let gbh = gb.after(h);
    let t1 = hom_post(env, &gbh, &gfa)?;
    let t1 = hom_sym(env, &t1)?;
    let t1 = restate(env, &t1, gbh.clone(), t1.g.clone())?;
    let t2 = hom_pre(env, &bhg, &fa)?;
    let t2 = hom_post(env, g, &t2)?;
    let t2 = restate(env, &t2, t1.g.clone(), g.after(&fa))?;
    let t12 = hom_trans(env, &t1, &t2)?;
    let unit_h = hom_trans(env, &t12, &gfa)?;
    let h_eq = HomotopyEquivalence::new(env, h.clone(), gb, unit_h, counit_h)?;

    let hg = compose_equiv(env, &g_eq, &h_eq)?;
    let hgf = compose_equiv(env, &f_eq, &hg)?;
    Ok(TwoOutOfSix { f: f_eq, g: g_eq, h: h_eq, hgf })
}

/// A lower filler `d : T -> E` with `p d = n` for the square `p u = n f`,
/// where `f : S -> T` has a section up to homotopy `h : f g ≃ 1`:
/// `d = Γ(u g, h)`, transporting in `n* E` along `h`.
pub fn lower_fill_leftmap(
    env: &mut Env,
    f: &Morphism,
    g: &Morphism,
    h: &HomotopyWitness,
    p: &Fibration,
    u: &Morphism,
    n: &Morphism,
) -> Result<Morphism> {
    let t = &f.target;
    if g.source != *t || g.target != f.source || h.f.source != *t || h.path.fib.total() != *t {
        return Err(PathError::Equation("the homotopy is not f g ≃ 1 on the target of f".into()));
    }
    if !h.f.equal(&env.sig, &f.after(g)) || !h.g.equal(&env.sig, &Morphism::identity(t)) {
        return Err(PathError::Equation("the homotopy is not f g ≃ 1".into()));
    }
    if u.source != f.source || u.target != p.total() || n.source != *t || n.target != p.base {
        return Err(PathError::Equation("the square has the wrong shape".into()));
    }
    u.check(&env.sig)?;
    n.check(&env.sig)?;
    if !p.projection().after(u).equal(&env.sig, &n.after(f)) {
        return Err(PathError::Equation("the square does not commute".into()));
    }
    let nb = p.base.len();
    let fam = n.pull_telescope(&p.ext);
    let ps = &h.path;
    let tr = transport_paths(env, ps, &fam)?;
    let mut args = h.h.terms.clone();
    args.extend(inst(&u.terms[nb..], &g.terms));
    let moved = inst(&tr, &args);
    let mut terms = n.terms.clone();
    terms.extend(moved);
    let d = Morphism::new(t.clone(), p.total(), terms);
    d.check(&env.sig)?;
    if !p.projection().after(&d).equal(&env.sig, n) {
        return Err(PathError::Equation("p d = n".into()));
    }
    Ok(d)
}
