//! Equivalence relations on a fibration `[I, Θ] -> I` and comparison maps
//! between them.
//!
//! A relation is a telescope `R` over `[I, Θ0, Θ1]` with reflexivity,
//! symmetry and transitivity terms. Relations produced here remember a path
//! structure they are isomorphic to; that origin supplies path induction,
//! which is what the comparison maps are built from.

use crate::cat::{Fibration, Morphism};
use crate::defeq::defeq_telescopes;
use crate::syntax::{Telescope, Tm};

use super::homotopy::map_paths;
use super::{inst, lvl, Env, PathError, PathStructure, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Origin {
    path: PathStructure,
    /// `[I, Θ] -> [I, Ξ]` over `I`
    to: Morphism,
    /// `[I, Ξ] -> [I, Θ]` over `I`
    from: Morphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivRelWitness {
    pub fib: Fibration,
    /// `R` over `[I, Θ0, Θ1]`
    pub ext: Telescope,
    pub refl: Vec<Tm>,
    pub sym: Vec<Tm>,
    pub trans: Vec<Tm>,
    origin: Option<Origin>,
}

/// Comparison maps `H : R -> S` and `K : S -> R` over `[I, Θ0, Θ1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Similarity {
    pub forward: Morphism,
    pub backward: Morphism,
}

impl EquivRelWitness {
    /// The relation `(s, t) : P -> [I, Θ0, Θ1]` of a path structure.
    pub fn of(ps: &PathStructure) -> Self {
        let id = Morphism::identity(&ps.fib.total());
        EquivRelWitness {
            fib: ps.fib.clone(),
            ext: ps.ext.clone(),
            refl: ps.refl.clone(),
            sym: ps.sym.clone(),
            trans: ps.trans.clone(),
            origin: Some(Origin { path: ps.clone(), to: id.clone(), from: id }),
        }
    }

    /// The relation of `ps` pulled back to `fib` along an isomorphism
    /// `to : [I, Θ] -> [I, Ξ]` over `I` with inverse `from`.
    pub fn along(env: &mut Env, fib: &Fibration, ps: &PathStructure, to: &Morphism, from: &Morphism) -> Result<Self> {
        let g = fib.base.len();
        if ps.fib.base.len() != g || to.source != fib.total() || to.target != ps.fib.total() {
            return Err(PathError::Equation("the comparison map does not go between the two fibrations".into()));
        }
        if from.source != to.target || from.target != to.source {
            return Err(PathError::Equation("the inverse does not go the other way".into()));
        }
        to.check(&env.sig)?;
        from.check(&env.sig)?;
        let over = |m: &Morphism| m.truncate(g).equal(&env.sig, &Morphism::projection(&m.source, g));
        if !over(to) || !over(from) {
            return Err(PathError::Equation("the comparison maps do not lie over the base".into()));
        }
        if !from.after(to).equal(&env.sig, &Morphism::identity(&to.source))
            || !to.after(from).equal(&env.sig, &Morphism::identity(&from.source))
        {
            return Err(PathError::Equation("the comparison maps are not inverse".into()));
        }

        let n = fib.rank();
        let m = ps.rank();
        let e = ps.ext.len();
        // `to` on the block of Θ-variables starting at level `at` of a context of length `len`
        let to_at = |len: usize, at: usize| -> Vec<Tm> {
            let mut args: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
            args.extend((0..n).map(|i| lvl(len, at + i)));
            inst(&to.terms[g..], &args)
        };
        let pair = fib.total().concat(&fib.ext.shift(0, n));
        let plen = pair.len();
        let mut pair_to: Vec<Tm> = (0..g).map(|i| lvl(plen, i)).collect();
        pair_to.extend(to_at(plen, g));
        pair_to.extend(to_at(plen, g + n));
        let pair_map = Morphism::new(pair.clone(), ps.pair_ctx(), pair_to);
        let ext = pair_map.pull_telescope(&ps.ext);
        let refl = inst(&ps.refl, &to.terms);
        let tot = pair_map.extend(&ps.ext);
        let sym = inst(&ps.sym, &tot.terms);

        let mut rel = EquivRelWitness { fib: fib.clone(), ext, refl, sym, trans: Vec::new(), origin: None };
        let comp = rel.view().comp_ctx();
        let clen = comp.len();
        let mut cargs: Vec<Tm> = tot.terms.iter().map(|t| t.shift(0, n + e)).collect();
        cargs.extend(to_at(clen, plen + e));
        cargs.extend((0..e).map(|i| lvl(clen, plen + e + n + i)));
        debug_assert_eq!(cargs.len(), ps.comp_ctx().len());
        debug_assert_eq!(m + g, ps.fib.total().len());
        rel.trans = inst(&ps.trans, &cargs);
        rel.origin = Some(Origin { path: ps.clone(), to: to.clone(), from: from.clone() });
        rel.check(env)?;
        Ok(rel)
    }

    /// The same data as a path structure without transport.
    fn view(&self) -> PathStructure {
        PathStructure {
            fib: self.fib.clone(),
            ext: self.ext.clone(),
            refl: self.refl.clone(),
            sym: self.sym.clone(),
            trans: self.trans.clone(),
            transport: None,
            lower: None,
        }
    }

    /// `[I, Θ0, Θ1, R]`
    pub fn total(&self) -> Telescope {
        self.view().total()
    }

    /// `ρ : [I, Θ] -> [I, Θ0, Θ1, R]`
    pub fn rho(&self) -> Morphism {
        self.view().r()
    }

    /// `σ : R -> R` over the swap.
    pub fn sigma_map(&self) -> Morphism {
        self.view().sym_map()
    }

    /// `τ : R ×_Y R -> R`
    pub fn tau_map(&self) -> Morphism {
        self.view().trans_map()
    }

    /// `p : R -> [I, Θ0, Θ1]`
    pub fn projection(&self) -> Morphism {
        self.view().st()
    }

    /// Kernel check of the three maps and `pρ = Δ`, `pσ = (p₂, p₁)`, `pτ = (p₁π₁, p₂π₂)`.
    pub fn check(&self, env: &mut Env) -> Result<()> {
        env.context_wf(&self.total())?;
        self.view().check(&env.sig)
    }
}

/// Comparison maps between two relations on the same fibration, built by
/// path induction on the origin of each side.
pub fn similar_maps(env: &mut Env, r: &EquivRelWitness, s: &EquivRelWitness) -> Result<Similarity> {
    if r.fib.base.len() != s.fib.base.len() || !defeq_telescopes(&env.sig, &Telescope::new(), &r.fib.total(), &s.fib.total()) {
        return Err(PathError::Equation("the relations live on different fibrations".into()));
    }
    let forward = compare(env, r, s)?;
    let backward = compare(env, s, r)?;
    Ok(Similarity { forward, backward })
}

/// `H : R -> S` with `q H = p`.
fn compare(env: &mut Env, r: &EquivRelWitness, s: &EquivRelWitness) -> Result<Morphism> {
    let pair_len = r.total().len() - r.ext.len();
    let rt = r.total();
    let e = if r == s {
        (0..r.ext.len()).map(|i| lvl(rt.len(), pair_len + i)).collect()
    } else {
        let o = r.origin.as_ref().ok_or_else(|| {
            PathError::Unsupported("the relation was not produced from a path structure".into())
        })?;
        let base = &o.path.fib.base;
        let target = s.view();
        // over [I, Ξ0, Ξ1, E] at (from ξ0, from ξ1)
        let k = map_paths(env, &o.path, base, &base.vars(0), &o.from.terms, &target)?;
        // back along [I, Θ0, Θ1, R] -> [I, Ξ0, Ξ1, E]
        let g = base.len();
        let n = r.fib.rank();
        let len = rt.len();
        let to_at = |at: usize| -> Vec<Tm> {
            let mut args: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
            args.extend((0..n).map(|i| lvl(len, at + i)));
            inst(&o.to.terms[g..], &args)
        };
        let mut args: Vec<Tm> = (0..g).map(|i| lvl(len, i)).collect();
        args.extend(to_at(g));
        args.extend(to_at(g + n));
        args.extend((0..r.ext.len()).map(|i| lvl(len, pair_len + i)));
        inst(&k, &args)
    };
    let mut terms: Vec<Tm> = (0..pair_len).map(|i| lvl(rt.len(), i)).collect();
    terms.extend(e);
    let h = Morphism::new(rt, s.total(), terms);
    h.check(&env.sig)?;
    if !s.projection().after(&h).equal(&env.sig, &r.projection()) {
        return Err(PathError::Equation("the comparison map does not lie over Y × Y".into()));
    }
    Ok(h)
}
