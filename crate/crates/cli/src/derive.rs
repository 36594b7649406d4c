//! Derive commands: run one witness construction on a telescope, collect the
//! definitions it emitted and the maps it produced, and render the lot as a
//! source file that re-checks on its own.

use std::str::FromStr;

use thiserror::Error;

use idpath_core::cat::{sigma_collapse, Fibration, Morphism};
use idpath_core::pathtools::contract::source_map;
use idpath_core::pathtools::equiv::{two_out_of_six, HomotopyEquivalence};
use idpath_core::pathtools::witness::{groupoid_laws, sym_witness, trans_witness, transport};
use idpath_core::pathtools::{
    build_py, is_structural_weq, jfill, path_object, similar_maps, EquivRelWitness, Env, PathError, PathStructure,
};
use idpath_core::surface::{print_decl, print_directive, print_telescope, Directive};
use idpath_core::{Decl, Signature, Telescope, Ty};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    PathObj,
    Sym,
    Trans,
    Transport,
    Groupoid,
    Py,
    Contract,
    Similar,
    Fill,
    TwoSix,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::PathObj,
        Kind::Sym,
        Kind::Trans,
        Kind::Transport,
        Kind::Groupoid,
        Kind::Py,
        Kind::Contract,
        Kind::Similar,
        Kind::Fill,
        Kind::TwoSix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::PathObj => "pathobj",
            Kind::Sym => "sym",
            Kind::Trans => "trans",
            Kind::Transport => "transport",
            Kind::Groupoid => "groupoid",
            Kind::Py => "py",
            Kind::Contract => "contract",
            Kind::Similar => "similar",
            Kind::Fill => "fill",
            Kind::TwoSix => "twosix",
        }
    }
}

impl FromStr for Kind {
    type Err = DeriveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| DeriveError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum DeriveError {
    #[error("unknown derive kind `{0}`")]
    UnknownKind(String),
    /// The request does not fit the kind.
    #[error("{0}")]
    Input(String),
    /// A construction step or one of its equations failed.
    #[error(transparent)]
    Failed(#[from] PathError),
}

/// The telescope a derive runs on. For kinds that take a fibration, `split`
/// is the length of its base; `None` picks the default for the kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub tel: Telescope,
    pub split: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub label: String,
    pub map: Morphism,
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub kind: Kind,
    pub input: Signature,
    pub emitted: Vec<Decl>,
    pub notes: Vec<String>,
    pub items: Vec<Item>,
    pub confirmations: Vec<String>,
}

struct Out<'a> {
    env: Env,
    input: &'a Signature,
    notes: Vec<String>,
    items: Vec<Item>,
    confirmations: Vec<String>,
}

impl Out<'_> {
    fn item(&mut self, label: &str, map: &Morphism) {
        self.items.push(Item { label: label.to_string(), map: map.clone() });
    }

    fn confirm(&mut self, label: &str, holds: bool) -> Result<(), DeriveError> {
        if !holds {
            return Err(PathError::Equation(label.to_string()).into());
        }
        self.confirmations.push(label.to_string());
        Ok(())
    }

    fn equal(&self, a: &Morphism, b: &Morphism) -> bool {
        a.equal(&self.env.sig, b)
    }
}

fn split_rank_one(t: &Target) -> Result<(Telescope, Ty), DeriveError> {
    let n = t.tel.len();
    if n == 0 || t.split.is_some_and(|s| s + 1 != n) {
        return Err(DeriveError::Input("this kind needs a single type over a context".into()));
    }
    let (gamma, last) = t.tel.split_at(n - 1);
    Ok((gamma, last.0[0].1.clone()))
}

fn fibration(t: &Target, default: usize) -> Result<Fibration, DeriveError> {
    let s = t.split.unwrap_or(default);
    if s > t.tel.len() {
        return Err(DeriveError::Input("the base is longer than the telescope".into()));
    }
    let (base, ext) = t.tel.split_at(s);
    Ok(Fibration::new(base, ext))
}

/// `p ρ = Δ`, `p σ = (p₂, p₁)` and `p τ = (p₁π₁, p₂π₂)` for a path structure.
fn relation_equations(out: &mut Out, ps: &PathStructure) -> Result<(), DeriveError> {
    let st = ps.st();
    let refl = out.equal(&st.after(&ps.r()), &ps.diagonal());
    out.confirm("reflexivity: p r = diagonal", refl)?;
    let sym = out.equal(&st.after(&ps.sym_map()), &ps.swap().after(&st));
    out.confirm("symmetry: p sigma = (p2, p1)", sym)?;
    let trans = ps.check_equations(&out.env.sig).is_ok();
    out.confirm("transitivity: p tau = (p1 pi1, p2 pi2)", trans)
}

fn homotopy(out: &mut Out, label: &str, hw: &idpath_core::pathtools::HomotopyWitness) -> Result<(), DeriveError> {
    out.item(label, &hw.h);
    let ok = hw.check(&out.env.sig).is_ok();
    out.confirm(label, ok)
}

/// Runs one derive against `sig`. Every step is kernel-checked as it is built.
pub fn derive(sig: &Signature, kind: Kind, target: &Target) -> Result<Bundle, DeriveError> {
    let mut out = Out { env: Env::new(sig), input: sig, notes: Vec::new(), items: Vec::new(), confirmations: Vec::new() };
    out.env.context_wf(&target.tel)?;
    match kind {
        Kind::PathObj => {
            let (gamma, _) = split_rank_one(target)?;
            let fib = Fibration::new(gamma.clone(), target.tel.split_at(gamma.len()).1);
            let ps = path_object(&mut out.env, &fib)?;
            out.notes.push(format!("P = {}", print_telescope(&ps.total(), &[])));
            out.item("r", &ps.r());
            out.item("s", &ps.s());
            out.item("t", &ps.t());
            let diag = out.equal(&ps.st().after(&ps.r()), &ps.diagonal());
            out.confirm("(s, t) r = diagonal", diag)?;
            let g = gamma.len();
            let base = out.equal(&ps.s().truncate(g), &ps.t().truncate(g));
            out.confirm("x s = x t", base)?;
        }
        Kind::Sym => {
            let (gamma, a) = split_rank_one(target)?;
            let sw = sym_witness(&mut out.env, &gamma, &a)?;
            let ps = out.env.path_structure(&Fibration::new(gamma.clone(), Telescope::new().with("x", a.clone())))?;
            out.item("sigma", &sw.sigma_map);
            let swap = out.equal(&ps.st().after(&sw.sigma_map), &ps.swap().after(&ps.st()));
            out.confirm("(s, t) sigma = (t, s)", swap)?;
            homotopy(&mut out, "sigma r ~ r", &sw.unit)?;
        }
        Kind::Trans => {
            let (gamma, a) = split_rank_one(target)?;
            let tw = trans_witness(&mut out.env, &gamma, &a)?;
            let ps = out.env.path_structure(&Fibration::new(gamma.clone(), Telescope::new().with("x", a.clone())))?;
            out.item("tau", &tw.tau_map);
            let (p1, p2) = ps.comp_projections();
            let mut terms = ps.s().after(&p1).terms;
            terms.extend(ps.t().after(&p2).terms[gamma.len()..].iter().cloned());
            let rhs = Morphism::new(tw.tau_map.source.clone(), ps.pair_ctx(), terms);
            let eq = out.equal(&ps.st().after(&tw.tau_map), &rhs);
            out.confirm("(s, t) tau = (s pi1, t pi2)", eq)?;
            homotopy(&mut out, "mu(u, refl) ~ u", &tw.unit)?;
        }
        Kind::Transport => {
            let fib = fibration(target, target.tel.len().saturating_sub(1))?;
            let tw = transport(&mut out.env, &fib)?;
            out.item("Gamma", &tw.gamma);
            let gl = fib.base.len() - 1;
            let n = tw.pulled.len();
            let mut terms: Vec<_> = (0..gl).map(|i| idpath_core::Tm::Var(n - 1 - i)).collect();
            terms.push(idpath_core::Tm::Var(n - 1 - (gl + 1)));
            let tp2 = Morphism::new(tw.pulled.clone(), fib.base.clone(), terms);
            let eq = out.equal(&tw.gamma.truncate(gl + 1), &tp2);
            out.confirm("f Gamma = t p2", eq)?;
            homotopy(&mut out, "Gamma (1, r f) ~ 1", &tw.coherence)?;
        }
        Kind::Groupoid => {
            let (gamma, a) = split_rank_one(target)?;
            let gl = groupoid_laws(&mut out.env, &gamma, &a)?;
            out.item("sigma", &gl.sym.sigma_map);
            out.item("tau", &gl.trans.tau_map);
            let labels = [
                "mu(u, mu(v, w)) ~ mu(mu(u, v), w)",
                "mu(u, refl) ~ u",
                "mu(refl, u) ~ u",
                "mu(u, sigma u) ~ refl",
                "mu(sigma u, u) ~ refl",
            ];
            for (label, hw) in labels.into_iter().zip(gl.all()) {
                homotopy(&mut out, label, hw)?;
            }
        }
        Kind::Py => {
            let fib = fibration(target, 0)?;
            let ps = build_py(&mut out.env, &fib)?;
            out.notes.push(format!("PY = {}", print_telescope(&ps.total(), &[])));
            out.item("r", &ps.r());
            out.item("sigma", &ps.sym_map());
            out.item("tau", &ps.trans_map());
            relation_equations(&mut out, &ps)?;
        }
        Kind::Contract => {
            let fib = fibration(target, 0)?;
            let ps = out.env.path_structure(&fib)?;
            let cw = source_map(&mut out.env, &ps)?;
            out.notes.push(format!("s : {} -> {}", print_telescope(&ps.total(), &[]), print_telescope(&fib.total(), &[])));
            out.item("c", &cw.section);
            let sec = out.equal(&cw.fib.projection().after(&cw.section), &Morphism::identity(&cw.fib.base));
            out.confirm("p c = 1", sec)?;
            homotopy(&mut out, "1 ~ c p", &cw.retraction)?;
            out.item("L", &cw.path_section);
            let l = out.equal(&cw.path.st().after(&cw.path_section), &Morphism::identity(&cw.path.pair_ctx()));
            out.confirm("(s, t) L = 1", l)?;
        }
        Kind::Similar => {
            let fib = fibration(target, 0)?;
            let py = build_py(&mut out.env, &fib)?;
            let r = EquivRelWitness::of(&py);
            let s = if out.env.sig.strong_sums {
                let sc = sigma_collapse(&out.env.sig, &fib).map_err(PathError::from)?;
                let collapsed = Fibration::new(fib.base.clone(), Telescope::new().with("z", sc.ty.clone()));
                let po = path_object(&mut out.env, &collapsed)?;
                out.notes.push(format!("collapsed path object = {}", print_telescope(&po.total(), &[])));
                EquivRelWitness::along(&mut out.env, &fib, &po, &sc.fwd, &sc.bwd)?
            } else if fib.rank() == 1 {
                EquivRelWitness::of(&path_object(&mut out.env, &fib)?)
            } else {
                return Err(DeriveError::Input("without strong sums, similar compares rank 1 path objects only".into()));
            };
            let sim = similar_maps(&mut out.env, &r, &s)?;
            out.item("H", &sim.forward);
            out.item("K", &sim.backward);
            let qh = out.equal(&s.projection().after(&sim.forward), &r.projection());
            out.confirm("q H = p", qh)?;
            let pk = out.equal(&r.projection().after(&sim.backward), &s.projection());
            out.confirm("p K = q", pk)?;
        }
        Kind::Fill => {
            let (gamma, _) = split_rank_one(target)?;
            let fib = Fibration::new(gamma.clone(), target.tel.split_at(gamma.len()).1);
            let ps = out.env.path_structure(&fib)?;
            let ind = is_structural_weq(&out.env.sig, &ps.r())
                .ok_or_else(|| PathError::NotRecognized("r".into()))?;
            let l = ps.swap().after(&ps.st());
            let (d, hw) = jfill(&mut out.env, &ind, &ps.path_fibration(), &ps.r(), &l)?;
            out.notes.push("square: top r, bottom (t, s), left r, right (s, t)".into());
            out.item("d", &d);
            let fd = out.equal(&ps.path_fibration().projection().after(&d), &l);
            out.confirm("(s, t) d = (t, s)", fd)?;
            homotopy(&mut out, "r ~ d r", &hw)?;
        }
        Kind::TwoSix => {
            let y = target.tel.clone();
            let fib = Fibration::over_empty(y.clone());
            let (f, g) = if out.env.sig.strong_sums {
                let sc = sigma_collapse(&out.env.sig, &fib).map_err(PathError::from)?;
                (sc.fwd, sc.bwd)
            } else {
                (Morphism::identity(&y), Morphism::identity(&y))
            };
            let h = f.clone();
            let gf = g.after(&f);
            let hg = h.after(&g);
            let gf_eq = HomotopyEquivalence::from_inverse(&mut out.env, &gf, &Morphism::identity(&gf.target))?;
            let hg_eq = HomotopyEquivalence::from_inverse(&mut out.env, &hg, &Morphism::identity(&hg.target))?;
            let res = two_out_of_six(&mut out.env, &f, &g, &h, &gf_eq, &hg_eq)?;
            for (name, e) in [("f", &res.f), ("g", &res.g), ("h", &res.h), ("hgf", &res.hgf)] {
                out.item(&format!("{name} inverse"), &e.inverse);
                let ok = e.check(&mut out.env).is_ok();
                out.item(&format!("{name} unit"), &e.unit.h);
                out.item(&format!("{name} counit"), &e.counit.h);
                out.confirm(&format!("{name} is a homotopy equivalence"), ok)?;
            }
        }
    }
    let emitted = out.env.emitted().to_vec();
    Ok(Bundle {
        kind,
        input: out.input.clone(),
        emitted,
        notes: out.notes,
        items: out.items,
        confirmations: out.confirmations,
    })
}

impl Bundle {
    /// A standalone source file: the input signature, the emitted
    /// definitions, and one `check` per non-variable component of each map.
    pub fn to_source(&self) -> String {
        let mut s = format!("-- derive {}\n", self.kind.name());
        for n in &self.notes {
            s.push_str(&format!("-- {n}\n"));
        }
        if self.input.strong_sums {
            s.push_str("flag strong_sums\n");
        }
        for d in self.input.decls().iter().chain(&self.emitted) {
            s.push_str(&print_decl(d));
            s.push('\n');
        }
        for item in &self.items {
            let m = &item.map;
            s.push_str(&format!(
                "-- {} : {} -> {}\n",
                item.label,
                print_telescope(&m.source, &[]),
                print_telescope(&m.target, &[])
            ));
            for (i, tm) in m.terms.iter().enumerate() {
                if matches!(tm, idpath_core::Tm::Var(_)) {
                    continue;
                }
                let ty = m.target.0[i].1.subst(&m.terms[..i], 0);
                let d = Directive::CheckTerm { ctx: m.source.clone(), tm: tm.clone(), ty };
                s.push_str(&print_directive(&d));
                s.push('\n');
            }
        }
        s
    }

    /// The source file followed by one confirmation line per equation.
    pub fn to_text(&self) -> String {
        let mut s = self.to_source();
        for c in &self.confirmations {
            s.push_str(&format!("-- confirmed: {c}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip_through_their_names() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("nope".parse::<Kind>().is_err());
    }
}
