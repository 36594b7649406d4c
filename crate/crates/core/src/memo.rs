//! Memo tables for kernel judgments, attached to a signature.
//!
//! A signature only grows, so a judgment that held once keeps holding. The
//! tables are keyed by an interned context id and the exact syntax, and are
//! cleared wholesale, interner included, once the stored syntax exceeds a
//! node budget. Ids carry the generation they were issued in; entries under
//! a stale id are neither found nor recorded.

use std::sync::Mutex;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::syntax::{Tm, Ty};

const BUDGET: usize = 2_000_000;
const GEN_SHIFT: u32 = 40;

#[derive(Default)]
struct Tables {
    inferred: FxHashMap<u64, FxHashMap<Tm, Ty>>,
    types: FxHashMap<u64, FxHashSet<Ty>>,
}

#[derive(Default)]
struct State {
    gen: u64,
    ctxs: FxHashMap<(u64, Ty), u64>,
    tables: [Tables; 2],
    equal: FxHashMap<u64, FxHashMap<Tm, FxHashMap<Tm, bool>>>,
    load: usize,
}

impl State {
    fn live(&self, id: u64) -> bool {
        id == 0 || id >> GEN_SHIFT == self.gen
    }

    fn charge(&mut self, nodes: usize) {
        self.load += nodes;
        if self.load > BUDGET {
            *self = State { gen: self.gen + 1, ..State::default() };
        }
    }
}

/// Per-signature memo; typing tables are split by the strong-sums setting.
#[derive(Default)]
pub struct Memo {
    state: Mutex<State>,
}

impl Memo {
    fn lock(&self) -> std::sync::MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Id of the context `parent` extended by `ty`, or `None` if `parent`
    /// belongs to an earlier generation.
    pub(crate) fn extend(&self, parent: u64, ty: &Ty) -> Option<u64> {
        let mut s = self.lock();
        if !s.live(parent) {
            return None;
        }
        let gen = s.gen;
        let next = (gen << GEN_SHIFT) | (s.ctxs.len() as u64 + 1);
        let id = *s.ctxs.entry((parent, ty.clone())).or_insert(next);
        s.charge(ty.size());
        Some(id)
    }

    pub(crate) fn inferred(&self, sums: bool, ctx: u64, t: &Tm) -> Option<Ty> {
        let s = self.lock();
        if !s.live(ctx) {
            return None;
        }
        s.tables[sums as usize].inferred.get(&ctx)?.get(t).cloned()
    }

    pub(crate) fn set_inferred(&self, sums: bool, ctx: u64, t: &Tm, ty: &Ty) {
        let n = t.size() + ty.size();
        let mut s = self.lock();
        if s.live(ctx) {
            s.tables[sums as usize].inferred.entry(ctx).or_default().insert(t.clone(), ty.clone());
            s.charge(n);
        }
    }

    pub(crate) fn is_type(&self, sums: bool, ctx: u64, ty: &Ty) -> bool {
        let s = self.lock();
        s.live(ctx) && s.tables[sums as usize].types.get(&ctx).is_some_and(|t| t.contains(ty))
    }

    pub(crate) fn set_type(&self, sums: bool, ctx: u64, ty: &Ty) {
        let n = ty.size();
        let mut s = self.lock();
        if s.live(ctx) {
            s.tables[sums as usize].types.entry(ctx).or_default().insert(ty.clone());
            s.charge(n);
        }
    }

    pub(crate) fn equal(&self, ctx: u64, a: &Tm, b: &Tm) -> Option<bool> {
        let s = self.lock();
        if !s.live(ctx) {
            return None;
        }
        s.equal.get(&ctx)?.get(a)?.get(b).copied()
    }

    pub(crate) fn set_equal(&self, ctx: u64, a: &Tm, b: &Tm, r: bool) {
        let n = a.size() + b.size();
        let mut s = self.lock();
        if s.live(ctx) {
            s.equal.entry(ctx).or_default().entry(a.clone()).or_default().insert(b.clone(), r);
            s.charge(n);
        }
    }
}

impl Clone for Memo {
    fn clone(&self) -> Self {
        Memo::default()
    }
}

impl std::fmt::Debug for Memo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Memo")
    }
}

impl PartialEq for Memo {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Memo {}
