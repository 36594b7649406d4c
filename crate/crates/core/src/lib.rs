//! A dependent type kernel with propositional identity types and optional
//! strong sums, plus a witness compiler for path-object constructions whose
//! output is re-checked by the kernel.

pub mod cat;
pub mod checker;
pub mod defeq;
pub mod gen;
mod memo;
pub mod pathtools;
pub mod surface;
pub mod syntax;

pub use checker::{KernelError, Report, Verdict};
pub use syntax::{Decl, Hint, Signature, Telescope, Tm, Ty};
