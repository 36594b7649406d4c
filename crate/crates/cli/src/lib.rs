//! Command-line driver: checks source files, runs witness derivations and
//! renders their results.

pub mod derive;
pub mod explain;
pub mod postulate;
pub mod report;
pub mod run;
