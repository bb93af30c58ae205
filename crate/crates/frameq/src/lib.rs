//! File formats and command-line front end for `frameq-core`.
//!
//! All files use 0-based indices. See [`cli`] for the exit-code contract.

pub mod cli;
pub mod io;
pub mod par;
mod pretty;
mod selftest;

pub use cli::run;
