//! Command-line layer over the solver crate: flat-file configuration, the
//! four commands (solve, check, convergence, compare) and bit-stable CSV
//! output.

pub mod commands;
pub mod config;
pub mod csv;
