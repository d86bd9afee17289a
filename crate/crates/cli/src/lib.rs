//! IO, file formats, and experiment plumbing for the `meanfix` binary.
//!
//! The numerical content lives in `meanfix-core`; this crate adds the
//! std-only surface: INI-style experiment configs, JSON/CSV report
//! writers with atomic file output, vector parsing for the command line,
//! and the subcommand runners themselves.

pub mod commands;
pub mod config;
pub mod io;
pub mod parse;

/// Process exit codes: 0 success/pass, 1 usage or config error,
/// 2 mathematical violation detected.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const VIOLATION: i32 = 2;
}
