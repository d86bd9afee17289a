//! Numerical core for fixed-point experiments with mean nonexpansive maps
//! on the sequence spaces `ℓ^p`.
//!
//! Everything here is pure computation on finitely supported vectors:
//!
//! * [`space`] — `ℓ^p` vectors, norms, arithmetic, coordinate functionals;
//! * [`operators`] — the built-in operator corpus, chiefly a piecewise-linear
//!   self-map of the unit ball of `ℓ²` whose iterates all have Lipschitz
//!   constant strictly above 1 while an averaged two-iterate inequality
//!   still holds;
//! * [`certify`] — seeded Monte Carlo falsification of the defining
//!   inequalities (mean nonexpansiveness, Lipschitz lower bounds,
//!   asymptotic regularity profiles);
//! * [`iteration`] — Picard orbits with the constructive diagnostics used
//!   to establish weak convergence (monotone subsequence extraction,
//!   distance limits, weak-cluster estimation, demiclosedness checks);
//! * [`geometry`] — probes of the ambient-space geometry (Opial margins,
//!   duality maps with gauge functions, modulus of convexity, asymptotic
//!   centers).
//!
//! The crate is `no_std`-compatible (with `alloc`); IO, serialization to
//! files, and the command-line front end live in the companion `meanfix`
//! crate.
//!
//! Infinite sequences are modeled by finite support: every vector carries
//! finitely many coefficients and reads beyond the support return 0. All
//! built-in operators map finitely supported vectors to finitely supported
//! vectors, so this truncation is exact for the experiments shipped here.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x >= tol)` rejects NaN along with genuine violations; the suggested
// rewrite `x < tol` would silently accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod certify;
pub mod geometry;
pub mod iteration;
pub mod operators;
pub mod sampling;
pub mod space;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
