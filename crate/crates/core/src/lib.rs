//! Numeric toolkit for the extremal decomposition bound on products of
//! inner radii of non-overlapping domains.
//!
//! * [`specfun`] evaluates the weight function `F_δ` and the derivatives of
//!   `Ψ_δ = ln F_δ`.
//! * [`extremal`] computes the upper bounds for `J_n(γ)`, solves the
//!   constrained product maximization and replays the case analysis showing
//!   the equal split is the only extremal point.
//! * [`geometry`] builds radial point systems and disk configurations and
//!   checks the bounds on them by Monte-Carlo sampling.
//! * [`quaddiff`] locates critical points of the associated quadratic
//!   differential, traces its trajectories and renders them to SVG.
//! * [`cli`] is the command-line front end.
//!
//! Decimal commas in the source constants (`1,75`, `0,7`, `1,62`) are written
//! here with decimal points.

pub mod cli;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod numfmt;
pub mod quaddiff;
mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use extremal::BoundParams;
pub use specfun::{Delta, EvalPoint};
