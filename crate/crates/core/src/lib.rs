//! Numerical laboratory for the averaging of singularly oscillating forces.
//!
//! The crate solves `u' + A u = f(u) + n^{rho/p} g(n t)` on the 2π-periodic
//! torus, where `A` is the (diagonal) Stokes operator, `f` is either zero or
//! the projected Navier-Stokes advection, and `g` is a separable oscillating
//! force. As `n` grows the forced solution approaches the unforced one when
//! the force belongs to the averaging class `L^p_avr`; the [`harness`]
//! module measures that convergence and compares it against the Gronwall
//! bound computed by [`oracle`].
//!
//! Module map:
//!
//! * [`spectral`]: grids, Fourier fields, transforms, Leray projection, norms.
//! * [`forcing`]: force families, scaled forcing, averaging functional.
//! * [`evolution`]: exponential time stepping and trajectories.
//! * [`navier_stokes`]: advection term and benchmark flows.
//! * [`oracle`]: per-mode Duhamel reference and Gronwall bound.
//! * [`harness`]: configuration, sweeps, outputs.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod forcing;
pub mod harness;
pub mod navier_stokes;
pub mod oracle;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
