//! Fourier representation of fields on the 2π-periodic torus.
//!
//! Coefficients are normalized so that mode `k` contributes
//! `coeff(k) * exp(i k·x)` to the physical field; the forward transform
//! carries the `1/N²` factor.

pub(crate) mod field;
mod grid;
mod operator;
mod transform;

pub use field::{Direction, SpectralField, VelocityField};
pub use grid::WaveGrid;
pub use operator::DiagonalStokesOperator;

/// Sobolev order of the trace-space surrogate for integrability exponent `p`.
pub fn trace_order(p: f64) -> f64 {
    2.0 - 2.0 / p
}
