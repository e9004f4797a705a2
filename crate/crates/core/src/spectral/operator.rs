use ndarray::Array2;

use super::field::VelocityField;
use super::grid::WaveGrid;
use crate::{Error, Result};

/// Stokes operator `-ν P Δ`, diagonal in Fourier modes with eigenvalue `ν|k|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalStokesOperator {
    viscosity: f64,
}

impl DiagonalStokesOperator {
    pub fn new(viscosity: f64) -> Result<Self> {
        if !(viscosity > 0.0 && viscosity.is_finite()) {
            return Err(Error::Domain(format!(
                "viscosity must be positive, got {viscosity}"
            )));
        }
        Ok(Self { viscosity })
    }

    pub fn viscosity(&self) -> f64 {
        self.viscosity
    }

    pub fn eigenvalue(&self, grid: &WaveGrid, ix: usize, iy: usize) -> f64 {
        self.viscosity * grid.k_squared(ix, iy)
    }

    pub fn eigenvalue_of(&self, kx: i64, ky: i64) -> f64 {
        self.viscosity * (kx * kx + ky * ky) as f64
    }

    pub fn eigenvalues(&self, grid: &WaveGrid) -> Array2<f64> {
        let n = grid.modes_per_axis();
        Array2::from_shape_fn((n, n), |(i, j)| self.eigenvalue(grid, i, j))
    }

    pub fn apply(&self, v: &VelocityField) -> VelocityField {
        let grid = v.grid();
        let mut out = v.clone();
        let certified = v.is_certified_divergence_free();
        for comp in out.components_mut() {
            for ((i, j), c) in comp.coeffs_mut().indexed_iter_mut() {
                *c *= self.eigenvalue(&grid, i, j);
            }
        }
        if certified {
            out.refresh_certificate();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_vanish_only_at_origin() {
        let g = WaveGrid::new(16).unwrap();
        let op = DiagonalStokesOperator::new(0.3).unwrap();
        let lam = op.eigenvalues(&g);
        for ((i, j), &l) in lam.indexed_iter() {
            assert!(l >= 0.0);
            assert_eq!(l == 0.0, i == 0 && j == 0);
        }
        assert_eq!(op.eigenvalue_of(1, 2), 0.3 * 5.0);
    }

    #[test]
    fn rejects_nonpositive_viscosity() {
        assert!(DiagonalStokesOperator::new(0.0).is_err());
        assert!(DiagonalStokesOperator::new(-1.0).is_err());
        assert!(DiagonalStokesOperator::new(f64::NAN).is_err());
    }
}
