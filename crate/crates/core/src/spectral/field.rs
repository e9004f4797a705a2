use std::f64::consts::PI;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::grid::WaveGrid;
use super::transform;
use crate::{Error, Result};

/// Relative conjugate-symmetry defect tolerated by [`SpectralField::to_physical`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Relative bound on `max |k·û|` certified by the divergence-free flag.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;

/// Spatial direction of a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

/// Fourier coefficients of a scalar field, indexed `[ix, iy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: WaveGrid,
    coeffs: Array2<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: WaveGrid) -> Self {
        let n = grid.modes_per_axis();
        Self {
            grid,
            coeffs: Array2::zeros((n, n)),
        }
    }

    pub fn from_coeffs(grid: WaveGrid, coeffs: Array2<Complex64>) -> Result<Self> {
        let n = grid.modes_per_axis();
        if coeffs.dim() != (n, n) {
            return Err(Error::Shape(format!(
                "coefficient array {:?} on grid {n}",
                coeffs.dim()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    /// Transforms real samples on the `N×N` grid; the result is symmetrized.
    pub fn from_physical(grid: WaveGrid, samples: &Array2<f64>) -> Result<Self> {
        let n = grid.modes_per_axis();
        if samples.dim() != (n, n) {
            return Err(Error::Shape(format!(
                "sample array {:?} on grid {n}",
                samples.dim()
            )));
        }
        let complex = samples.mapv(|v| Complex64::new(v, 0.0));
        let mut field = Self {
            grid,
            coeffs: transform::analyze(&complex),
        };
        field.enforce_symmetry();
        Ok(field)
    }

    /// Samples `f(x, y)` at the grid points and transforms.
    pub fn from_fn(grid: WaveGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.modes_per_axis();
        let samples = Array2::from_shape_fn((n, n), |(i, j)| {
            f(grid.coordinate(i), grid.coordinate(j))
        });
        Self::from_physical(grid, &samples).expect("shape matches grid")
    }

    pub fn grid(&self) -> WaveGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    pub fn coeff(&self, kx: i64, ky: i64) -> Complex64 {
        self.coeffs[[self.grid.index_of(kx), self.grid.index_of(ky)]]
    }

    pub fn set_coeff(&mut self, kx: i64, ky: i64, value: Complex64) {
        let idx = [self.grid.index_of(kx), self.grid.index_of(ky)];
        self.coeffs[idx] = value;
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `max_k |c(-k) - conj(c(k))|` relative to the largest coefficient.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.max_modulus();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for ((i, j), c) in self.coeffs.indexed_iter() {
            let mirror = self.coeffs[[self.grid.mirror(i), self.grid.mirror(j)]];
            worst = worst.max((mirror - c.conj()).norm());
        }
        worst / scale
    }

    /// Projects onto real data: `c(k) <- (c(k) + conj(c(-k))) / 2`.
    pub fn enforce_symmetry(&mut self) {
        let n = self.grid.modes_per_axis();
        let src = self.coeffs.clone();
        for i in 0..n {
            for j in 0..n {
                let mirror = src[[self.grid.mirror(i), self.grid.mirror(j)]];
                self.coeffs[[i, j]] = 0.5 * (src[[i, j]] + mirror.conj());
            }
        }
    }

    pub fn to_physical(&self) -> Result<Array2<f64>> {
        let defect = self.symmetry_defect();
        if defect > SYMMETRY_TOLERANCE {
            return Err(Error::MalformedField(format!(
                "conjugate symmetry violated by {defect:e}"
            )));
        }
        Ok(transform::synthesize(&self.coeffs).mapv(|c| c.re))
    }

    /// Multiplies each mode by `i k_axis`; Nyquist modes are dropped.
    pub fn derivative(&self, direction: Direction) -> SpectralField {
        let g = self.grid;
        let mut out = self.clone();
        for ((i, j), c) in out.coeffs.indexed_iter_mut() {
            let (idx, k) = match direction {
                Direction::X => (i, g.wavenumber(i)),
                Direction::Y => (j, g.wavenumber(j)),
            };
            *c = if g.is_nyquist(idx) {
                Complex64::default()
            } else {
                *c * Complex64::new(0.0, k as f64)
            };
        }
        out
    }

    /// Zeros every mode with `|k_x| > N/3` or `|k_y| > N/3`.
    pub fn dealias(&self) -> SpectralField {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub(crate) fn dealias_in_place(&mut self) {
        let g = self.grid;
        for ((i, j), c) in self.coeffs.indexed_iter_mut() {
            if !g.is_retained(i, j) {
                *c = Complex64::default();
            }
        }
    }

    /// `(Σ_k (1+|k|²)^s |c(k)|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.sobolev_norm_sq(s).sqrt()
    }

    pub(crate) fn sobolev_norm_sq(&self, s: f64) -> f64 {
        let g = self.grid;
        let mut acc = 0.0;
        for ((i, j), c) in self.coeffs.indexed_iter() {
            let m = c.norm_sqr();
            if m == 0.0 {
                continue;
            }
            acc += if s == 0.0 {
                m
            } else {
                (1.0 + g.k_squared(i, j)).powf(s) * m
            };
        }
        acc
    }

    /// Spectral inner product `Σ a(k) conj(b(k))`.
    pub fn inner(&self, other: &SpectralField) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        Ok(Zip::from(&self.coeffs)
            .and(&other.coeffs)
            .fold(Complex64::default(), |acc, a, b| acc + a * b.conj()))
    }

    pub fn scale(&self, factor: f64) -> SpectralField {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.mapv(|c| c * factor),
        }
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: &self.coeffs - &other.coeffs,
        })
    }

    /// L² norm by trapezoidal quadrature of the physical samples.
    pub fn physical_l2_norm(&self) -> Result<f64> {
        let samples = self.to_physical()?;
        let n = self.grid.modes_per_axis() as f64;
        let cell = (2.0 * PI / n).powi(2);
        Ok((samples.iter().map(|v| v * v).sum::<f64>() * cell).sqrt())
    }
}

/// Two-component velocity field.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    x: SpectralField,
    y: SpectralField,
    divergence_free: bool,
}

impl VelocityField {
    pub fn new(x: SpectralField, y: SpectralField) -> Result<Self> {
        x.grid.check_same(&y.grid)?;
        Ok(Self {
            x,
            y,
            divergence_free: false,
        })
    }

    pub fn zeros(grid: WaveGrid) -> Self {
        Self {
            x: SpectralField::zeros(grid),
            y: SpectralField::zeros(grid),
            divergence_free: true,
        }
    }

    pub fn from_fn(
        grid: WaveGrid,
        fx: impl Fn(f64, f64) -> f64,
        fy: impl Fn(f64, f64) -> f64,
    ) -> Self {
        Self {
            x: SpectralField::from_fn(grid, fx),
            y: SpectralField::from_fn(grid, fy),
            divergence_free: false,
        }
    }

    pub fn grid(&self) -> WaveGrid {
        self.x.grid
    }

    pub fn x_component(&self) -> &SpectralField {
        &self.x
    }

    pub fn y_component(&self) -> &SpectralField {
        &self.y
    }

    pub fn components(&self) -> [&SpectralField; 2] {
        [&self.x, &self.y]
    }

    pub(crate) fn components_mut(&mut self) -> [&mut SpectralField; 2] {
        self.divergence_free = false;
        [&mut self.x, &mut self.y]
    }

    /// Recomputes the divergence-free flag from the coefficients.
    pub(crate) fn refresh_certificate(&mut self) {
        self.divergence_free = self.divergence_defect() <= DIVERGENCE_TOLERANCE;
    }

    /// True when the divergence-free certificate has been established.
    pub fn is_certified_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// `max_k |k·û(k)| / max_k |û(k)|`, zero for the zero field.
    pub fn divergence_defect(&self) -> f64 {
        let g = self.grid();
        let scale = self.max_modulus();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        Zip::indexed(&self.x.coeffs)
            .and(&self.y.coeffs)
            .for_each(|(i, j), ux, uy| {
                let (kx, ky) = g.k(i, j);
                let kx = if g.is_nyquist(i) { 0.0 } else { kx as f64 };
                let ky = if g.is_nyquist(j) { 0.0 } else { ky as f64 };
                worst = worst.max((ux * kx + uy * ky).norm());
            });
        worst / scale
    }

    /// Checks the divergence bound and sets the certificate flag on success.
    pub fn certify_divergence_free(mut self) -> Result<Self> {
        let defect = self.divergence_defect();
        if defect > DIVERGENCE_TOLERANCE {
            return Err(Error::MalformedField(format!(
                "divergence defect {defect:e} exceeds {DIVERGENCE_TOLERANCE:e}"
            )));
        }
        self.divergence_free = true;
        Ok(self)
    }

    pub fn max_modulus(&self) -> f64 {
        self.x.max_modulus().max(self.y.max_modulus())
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.x.symmetry_defect().max(self.y.symmetry_defect())
    }

    pub fn divergence(&self) -> SpectralField {
        let dx = self.x.derivative(Direction::X);
        let dy = self.y.derivative(Direction::Y);
        dx.add(&dy).expect("components share a grid")
    }

    /// Scalar vorticity `∂x u_y - ∂y u_x`.
    pub fn curl(&self) -> SpectralField {
        let a = self.y.derivative(Direction::X);
        let b = self.x.derivative(Direction::Y);
        a.sub(&b).expect("components share a grid")
    }

    /// Removes the gradient part: `û <- û - k (k·û)/|k|²` for `k ≠ 0`.
    pub fn leray_project(&self) -> VelocityField {
        let mut out = self.clone();
        out.leray_project_in_place();
        out
    }

    pub(crate) fn leray_project_in_place(&mut self) {
        let g = self.grid();
        Zip::indexed(&mut self.x.coeffs)
            .and(&mut self.y.coeffs)
            .for_each(|(i, j), ux, uy| {
                let (kx, ky) = g.k(i, j);
                if kx == 0 && ky == 0 {
                    return;
                }
                let (kx, ky) = (kx as f64, ky as f64);
                let k2 = kx * kx + ky * ky;
                let kdotu = (*ux * kx + *uy * ky) / k2;
                *ux -= kdotu * kx;
                *uy -= kdotu * ky;
            });
        self.refresh_certificate();
    }

    pub fn dealias(&self) -> VelocityField {
        let mut out = self.clone();
        out.x.dealias_in_place();
        out.y.dealias_in_place();
        out
    }

    pub(crate) fn dealias_in_place(&mut self) {
        self.x.dealias_in_place();
        self.y.dealias_in_place();
    }

    pub fn enforce_symmetry(&mut self) {
        self.x.enforce_symmetry();
        self.y.enforce_symmetry();
    }

    /// Root of the summed squared component norms.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        (self.x.sobolev_norm_sq(s) + self.y.sobolev_norm_sq(s)).sqrt()
    }

    /// Coefficient ℓ² norm (the `s = 0` Sobolev norm).
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    pub fn inner(&self, other: &VelocityField) -> Result<Complex64> {
        Ok(self.x.inner(&other.x)? + self.y.inner(&other.y)?)
    }

    pub fn scale(&self, factor: f64) -> VelocityField {
        Self {
            x: self.x.scale(factor),
            y: self.y.scale(factor),
            divergence_free: self.divergence_free,
        }
    }

    pub fn add(&self, other: &VelocityField) -> Result<VelocityField> {
        Ok(Self {
            x: self.x.add(&other.x)?,
            y: self.y.add(&other.y)?,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn sub(&self, other: &VelocityField) -> Result<VelocityField> {
        Ok(Self {
            x: self.x.sub(&other.x)?,
            y: self.y.sub(&other.y)?,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    /// Both components sampled in physical space.
    pub fn to_physical(&self) -> Result<[Array2<f64>; 2]> {
        Ok([self.x.to_physical()?, self.y.to_physical()?])
    }

    pub fn is_finite(&self) -> bool {
        self.components()
            .iter()
            .all(|c| c.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> WaveGrid {
        WaveGrid::new(n).unwrap()
    }

    #[test]
    fn zero_field_has_zero_samples() {
        let f = SpectralField::zeros(grid(16));
        assert!(f.to_physical().unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_pair_inverts_to_cosine() {
        let g = grid(16);
        let mut f = SpectralField::zeros(g);
        f.set_coeff(1, 0, Complex64::new(0.5, 0.0));
        f.set_coeff(-1, 0, Complex64::new(0.5, 0.0));
        let samples = f.to_physical().unwrap();
        for ((i, _), v) in samples.indexed_iter() {
            assert!((v - g.coordinate(i).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_field_is_malformed() {
        let mut f = SpectralField::zeros(grid(16));
        f.set_coeff(1, 0, Complex64::new(1.0, 0.0));
        assert!(matches!(f.to_physical(), Err(Error::MalformedField(_))));
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = grid(16);
        let mut f = SpectralField::zeros(g);
        assert_eq!(f.sobolev_norm(1.5), 0.0);
        f.set_coeff(1, 0, Complex64::new(1.0, 0.0));
        assert_relative_eq!(f.sobolev_norm(1.0), 2f64.sqrt(), max_relative = 1e-15);
        f.set_coeff(0, 2, Complex64::new(1.0, 0.0));
        // (1+1)^2 + (1+4)^2 = 29
        assert_relative_eq!(f.sobolev_norm(2.0), 29f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(f.sobolev_norm(2.0), 5.38516, max_relative = 1e-6);
    }

    #[test]
    fn derivative_of_cosine_is_minus_sine() {
        let g = grid(16);
        let f = SpectralField::from_fn(g, |x, _| x.cos());
        let d = f.derivative(Direction::X).to_physical().unwrap();
        for ((i, _), v) in d.indexed_iter() {
            assert!((v + g.coordinate(i).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn curl_of_shear_matches_hand_expansion() {
        // u = (-sin y, 0): curl = -∂y(-sin y) = cos y, coefficients 1/2 at (0, ±1).
        let g = grid(16);
        let v = VelocityField::from_fn(g, |_, y| -y.sin(), |_, _| 0.0);
        let w = v.curl();
        assert!((w.coeff(0, 1) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((w.coeff(0, -1) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let mut rest = w.clone();
        rest.set_coeff(0, 1, Complex64::default());
        rest.set_coeff(0, -1, Complex64::default());
        assert!(rest.max_modulus() < 1e-15);
    }

    #[test]
    fn gradient_projects_to_zero() {
        let g = grid(16);
        let v = VelocityField::from_fn(g, |x, _| x.cos(), |_, _| 0.0);
        assert!(v.leray_project().max_modulus() < 1e-15);
    }

    #[test]
    fn taylor_green_is_unchanged_by_projection() {
        let g = grid(16);
        let v = VelocityField::from_fn(
            g,
            |x, y| x.sin() * y.cos(),
            |x, y| -x.cos() * y.sin(),
        );
        assert!(v.divergence().max_modulus() < 1e-13);
        let p = v.leray_project();
        assert!(p.sub(&v).unwrap().max_modulus() < 1e-15);
        assert!(p.is_certified_divergence_free());
    }

    #[test]
    fn dealias_examples() {
        let g = grid(24);
        let mut f = SpectralField::zeros(g);
        f.set_coeff(8, -8, Complex64::new(1.0, 0.0));
        assert_eq!(f.dealias(), f);
        let mut nyq = SpectralField::zeros(g);
        nyq.set_coeff(12, 0, Complex64::new(1.0, 0.0));
        assert_eq!(nyq.dealias().max_modulus(), 0.0);
    }

    #[test]
    fn mismatched_grids_are_shape_errors() {
        let a = SpectralField::zeros(grid(8));
        let b = SpectralField::zeros(grid(16));
        assert!(matches!(VelocityField::new(a.clone(), b.clone()), Err(Error::Shape(_))));
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn certificate_rejects_compressible_field() {
        let g = grid(16);
        let v = VelocityField::from_fn(g, |x, _| x.cos(), |_, _| 0.0);
        assert!(v.certify_divergence_free().is_err());
    }
}
