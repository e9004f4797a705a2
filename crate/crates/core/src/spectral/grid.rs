use crate::{Error, Result};

/// Square wavenumber lattice with `n` modes per axis.
///
/// Storage index `j` maps to wavenumber `j` for `j <= n/2` and `j - n`
/// otherwise, so the lattice is `{-n/2+1, ..., n/2}²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveGrid {
    n: usize,
}

impl WaveGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "modes per axis must be even and >= 8, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn modes_per_axis(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn wavenumber(&self, index: usize) -> i64 {
        if index <= self.n / 2 {
            index as i64
        } else {
            index as i64 - self.n as i64
        }
    }

    /// Storage index of wavenumber `k`, taken modulo `n`.
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn k(&self, ix: usize, iy: usize) -> (i64, i64) {
        (self.wavenumber(ix), self.wavenumber(iy))
    }

    #[inline]
    pub fn k_squared(&self, ix: usize, iy: usize) -> f64 {
        let (kx, ky) = self.k(ix, iy);
        (kx * kx + ky * ky) as f64
    }

    /// Storage index of `-k` for the mode stored at `index`.
    #[inline]
    pub fn mirror(&self, index: usize) -> usize {
        (self.n - index) % self.n
    }

    pub fn is_nyquist(&self, index: usize) -> bool {
        index == self.n / 2
    }

    /// Largest retained `|k_i|` under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n as f64 / 3.0
    }

    #[inline]
    pub fn is_retained(&self, ix: usize, iy: usize) -> bool {
        let cut = self.dealias_cutoff();
        let (kx, ky) = self.k(ix, iy);
        (kx.abs() as f64) <= cut && (ky.abs() as f64) <= cut
    }

    /// Physical sample coordinate along one axis.
    pub fn coordinate(&self, index: usize) -> f64 {
        2.0 * std::f64::consts::PI * index as f64 / self.n as f64
    }

    pub fn check_same(&self, other: &WaveGrid) -> Result<()> {
        if self != other {
            return Err(Error::Shape(format!(
                "grid {} vs grid {}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}
