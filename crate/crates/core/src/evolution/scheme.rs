//! Exponential integrators for `u' = -λ u + N(u, t)` with diagonal `λ`.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::Scheme;

/// `[φ_1(z), φ_2(z), φ_3(z)]`.
pub(crate) fn phi123(z: f64) -> [f64; 3] {
    if z.abs() < 1.0 {
        // φ_k(z) = Σ_j z^j / (j+k)!
        let mut out = [0.0; 3];
        let mut inv_k_fact = 1.0;
        for (idx, slot) in out.iter_mut().enumerate() {
            let k = idx + 1;
            inv_k_fact /= k as f64;
            let mut term = inv_k_fact;
            let mut sum = term;
            for j in 1..30 {
                term *= z / (j + k) as f64;
                sum += term;
            }
            *slot = sum;
        }
        out
    } else {
        let p1 = z.exp_m1() / z;
        let p2 = (p1 - 1.0) / z;
        let p3 = (p2 - 0.5) / z;
        [p1, p2, p3]
    }
}

/// Per-mode coefficient tables for one step size.
#[derive(Debug, Clone)]
pub(crate) struct Coefficients {
    scheme: Scheme,
    dt: f64,
    /// `e^{-λh}`
    full: Array2<f64>,
    /// `e^{-λh/2}`
    half: Array2<f64>,
    /// `(h/2) φ_1(-λh/2)`
    half_phi: Array2<f64>,
    b1: Array2<f64>,
    b2: Array2<f64>,
    b3: Array2<f64>,
}

pub(crate) type Pair = [Array2<Complex64>; 2];

impl Coefficients {
    pub(crate) fn new(scheme: Scheme, eigenvalues: &Array2<f64>, dt: f64) -> Self {
        let full = eigenvalues.mapv(|l| (-l * dt).exp());
        let half = eigenvalues.mapv(|l| (-l * dt * 0.5).exp());
        let (half_phi, b1, b2, b3) = match scheme {
            Scheme::Etdrk4 => {
                let half_phi = eigenvalues.mapv(|l| 0.5 * dt * phi123(-l * dt * 0.5)[0]);
                let phis = eigenvalues.mapv(|l| phi123(-l * dt));
                let b1 = phis.mapv(|[p1, p2, p3]| dt * (p1 - 3.0 * p2 + 4.0 * p3));
                let b2 = phis.mapv(|[_, p2, p3]| dt * (2.0 * p2 - 4.0 * p3));
                let b3 = phis.mapv(|[_, p2, p3]| dt * (4.0 * p3 - p2));
                (half_phi, b1, b2, b3)
            }
            Scheme::IntegratingFactorRk4 => {
                let empty = Array2::zeros((0, 0));
                (empty.clone(), empty.clone(), empty.clone(), empty)
            }
        };
        Self {
            scheme,
            dt,
            full,
            half,
            half_phi,
            b1,
            b2,
            b3,
        }
    }

    pub(crate) fn dt(&self) -> f64 {
        self.dt
    }

    /// One step from `(u, t)`; `rhs` evaluates `N(u, t)`.
    pub(crate) fn advance<E>(
        &self,
        u: &Pair,
        t: f64,
        mut rhs: impl FnMut(&Pair, f64) -> Result<Pair, E>,
    ) -> Result<Pair, E> {
        let h = self.dt;
        match self.scheme {
            Scheme::Etdrk4 => {
                let nu = rhs(u, t)?;
                let a = map2(u, &nu, |i, x, n| self.half[i] * x + self.half_phi[i] * n);
                let na = rhs(&a, t + 0.5 * h)?;
                let b = map2(u, &na, |i, x, n| self.half[i] * x + self.half_phi[i] * n);
                let nb = rhs(&b, t + 0.5 * h)?;
                let c = map3(&a, &nb, &nu, |i, x, n_b, n_u| {
                    self.half[i] * x + self.half_phi[i] * (2.0 * n_b - n_u)
                });
                let nc = rhs(&c, t + h)?;
                let mut out = u.clone();
                for comp in 0..2 {
                    Zip::indexed(&mut out[comp])
                        .and(&nu[comp])
                        .and(&na[comp])
                        .and(&nb[comp])
                        .and(&nc[comp])
                        .for_each(|i, x, n_u, n_a, n_b, n_c| {
                            *x = self.full[i] * *x
                                + self.b1[i] * n_u
                                + self.b2[i] * (n_a + n_b)
                                + self.b3[i] * n_c;
                        });
                }
                Ok(out)
            }
            Scheme::IntegratingFactorRk4 => {
                let k1 = rhs(u, t)?;
                let a = map2(u, &k1, |i, x, k| self.half[i] * (x + 0.5 * h * k));
                let k2 = rhs(&a, t + 0.5 * h)?;
                let b = map2(u, &k2, |i, x, k| self.half[i] * x + 0.5 * h * k);
                let k3 = rhs(&b, t + 0.5 * h)?;
                let c = map2(u, &k3, |i, x, k| self.full[i] * x + h * self.half[i] * k);
                let k4 = rhs(&c, t + h)?;
                let mut out = u.clone();
                for comp in 0..2 {
                    Zip::indexed(&mut out[comp])
                        .and(&k1[comp])
                        .and(&k2[comp])
                        .and(&k3[comp])
                        .and(&k4[comp])
                        .for_each(|i, x, a1, a2, a3, a4| {
                            *x = self.full[i] * *x
                                + h / 6.0
                                    * (self.full[i] * a1 + 2.0 * self.half[i] * (a2 + a3) + a4);
                        });
                }
                Ok(out)
            }
        }
    }
}

fn map2(
    x: &Pair,
    y: &Pair,
    f: impl Fn((usize, usize), Complex64, Complex64) -> Complex64,
) -> Pair {
    let one = |c: usize| {
        let mut out = x[c].clone();
        Zip::indexed(&mut out)
            .and(&y[c])
            .for_each(|i, o, b| *o = f(i, *o, *b));
        out
    };
    [one(0), one(1)]
}

fn map3(
    x: &Pair,
    y: &Pair,
    z: &Pair,
    f: impl Fn((usize, usize), Complex64, Complex64, Complex64) -> Complex64,
) -> Pair {
    let one = |c: usize| {
        let mut out = x[c].clone();
        Zip::indexed(&mut out)
            .and(&y[c])
            .and(&z[c])
            .for_each(|i, o, b, d| *o = f(i, *o, *b, *d));
        out
    };
    [one(0), one(1)]
}
