//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used by the averaging functional and by the Duhamel oracle. It shares no
//! code with the time steppers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subintervals: usize,
}

impl QuadratureOptions {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 0.0,
            max_subintervals: 1_000_000,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub subintervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kron += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::OracleFailure(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadratureOptions) -> Result<Quadrature> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, seeding the adaptive
/// refinement with one panel per consecutive pair of break points.
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    breaks: &[f64],
    opts: QuadratureOptions,
) -> Result<Quadrature> {
    if breaks.len() < 2 {
        return Err(Error::Domain("quadrature needs at least two break points".into()));
    }
    if breaks.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Domain("quadrature break points must be non-decreasing".into()));
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len());
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let panel = kronrod(&f, w[0], w[1])?;
        total += panel.value;
        total_err += panel.error;
        heap.push(panel);
    }
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target || heap.is_empty() {
            break;
        }
        if heap.len() >= opts.max_subintervals {
            return Err(Error::OracleFailure(format!(
                "quadrature did not converge: error {total_err:e} > {target:e} after {} subintervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::OracleFailure(format!(
                "quadrature panel [{}, {}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        let left = kronrod(&f, worst.a, mid)?;
        let right = kronrod(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error_estimate) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Quadrature {
        value,
        error_estimate,
        subintervals: heap.len(),
    })
}
