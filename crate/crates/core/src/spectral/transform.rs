use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Plans>> = RefCell::new(HashMap::new());
}

fn with_plans<R>(n: usize, f: impl FnOnce(&Plans) -> R) -> R {
    PLANS.with(|cell| {
        let mut map = cell.borrow_mut();
        let plans = map.entry(n).or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            }
        });
        f(plans)
    })
}

/// In-place unnormalized 2D transform along both axes.
fn transform_2d(data: &mut Array2<Complex64>, fft: &Arc<dyn Fft<f64>>) {
    let n = data.nrows();
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::default(); n];
    for axis in [Axis(0), Axis(1)] {
        for mut lane in data.lanes_mut(axis) {
            for (dst, src) in line.iter_mut().zip(lane.iter()) {
                *dst = *src;
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (dst, src) in lane.iter_mut().zip(line.iter()) {
                *dst = *src;
            }
        }
    }
}

/// `coeffs -> sum_k coeffs(k) e^{i k x}` sampled on the grid.
pub(crate) fn synthesize(coeffs: &Array2<Complex64>) -> Array2<Complex64> {
    let mut data = coeffs.clone();
    with_plans(data.nrows(), |p| transform_2d(&mut data, &p.inverse));
    data
}

/// Samples -> normalized Fourier coefficients.
pub(crate) fn analyze(samples: &Array2<Complex64>) -> Array2<Complex64> {
    let mut data = samples.clone();
    let n = data.nrows();
    with_plans(n, |p| transform_2d(&mut data, &p.forward));
    let scale = 1.0 / (n * n) as f64;
    data.mapv_inplace(|c| c * scale);
    data
}
