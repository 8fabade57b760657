//! Thin wrappers over `rustfft` with a per-thread plan cache.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place `X_m = sum_j x_j e^{-2 pi i j m / n}` (unnormalized).
pub(crate) fn forward(buf: &mut [Complex64]) {
    let n = buf.len();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(buf));
}

/// In-place `x_j = sum_m X_m e^{2 pi i j m / n}` (unnormalized).
pub(crate) fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(buf));
}

/// `c_m = (1/n) sum_k f_k e^{-2 pi i m k / n}` for `m = 0..n` (bin order).
pub(crate) fn real_dft(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len() as f64;
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf.iter_mut().for_each(|z| *z /= n);
    buf
}
