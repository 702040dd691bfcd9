//! Thread-local FFT plans so that parallel sweeps never share buffers.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward transform `X_k = Σ x_m e^{−2πikm/N}`.
pub fn forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// Unnormalized inverse transform `x_m = Σ X_k e^{2πikm/N}`.
pub fn inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Signed wavenumber of FFT slot `i` on an `n`-point grid. The Nyquist slot
/// maps to `−n/2`.
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT slot of wavenumber `k`, if representable below the Nyquist mode.
pub fn slot(k: i64, n: usize) -> Option<usize> {
    let h = (n / 2) as i64;
    if k.abs() >= h {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((n as i64 + k) as usize)
    }
}
