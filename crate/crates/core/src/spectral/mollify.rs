use num_complex::Complex64;

use super::{fft, SpectralField};

/// Smooth mollification with Fourier window `exp(−(εk)^{2m})`. The window
/// equals 1 at the origin with vanishing derivatives through order `2m−1`,
/// so the kernel has moments 1, 0, …, 0 up to that order.
pub fn mollify(field: &SpectralField, eps: f64, m: u32) -> SpectralField {
    assert!(eps > 0.0 && m >= 1, "mollifier needs ε > 0 and m ≥ 1");
    field.map_modes(|k| Complex64::new(window(eps * k as f64, m), 0.0))
}

pub fn window(z: f64, m: u32) -> f64 {
    (-z.abs().powi(2 * m as i32)).exp()
}

/// `λ² u(λx)` sampled on a `λN` grid, so no mode is lost: output mode `λk`
/// equals `λ² f̂_k`. The matching time is `t/λ^{2l+1}`, see [`time_factor`].
pub fn scale_field(field: &SpectralField, lambda: usize, _l: usize) -> SpectralField {
    assert!(lambda >= 1 && lambda.is_power_of_two(), "λ must be a power of two");
    let n = field.n() * lambda;
    let lam2 = (lambda * lambda) as f64;
    let mut modes = vec![Complex64::new(0.0, 0.0); n];
    let h = (field.n() / 2) as i64;
    for k in (1 - h)..h {
        modes[fft::slot(k * lambda as i64, n).unwrap()] = field.mode(k) * lam2;
    }
    SpectralField::from_modes(modes)
}

/// `λ^{2l+1}`: a scaled solution at time `t` matches the original at `λ^{2l+1} t`.
pub fn time_factor(lambda: usize, l: usize) -> f64 {
    (lambda as f64).powi(2 * l as i32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_limits() {
        let f = SpectralField::from_fn(64, |x| x.cos() + 0.2 * (9.0 * x).sin());
        assert!(mollify(&f, 1e-6, 2).max_diff(&f) < 1e-14);
        let c = SpectralField::from_fn(64, |_| 2.5);
        assert!(mollify(&c, 0.7, 3).max_diff(&c) < 1e-15);
        assert!(mollify(&f, 1.0, 1).l2_norm() < f.l2_norm());
    }

    #[test]
    fn scaling() {
        let f = SpectralField::from_fn(16, |x| x.cos());
        assert!(scale_field(&f, 1, 2).max_diff(&f) < 1e-15);
        let g = scale_field(&f, 2, 2);
        assert_eq!(g.n(), 32);
        assert!(g.max_diff(&SpectralField::from_fn(32, |x| 4.0 * (2.0 * x).cos())) < 1e-14);
        assert_eq!(time_factor(2, 2), 32.0);
    }
}
