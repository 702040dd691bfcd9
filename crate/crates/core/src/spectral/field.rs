use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::fft;

/// A real 2π-periodic field sampled on `x_m = 2πm/N`.
///
/// Both representations are kept: grid values and Fourier coefficients
/// `f̂_k = (1/N) Σ_m f(x_m) e^{−ikx_m}` stored in FFT order. The Nyquist
/// coefficient is always zero, which makes the pair an exact real
/// trigonometric polynomial of degree below `N/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    values: Vec<f64>,
    modes: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(n: usize) -> Self {
        check_size(n);
        SpectralField { values: vec![0.0; n], modes: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len();
        check_size(n);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft::forward(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        SpectralField::from_modes(buf)
    }

    /// Builds a field from FFT-ordered coefficients. The input is projected
    /// onto real fields: `f̂_{−k}` becomes `conj(f̂_k)` (averaged), the mean is
    /// made real and the Nyquist slot is cleared.
    pub fn from_modes(mut modes: Vec<Complex64>) -> Self {
        let n = modes.len();
        check_size(n);
        modes[n / 2] = Complex64::new(0.0, 0.0);
        modes[0] = Complex64::new(modes[0].re, 0.0);
        for k in 1..n / 2 {
            let a = modes[k];
            let b = modes[n - k].conj();
            let m = (a + b) * 0.5;
            modes[k] = m;
            modes[n - k] = m.conj();
        }
        let values = synthesize(&modes, n);
        SpectralField { values, modes }
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        SpectralField::from_values(grid(n).into_iter().map(f).collect())
    }

    /// Field with prescribed coefficients `f̂_k` for `k > 0` (and `f̂_0`);
    /// negative modes follow by conjugation.
    pub fn from_half_spectrum(n: usize, coeff: impl Fn(i64) -> Complex64) -> Self {
        check_size(n);
        let mut modes = vec![Complex64::new(0.0, 0.0); n];
        modes[0] = coeff(0);
        for k in 1..(n / 2) as i64 {
            let c = coeff(k);
            modes[k as usize] = c;
            modes[n - k as usize] = c.conj();
        }
        SpectralField::from_modes(modes)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    /// `f̂_k`, zero outside the representable band.
    pub fn mode(&self, k: i64) -> Complex64 {
        fft::slot(k, self.n()).map(|i| self.modes[i]).unwrap_or_default()
    }

    /// Pointwise multiplication of coefficients by `m(k)`.
    pub fn map_modes(&self, m: impl Fn(i64) -> Complex64) -> SpectralField {
        let n = self.n();
        let modes = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, c)| c * m(fft::wavenumber(i, n)))
            .collect();
        SpectralField::from_modes(modes)
    }

    /// Same trigonometric polynomial on an `n`-point grid: zero padding when
    /// growing, truncation when shrinking.
    pub fn resample(&self, n: usize) -> SpectralField {
        check_size(n);
        let mut modes = vec![Complex64::new(0.0, 0.0); n];
        let h = (n.min(self.n()) / 2) as i64;
        for k in (1 - h)..h {
            modes[fft::slot(k, n).unwrap()] = self.mode(k);
        }
        SpectralField::from_modes(modes)
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        SpectralField {
            values: self.values.iter().map(|v| v * a).collect(),
            modes: self.modes.iter().map(|c| c * a).collect(),
        }
    }

    /// `a·self + b·other` on a common grid.
    pub fn axpby(&self, a: f64, other: &SpectralField, b: f64) -> SpectralField {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        SpectralField {
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
            modes: self.modes.iter().zip(&other.modes).map(|(x, y)| x * a + y * b).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modes.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `(2π Σ_k (1+k²)^s |f̂_k|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|k| (1.0 + (k * k) as f64).powf(s))
    }

    /// `(2π Σ_k w(k) |f̂_k|²)^{1/2}`.
    pub fn weighted_norm(&self, w: impl Fn(i64) -> f64) -> f64 {
        let n = self.n();
        let acc: f64 = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, c)| w(fft::wavenumber(i, n)) * c.norm_sqr())
            .sum();
        (2.0 * PI * acc).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `∫_0^{2π} f dx`.
    pub fn integral(&self) -> f64 {
        2.0 * PI * self.modes[0].re
    }

    /// `∫ f g dx` by Parseval; exact for trigonometric polynomials.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        let acc: f64 = self.modes.iter().zip(&other.modes).map(|(a, b)| (a * b.conj()).re).sum();
        2.0 * PI * acc
    }

    /// Largest `|k|` with `|f̂_k| > tol`.
    pub fn bandwidth(&self, tol: f64) -> usize {
        let n = self.n();
        self.modes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(i, _)| fft::wavenumber(i, n).unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `max_m |f(x_m) − g(x_m)|`.
    pub fn max_diff(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.n(), other.n(), "grid size mismatch");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpby(1.0, rhs, 1.0)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpby(1.0, rhs, -1.0)
    }
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|m| 2.0 * PI * m as f64 / n as f64).collect()
}

fn check_size(n: usize) {
    assert!(n >= 4 && n.is_power_of_two(), "grid size must be a power of two ≥ 4, got {n}");
}

fn synthesize(modes: &[Complex64], n: usize) -> Vec<f64> {
    let mut buf = modes.to_vec();
    fft::inverse(&mut buf);
    buf.into_iter().take(n).map(|c| c.re).collect()
}
