use num_complex::Complex64;

use super::SpectralField;

/// Fourier multipliers acting modewise on a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Multiplier {
    /// `|k|^σ`; the zero mode maps to 1 when `σ = 0` and to 0 otherwise.
    D(f64),
    /// `(1+k²)^{σ/2}`.
    J(f64),
    /// `(ik)^m`.
    Deriv(u32),
    /// Keeps only the mean.
    PLow,
    /// Removes the mean.
    PHigh,
}

impl Multiplier {
    pub fn symbol(&self, k: i64) -> Complex64 {
        let kf = k as f64;
        match *self {
            Multiplier::D(s) => Complex64::new(abs_pow(k, s), 0.0),
            Multiplier::J(s) => Complex64::new((1.0 + kf * kf).powf(s / 2.0), 0.0),
            Multiplier::Deriv(m) => ik_pow(k, m),
            Multiplier::PLow => Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0),
            Multiplier::PHigh => Complex64::new(if k == 0 { 0.0 } else { 1.0 }, 0.0),
        }
    }
}

/// `|k|^σ` with the zero-mode convention of [`Multiplier::D`].
pub fn abs_pow(k: i64, sigma: f64) -> f64 {
    if k == 0 {
        if sigma == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (k.unsigned_abs() as f64).powf(sigma)
    }
}

/// `(ik)^m` computed without rounding in the phase.
pub fn ik_pow(k: i64, m: u32) -> Complex64 {
    let mag = (k as f64).powi(m as i32);
    match m % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, -mag),
    }
}

pub fn multiplier(field: &SpectralField, kind: Multiplier) -> SpectralField {
    field.map_modes(|k| kind.symbol(k))
}
