//! Numerical evaluation of blueprints on spectral fields.

use num_complex::Complex64;

use super::blueprint::EnergyBlueprint;
use super::lowpoly::LowPoly;
use super::terms::{CommRem, SquareSum};
use super::EnergyError;
use crate::spectral::{abs_pow, fft, ik_pow, mean_integral, padded_size, padded_values, Jets, SpectralField};

/// Admissibility threshold `s > 4l − 9/2`.
pub fn threshold(l: usize) -> f64 {
    4.0 * l as f64 - 4.5
}

pub fn check_threshold(l: usize, s: f64) -> Result<(), EnergyError> {
    if s > threshold(l) {
        Ok(())
    } else {
        Err(EnergyError::ThresholdViolation { s, threshold: threshold(l) })
    }
}

/// `½‖u‖²_{L²} + ½‖D^s u‖²_{L²}`.
pub fn quadratic_energy(field: &SpectralField, s: f64) -> f64 {
    0.5 * field.weighted_norm(|k| 1.0 + abs_pow(k, 2.0 * s)).powi(2)
}

fn dsj(field: &SpectralField, p: usize, sigma: f64, j: u32) -> Vec<f64> {
    padded_values(field, p, |k| ik_pow(k, j) * abs_pow(k, sigma))
}

/// `∫ W(u) (D^{s+off}∂^j u)² dx`.
pub fn square_integral(field: &SpectralField, s: f64, w: &LowPoly, off: i32, j: u32) -> f64 {
    let p = padded_size(field.n(), w.max_degree() + 2);
    let coeffs = w.at(s);
    let mut jets = Jets::new(field, p);
    let wv = jets.polynomial(coeffs.iter().map(|(c, o)| (*c, o.as_slice())));
    let f = dsj(field, p, s + off as f64, j);
    let vals: Vec<f64> = wv.iter().zip(&f).map(|(a, b)| a * b * b).collect();
    mean_integral(&vals)
}

pub fn squares_integral(field: &SpectralField, s: f64, sq: &SquareSum) -> f64 {
    sq.groups().map(|(off, j, w)| square_integral(field, s, w, off, j)).sum()
}

pub fn plain_integral(field: &SpectralField, s: f64, p: &LowPoly) -> f64 {
    let size = padded_size(field.n(), p.max_degree());
    let coeffs = p.at(s);
    let mut jets = Jets::new(field, size);
    mean_integral(&jets.polynomial(coeffs.iter().map(|(c, o)| (*c, o.as_slice()))))
}

fn binomial_real(sigma: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (sigma - i as f64) / (i as f64 + 1.0))
}

/// Applies `D^σ` to grid values on a padded grid (band well inside the grid).
fn d_sigma_values(vals: &[f64], sigma: f64) -> Vec<f64> {
    let p = vals.len();
    let mut buf: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf);
    for (i, c) in buf.iter_mut().enumerate() {
        let k = fft::wavenumber(i, p);
        *c *= if k.unsigned_abs() as usize == p / 2 { 0.0 } else { abs_pow(k, sigma) } / p as f64;
    }
    fft::inverse(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

pub fn comm_integral(field: &SpectralField, s: f64, r: &CommRem) -> f64 {
    let sigma = s + r.off as f64;
    let p = padded_size(field.n(), r.low.len() + 4);
    let mut jets = Jets::new(field, p);
    let ui = jets.get(r.i).to_vec();
    let un = jets.get(r.n).to_vec();
    let prod: Vec<f64> = ui.iter().zip(&un).map(|(a, b)| a * b).collect();
    let mut rem = d_sigma_values(&prod, sigma);
    for k in 0..r.n {
        let c = binomial_real(sigma, k);
        let low = jets.get(r.i + k).to_vec();
        let hi = dsj(field, p, sigma, r.n - k);
        rem.iter_mut().zip(low.iter().zip(&hi)).for_each(|(x, (a, b))| *x -= c * a * b);
    }
    let w = jets.polynomial([(r.coeff.eval(s), r.low.as_slice())]);
    let f = dsj(field, p, sigma, r.e);
    let vals: Vec<f64> = w.iter().zip(f.iter().zip(&rem)).map(|(a, (b, c))| a * b * c).collect();
    mean_integral(&vals)
}

/// `E^s(u)`: quadratic part plus all correction integrals.
pub fn evaluate_energy(bp: &EnergyBlueprint, s: f64, field: &SpectralField) -> Result<f64, EnergyError> {
    check_threshold(bp.l, s)?;
    Ok(quadratic_energy(field, s) + correction_energy(bp, s, field))
}

/// Sum of the correction integrals alone.
pub fn correction_energy(bp: &EnergyBlueprint, s: f64, field: &SpectralField) -> f64 {
    bp.corrections()
        .filter(|(_, c)| !c.w.is_zero())
        .map(|(_, c)| square_integral(field, s, &c.w, c.off, c.e))
        .sum()
}

/// The blueprint's prediction of `dE^s/dt` along the model flow: the
/// bounded remainder, all resonant terms having cancelled exactly.
pub fn predicted_derivative(bp: &EnergyBlueprint, s: f64, field: &SpectralField) -> Result<f64, EnergyError> {
    check_threshold(bp.l, s)?;
    let rem = &bp.bounded_remainder;
    let mut total = plain_integral(field, s, &rem.plain) + squares_integral(field, s, &rem.squares);
    total += rem.comm.iter().map(|r| comm_integral(field, s, r)).sum::<f64>();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::build_blueprint;
    use crate::spectral::multiplier;
    use crate::spectral::Multiplier;
    use crate::spoly::SPoly;

    #[test]
    fn zero_and_single_mode() {
        let bp = build_blueprint(2).unwrap();
        let z = SpectralField::zeros(64);
        assert_eq!(evaluate_energy(&bp, 4.0, &z).unwrap(), 0.0);
        let eps = 0.1;
        let u = SpectralField::from_fn(64, |x| eps * x.cos());
        let e = evaluate_energy(&bp, 4.0, &u).unwrap();
        assert!(correction_energy(&bp, 4.0, &u).abs() < 1e-16);
        assert!((e - quadratic_energy(&u, 4.0)).abs() < 1e-16);
        assert!(matches!(evaluate_energy(&bp, 3.5, &u), Err(EnergyError::ThresholdViolation { .. })));
    }

    #[test]
    fn square_integral_matches_direct() {
        let u = SpectralField::from_fn(32, |x| x.sin() + 0.3 * (2.0 * x).cos() + 0.1 * (5.0 * x).sin());
        let w = LowPoly::monomial(vec![0, 1], SPoly::one());
        let got = square_integral(&u, 4.0, &w, -2, 1);
        let f = multiplier(&multiplier(&u, Multiplier::D(2.0)), Multiplier::Deriv(1)).resample(256);
        let uu = u.resample(256);
        let ux = multiplier(&u, Multiplier::Deriv(1)).resample(256);
        let vals: Vec<f64> = (0..256).map(|m| uu.values()[m] * ux.values()[m] * f.values()[m].powi(2)).collect();
        assert!((got - mean_integral(&vals)).abs() < 1e-11 * got.abs().max(1.0));
    }
}
