//! Exponential time differencing: the stiff diagonal part is propagated
//! exactly and only the nonlinearity is treated explicitly.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::eval::{dealias_cutoff, eval_diffpoly};
use super::{fft, FlowSpec, SpectralError, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order Cox–Matthews scheme.
    Etd2,
    /// Fourth-order Kassam–Trefethen scheme.
    Etd4,
}

impl Scheme {
    pub fn from_order(p: u32) -> Result<Self, SpectralError> {
        match p {
            2 => Ok(Scheme::Etd2),
            4 => Ok(Scheme::Etd4),
            _ => Err(SpectralError::InvalidConfig(format!("integrator order must be 2 or 4, got {p}"))),
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            Scheme::Etd2 => 2,
            Scheme::Etd4 => 4,
        }
    }
}

const CONTOUR_POINTS: usize = 32;

/// Evaluates `f(z)` for a function with a removable singularity at 0:
/// directly when `|z| ≥ 1`, else as the mean over a unit circle around `z`.
fn phi_eval(z: Complex64, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    if z.norm() >= 1.0 {
        return f(z);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..CONTOUR_POINTS {
        let theta = PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64;
        acc += f(z + Complex64::from_polar(1.0, 2.0 * theta));
    }
    acc / CONTOUR_POINTS as f64
}

/// Per-mode coefficients for a fixed `(flow, N, dt)`.
pub struct Stepper {
    flow: FlowSpec,
    n: usize,
    dt: f64,
    dealias: f64,
    scheme: Scheme,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    c1: Vec<Complex64>,
    c2: Vec<Complex64>,
    c3: Vec<Complex64>,
    c4: Vec<Complex64>,
    mask: Vec<bool>,
}

impl Stepper {
    pub fn new(flow: &FlowSpec, n: usize, dt: f64, dealias: f64, scheme: Scheme) -> Self {
        let cut = dealias_cutoff(n, dealias);
        let mut s = Stepper {
            flow: flow.clone(),
            n,
            dt,
            dealias,
            scheme,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            c1: Vec::with_capacity(n),
            c2: Vec::with_capacity(n),
            c3: Vec::with_capacity(n),
            c4: Vec::with_capacity(n),
            mask: Vec::with_capacity(n),
        };
        for i in 0..n {
            let k = fft::wavenumber(i, n);
            let z = flow.symbol(k) * dt;
            s.mask.push(k.abs() <= cut);
            s.e.push(z.exp());
            s.e2.push((z / 2.0).exp());
            match scheme {
                Scheme::Etd2 => {
                    s.c1.push(phi_eval(z, |w| (w.exp() - 1.0) / w) * dt);
                    s.c2.push(phi_eval(z, |w| (w.exp() - 1.0 - w) / (w * w)) * dt);
                    s.c3.push(Complex64::default());
                    s.c4.push(Complex64::default());
                }
                Scheme::Etd4 => {
                    // half-step φ1 and the three fourth-order weights
                    s.c1.push(phi_eval(z, |w| ((w / 2.0).exp() - 1.0) / w) * dt);
                    s.c2.push(
                        phi_eval(z, |w| (-4.0 - w + w.exp() * (4.0 - 3.0 * w + w * w)) / w.powi(3)) * dt,
                    );
                    s.c3.push(phi_eval(z, |w| (2.0 + w + w.exp() * (w - 2.0)) / w.powi(3)) * dt);
                    s.c4.push(
                        phi_eval(z, |w| (-4.0 - 3.0 * w - w * w + w.exp() * (4.0 - w)) / w.powi(3)) * dt,
                    );
                }
            }
        }
        s
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Removes modes above the dealiasing cutoff.
    pub fn filter(&self, u: &SpectralField) -> SpectralField {
        let modes = u
            .modes()
            .iter()
            .zip(&self.mask)
            .map(|(c, &keep)| if keep { *c } else { Complex64::default() })
            .collect();
        SpectralField::from_modes(modes)
    }

    fn nonlinear(&self, modes: &[Complex64]) -> Vec<Complex64> {
        if self.flow.nonlinear.is_zero() {
            return vec![Complex64::default(); self.n];
        }
        let u = SpectralField::from_modes(modes.to_vec());
        eval_diffpoly(&self.flow.nonlinear, &u, self.dealias).modes().to_vec()
    }

    /// One step. `u` is expected on the stepper's grid and dealiased.
    pub fn step(&self, u: &SpectralField) -> Result<SpectralField, SpectralError> {
        assert_eq!(u.n(), self.n, "grid size mismatch");
        let v = u.modes();
        let nv = self.nonlinear(v);
        let out: Vec<Complex64> = match self.scheme {
            Scheme::Etd2 => {
                let a: Vec<_> = (0..self.n).map(|i| self.e[i] * v[i] + self.c1[i] * nv[i]).collect();
                let na = self.nonlinear(&a);
                (0..self.n).map(|i| a[i] + self.c2[i] * (na[i] - nv[i])).collect()
            }
            Scheme::Etd4 => {
                let a: Vec<_> = (0..self.n).map(|i| self.e2[i] * v[i] + self.c1[i] * nv[i]).collect();
                let na = self.nonlinear(&a);
                let b: Vec<_> = (0..self.n).map(|i| self.e2[i] * v[i] + self.c1[i] * na[i]).collect();
                let nb = self.nonlinear(&b);
                let c: Vec<_> = (0..self.n)
                    .map(|i| self.e2[i] * a[i] + self.c1[i] * (nb[i] * 2.0 - nv[i]))
                    .collect();
                let nc = self.nonlinear(&c);
                (0..self.n)
                    .map(|i| {
                        self.e[i] * v[i]
                            + self.c2[i] * nv[i]
                            + self.c3[i] * (na[i] + nb[i]) * 2.0
                            + self.c4[i] * nc[i]
                    })
                    .collect()
            }
        };
        if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SpectralError::BlowUp { t: f64::NAN });
        }
        Ok(self.filter(&SpectralField::from_modes(out)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_matches_series() {
        // φ1(z) = 1 + z/2 + z²/6 + …
        let z = Complex64::new(1e-3, 2e-3);
        let direct = phi_eval(z, |w| (w.exp() - 1.0) / w);
        let series = 1.0 + z / 2.0 + z * z / 6.0 + z.powi(3) / 24.0 + z.powi(4) / 120.0;
        assert!((direct - series).norm() < 1e-14);
        let zero = phi_eval(Complex64::default(), |w| (w.exp() - 1.0 - w) / (w * w));
        assert!((zero - 0.5).norm() < 1e-14);
    }

    #[test]
    fn linear_part_exact() {
        let flow = FlowSpec::model(2).linear_only();
        for scheme in [Scheme::Etd2, Scheme::Etd4] {
            let st = Stepper::new(&flow, 32, 0.1, 1.0, scheme);
            let mut u = SpectralField::from_fn(32, |x| x.cos());
            for _ in 0..10 {
                u = st.step(&u).unwrap();
            }
            // mode 1 has symbol −i, so u(t) = cos(x − t)
            let exact = SpectralField::from_fn(32, |x| (x - 1.0).cos());
            assert!(u.max_diff(&exact) < 1e-13, "{scheme:?}");
        }
    }

    #[test]
    fn damping_factor_exact() {
        let mu = 0.01;
        let flow = FlowSpec::regularized(2, mu).linear_only();
        let st = Stepper::new(&flow, 32, 0.05, 1.0, Scheme::Etd4);
        let u0 = SpectralField::from_fn(32, |x| (3.0 * x).cos());
        let u1 = st.step(&u0).unwrap();
        let expect = (-mu * 3f64.powi(6) * 0.05).exp();
        assert!((u1.mode(3).norm() / u0.mode(3).norm() - expect).abs() < 1e-14);
        let z = st.step(&SpectralField::zeros(32)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }
}
