//! Pseudospectral evaluation of differential polynomials.
//!
//! Products are formed on a zero-padded grid large enough that no aliasing
//! reaches the retained band, so integrals of band-limited integrands are
//! exact up to round-off.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::multiplier::ik_pow;
use super::{fft, SpectralField};
use crate::diffpoly::DiffPoly;

/// Smallest power of two `P` with `P > degree·n/2`, so that a product of
/// `degree` fields from an `n`-point grid integrates exactly on `P` points.
pub fn padded_size(n: usize, degree: usize) -> usize {
    (degree.max(1) * n / 2 + 1).next_power_of_two().max(n)
}

/// Values on a `p`-point grid of the field with coefficients `m(k)·f̂_k`.
pub fn padded_values(field: &SpectralField, p: usize, m: impl Fn(i64) -> Complex64) -> Vec<f64> {
    let n = field.n();
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    let h = (n / 2) as i64;
    for k in (1 - h)..h {
        let c = field.mode(k);
        if c != Complex64::default() {
            buf[fft::slot(k, p).unwrap()] = c * m(k);
        }
    }
    fft::inverse(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Derivatives of one field on a fixed padded grid, computed on demand.
pub struct Jets<'a> {
    field: &'a SpectralField,
    p: usize,
    cache: HashMap<u32, Vec<f64>>,
}

impl<'a> Jets<'a> {
    pub fn new(field: &'a SpectralField, p: usize) -> Self {
        Jets { field, p, cache: HashMap::new() }
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn get(&mut self, order: u32) -> &[f64] {
        let (field, p) = (self.field, self.p);
        self.cache.entry(order).or_insert_with(|| padded_values(field, p, |k| ik_pow(k, order)))
    }

    /// Pointwise values of `Σ c · Π ∂^{o} u` over `(c, orders)` terms.
    pub fn polynomial<'b>(&mut self, terms: impl IntoIterator<Item = (f64, &'b [u32])>) -> Vec<f64> {
        let mut out = vec![0.0; self.p];
        for (c, orders) in terms {
            let mut prod = vec![c; self.p];
            for &o in orders {
                let d = self.get(o);
                prod.iter_mut().zip(d).for_each(|(a, b)| *a *= b);
            }
            out.iter_mut().zip(&prod).for_each(|(a, b)| *a += b);
        }
        out
    }
}

fn max_degree(p: &DiffPoly) -> usize {
    p.terms().map(|(f, _)| f.len()).max().unwrap_or(0)
}

fn diffpoly_terms(p: &DiffPoly) -> Vec<(f64, Vec<u32>)> {
    p.terms()
        .map(|(f, c)| (c.to_f64().unwrap_or(f64::NAN), f.iter().map(|x| x.order).collect()))
        .collect()
}

/// Evaluates `p(u)` as a field on the grid of `field`. All factors are read
/// as derivatives of the one field, whatever their symbol. Modes with
/// `|k| > dealias·N/2` are removed from the result.
pub fn eval_diffpoly(p: &DiffPoly, field: &SpectralField, dealias: f64) -> SpectralField {
    let n = field.n();
    let size = padded_size(n, max_degree(p) + 1);
    let terms = diffpoly_terms(p);
    let mut jets = Jets::new(field, size);
    let vals = jets.polynomial(terms.iter().map(|(c, o)| (*c, o.as_slice())));
    project(&vals, n, dealias)
}

/// Projects padded-grid values onto the `n`-point band, truncating at the
/// dealiasing fraction.
pub fn project(vals: &[f64], n: usize, dealias: f64) -> SpectralField {
    let p = vals.len();
    let mut buf: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf);
    let cut = dealias_cutoff(n, dealias);
    let mut modes = vec![Complex64::new(0.0, 0.0); n];
    for k in -cut..=cut {
        modes[fft::slot(k, n).unwrap()] = buf[fft::slot(k, p).unwrap()] / p as f64;
    }
    SpectralField::from_modes(modes)
}

/// Largest retained wavenumber for a dealiasing fraction.
pub fn dealias_cutoff(n: usize, dealias: f64) -> i64 {
    let h = (n / 2) as i64 - 1;
    (((n / 2) as f64 * dealias).floor() as i64).min(h)
}

/// `∫_0^{2π} p(u) dx` by exact spectral quadrature.
pub fn functional_eval(p: &DiffPoly, field: &SpectralField) -> f64 {
    let size = padded_size(field.n(), max_degree(p));
    let terms = diffpoly_terms(p);
    let mut jets = Jets::new(field, size);
    let vals = jets.polynomial(terms.iter().map(|(c, o)| (*c, o.as_slice())));
    mean_integral(&vals)
}

/// `2π · mean(vals)`.
pub fn mean_integral(vals: &[f64]) -> f64 {
    2.0 * PI * vals.iter().sum::<f64>() / vals.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::generate;

    fn p(s: &str) -> DiffPoly {
        DiffPoly::parse(s).unwrap()
    }

    #[test]
    fn pointwise_examples() {
        let f = SpectralField::from_fn(32, |x| x.sin());
        let d = eval_diffpoly(&p("u_x"), &f, 1.0);
        assert!(d.max_diff(&SpectralField::from_fn(32, |x| x.cos())) < 1e-14);
        let q = eval_diffpoly(&p("u*u_x"), &f, 2.0 / 3.0);
        assert!(q.max_diff(&SpectralField::from_fn(32, |x| 0.5 * (2.0 * x).sin())) < 1e-14);
    }

    #[test]
    fn kdv_rhs_on_cosine() {
        // u = cos x: u_xxx + u u_x = sin x − ½ sin 2x
        let f = SpectralField::from_fn(64, |x| x.cos());
        let r = eval_diffpoly(&generate(1).rhs, &f, 2.0 / 3.0);
        let exact = SpectralField::from_fn(64, |x| x.sin() - 0.5 * (2.0 * x).sin());
        assert!(r.max_diff(&exact) < 1e-12);
    }

    #[test]
    fn integrals() {
        let c = SpectralField::from_fn(16, |x| x.cos());
        assert!((functional_eval(&p("u^2"), &c) - PI).abs() < 1e-14);
        let small = c.scale(0.1);
        let h1 = generate(1).h.canonical;
        assert!((functional_eval(&h1, &small) + 0.005 * PI).abs() < 1e-15);
        let rough = SpectralField::from_fn(16, |x| (x.sin() + 0.3 * (7.0 * x).cos()).powi(1));
        assert!(functional_eval(&p("2*u*u_x"), &rough).abs() < 1e-14);
        // cubic integrand at full band is still exact
        let v = SpectralField::from_fn(16, |x| (7.0 * x).cos());
        assert!((functional_eval(&p("u^4"), &v) - 0.75 * PI).abs() < 1e-13);
    }

    #[test]
    fn parseval() {
        let f = SpectralField::from_fn(32, |x| (x.sin() + 2.0).exp().sin());
        let a = f.sobolev_norm(0.0).powi(2);
        let b = functional_eval(&p("u^2"), &f);
        assert!((a - b).abs() / a < 1e-12);
    }
}
