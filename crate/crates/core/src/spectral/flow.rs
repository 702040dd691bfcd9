use num_complex::Complex64;

use super::multiplier::ik_pow;
use crate::diffpoly::DiffPoly;
use crate::hierarchy::generate;
use num_traits::ToPrimitive;

#[derive(Clone, Debug, PartialEq)]
pub enum FlowKind {
    /// `∂_t u + ∂^{2l+1} u = u ∂^{2l−1} u`
    Model { l: usize },
    /// The model flow with parabolic damping of symbol `−μ k^{2l+2}`.
    Regularized { l: usize, mu: f64 },
    /// `∂_t u = ∂_x G_l(u)`
    Hierarchy { l: usize },
    /// `∂_t u = p(u)` for an arbitrary single-field polynomial.
    Custom(DiffPoly),
}

/// A flow `∂_t û_k = L(k) û_k + N(u)^_k` split into a diagonal linear part
/// and a polynomial nonlinearity.
#[derive(Clone, Debug)]
pub struct FlowSpec {
    pub kind: FlowKind,
    /// `L(k) = Σ c (ik)^p − damping · k^{damping_power}`
    pub linear: Vec<(f64, u32)>,
    pub damping: f64,
    pub damping_power: u32,
    pub nonlinear: DiffPoly,
}

impl FlowSpec {
    pub fn model(l: usize) -> Self {
        FlowSpec::regularized(l, 0.0).with_kind(FlowKind::Model { l })
    }

    pub fn regularized(l: usize, mu: f64) -> Self {
        assert!(l >= 1, "model flows need l ≥ 1");
        assert!(mu >= 0.0, "regularization must be nonnegative");
        let nonlinear =
            DiffPoly::var("u", 0).multiply(&DiffPoly::var("u", 2 * l as u32 - 1));
        FlowSpec {
            kind: FlowKind::Regularized { l, mu },
            linear: vec![(-1.0, 2 * l as u32 + 1)],
            damping: mu,
            damping_power: 2 * l as u32 + 2,
            nonlinear,
        }
    }

    pub fn hierarchy(l: usize) -> Self {
        let rhs = generate(l).rhs;
        FlowSpec::split(FlowKind::Hierarchy { l }, &rhs)
    }

    pub fn custom(p: DiffPoly) -> Self {
        FlowSpec::split(FlowKind::Custom(p.clone()), &p)
    }

    fn split(kind: FlowKind, p: &DiffPoly) -> Self {
        let mut linear = Vec::new();
        let mut nonlinear = DiffPoly::zero();
        for m in p.monomials() {
            if m.degree() == 1 {
                linear.push((m.coeff.to_f64().unwrap(), m.factors()[0].order));
            } else {
                nonlinear += &DiffPoly::monomial(m.coeff.clone(), m.factors().to_vec());
            }
        }
        FlowSpec { kind, linear, damping: 0.0, damping_power: 0, nonlinear }
    }

    fn with_kind(mut self, kind: FlowKind) -> Self {
        self.kind = kind;
        self
    }

    /// Same linear part with the nonlinearity switched off.
    pub fn linear_only(&self) -> Self {
        FlowSpec { nonlinear: DiffPoly::zero(), ..self.clone() }
    }

    pub fn symbol(&self, k: i64) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for &(c, p) in &self.linear {
            z += ik_pow(k, p) * c;
        }
        if self.damping != 0.0 {
            z -= (k as f64).abs().powi(self.damping_power as i32) * self.damping;
        }
        z
    }

    /// The `l` of model, regularized and hierarchy flows.
    pub fn level(&self) -> Option<usize> {
        match self.kind {
            FlowKind::Model { l } | FlowKind::Regularized { l, .. } | FlowKind::Hierarchy { l } => {
                Some(l)
            }
            FlowKind::Custom(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        let m = FlowSpec::model(2);
        // −(ik)^5 at k = 1 is −i
        assert_eq!(m.symbol(1), Complex64::new(0.0, -1.0));
        let r = FlowSpec::regularized(2, 0.1);
        for k in -20..=20 {
            assert!(r.symbol(k).re <= 0.0);
        }
        assert!((r.symbol(2).re + 0.1 * 64.0).abs() < 1e-12);
        let h = FlowSpec::hierarchy(1);
        assert_eq!(h.linear, vec![(1.0, 3)]);
        assert_eq!(h.nonlinear, DiffPoly::parse("u*u_x").unwrap());
    }
}
