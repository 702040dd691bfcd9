//! Polynomials in the jets `u, u_x, u_xx, …` of a single field whose
//! coefficients are polynomials in `s`. They carry the low-frequency
//! weights `W` in front of squared high-frequency factors.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::diffpoly::{integrate_exact, DiffPoly, DiffPolyError, Factor, Rational};
use crate::ibp::binom;
use crate::spoly::SPoly;

/// Sorted derivative orders of the factors, `[0, 0, 3]` for `u²u_{3x}`.
pub type Low = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LowPoly {
    terms: BTreeMap<Low, SPoly>,
}

impl LowPoly {
    pub fn zero() -> Self {
        LowPoly::default()
    }

    pub fn monomial(mut low: Low, c: SPoly) -> Self {
        low.sort_unstable();
        let mut p = LowPoly::zero();
        p.add_term(low, c);
        p
    }

    pub fn constant(c: SPoly) -> Self {
        LowPoly::monomial(Vec::new(), c)
    }

    pub fn add_term(&mut self, low: Low, c: SPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert!(low.windows(2).all(|w| w[0] <= w[1]));
        match self.terms.entry(low) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Low, &SPoly)> {
        self.terms.iter()
    }

    pub fn add(&mut self, other: &LowPoly) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &LowPoly) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), -c);
        }
    }

    pub fn scale(&self, c: &SPoly) -> LowPoly {
        let mut out = LowPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rational) -> LowPoly {
        self.scale(&SPoly::constant(c.clone()))
    }

    /// Multiplies by the factor `∂^order u`.
    pub fn times_factor(&self, order: u32) -> LowPoly {
        let mut out = LowPoly::zero();
        for (k, v) in &self.terms {
            let mut low = k.clone();
            low.push(order);
            low.sort_unstable();
            out.add_term(low, v.clone());
        }
        out
    }

    /// Sum over factor occurrences of `f(order)` substituted for that factor.
    fn substitute(&self, f: impl Fn(u32) -> LowPoly) -> LowPoly {
        let mut out = LowPoly::zero();
        for (k, v) in &self.terms {
            for pos in 0..k.len() {
                let mut rest = k.clone();
                let o = rest.remove(pos);
                let repl = f(o);
                for (rk, rv) in &repl.terms {
                    let mut low = rest.clone();
                    low.extend_from_slice(rk);
                    low.sort_unstable();
                    out.add_term(low, v * rv);
                }
            }
        }
        out
    }

    /// `∂_x` of the polynomial.
    pub fn derivative(&self) -> LowPoly {
        self.substitute(|o| LowPoly::monomial(vec![o + 1], SPoly::one()))
    }

    pub fn derivative_n(&self, n: u32) -> LowPoly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Raises every factor in turn by `n` derivatives: the action of the
    /// linear flow `∂_t u = ∂^n u` on the jet polynomial.
    pub fn lift(&self, n: u32) -> LowPoly {
        self.substitute(|o| LowPoly::monomial(vec![o + n], SPoly::one()))
    }

    /// Replaces every factor `∂^p u` in turn by `∂^p (u ∂^{2l−1} u)`: the
    /// action of the model nonlinearity.
    pub fn nonlinear_substitute(&self, l: usize) -> LowPoly {
        let top = 2 * l as u32 - 1;
        self.substitute(|p| {
            let mut r = LowPoly::zero();
            for i in 0..=p {
                let c = Rational::from_integer(binom(p as u64, i as u64));
                r.add_term(sorted(vec![i, p - i + top]), SPoly::constant(c));
            }
            r
        })
    }

    /// Splits into rational polynomials, one per power of `s`.
    pub fn by_power(&self) -> Vec<DiffPoly> {
        let deg = self.terms.values().filter_map(|c| c.degree()).max();
        let Some(deg) = deg else { return Vec::new() };
        let mut out = vec![DiffPoly::zero(); deg + 1];
        for (k, v) in &self.terms {
            let factors: Vec<Factor> = k.iter().map(|&o| Factor::new("u", o)).collect();
            for (i, c) in v.coeffs().iter().enumerate() {
                out[i] += &DiffPoly::monomial(c.clone(), factors.clone());
            }
        }
        out
    }

    pub fn from_powers(parts: &[DiffPoly]) -> LowPoly {
        let mut out = LowPoly::zero();
        for (i, p) in parts.iter().enumerate() {
            for (f, c) in p.terms() {
                let mut coeffs = vec![Rational::zero(); i + 1];
                coeffs[i] = c.clone();
                out.add_term(f.iter().map(|x| x.order).collect(), SPoly::from_coeffs(coeffs));
            }
        }
        out
    }

    /// Antiderivative over `Q[s]`, coefficient by coefficient.
    pub fn integrate(&self) -> Result<LowPoly, DiffPolyError> {
        let parts = self.by_power().iter().map(integrate_exact).collect::<Result<Vec<_>, _>>()?;
        Ok(LowPoly::from_powers(&parts))
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    /// Numeric coefficients at a given `s`.
    pub fn at(&self, s: f64) -> Vec<(f64, Low)> {
        self.terms.iter().map(|(k, v)| (v.eval(s), k.clone())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, v)| serde_json::json!({"coeff": v, "orders": k}))
                .collect(),
        )
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

impl fmt::Display for LowPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mono = if k.is_empty() {
                    "1".to_string()
                } else {
                    DiffPoly::monomial(Rational::one(), k.iter().map(|&o| Factor::new("u", o)).collect())
                        .to_string()
                };
                format!("({v})*{mono}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LowPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LowPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{rat, total_derivative};

    fn lp(s: &str) -> LowPoly {
        LowPoly::from_powers(&[DiffPoly::parse(s).unwrap()])
    }

    #[test]
    fn calculus_matches_diffpoly() {
        let w = lp("u^2*u_xx + 3*u_x");
        let d = w.derivative();
        let expect = total_derivative(&DiffPoly::parse("u^2*u_xx + 3*u_x").unwrap());
        assert_eq!(d.by_power(), vec![expect]);
        assert_eq!(lp("u*u_x").lift(3), lp("u_{3x}*u_x + u*u_{4x}"));
        // L_N(u) = u u_{3x} for l = 2, L_N(u_x) = u_x u_{3x} + u u_{4x}
        assert_eq!(lp("u").nonlinear_substitute(2), lp("u*u_{3x}"));
        assert_eq!(lp("u_x").nonlinear_substitute(2), lp("u_x*u_{3x} + u*u_{4x}"));
    }

    #[test]
    fn integrate_over_s() {
        let c = SPoly::from_coeffs(vec![rat(3, 2), rat(-1, 1)]);
        let v = LowPoly::monomial(vec![1], c.clone());
        assert_eq!(v.integrate().unwrap(), LowPoly::monomial(vec![0], c));
        assert!(lp("u_x^3").integrate().is_err());
    }
}
