//! Time derivatives of square functionals `∫ W(u) (D^{s+off}∂^e u)²` along
//! the model flow `∂_t u = −∂^{2l+1}u + u∂^{2l−1}u`.

use super::lowpoly::{Low, LowPoly};
use super::terms::{reduce_into, CommRem, SquareSum};
use super::EnergyError;
use crate::diffpoly::{int, Rational};
use crate::ibp::{alpha_triangle, binom};
use crate::spoly::SPoly;

/// Output of a derivative computation: normalized squares, plain integrals
/// `∫ p(u)` and commutator remainders.
#[derive(Clone, Debug, Default)]
pub struct Derivative {
    pub squares: SquareSum,
    pub plain: LowPoly,
    pub comm: Vec<CommRem>,
}

/// Cached `α` triangle up to the gaps that occur for level `l`.
pub struct Alphas {
    pub l: usize,
    pub table: Vec<Vec<Rational>>,
}

impl Alphas {
    pub fn new(l: usize) -> Self {
        // nonlinear triples have gap ≤ 2l, the linear part uses level l
        Alphas { l, table: alpha_triangle(l + 1) }
    }

    pub fn get(&self, j: usize, l: usize) -> &Rational {
        &self.table[l][j - 1]
    }
}

/// Derivative along the dispersive part `∂_t u = −∂^{2l+1}u`:
/// `−Σ_k α_{k,l} ∫∂^{2(l−k)+1}W (∂^k F)² + ∫(∂^{2l+1}W − L_{2l+1}W) F²`.
pub fn linear_derivative(
    al: &Alphas,
    w: &LowPoly,
    off: i32,
    e: u32,
) -> Result<SquareSum, EnergyError> {
    let l = al.l;
    let mut out = SquareSum::new();
    for k in 1..=l {
        let dw = w.derivative_n(2 * (l - k) as u32 + 1);
        out.add(off, e + k as u32, &dw.scale_rat(&-al.get(k, l).clone()))?;
    }
    let n = 2 * l as u32 + 1;
    let mut rest = w.derivative_n(n);
    rest.sub(&w.lift(n));
    out.add(off, e, &rest)?;
    Ok(out)
}

/// Derivative along the nonlinearity `∂_t u = u∂^{2l−1}u`.
///
/// The change of `W` is kept as is. In `2∫W F D^σ∂^e(u∂^{2l−1}u)` the
/// commutator of `D^σ` with the low factor is expanded to the order that
/// leaves at least one derivative on the high factor; the resulting triples
/// are reduced and the exact remainder is kept as a [`CommRem`].
pub fn nonlinear_derivative(
    al: &Alphas,
    w: &LowPoly,
    off: i32,
    e: u32,
) -> Result<Derivative, EnergyError> {
    let l = al.l;
    let mut d = Derivative::default();
    d.squares.add(off, e, &w.nonlinear_substitute(l))?;
    for i in 0..=e {
        let n = 2 * l as u32 - 1 + e - i;
        let two_c = SPoly::constant(int(2) * Rational::from_integer(binom(e as u64, i as u64)));
        for k in 0..n {
            let coeff = &two_c * &SPoly::binomial(off as i64, k);
            let w2 = w.times_factor(i + k).scale(&coeff);
            reduce_into(&mut d.squares, &w2, off, e, n - k, &al.table)?;
        }
        for (low, c) in w.terms() {
            d.comm.push(CommRem { coeff: &two_c * c, low: low.clone(), off, e, i, n });
        }
    }
    Ok(d)
}

/// Derivative of `½‖u‖²_{L²} + ½‖D^s u‖²_{L²}` along the model flow. The
/// dispersive part contributes nothing; the result is cubic.
pub fn quadratic_derivative(al: &Alphas) -> Result<Derivative, EnergyError> {
    let half = LowPoly::constant(SPoly::constant(Rational::new(1.into(), 2.into())));
    let mut d = nonlinear_derivative(al, &half, 0, 0)?;
    let plain: Low = vec![0, 0, 2 * al.l as u32 - 1];
    d.plain.add_term(plain, SPoly::one());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::rat;

    #[test]
    fn quadratic_l2_coefficients() {
        let al = Alphas::new(2);
        let mut d = quadratic_derivative(&al).unwrap();
        let res = d.squares.take_resonant();
        assert_eq!(res.len(), 1);
        // β_1(s) = 3/2 − s on ∫u_x (D^s∂u)²
        let beta = LowPoly::monomial(vec![1], SPoly::from_coeffs(vec![rat(3, 2), rat(-1, 1)]));
        assert_eq!(res[&1], beta);
        // bounded coefficient on ∫u_{3x}(D^s u)²: −½ + s/2 − s(s−1)/4
        let b = d.squares.get(0, 0).unwrap();
        let expect = SPoly::from_coeffs(vec![rat(-1, 2), rat(3, 4), rat(-1, 4)]);
        assert_eq!(b.terms().find(|(k, _)| **k == vec![3]).unwrap().1, &expect);
    }

    #[test]
    fn linear_derivative_diagonal() {
        for l in 2..=6 {
            let al = Alphas::new(l);
            for q in 0..=l - 2 {
                let w = LowPoly::monomial(vec![0, 2], SPoly::one());
                let (off, e) = if q % 2 == 0 { (-(2 + q as i32), 1) } else { (-(1 + q as i32), 0) };
                let mut out = linear_derivative(&al, &w, off, e).unwrap();
                let res = out.take_resonant();
                let jd = (l - 1 - q) as u32;
                let diag = w.derivative().scale_rat(&-al.get(l, l).clone());
                assert_eq!(res[&jd], diag, "l={l} q={q}");
                assert!(res.keys().all(|&j| j <= jd));
            }
        }
    }
}
