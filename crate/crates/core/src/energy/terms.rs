//! Sobolev-weighted trilinear terms and their reduction to squares.
//!
//! Throughout, `σ = s + off` and `F = D^σ ∂^b u`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::lowpoly::{Low, LowPoly};
use super::EnergyError;
use crate::diffpoly::{rat, Rational};
use crate::ibp::alpha_triangle;
use crate::spoly::SPoly;

/// `coeff · ∫ low(u) (D^{s+off} ∂^j u)² dx`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SobTerm {
    pub coeff: SPoly,
    pub low: Low,
    pub off: i32,
    pub j: u32,
}

impl SobTerm {
    /// Resonant terms carry the full `D^s` and at least one extra derivative
    /// on both high factors; they cannot be bounded by `‖u‖²_{H^s}` times a
    /// norm of the low factor.
    pub fn is_resonant(&self) -> bool {
        is_resonant(self.off, self.j)
    }
}

pub fn is_resonant(off: i32, j: u32) -> bool {
    off == 0 && j >= 1
}

/// `coeff · ∫ low(u) · D^{s+off}∂^b u · D^{s+off}∂^c u dx` with `b ≤ c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SobTriple {
    pub coeff: SPoly,
    pub low: Low,
    pub off: i32,
    pub b: u32,
    pub c: u32,
}

/// Rewrites `(D^{s+off}∂^j u)²` so that either `off = 0` or `j ≤ 1`, using
/// `D^{2m} = (−1)^m ∂^{2m}`; the sign disappears in the square.
pub fn normalize(off: i32, j: u32) -> Result<(i32, u32), EnergyError> {
    if off % 2 != 0 {
        return Err(EnergyError::OddOffset { off });
    }
    if off > 0 {
        return Ok((0, j + off as u32));
    }
    let p = (-off / 2) as u32;
    let d = (j / 2).min(p);
    Ok((off + 2 * d as i32, j - 2 * d))
}

/// A sum of square terms `Σ ∫ W_{off,j}(u) (D^{s+off}∂^j u)²`, stored in
/// normal form and grouped by `(off, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareSum {
    map: BTreeMap<(i32, u32), LowPoly>,
}

impl SquareSum {
    pub fn new() -> Self {
        SquareSum::default()
    }

    pub fn add(&mut self, off: i32, j: u32, w: &LowPoly) -> Result<(), EnergyError> {
        if w.is_zero() {
            return Ok(());
        }
        let key = normalize(off, j)?;
        let e = self.map.entry(key).or_default();
        e.add(w);
        if e.is_zero() {
            self.map.remove(&key);
        }
        Ok(())
    }

    pub fn extend(&mut self, other: &SquareSum) -> Result<(), EnergyError> {
        for (&(off, j), w) in &other.map {
            self.add(off, j, w)?;
        }
        Ok(())
    }

    pub fn get(&self, off: i32, j: u32) -> Option<&LowPoly> {
        self.map.get(&(off, j))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn groups(&self) -> impl Iterator<Item = (i32, u32, &LowPoly)> {
        self.map.iter().map(|(&(o, j), w)| (o, j, w))
    }

    /// Removes and returns the resonant groups, keyed by `j`.
    pub fn take_resonant(&mut self) -> BTreeMap<u32, LowPoly> {
        let keys: Vec<_> = self.map.keys().filter(|(o, j)| is_resonant(*o, *j)).cloned().collect();
        keys.into_iter().map(|k| (k.1, self.map.remove(&k).unwrap())).collect()
    }

    /// Flattened monomial view.
    pub fn terms(&self) -> Vec<SobTerm> {
        self.map
            .iter()
            .flat_map(|(&(off, j), w)| {
                w.terms().map(move |(low, c)| SobTerm { coeff: c.clone(), low: low.clone(), off, j })
            })
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.map.values().map(|w| w.len()).sum()
    }
}

/// Exact remainder of a truncated commutator expansion:
/// `coeff · ∫ low(u) · F · R` with `F = D^σ∂^e u` and
/// `R = D^σ(∂^i u ∂^n u) − Σ_{k<n} C(σ,k) ∂^{i+k}u D^σ∂^{n−k}u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommRem {
    pub coeff: SPoly,
    pub low: Low,
    pub off: i32,
    pub e: u32,
    pub i: u32,
    pub n: u32,
}

/// Reduces `∫ W · F · ∂^{c−b}F` with `F = D^{s+off}∂^b u` into squares.
///
/// Odd gaps `2m+1` use the trilinear identity with both high slots equal to
/// `F`; even gaps move one derivative off the last factor.
pub fn reduce_into(
    out: &mut SquareSum,
    w: &LowPoly,
    off: i32,
    b: u32,
    c: u32,
    alphas: &[Vec<Rational>],
) -> Result<(), EnergyError> {
    if w.is_zero() {
        return Ok(());
    }
    assert!(b <= c, "triple must be ordered");
    let n = c - b;
    if n == 0 {
        return out.add(off, b, w);
    }
    if n % 2 == 1 {
        let m = (n / 2) as usize;
        for i in 1..=m {
            let coeff = &alphas[m][i - 1] * rat(1, 2);
            let dw = w.derivative_n(2 * (m - i) as u32 + 1);
            out.add(off, b + i as u32, &dw.scale_rat(&coeff))?;
        }
        return out.add(off, b, &w.derivative_n(n).scale_rat(&rat(-1, 2)));
    }
    let minus = rat(-1, 1);
    reduce_into(out, &w.derivative().scale_rat(&minus), off, b, c - 1, alphas)?;
    reduce_into(out, &w.scale_rat(&minus), off, b + 1, c - 1, alphas)
}

/// Reduces a single triple to normalized square terms.
pub fn reduce_triple(t: &SobTriple) -> Result<Vec<SobTerm>, EnergyError> {
    if t.off % 2 != 0 {
        return Err(EnergyError::OddOffset { off: t.off });
    }
    let (b, c) = if t.b <= t.c { (t.b, t.c) } else { (t.c, t.b) };
    let alphas = alpha_triangle(((c - b) / 2) as usize);
    let mut out = SquareSum::new();
    reduce_into(&mut out, &LowPoly::monomial(t.low.clone(), t.coeff.clone()), t.off, b, c, &alphas)?;
    Ok(out.terms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{ibp_normal_form, is_exact, DiffPoly, Factor};
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize(2, 1).unwrap(), (0, 3));
        assert_eq!(normalize(-2, 3).unwrap(), (0, 1));
        assert_eq!(normalize(-4, 3).unwrap(), (-2, 1));
        assert_eq!(normalize(-2, 1).unwrap(), (-2, 1));
        assert_eq!(normalize(0, 0).unwrap(), (0, 0));
        assert!(matches!(normalize(-3, 2), Err(EnergyError::OddOffset { off: -3 })));
    }

    #[test]
    fn model_triple_l2() {
        // ∫ w f f''' = 3/2 ∫w'(f')² − ½ ∫w''' f², checked by hand
        // ∫ u · D^s∂³u · D^s u = 3/2 ∫u_x(D^s∂u)² − ½∫u_{3x}(D^s u)²
        let t = SobTriple { coeff: SPoly::one(), low: vec![0], off: 0, b: 0, c: 3 };
        let r = reduce_triple(&t).unwrap();
        assert_eq!(
            r,
            vec![
                SobTerm { coeff: SPoly::constant(rat(-1, 2)), low: vec![3], off: 0, j: 0 },
                SobTerm { coeff: SPoly::constant(rat(3, 2)), low: vec![1], off: 0, j: 1 },
            ]
        );
        // I_1 branch: only bounded output
        let t = SobTriple { coeff: SPoly::one(), low: vec![2], off: 0, b: 0, c: 1 };
        assert!(reduce_triple(&t).unwrap().iter().all(|x| !x.is_resonant()));
        let z = SobTriple { coeff: SPoly::zero(), low: vec![0], off: 0, b: 0, c: 5 };
        assert!(reduce_triple(&z).unwrap().is_empty());
    }

    /// Oracle: treat `v = D^σ∂^b u` as an independent symbol; the triple and
    /// its reduction must differ by an exact integrand in `{u, v}`.
    fn as_two_symbol(low: &[u32], c: &Rational, v_orders: &[u32]) -> DiffPoly {
        let mut f: Vec<Factor> = low.iter().map(|&o| Factor::new("u", o)).collect();
        f.extend(v_orders.iter().map(|&o| Factor::new("v", o)));
        DiffPoly::monomial(c.clone(), f)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn reduction_is_an_ibp_identity(
            low in prop::collection::vec(0u32..4, 1..3),
            b in 0u32..3,
            gap in 0u32..7,
        ) {
            let t = SobTriple { coeff: SPoly::one(), low: low.clone(), off: 0, b, c: b + gap };
            let lhs = as_two_symbol(&low, &rat(1, 1), &[0, gap]);
            let mut rhs = DiffPoly::zero();
            let alphas = alpha_triangle((gap / 2) as usize);
            let mut out = SquareSum::new();
            reduce_into(&mut out, &LowPoly::monomial(low.clone(), SPoly::one()), 0, 0, gap, &alphas).unwrap();
            for term in out.terms() {
                let c = term.coeff.coeffs().first().cloned().unwrap_or_default();
                rhs += &as_two_symbol(&term.low, &c, &[term.j, term.j]);
            }
            prop_assert!(is_exact(&(&lhs - &rhs)));
            // the square basis is canonical for the two-symbol normal form
            prop_assert_eq!(ibp_normal_form(&rhs), rhs.clone());
            prop_assert!(!reduce_triple(&t).unwrap().is_empty() || lhs.is_zero() || ibp_normal_form(&lhs).is_zero());
        }
    }
}
