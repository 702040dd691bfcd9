//! Trilinear integration-by-parts identities.
//!
//! For `I_{2l+1}(w,f,g) = ∫ ∂^{2l+1}w f g + ∫ w ∂^{2l+1}f g + ∫ w f ∂^{2l+1}g`
//! there are integers `α_{j,l}` with
//! `I_{2l+1}(w,f,g) = Σ_{j=1}^{l} α_{j,l} ∫ ∂^{2(l−j)+1}w ∂^j f ∂^j g`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::diffpoly::json::rational_to_string;
use crate::diffpoly::{int, is_exact, DiffPoly, Factor, IntegralExpr, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTable {
    pub l: usize,
    /// `alphas[j-1] = α_{j,l}`.
    pub alphas: Vec<Rational>,
}

impl AlphaTable {
    /// `α_{j,l}` for `1 ≤ j ≤ l`.
    pub fn get(&self, j: usize) -> &Rational {
        &self.alphas[j - 1]
    }

    pub fn diagonal(&self) -> &Rational {
        self.alphas.last().expect("l ≥ 1")
    }

    pub fn to_json(&self, verified: Option<bool>) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            l: usize,
            alphas: Vec<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            verified: Option<bool>,
        }
        serde_json::to_value(Out {
            l: self.l,
            alphas: self.alphas.iter().map(rational_to_string).collect(),
            verified,
        })
        .unwrap()
    }
}

pub(crate) fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Full table `α_{·,m}` for every `m ≤ l`, index `[m][j-1]`.
///
/// Moving all derivatives off `w` gives
/// `I_{2l+1} = −Σ_{j=1}^{2l} C(2l+1,j) ∫ w ∂^j f ∂^{2l+1−j} g`; pairing `j`
/// with `2l+1−j` and shifting `j` derivatives onto both `f` and `g` turns
/// each pair into `−C(2l+1,j) I_{2(l−j)+1}(w, ∂^j f, ∂^j g)` plus a basis
/// term, which yields
/// `α_{J,l} = C(2l+1,J) − Σ_{j=1}^{J−1} C(2l+1,j) α_{J−j,l−j}`.
pub fn alpha_triangle(l: usize) -> Vec<Vec<Rational>> {
    let mut table: Vec<Vec<Rational>> = vec![Vec::new()];
    for m in 1..=l {
        let n = 2 * m as u64 + 1;
        let mut row = Vec::with_capacity(m);
        for big_j in 1..=m {
            let mut a = Rational::from_integer(binom(n, big_j as u64));
            for j in 1..big_j {
                a -= Rational::from_integer(binom(n, j as u64)) * &table[m - j][big_j - j - 1];
            }
            row.push(a);
        }
        table.push(row);
    }
    table
}

pub fn alpha_coeffs(l: usize) -> AlphaTable {
    assert!(l >= 1, "alpha table needs l ≥ 1");
    let mut t = alpha_triangle(l);
    AlphaTable { l, alphas: t.pop().unwrap() }
}

/// Both sides of the level-`l` identity in the symbols `w`, `f`, `g`.
#[derive(Clone, Debug)]
pub struct TrilinearIdentity {
    pub l: usize,
    pub lhs: IntegralExpr,
    pub rhs: IntegralExpr,
}

fn wfg(a: u32, b: u32, c: u32) -> DiffPoly {
    DiffPoly::monomial(
        Rational::one(),
        vec![Factor::new("w", a), Factor::new("f", b), Factor::new("g", c)],
    )
}

/// The defining expansion of `I_{2l+1}(w,f,g)`.
pub fn i_integrand(l: usize) -> DiffPoly {
    let n = 2 * l as u32 + 1;
    wfg(n, 0, 0) + wfg(0, n, 0) + wfg(0, 0, n)
}

pub fn reduce_integral(l: usize) -> TrilinearIdentity {
    let mut rhs = DiffPoly::zero();
    if l >= 1 {
        let t = alpha_coeffs(l);
        for j in 1..=l {
            let wd = 2 * (l - j) as u32 + 1;
            rhs += &wfg(wd, j as u32, j as u32).scale(t.get(j));
        }
    }
    TrilinearIdentity { l, lhs: IntegralExpr::new(i_integrand(l)), rhs: IntegralExpr::new(rhs) }
}

/// Certifies the level-`l` identity: the difference of both sides must be a
/// total derivative, checked with the Euler operator in `w`, `f` and `g`.
pub fn verify_identity(l: usize) -> bool {
    let id = reduce_integral(l);
    is_exact(&(&id.lhs.integrand - &id.rhs.integrand))
}

/// `(−1)^{l+1}(2l+1)`.
pub fn diagonal_closed_form(l: usize) -> Rational {
    let v = 2 * l as i64 + 1;
    if l % 2 == 1 {
        int(v)
    } else {
        int(-v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(alpha_coeffs(1).alphas, vec![int(3)]);
        assert_eq!(alpha_coeffs(2).alphas, vec![int(5), int(-5)]);
        assert_eq!(alpha_coeffs(12).diagonal(), &int(-25));
    }

    #[test]
    fn diagonal_law_and_integrality() {
        for l in 1..=12 {
            let t = alpha_coeffs(l);
            assert_eq!(t.diagonal(), &diagonal_closed_form(l), "l = {l}");
            assert!(t.alphas.iter().all(|a| a.is_integer()));
        }
    }

    #[test]
    fn identities_certified() {
        for l in 0..=6 {
            assert!(verify_identity(l), "l = {l}");
        }
    }

    #[test]
    fn identity_sides() {
        let id0 = reduce_integral(0);
        assert!(id0.lhs.is_zero() && id0.rhs.is_zero());
        let id1 = reduce_integral(1);
        assert_eq!(id1.rhs.integrand, DiffPoly::parse("3*w_x*f_x*g_x").unwrap());
        assert_eq!(id1.lhs, id1.rhs);
        let id2 = reduce_integral(2);
        assert_eq!(
            id2.rhs.integrand,
            DiffPoly::parse("5*w_{3x}*f_x*g_x - 5*w_x*f_xx*g_xx").unwrap()
        );
    }

    #[test]
    fn perturbed_table_fails_certification() {
        let mut id = reduce_integral(3);
        id.rhs.integrand += &wfg(1, 3, 3);
        assert!(!is_exact(&(&id.lhs.integrand - &id.rhs.integrand)));
    }

    #[test]
    fn json_shape() {
        let v = alpha_coeffs(2).to_json(Some(true));
        assert_eq!(v, serde_json::json!({"l": 2, "alphas": ["5", "-5"], "verified": true}));
    }
}
