//! Exact algebra of differential polynomials.
//!
//! A differential polynomial is a finite sum of monomials
//! `c * ∂^{n_1} σ_1 * ∂^{n_2} σ_2 * ...` where the `σ_i` are field symbols
//! (`u`, or `w`, `f`, `g` for trilinear identities) and the coefficients are
//! exact rationals. There is a single space variable `x`.
//!
//! Besides ring arithmetic the module provides the total derivative, the
//! Euler operator (variational derivative), an exactness test, formal
//! antiderivatives of exact polynomials and a canonical form for functionals
//! `∫ p dx` modulo integration by parts.

mod calculus;
pub(crate) mod json;
mod latex;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use calculus::{
    derivative_n, euler_operator, homotopy_hamiltonian, ibp_normal_form, integrate_exact,
    is_exact, partial, rank_of, total_derivative, IntegralExpr,
};
pub use latex::to_latex;
pub use parse::ParseError;

/// Exact coefficient type. Numerator/denominator are arbitrary precision
/// and always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DiffPolyError {
    #[error("polynomial is not a total derivative: {0}")]
    NotExact(String),
    #[error("homotopy reconstruction does not reproduce the gradient: {0}")]
    GradientMismatch(String),
    #[error("expected a polynomial in a single symbol, found {0:?}")]
    MultipleSymbols(Vec<Symbol>),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Name of a dependent field variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// `∂_x^order symbol`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Factor {
    pub symbol: Symbol,
    pub order: u32,
}

impl Factor {
    pub fn new(symbol: impl Into<Symbol>, order: u32) -> Self {
        Factor { symbol: symbol.into(), order }
    }
}

/// A sorted multiset of factors; the monomial "shape" without coefficient.
pub type Factors = Vec<Factor>;

/// A single term `coeff * Π factors`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffMonomial {
    pub coeff: Rational,
    factors: Factors,
}

impl DiffMonomial {
    pub fn new(coeff: Rational, mut factors: Factors) -> Self {
        factors.sort();
        DiffMonomial { coeff, factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of factors.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Total number of x-derivatives.
    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|f| f.order).sum()
    }
}

/// A differential polynomial with exact rational coefficients.
///
/// Like terms are always merged and zero coefficients dropped; iteration
/// follows the ordering of the factor multisets, so every derived output is
/// deterministic.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Factors, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// The field `symbol` differentiated `order` times.
    pub fn var(symbol: impl Into<Symbol>, order: u32) -> Self {
        DiffPoly::monomial(Rational::one(), vec![Factor::new(symbol, order)])
    }

    pub fn monomial(coeff: Rational, factors: Factors) -> Self {
        let mut p = DiffPoly::zero();
        let mut factors = factors;
        factors.sort();
        p.add_term(factors, coeff);
        p
    }

    /// Parses the textual form produced by `Display`, e.g.
    /// `u_{4x} + 5/3*u*u_xx + 5/6*u_x^2 + 5/18*u^3`.
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        parse::parse(src)
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

    /// Adds `coeff * factors` where `factors` must already be sorted.
    pub(crate) fn add_term(&mut self, factors: Factors, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        match self.terms.entry(factors) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Factors, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = DiffMonomial> + '_ {
        self.terms.iter().map(|(f, c)| DiffMonomial { coeff: c.clone(), factors: f.clone() })
    }

    pub fn coeff_of(&self, factors: &[Factor]) -> Rational {
        let mut key = factors.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// All symbols appearing in the polynomial, sorted.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> =
            self.terms.keys().flat_map(|f| f.iter().map(|x| x.symbol.clone())).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_order(&self) -> Option<u32> {
        self.terms.keys().flat_map(|f| f.iter().map(|x| x.order)).max()
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(f, k)| (f.clone(), k * c)).collect(),
        }
    }

    /// Groups monomials by degree.
    pub fn by_degree(&self) -> BTreeMap<usize, DiffPoly> {
        let mut out: BTreeMap<usize, DiffPoly> = BTreeMap::new();
        for (f, c) in &self.terms {
            out.entry(f.len()).or_default().add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &other.terms {
                out.add_term(merge_sorted(fa, fb), ca * cb);
            }
        }
        out
    }

    /// Substitutes `symbol -> replacement` in every factor, so that
    /// `∂^n symbol` becomes `∂^n replacement`.
    pub fn rename(&self, from: &Symbol, to: &Symbol) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (f, c) in &self.terms {
            let mut g: Factors = f
                .iter()
                .map(|x| {
                    if &x.symbol == from {
                        Factor { symbol: to.clone(), order: x.order }
                    } else {
                        x.clone()
                    }
                })
                .collect();
            g.sort();
            out.add_term(g, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::to_value(self)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<DiffPoly, String> {
        json::from_value(v)
    }
}

pub(crate) fn merge_sorted(a: &[Factor], b: &[Factor]) -> Factors {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (f, c) in &rhs.terms {
            self.add_term(f.clone(), c.clone());
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (f, c) in &rhs.terms {
            self.add_term(f.clone(), -c.clone());
        }
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, rhs: DiffPoly) -> DiffPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        (&self).neg()
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.multiply(rhs)
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        self.multiply(&rhs)
    }
}

pub(crate) fn fmt_order(symbol: &Symbol, order: u32) -> String {
    match order {
        0 => symbol.to_string(),
        1 => format!("{symbol}_x"),
        2 => format!("{symbol}_xx"),
        n => format!("{symbol}_{{{n}x}}"),
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Display order: ascending degree, and within a degree the monomials
/// carrying the highest derivatives first.
pub(crate) fn display_order(p: &DiffPoly) -> Vec<(&Factors, &Rational)> {
    let mut v: Vec<_> = p.terms.iter().collect();
    v.sort_by(|(a, _), (b, _)| {
        a.len().cmp(&b.len()).then_with(|| {
            let ka: Vec<_> = a.iter().rev().map(|f| (f.order, f.symbol.clone())).collect();
            let kb: Vec<_> = b.iter().rev().map(|f| (f.order, f.symbol.clone())).collect();
            kb.cmp(&ka)
        })
    });
    v
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (factors, c)) in display_order(self).into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || factors.is_empty() {
                parts.push(fmt_rational(&mag));
            }
            let mut k = 0;
            while k < factors.len() {
                let mut e = 1;
                while k + e < factors.len() && factors[k + e] == factors[k] {
                    e += 1;
                }
                let base = fmt_order(&factors[k].symbol, factors[k].order);
                parts.push(if e == 1 { base } else { format!("{base}^{e}") });
                k += e;
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({self})")
    }
}
