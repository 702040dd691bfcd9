use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{int, DiffMonomial, DiffPoly, DiffPolyError, Factor, Factors, Rational, Symbol};

/// `∂_x p` by the Leibniz rule.
pub fn total_derivative(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (factors, c) in p.terms() {
        let mut i = 0;
        while i < factors.len() {
            // equal factors are adjacent; differentiate one copy and weight by multiplicity
            let mut mult = 1;
            while i + mult < factors.len() && factors[i + mult] == factors[i] {
                mult += 1;
            }
            let mut g = factors.clone();
            g[i].order += 1;
            g.sort();
            out.add_term(g, c * int(mult as i64));
            i += mult;
        }
    }
    out
}

/// Applies `∂_x` `n` times.
pub fn derivative_n(p: &DiffPoly, n: u32) -> DiffPoly {
    let mut q = p.clone();
    for _ in 0..n {
        q = total_derivative(&q);
    }
    q
}

/// `∂p / ∂(∂^order symbol)`, treating jet variables as independent.
pub fn partial(p: &DiffPoly, symbol: &Symbol, order: u32) -> DiffPoly {
    let target = Factor { symbol: symbol.clone(), order };
    let mut out = DiffPoly::zero();
    for (factors, c) in p.terms() {
        let mult = factors.iter().filter(|f| **f == target).count();
        if mult == 0 {
            continue;
        }
        let pos = factors.iter().position(|f| *f == target).unwrap();
        let mut g = factors.clone();
        g.remove(pos);
        out.add_term(g, c * int(mult as i64));
    }
    out
}

/// Variational derivative `δp/δσ = Σ_i (−∂)^i ∂p/∂σ_i`.
pub fn euler_operator(p: &DiffPoly, symbol: &Symbol) -> DiffPoly {
    let top = p
        .terms()
        .flat_map(|(f, _)| f.iter().filter(|x| &x.symbol == symbol).map(|x| x.order))
        .max();
    let Some(top) = top else {
        return DiffPoly::zero();
    };
    let mut out = DiffPoly::zero();
    for i in 0..=top {
        let d = derivative_n(&partial(p, symbol, i), i);
        if i % 2 == 0 {
            out += &d;
        } else {
            out -= &d;
        }
    }
    out
}

/// True iff `p` is a total x-derivative of a differential polynomial.
///
/// A nonzero constant term is never exact (it would need `x` itself as an
/// antiderivative), so such inputs return false.
pub fn is_exact(p: &DiffPoly) -> bool {
    if !p.constant_term().is_zero() {
        return false;
    }
    p.symbols().iter().all(|s| euler_operator(p, s).is_zero())
}

/// Returns `q` without constant term such that `∂_x q = p`.
///
/// Greedy scheme: take the largest symbol `σ` among those reaching the
/// global top order `n`; every monomial carrying `σ_n` then has the form
/// `c σ_n σ_{n-1}^m R` with `σ_n` simple, and `c/(m+1) σ_{n-1}^{m+1} R`
/// removes it. Each step strictly lowers the number of monomials carrying
/// `(n, σ)` without creating larger keys, so the loop terminates.
pub fn integrate_exact(p: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
    if !is_exact(p) {
        return Err(DiffPolyError::NotExact(p.to_string()));
    }
    let mut rest = p.clone();
    let mut q = DiffPoly::zero();
    let mut guard = 0usize;
    let budget = 64 + 16 * p.len() * (1 + p.max_order().unwrap_or(0) as usize).pow(2);
    while !rest.is_zero() {
        guard += 1;
        if guard > budget {
            return Err(DiffPolyError::NotExact(p.to_string()));
        }
        let (n, sigma) = rest
            .terms()
            .flat_map(|(f, _)| f.iter().map(|x| (x.order, x.symbol.clone())))
            .max()
            .expect("nonzero polynomial has factors");
        if n == 0 {
            return Err(DiffPolyError::NotExact(p.to_string()));
        }
        let top = Factor { symbol: sigma.clone(), order: n };
        let (factors, c) = rest
            .terms()
            .find(|(f, _)| f.contains(&top))
            .map(|(f, c)| (f.clone(), c.clone()))
            .unwrap();
        if factors.iter().filter(|f| **f == top).count() != 1 {
            return Err(DiffPolyError::NotExact(p.to_string()));
        }
        let below = Factor { symbol: sigma, order: n - 1 };
        let m = factors.iter().filter(|f| **f == below).count();
        let mut piece: Factors =
            factors.iter().filter(|f| **f != top && **f != below).cloned().collect();
        piece.extend(std::iter::repeat_n(below, m + 1));
        let piece = DiffPoly::monomial(c / int(m as i64 + 1), piece);
        rest -= &total_derivative(&piece);
        q += &piece;
    }
    Ok(q)
}

/// A functional `∫ integrand dx`, compared through its canonical
/// representative under integration by parts.
#[derive(Clone, Debug)]
pub struct IntegralExpr {
    pub integrand: DiffPoly,
    pub canonical: DiffPoly,
}

impl IntegralExpr {
    pub fn new(integrand: DiffPoly) -> Self {
        let canonical = ibp_normal_form(&integrand);
        IntegralExpr { integrand, canonical }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical.is_zero()
    }
}

impl PartialEq for IntegralExpr {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for IntegralExpr {}

/// Rewrites a single non-canonical monomial, or returns `None` if it is
/// already canonical. The key factor is the top-order factor of the
/// largest symbol present; the monomial is canonical when that factor is
/// repeated or undifferentiated.
fn ibp_rewrite(factors: &Factors, c: &Rational) -> Option<DiffPoly> {
    let sigma = factors.iter().map(|f| &f.symbol).max()?;
    let n = factors.iter().filter(|f| &f.symbol == sigma).map(|f| f.order).max()?;
    let top = Factor { symbol: sigma.clone(), order: n };
    if n == 0 || factors.iter().filter(|f| **f == top).count() >= 2 {
        return None;
    }
    let below = Factor { symbol: sigma.clone(), order: n - 1 };
    let m = factors.iter().filter(|f| **f == below).count();
    let rest: Factors = factors.iter().filter(|f| **f != top && **f != below).cloned().collect();
    // c σ_n σ_{n-1}^m R ≡ −c/(m+1) σ_{n-1}^{m+1} ∂R
    let lifted = DiffPoly::monomial(Rational::one(), vec![below; m + 1]);
    let d_rest = total_derivative(&DiffPoly::monomial(Rational::one(), rest));
    Some((&lifted * &d_rest).scale(&(-c / int(m as i64 + 1))))
}

/// Canonical representative of `∫ p dx` modulo total derivatives.
pub fn ibp_normal_form(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    let mut pending: BTreeMap<Factors, Rational> = p.terms().map(|(f, c)| (f.clone(), c.clone())).collect();
    while let Some((factors, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        match ibp_rewrite(&factors, &c) {
            None => out.add_term(factors, c),
            Some(r) => {
                for (f, k) in r.terms() {
                    let e = pending.entry(f.clone()).or_insert_with(Rational::zero);
                    *e += k;
                }
            }
        }
    }
    out
}

/// Rank `degree + weight/2` of a monomial. Outer derivatives are assumed
/// distributed over the factors, which leaves the total weight unchanged.
pub fn rank_of(m: &DiffMonomial) -> Rational {
    int(m.degree() as i64) + Rational::new((m.weight() as i64).into(), 2.into())
}

/// Reconstructs `H` with `δH/δu = G` via `H = ∫₀¹ ∫ G(tu) u dx dt`.
pub fn homotopy_hamiltonian(g: &DiffPoly) -> Result<IntegralExpr, DiffPolyError> {
    let syms = g.symbols();
    if syms.len() > 1 {
        return Err(DiffPolyError::MultipleSymbols(syms));
    }
    let u = syms.into_iter().next().unwrap_or_else(|| Symbol::new("u"));
    let mut h = DiffPoly::zero();
    for (factors, c) in g.terms() {
        let mut f = factors.clone();
        f.push(Factor { symbol: u.clone(), order: 0 });
        f.sort();
        h.add_term(f, c / int(factors.len() as i64 + 1));
    }
    let e = IntegralExpr::new(h);
    if euler_operator(&e.canonical, &u) != *g {
        return Err(DiffPolyError::GradientMismatch(g.to_string()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> DiffPoly {
        DiffPoly::parse(s).unwrap()
    }

    fn u() -> Symbol {
        Symbol::new("u")
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&p("u*u_x")), p("u_x^2 + u*u_xx"));
        assert!(total_derivative(&DiffPoly::zero()).is_zero());
        assert!(total_derivative(&DiffPoly::constant(int(4))).is_zero());
        assert_eq!(total_derivative(&p("u^3")), p("3*u^2*u_x"));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_operator(&p("u_x^2"), &u()), p("-2*u_xx"));
        assert!(euler_operator(&p("u*u_xx + u_x^2"), &u()).is_zero());
        assert_eq!(euler_operator(&p("u^3"), &u()), p("3*u^2"));
    }

    #[test]
    fn exactness_examples() {
        assert!(is_exact(&p("u_x^2 + u*u_xx")));
        assert!(is_exact(&p("u*u_x")));
        assert!(!is_exact(&p("u^2")));
        assert!(!is_exact(&p("u_x + 1")));
        assert!(is_exact(&DiffPoly::zero()));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(integrate_exact(&p("3*u_x*u_xx")).unwrap(), p("3/2*u_x^2"));
        assert_eq!(integrate_exact(&p("u_x^2 + u*u_xx")).unwrap(), p("u*u_x"));
        let rhs = p("u_{5x} + 10/3*u_x*u_xx + 5/3*u*u_{3x} + 5/6*u^2*u_x");
        assert_eq!(
            integrate_exact(&rhs).unwrap(),
            p("u_{4x} + 5/3*u*u_xx + 5/6*u_x^2 + 5/18*u^3")
        );
        assert!(matches!(integrate_exact(&p("u^2")), Err(DiffPolyError::NotExact(_))));
    }

    #[test]
    fn integrate_multi_symbol() {
        let q = p("w*f_x*g_xx + w_{3x}*f + g^2*w_x");
        let back = integrate_exact(&total_derivative(&q)).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(ibp_normal_form(&p("u*u_xx")), p("-u_x^2"));
        assert!(ibp_normal_form(&total_derivative(&p("u^2*u_{3x} + u_x"))).is_zero());
        assert!(ibp_normal_form(&p("u_x*u_xx")).is_zero());
        assert_eq!(ibp_normal_form(&p("u^2*u_x")), DiffPoly::zero());
    }

    #[test]
    fn rank_examples() {
        let m = p("u*u_{3x}").monomials().next().unwrap();
        assert_eq!(rank_of(&m), rat(7, 2));
        assert_eq!(rank_of(&p("u").monomials().next().unwrap()), int(1));
        // two factors, two derivatives: 2 + 2/2
        assert_eq!(rank_of(&p("u_x^2").monomials().next().unwrap()), int(3));
    }

    #[test]
    fn homotopy_examples() {
        let h0 = homotopy_hamiltonian(&p("u")).unwrap();
        assert_eq!(h0.canonical, p("1/2*u^2"));
        let h1 = homotopy_hamiltonian(&p("u_xx + 1/2*u^2")).unwrap();
        assert_eq!(h1.canonical, p("-1/2*u_x^2 + 1/6*u^3"));
        assert!(homotopy_hamiltonian(&DiffPoly::zero()).unwrap().is_zero());
        // u_x is not a gradient
        assert!(matches!(
            homotopy_hamiltonian(&p("u_x")),
            Err(DiffPolyError::GradientMismatch(_))
        ));
    }

    fn arb_factor(symbols: &'static [&'static str]) -> impl Strategy<Value = Factor> {
        (0..symbols.len(), 0u32..5).prop_map(move |(s, o)| Factor::new(symbols[s], o))
    }

    fn arb_poly(symbols: &'static [&'static str]) -> impl Strategy<Value = DiffPoly> {
        let mono = (prop::collection::vec(arb_factor(symbols), 1..=4), -6i64..=6, 1i64..=4);
        prop::collection::vec(mono, 0..6).prop_map(|ms| {
            let mut out = DiffPoly::zero();
            for (f, n, d) in ms {
                out += &DiffPoly::monomial(rat(n, d), f);
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn euler_kills_derivatives(q in arb_poly(&["u"])) {
            prop_assert!(euler_operator(&total_derivative(&q), &u()).is_zero());
        }

        #[test]
        fn integrate_inverts_derivative(q in arb_poly(&["u", "v"])) {
            let back = integrate_exact(&total_derivative(&q)).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn normal_form_idempotent_and_ibp_invariant(
            a in arb_poly(&["u", "v"]),
            b in arb_poly(&["u", "v"]),
        ) {
            let na = ibp_normal_form(&a);
            prop_assert_eq!(ibp_normal_form(&na), na.clone());
            prop_assert!(is_exact(&(&a - &na)));
            let shifted = &a + &total_derivative(&b);
            prop_assert_eq!(ibp_normal_form(&shifted), na);
        }
    }
}
