use num_traits::{One, Signed};

use super::{display_order, DiffPoly, Rational};

fn latex_factor(symbol: &str, order: u32) -> String {
    match order {
        0 => symbol.to_string(),
        1 => format!("\\partial_x {symbol}"),
        n => format!("\\partial_x^{{{n}}} {symbol}"),
    }
}

fn latex_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

/// LaTeX rendering, e.g. `\partial_x^{4} u + \frac{5}{3} u \partial_x^{2} u`.
pub fn to_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (factors, c)) in display_order(p).into_iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let mut parts = Vec::new();
        if !mag.is_one() || factors.is_empty() {
            parts.push(latex_coeff(&mag));
        }
        let mut k = 0;
        while k < factors.len() {
            let mut e = 1;
            while k + e < factors.len() && factors[k + e] == factors[k] {
                e += 1;
            }
            let base = latex_factor(factors[k].symbol.as_str(), factors[k].order);
            parts.push(match (e, factors[k].order) {
                (1, _) => base,
                (_, 0) => format!("{base}^{{{e}}}"),
                _ => format!("({base})^{{{e}}}"),
            });
            k += e;
        }
        out.push_str(&parts.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_fifth_order_density() {
        let p = DiffPoly::parse("u_{4x} + 5/3*u*u_xx + 5/6*u_x^2 + 5/18*u^3").unwrap();
        assert_eq!(
            to_latex(&p),
            "\\partial_x^{4} u + \\frac{5}{3} u \\partial_x^{2} u + \\frac{5}{6} (\\partial_x u)^{2} + \\frac{5}{18} u^{3}"
        );
        assert_eq!(to_latex(&DiffPoly::parse("-2").unwrap()), "-2");
    }
}
