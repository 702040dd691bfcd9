//! `[{"coeff": "p/q", "factors": [["u", 2], ...]}, ...]`

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{fmt_rational, DiffPoly, Factor, Rational};

#[derive(Serialize, Deserialize)]
struct JsonMonomial {
    coeff: String,
    factors: Vec<(String, u32)>,
}

pub fn rational_to_string(c: &Rational) -> String {
    fmt_rational(c)
}

pub fn rational_from_str(s: &str) -> Result<Rational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

pub(super) fn to_value(p: &DiffPoly) -> Value {
    let ms: Vec<JsonMonomial> = p
        .terms()
        .map(|(f, c)| JsonMonomial {
            coeff: fmt_rational(c),
            factors: f.iter().map(|x| (x.symbol.to_string(), x.order)).collect(),
        })
        .collect();
    serde_json::to_value(ms).expect("plain data serializes")
}

pub(super) fn from_value(v: &Value) -> Result<DiffPoly, String> {
    let ms: Vec<JsonMonomial> = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    let mut out = DiffPoly::zero();
    for m in ms {
        let c = rational_from_str(&m.coeff)?;
        let f = m.factors.iter().map(|(s, o)| Factor::new(s.as_str(), *o)).collect();
        out += &DiffPoly::monomial(c, f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = DiffPoly::parse("u_{4x} + 5/3*u*u_xx - 5/18*u^3").unwrap();
        let v = p.to_json();
        assert_eq!(v[0]["factors"][0][0], "u");
        assert_eq!(DiffPoly::from_json(&v).unwrap(), p);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"5/3\""));
    }

    #[test]
    fn rejects_bad_coeff() {
        let v = serde_json::json!([{"coeff": "1/0", "factors": []}]);
        assert!(DiffPoly::from_json(&v).is_err());
        assert_eq!(rational_from_str("-6/4").unwrap(), crate::diffpoly::rat(-3, 2));
    }
}
