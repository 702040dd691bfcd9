//! Polynomials in the Sobolev exponent `s` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diffpoly::json::{rational_from_str, rational_to_string};
use crate::diffpoly::{int, Rational};

/// `Σ c_i s^i`, coefficients stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct SPoly {
    coeffs: Vec<Rational>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        SPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        SPoly::constant(Rational::one())
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        SPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `C(s + shift, k) = (s+shift)(s+shift-1)…(s+shift-k+1)/k!`
    pub fn binomial(shift: i64, k: u32) -> Self {
        let mut out = SPoly::one();
        for i in 0..k as i64 {
            let lin = SPoly::from_coeffs(vec![int(shift - i), Rational::one()]);
            out = &out * &lin;
        }
        let mut fact = Rational::one();
        for i in 1..=k as i64 {
            fact *= int(i);
        }
        out.scale(&(Rational::one() / fact))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval_exact(&self, s: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        SPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        self + &(-rhs)
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, rhs: &SPoly) -> SPoly {
        if self.is_zero() || rhs.is_zero() {
            return SPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        SPoly::from_coeffs(out)
    }
}

impl AddAssign<&SPoly> for SPoly {
    fn add_assign(&mut self, rhs: &SPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&SPoly> for SPoly {
    fn sub_assign(&mut self, rhs: &SPoly) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let cs = rational_to_string(&mag);
            match i {
                0 => f.write_str(&cs)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{cs}*")?;
                    }
                    if i == 1 {
                        f.write_str("s")?;
                    } else {
                        write!(f, "s^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for SPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(de)?;
        let coeffs = v
            .iter()
            .map(|s| rational_from_str(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SPoly::from_coeffs(coeffs))
    }
}
