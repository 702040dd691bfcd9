use std::collections::BTreeMap;

use serde_json::json;

use super::derive::{linear_derivative, nonlinear_derivative, quadratic_derivative, Alphas, Derivative};
use super::lowpoly::LowPoly;
use super::terms::{CommRem, SobTerm, SquareSum};
use super::EnergyError;
use crate::diffpoly::json::rational_to_string;
use crate::diffpoly::Rational;
use crate::spoly::SPoly;

/// One correction `∫ W(u) (D^{s+off}∂^e u)²`. For index `q`, even `q` uses
/// `(off, e) = (−2−q, 1)` and odd `q` uses `(−1−q, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub q: usize,
    pub off: i32,
    pub e: u32,
    pub w: LowPoly,
}

pub fn correction_form(q: usize) -> (i32, u32) {
    if q.is_multiple_of(2) {
        (-(2 + q as i32), 1)
    } else {
        (-(1 + q as i32), 0)
    }
}

/// One cancellation stage: terms of polynomial degree `order`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub order: usize,
    /// Resonant coefficients `V_J` entering the stage.
    pub resonant_in: BTreeMap<u32, LowPoly>,
    /// Diagonal coefficient of the triangular system, measured per unknown.
    pub diagonal: Vec<Rational>,
    /// No unknown feeds a resonant slot above its own.
    pub triangular: bool,
    pub corrections: Vec<Correction>,
    /// Resonant terms left after adding the corrections (empty on success).
    pub residue: Vec<SobTerm>,
}

#[derive(Clone, Debug, Default)]
pub struct BoundedRemainder {
    pub plain: LowPoly,
    pub squares: SquareSum,
    pub comm: Vec<CommRem>,
}

/// The modified energy `½‖u‖²_{L²} + ½‖D^s u‖² + Σ corrections` for the
/// model flow of level `l`, with its exact derivative split into resonant
/// (cancelled) and bounded parts.
#[derive(Clone, Debug)]
pub struct EnergyBlueprint {
    pub l: usize,
    /// `β_J`: coefficient of `∫∂^{2(l−J)−1}u (D^s∂^J u)²` before correction.
    pub betas: Vec<SPoly>,
    /// `γ_q`: coefficient of `∂^{2q}u` in the cubic corrections.
    pub gammas: Vec<SPoly>,
    pub stages: Vec<Stage>,
    pub resonant_residue: Vec<SobTerm>,
    pub bounded_remainder: BoundedRemainder,
}

fn absorb(rem: &mut BoundedRemainder, d: Derivative) -> Result<SquareSum, EnergyError> {
    rem.plain.add(&d.plain);
    rem.comm.extend(d.comm);
    Ok(d.squares)
}

/// Measured diagonal entry and triangularity for unknown `q` at a stage
/// whose weights have `degree` factors.
fn probe(al: &Alphas, q: usize, degree: usize) -> Result<(Rational, bool), EnergyError> {
    let l = al.l;
    let mut low = vec![0; degree.saturating_sub(1)];
    low.push(1);
    let w = LowPoly::monomial(low, SPoly::one());
    let (off, e) = correction_form(q);
    let mut d = linear_derivative(al, &w, off, e)?;
    let res = d.take_resonant();
    let jd = (l - 1 - q) as u32;
    let dw = w.derivative();
    let (k0, c0) = dw.terms().next().expect("probe weight is not constant");
    let got = res
        .get(&jd)
        .and_then(|p| p.terms().find(|(k, _)| *k == k0).map(|(_, c)| c.clone()))
        .unwrap_or_default();
    let ratio = got.coeffs().first().cloned().unwrap_or_default() / c0.coeffs()[0].clone();
    let triangular = res.keys().all(|&j| j <= jd);
    Ok((-ratio, triangular))
}

pub fn build_blueprint(l: usize) -> Result<EnergyBlueprint, EnergyError> {
    if l < 2 {
        return Err(EnergyError::InvalidLevel(l));
    }
    let al = Alphas::new(l);
    let diag = al.get(l, l).clone();
    if diag == Rational::from_integer(0.into()) {
        return Err(EnergyError::SingularSystem { l });
    }
    let mut rem = BoundedRemainder::default();
    let mut pending = absorb(&mut rem, quadratic_derivative(&al)?)?;
    let mut stages = Vec::new();
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    let mut residue = Vec::new();

    for order in 3..=l + 1 {
        let resonant = pending.take_resonant();
        if order == 3 {
            betas = (1..l as u32)
                .map(|j| {
                    resonant
                        .get(&j)
                        .and_then(|p| p.terms().next().map(|(_, c)| c.clone()))
                        .unwrap_or_default()
                })
                .collect();
        }
        let mut corrections: Vec<Correction> = Vec::new();
        let mut diagonal = Vec::new();
        let mut triangular = true;
        for q in 0..=l - 2 {
            let jj = l - 1 - q;
            let (dq, tq) = probe(&al, q, order - 2)?;
            diagonal.push(dq);
            triangular &= tq;
            let mut rhs = resonant.get(&(jj as u32)).cloned().unwrap_or_default();
            for prev in &corrections {
                let k = jj + 1 + prev.q;
                let dw = prev.w.derivative_n(2 * (l - jj - prev.q) as u32 - 1);
                rhs.sub(&dw.scale_rat(al.get(k, l)));
            }
            let w = rhs
                .integrate()
                .map_err(|e| EnergyError::NotExact { order, j: jj as u32, detail: e.to_string() })?
                .scale_rat(&(Rational::from_integer(1.into()) / &diag));
            let (off, e) = correction_form(q);
            corrections.push(Correction { q, off, e, w });
        }
        if order == 3 {
            gammas = corrections
                .iter()
                .map(|c| {
                    c.w.terms()
                        .find(|(k, _)| **k == vec![2 * c.q as u32])
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default()
                })
                .collect();
        }
        // put back the resonant part and add the corrections' dispersive derivative
        for (&j, v) in &resonant {
            pending.add(0, j, v)?;
        }
        let mut next = SquareSum::new();
        for c in &corrections {
            pending.extend(&linear_derivative(&al, &c.w, c.off, c.e)?)?;
            let nd = nonlinear_derivative(&al, &c.w, c.off, c.e)?;
            next.extend(&absorb(&mut rem, nd)?)?;
        }
        let left = pending.take_resonant();
        let stage_residue: Vec<SobTerm> = residue_terms(&left);
        residue.extend(stage_residue.iter().cloned());
        rem.squares.extend(&pending)?;
        stages.push(Stage {
            order,
            resonant_in: resonant,
            diagonal,
            triangular,
            corrections,
            residue: stage_residue,
        });
        pending = next;
    }
    let left = pending.take_resonant();
    residue.extend(residue_terms(&left));
    rem.squares.extend(&pending)?;
    Ok(EnergyBlueprint { l, betas, gammas, stages, resonant_residue: residue, bounded_remainder: rem })
}

fn residue_terms(left: &BTreeMap<u32, LowPoly>) -> Vec<SobTerm> {
    left.iter()
        .flat_map(|(&j, w)| {
            w.terms().map(move |(low, c)| SobTerm { coeff: c.clone(), low: low.clone(), off: 0, j })
        })
        .collect()
}

impl EnergyBlueprint {
    pub fn corrections(&self) -> impl Iterator<Item = (usize, &Correction)> {
        self.stages.iter().flat_map(|st| st.corrections.iter().map(move |c| (st.order, c)))
    }

    /// Number of stages that actually modify the energy.
    pub fn active_stages(&self) -> usize {
        self.stages.iter().filter(|s| s.corrections.iter().any(|c| !c.w.is_zero())).count()
    }

    pub fn to_json(&self, s: Option<f64>) -> serde_json::Value {
        let stages: Vec<_> = self
            .stages
            .iter()
            .map(|st| {
                json!({
                    "order": st.order,
                    "diagonal": st.diagonal.iter().map(rational_to_string).collect::<Vec<_>>(),
                    "triangular": st.triangular,
                    "corrections": st.corrections.iter().map(|c| json!({
                        "q": c.q, "off": c.off, "e": c.e, "weight": c.w.to_json(),
                    })).collect::<Vec<_>>(),
                    "residue": st.residue.len(),
                })
            })
            .collect();
        let rem = &self.bounded_remainder;
        let mut v = json!({
            "l": self.l,
            "betas": self.betas,
            "gammas": self.gammas,
            "corrections": stages,
            "diagnostics": {
                "resonant_residue": self.resonant_residue.len(),
                "bounded_squares": rem.squares.num_terms(),
                "commutator_remainders": rem.comm.len(),
                "plain_terms": rem.plain.len(),
                "active_stages": self.active_stages(),
            },
        });
        if let Some(s) = s {
            v["s"] = json!(s);
            v["gammas_at_s"] = json!(self.gammas.iter().map(|g| g.eval(s)).collect::<Vec<_>>());
            v["betas_at_s"] = json!(self.betas.iter().map(|g| g.eval(s)).collect::<Vec<_>>());
        }
        v
    }
}
